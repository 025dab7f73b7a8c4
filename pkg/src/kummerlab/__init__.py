"""p-adic Kummer functions: zeros, fixed points and L-function interpolation."""

from .padic import PadicApprox, DigitExpansion
from .charnum import QuadChar, PRINCIPAL

__version__ = "0.1.0"

__all__ = ["PadicApprox", "DigitExpansion", "QuadChar", "PRINCIPAL", "__version__"]
