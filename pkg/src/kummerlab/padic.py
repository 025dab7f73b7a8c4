"""Fixed-precision arithmetic in Z_p and the combinatorial helpers built on it.

A :class:`PadicApprox` is an element of Z_p known modulo p^N.  Plain Python
ints are accepted wherever an approximation is expected and are treated as
exact (infinite precision).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    InsufficientValues,
    NotAUnit,
    NotDivisible,
    NotPIntegral,
    PrecisionExhausted,
    PrimeMismatch,
)

__all__ = [
    "INF",
    "PadicApprox",
    "DigitExpansion",
    "add",
    "sub",
    "mul",
    "div_exact_p",
    "invert_unit",
    "ord_p",
    "ord_factorial",
    "digit_sum",
    "floor_log",
    "binom_mod",
    "binom_padic",
    "lucas_binom",
    "forward_diff",
    "hnomial",
]

INF = math.inf


def ord_p(x: Union[int, Fraction], p: int) -> Union[int, float]:
    """p-adic valuation of a rational; +inf for zero."""
    if isinstance(x, Fraction):
        if x == 0:
            return INF
        return ord_p(x.numerator, p) - ord_p(x.denominator, p)
    if x == 0:
        return INF
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


def ord_factorial(p: int, n: int) -> int:
    """ord_p(n!) = (n - S_p(n)) / (p - 1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (n - digit_sum(n, p)) // (p - 1)


def floor_log(p: int, k: int) -> int:
    """Largest j with p^j <= k (k >= 1); 0 for k = 0."""
    j = 0
    q = p
    while q <= k:
        q *= p
        j += 1
    return j


@dataclass(frozen=True)
class PadicApprox:
    """An element of Z_p known modulo p^precision."""

    p: int
    residue: int
    precision: int
    exact_zero: bool = False

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        if self.precision < 1:
            raise PrecisionExhausted(f"precision {self.precision} < 1")
        if not 0 <= self.residue < self.p ** self.precision:
            raise ValueError("residue out of range")
        if self.exact_zero and self.residue != 0:
            raise ValueError("exact zero must have residue 0")

    # construction -------------------------------------------------------
    @classmethod
    def from_int(cls, x: int, p: int, precision: int) -> "PadicApprox":
        return cls(p, x % p**precision, precision)

    @classmethod
    def zero(cls, p: int, precision: int = 1) -> "PadicApprox":
        """The exact zero (precision is nominal)."""
        return cls(p, 0, precision, True)

    @classmethod
    def from_rational(cls, x: Union[int, Fraction], p: int, precision: int) -> "PadicApprox":
        """Project a p-integral rational; exact zero stays exact."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, precision)
        if x.denominator % p == 0:
            raise NotPIntegral(f"{x} is not {p}-integral")
        mod = p**precision
        return cls(p, x.numerator * pow(x.denominator, -1, mod) % mod, precision)

    # queries ----------------------------------------------------------------
    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def valuation(self) -> Union[int, float]:
        if self.exact_zero:
            return INF
        if self.residue == 0:
            return self.precision
        return ord_p(self.residue, self.p)

    def is_unit(self) -> bool:
        return not self.exact_zero and self.residue % self.p != 0

    def is_zero(self) -> bool:
        """True when the value is 0 to its full precision (or exactly)."""
        return self.residue == 0

    def reduce(self, precision: int) -> "PadicApprox":
        """Forget digits beyond the given precision."""
        if self.exact_zero:
            return PadicApprox(self.p, 0, precision, True)
        if precision > self.precision:
            raise PrecisionExhausted(
                f"cannot raise precision {self.precision} to {precision}"
            )
        return PadicApprox(self.p, self.residue % self.p**precision, precision)

    def digits(self, n: int | None = None) -> "DigitExpansion":
        return DigitExpansion.from_padic(self, n)

    def signed(self) -> int:
        """Representative in (-p^N/2, p^N/2]."""
        m = self.modulus
        return self.residue - m if self.residue > m // 2 else self.residue

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "PadicApprox | int":
        if isinstance(other, PadicApprox):
            if other.p != self.p:
                raise PrimeMismatch(f"{self.p} != {other.p}")
            return other
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        if self.exact_zero:
            return self
        return PadicApprox(self.p, -self.residue % self.modulus, self.precision)

    def __str__(self) -> str:
        if self.exact_zero:
            return "0 (exact)"
        return f"{self.residue} mod {self.p}^{self.precision}"


def _prec(x: "PadicApprox | int") -> float:
    if isinstance(x, int):
        return INF
    return INF if x.exact_zero else x.precision


def _combine(a, b, op) -> PadicApprox:
    if isinstance(a, PadicApprox) and isinstance(b, PadicApprox) and a.p != b.p:
        raise PrimeMismatch(f"{a.p} != {b.p}")
    p = a.p if isinstance(a, PadicApprox) else b.p
    va = 0 if isinstance(a, PadicApprox) and a.exact_zero else (a if isinstance(a, int) else a.residue)
    vb = 0 if isinstance(b, PadicApprox) and b.exact_zero else (b if isinstance(b, int) else b.residue)
    n = min(_prec(a), _prec(b))
    value = op(va, vb)
    if n == INF:
        # both operands exact: only exact zero is representable exactly
        if value == 0:
            return PadicApprox.zero(p, max(_nominal(a), _nominal(b)))
        raise PrecisionExhausted("exact nonzero result needs an explicit precision")
    return PadicApprox(p, value % p**n, int(n))


def _nominal(x) -> int:
    return x.precision if isinstance(x, PadicApprox) else 1


def add(a, b) -> PadicApprox:
    return _combine(a, b, lambda x, y: x + y)


def sub(a, b) -> PadicApprox:
    return _combine(a, b, lambda x, y: x - y)


def mul(a, b) -> PadicApprox:
    for x, y in ((a, b), (b, a)):
        if (isinstance(x, PadicApprox) and x.exact_zero) or (isinstance(x, int) and x == 0):
            p = x.p if isinstance(x, PadicApprox) else y.p
            if isinstance(y, PadicApprox) and y.p != p:
                raise PrimeMismatch(f"{p} != {y.p}")
            return PadicApprox.zero(p, _nominal(x))
    return _combine(a, b, lambda x, y: x * y)


def div_exact_p(a: PadicApprox, k: int) -> PadicApprox:
    """Divide by p^k; the precision drops by k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if a.exact_zero:
        return a
    if a.valuation() < k:
        raise NotDivisible(f"valuation {a.valuation()} < {k}")
    if a.precision - k < 1:
        raise PrecisionExhausted(f"precision {a.precision} - {k} < 1")
    return PadicApprox(a.p, a.residue // a.p**k, a.precision - k)


def invert_unit(a: PadicApprox) -> PadicApprox:
    if not a.is_unit():
        raise NotAUnit(str(a))
    return PadicApprox(a.p, pow(a.residue, -1, a.modulus), a.precision)


@dataclass(frozen=True)
class DigitExpansion:
    """Truncated base-p expansion s_0 + s_1 p + ... + s_{n-1} p^{n-1}."""

    p: int
    digits: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if any(not 0 <= d < self.p for d in self.digits):
            raise ValueError("digit out of range")

    @classmethod
    def from_int(cls, x: int, p: int, n: int) -> "DigitExpansion":
        x %= p**n
        out = []
        for _ in range(n):
            x, d = divmod(x, p)
            out.append(d)
        return cls(p, tuple(out))

    @classmethod
    def from_padic(cls, a: PadicApprox, n: int | None = None) -> "DigitExpansion":
        n = a.precision if n is None else n
        if n > a.precision and not a.exact_zero:
            raise PrecisionExhausted(f"only {a.precision} digits known")
        return cls.from_int(a.residue, a.p, n)

    @property
    def value(self) -> int:
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def to_padic(self) -> PadicApprox:
        return PadicApprox(self.p, self.value, len(self.digits))

    def __str__(self) -> str:
        return ",".join(map(str, self.digits))


def binom_mod(x: int, k: int, p: int, n: int) -> int:
    """C(x, k) mod p^n for an integer x of any sign (generalized binomial)."""
    if k < 0:
        return 0
    mod = p**n
    if x >= 0:
        return math.comb(x, k) % mod
    c = math.comb(k - x - 1, k)
    return (-c if k % 2 else c) % mod


def binom_padic(s: PadicApprox, k: int) -> PadicApprox:
    """C(s, k) from s mod p^N, known mod p^(N - floor(log_p k))."""
    if k == 0:
        return PadicApprox(s.p, 1 % s.p**s.precision, s.precision)
    if s.exact_zero:
        return PadicApprox.zero(s.p, s.precision)
    n = s.precision - floor_log(s.p, k)
    if n < 1:
        raise PrecisionExhausted(f"C(s,{k}) needs more than {s.precision} digits of s")
    return PadicApprox(s.p, binom_mod(s.residue, k, s.p, n), n)


def lucas_binom(x: int, k: int, p: int) -> int:
    """C(x, k) mod p as the product of digitwise binomials (x >= 0)."""
    r = 1
    while k:
        x, xi = divmod(x, p)
        k, ki = divmod(k, p)
        if ki > xi:
            return 0
        r = r * math.comb(xi, ki) % p
    return r


def forward_diff(values: Sequence, h: int = 1, n: int | None = None):
    """Sum_nu C(n,nu)(-1)^(n-nu) f(s+nu h) for values f(s), f(s+h), ...

    ``h`` only documents the spacing of the samples; the values must already
    be taken at that spacing.
    """
    if h < 1:
        raise ValueError("h must be positive")
    if n is None:
        n = len(values) - 1
    if len(values) < n + 1:
        raise InsufficientValues(f"need {n + 1} values, got {len(values)}")
    total = 0
    for nu in range(n + 1):
        c = math.comb(n, nu) * (-1) ** (n - nu)
        total = total + values[nu] * c
    return total


def hnomial(n: int, nu: int, h: int) -> int:
    """Coefficient of x^nu in (1 + x + ... + x^(h-1))^n."""
    if nu < 0 or nu > n * (h - 1):
        return 0
    poly = [1]
    for _ in range(n):
        new = [0] * (len(poly) + h - 1)
        # running window sum
        acc = 0
        for i in range(len(new)):
            if i < len(poly):
                acc += poly[i]
            if i - h >= 0:
                acc -= poly[i - h]
            new[i] = acc
        poly = new
    return poly[nu]


def differences(values: Iterable) -> list:
    """Leading entries Delta^k f(0), k = 0.., of a finite value table."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return out
