"""Quadratic characters, Bernoulli and Euler numbers, and their p-adic backends.

Exact values are Fractions.  For indices too large for exact arithmetic the
module offers two modular routes: power sums S_{n,chi}(m)/m with p f | m for
non-principal characters, and Voronoi's congruence for the principal one.
"""

from __future__ import annotations

import math
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import BackendOutOfRange, NotPIntegral, UnsupportedCase
from .padic import PadicApprox, ord_p

__all__ = [
    "QuadChar",
    "PRINCIPAL",
    "is_fundamental",
    "kronecker",
    "jacobi",
    "bernoulli",
    "euler",
    "gen_bernoulli",
    "power_sum",
    "power_sum_chi",
    "power_sum_chi_restricted",
    "gen_bernoulli_mod",
    "bernoulli_over_n_mod",
    "save_bernoulli_cache",
    "load_bernoulli_cache",
    "EXACT_N_MAX",
    "POWER_SUM_M_MAX",
]

EXACT_N_MAX = 2000
POWER_SUM_M_MAX = 5_000_000


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n)."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(D, n)


def _squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(D: int) -> bool:
    if D == 1:
        return True
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


@dataclass(frozen=True)
class QuadChar:
    """Principal character (D = 1) or the Kronecker symbol of a fundamental discriminant."""

    D: int = 1

    def __post_init__(self) -> None:
        if not is_fundamental(self.D):
            raise ValueError(f"{self.D} is not a fundamental discriminant")

    @classmethod
    def principal(cls) -> "QuadChar":
        return cls(1)

    @property
    def is_principal(self) -> bool:
        return self.D == 1

    @property
    def kind(self) -> str:
        return "principal" if self.D == 1 else "kronecker"

    @property
    def conductor(self) -> int:
        return abs(self.D)

    @property
    def parity(self) -> int:
        return 1 if self.D < 0 else 0

    def __call__(self, n: int) -> int:
        if self.D == 1:
            return 1
        return kronecker(self.D, n)

    @property
    def label(self) -> str:
        return "principal" if self.D == 1 else f"D={self.D}"

    def as_dict(self) -> dict:
        return {"kind": "principal"} if self.D == 1 else {"kind": "kronecker", "D": self.D}


PRINCIPAL = QuadChar(1)


# exact Bernoulli numbers ---------------------------------------------------

_B: dict = {0: Fraction(1), 1: Fraction(-1, 2)}
_B_even_max = 0


def _tangent_numbers(K: int) -> list:
    """T_1..T_K with tan x = sum T_k x^(2k-1)/(2k-1)!."""
    T = [0] * (K + 1)
    if K >= 1:
        T[1] = 1
    for k in range(2, K + 1):
        T[k] = (k - 1) * T[k - 1]
    for k in range(2, K + 1):
        for j in range(k, K + 1):
            T[j] = (j - k) * T[j - 1] + (j - k + 2) * T[j]
    return T


def _extend_bernoulli(n: int) -> None:
    global _B_even_max
    if n <= _B_even_max:
        return
    K = max(n, 2 * _B_even_max) // 2
    T = _tangent_numbers(K)
    for k in range(1, K + 1):
        if 2 * k not in _B:
            _B[2 * k] = Fraction((-1) ** (k - 1) * 2 * k * T[k], 4**k * (4**k - 1))
    _B_even_max = 2 * K


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2; memoized."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n in _B:
        return _B[n]
    if n % 2:
        return Fraction(0)
    _extend_bernoulli(n)
    return _B[n]


@contextmanager
def _unlimited_int_digits():
    """Lift the int/str conversion cap while big numerators are (de)serialized."""
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def save_bernoulli_cache(path: str, nmax: Optional[int] = None) -> None:
    """Write ``BCACHE1`` then ``n num/den`` lines for the even (and first) B_n."""
    if nmax is not None:
        bernoulli(nmax - nmax % 2)
    keys = sorted(k for k in _B if nmax is None or k <= nmax)
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh, _unlimited_int_digits():
        fh.write("BCACHE1\n")
        for k in keys:
            b = _B[k]
            fh.write(f"{k} {b.numerator}/{b.denominator}\n")
    os.replace(tmp, path)


def load_bernoulli_cache(path: str) -> int:
    """Load a cache file into the memo table; returns the number of entries read."""
    global _B_even_max
    with open(path) as fh, _unlimited_int_digits():
        header = fh.readline().strip()
        if header != "BCACHE1":
            raise ValueError(f"unknown cache header {header!r}")
        count = 0
        loaded = {}
        for line in fh:
            if not line.strip():
                continue
            k, frac = line.split()
            num, den = frac.split("/")
            loaded[int(k)] = Fraction(int(num), int(den))
            count += 1
    _B.update(loaded)
    # only trust a contiguous run of even indices
    m = 0
    while m + 2 in _B:
        m += 2
    _B_even_max = max(_B_even_max, m)
    return count


_E: list = [1]


def euler(n: int) -> int:
    """Euler number E_n (E_0 = 1, odd indices 0) via sum_k C(2m,2k) E_2k = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n % 2:
        return 0
    m = n // 2
    while len(_E) <= m:
        j = len(_E)
        _E.append(-sum(math.comb(2 * j, 2 * k) * _E[k] for k in range(j)))
    return _E[m]


# generalized Bernoulli numbers ------------------------------------------------

@lru_cache(maxsize=None)
def _char_power_sum(D: int, j: int) -> int:
    chi = QuadChar(D)
    return sum(chi(a) * a**j for a in range(1, chi.conductor + 1))


_GB: dict = {}


def gen_bernoulli(n: int, chi: QuadChar) -> Fraction:
    """B_{n,chi} = sum_k C(n,k) B_k f^(k-1) S_{n-k,chi}(f)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if chi.is_principal:
        if n == 1:
            raise UnsupportedCase("B_{1,1} is excluded (it equals 1/2, not B_1)")
        return bernoulli(n)
    if n % 2 != chi.parity:
        return Fraction(0)
    key = (n, chi.D)
    if key in _GB:
        return _GB[key]
    f = chi.conductor
    bernoulli(n - n % 2)
    total = Fraction(0)
    for k in range(0, n + 1):
        if k > 1 and k % 2:
            continue
        s = _char_power_sum(chi.D, n - k)
        if s == 0:
            continue
        total += math.comb(n, k) * bernoulli(k) * Fraction(f ** k * s, f)
    _GB[key] = total
    return total


# power sums ---------------------------------------------------------------

def power_sum(n: int, m: int, modulus: Optional[int] = None) -> int:
    """S_n(m) = 1^n + ... + (m-1)^n, optionally reduced mod ``modulus``."""
    if modulus is None:
        return sum(a**n for a in range(1, m))
    return sum(pow(a, n, modulus) for a in range(1, m)) % modulus


def power_sum_chi(n: int, chi: QuadChar, m: int, modulus: Optional[int] = None) -> int:
    """S_{n,chi}(m) = sum_{a=1}^m chi(a) a^n."""
    if modulus is None:
        return sum(chi(a) * a**n for a in range(1, m + 1))
    return _chi_sum_mod(n, chi, m, modulus, restrict=None)


def power_sum_chi_restricted(n: int, chi: QuadChar, m: int, p: int, modulus: Optional[int] = None) -> int:
    """S*_{n,chi}(m): the same sum over a coprime to p (requires p | m)."""
    if m % p:
        raise ValueError("p must divide m")
    if modulus is None:
        return sum(chi(a) * a**n for a in range(1, m + 1) if a % p)
    return _chi_sum_mod(n, chi, m, modulus, restrict=p)


def _chi_sum_mod(n: int, chi: QuadChar, m: int, modulus: int, restrict: Optional[int]) -> int:
    f = chi.conductor
    table = [chi(a) for a in range(f)]
    acc = 0
    for a in range(1, m + 1):
        if restrict is not None and a % restrict == 0:
            continue
        c = table[a % f]
        if c == 1:
            acc += pow(a, n, modulus)
        elif c == -1:
            acc -= pow(a, n, modulus)
    return acc % modulus


def _power_sum_quotient(n: int, chi: QuadChar, p: int, k: int, N: int) -> int:
    """S_{n,chi}(m)/m mod p^N with m = p^k f."""
    f = chi.conductor
    m = p**k * f
    mod = p ** (N + k)
    s = power_sum_chi(n, chi, m, mod)
    if s % p**k:
        raise NotPIntegral("power sum quotient is not p-integral")
    q = s // p**k
    return q * pow(f, -1, p**N) % p**N


def gen_bernoulli_mod(n: int, chi: QuadChar, p: int, N: int, backend: str = "auto") -> PadicApprox:
    """B_{n,chi} mod p^N.

    ``backend`` is ``exact``, ``powersum`` or ``auto``.  The power-sum route
    uses m = p^k f with k = ceil(N/4) and one correction term:

        B_{n,chi} = S(m)/m - n(n-1)/6 * B_{n-2,chi} * m^2   (mod p^(4k)),

    where n(n-1)/6 = C(n,3)/(n-2).  Without the correction it is good mod
    p^(2k) only.
    """
    if p <= 3 and backend != "exact":
        backend = "exact"
    if backend == "auto":
        backend = _choose_backend(n, chi, p, N)
    if backend == "exact":
        if n > EXACT_N_MAX:
            raise BackendOutOfRange(f"n = {n} exceeds the exact backend limit {EXACT_N_MAX}")
        return PadicApprox.from_rational(gen_bernoulli(n, chi), p, N)
    if chi.is_principal:
        raise BackendOutOfRange("power sums need a non-principal character")
    if chi.conductor % p == 0:
        raise BackendOutOfRange("p divides the conductor")
    if n % 2 != chi.parity:
        return PadicApprox.zero(p, N)
    k = -(-N // 4)
    if p**k * chi.conductor > POWER_SUM_M_MAX:
        raise BackendOutOfRange(f"power sum over {p ** k * chi.conductor} terms is too long")
    mod = p**N
    b = _power_sum_quotient(n, chi, p, k, N)
    if N > 2 * k and n >= 3:
        m = p**k * chi.conductor
        prev = gen_bernoulli_mod(n - 2, chi, p, N - 2 * k, backend="powersum").residue
        corr = n * (n - 1) * pow(6, -1, mod) * prev * m * m
        b = (b - corr) % mod
    return PadicApprox(p, b, N)


def _choose_backend(n: int, chi: QuadChar, p: int, N: int) -> str:
    if n <= 500 or p <= 3:
        return "exact"
    if not chi.is_principal and chi.conductor % p:
        k = -(-N // 4)
        terms = p**k * chi.conductor
        # past n = 500 the exact route costs about n^2 big-int steps
        if terms <= POWER_SUM_M_MAX and (terms <= 200_000 or n > EXACT_N_MAX):
            return "powersum"
    return "exact"


# Bernoulli quotients B_n/n for the principal character ------------------------

def _primitive_root(p: int) -> int:
    phi = p - 1
    factors = []
    m, d = phi, 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    return 1


def voronoi_bernoulli_quotient(n: int, p: int, N: int) -> PadicApprox:
    """B_n / n mod p^N for even n with p - 1 not dividing n (Voronoi congruence).

    (a^n - 1) B_n/n = a^(n-1) sum_{j<M} j^(n-1) floor(j a / M)  (mod M = p^N).
    """
    if n % 2 or n < 2:
        raise ValueError("n must be even and positive")
    if (n % (p - 1)) == 0:
        raise NotPIntegral(f"p - 1 divides n = {n}")
    M = p**N
    a = _primitive_root(p)
    acc = 0
    e = n - 1
    for j in range(1, M):
        acc += pow(j, e, M) * (j * a // M)
    lhs = pow(a, e, M) * acc % M
    unit = (pow(a, n, M) - 1) % M
    return PadicApprox(p, lhs * pow(unit, -1, M) % M, N)


def bernoulli_over_n_mod(n: int, chi: QuadChar, p: int, N: int, backend: str = "auto") -> PadicApprox:
    """B_{n,chi}/n mod p^N, fetching extra digits when p | n."""
    e = ord_p(n, p)
    if backend == "auto":
        if chi.is_principal:
            backend = "exact" if n <= EXACT_N_MAX else "voronoi"
        else:
            backend = _choose_backend(n, chi, p, N + e)
    if backend == "voronoi":
        if not chi.is_principal:
            raise BackendOutOfRange("Voronoi route is for the principal character")
        if p ** (N + e) > POWER_SUM_M_MAX * 4:
            raise BackendOutOfRange(f"Voronoi sum over {p ** (N + e)} terms is too long")
        # (B_n/n) directly; precision is not reduced by p | n in this form
        return voronoi_bernoulli_quotient(n, p, N)
    if backend == "exact":
        if n > EXACT_N_MAX:
            raise BackendOutOfRange(f"n = {n} exceeds the exact backend limit {EXACT_N_MAX}")
        return PadicApprox.from_rational(gen_bernoulli(n, chi) / n, p, N)
    b = gen_bernoulli_mod(n, chi, p, N + e, backend=backend)
    if b.exact_zero:
        return b
    if b.residue % p**e:
        raise NotPIntegral(f"B_(n,chi)/n not {p}-integral")
    unit = n // p**e
    mod = p**N
    return PadicApprox(p, (b.residue // p**e) * pow(unit, -1, mod) % mod, N)
