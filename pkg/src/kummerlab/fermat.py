"""Fermat quotients, the Teichmueller character and the functions T^r_{p,l}.

For an odd prime p and a quadratic character chi with p not dividing f_chi,

    T^r_{p,l}(s, chi) = f^-1 sum_{a <= p f, p not| a} chi(a) a^(l+delta) q(a)^r u(a)^s,

with q(a) = (a^(p-1) - 1)/p and u(a) = a^(p-1).  Its normalized Mahler
coefficients are T^(r+nu)_{p,l}(0, chi), so :func:`build_T` works
coefficient-first.  The numpy kernels at the end evaluate T^r(0) mod p for
many l at once and drive the scanners in :mod:`kummerlab.lfunc`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .charnum import PRINCIPAL, QuadChar
from .errors import NotAUnit, NotDivisible, RelationViolated, UnsupportedCase
from .mahler import KummerFn, classify, from_values
from .padic import PadicApprox, ord_p

__all__ = [
    "TSpec",
    "fermat_quotient",
    "teichmuller",
    "build_T",
    "T_value",
    "T_from_power_sums",
    "t_values_mod_p",
    "t_scan_mod_p",
    "congruence_suite",
    "CongruenceReport",
    "kappa_probe",
]


# scalar functions -------------------------------------------------------------

def fermat_quotient(a: int, p: int, N: int) -> PadicApprox:
    """q(a) = (a^(p-1) - 1)/p mod p^N."""
    if a % p == 0:
        raise NotAUnit(f"{p} divides {a}")
    return PadicApprox(p, _fq(a, p, N), N)


def _fq(a: int, p: int, N: int) -> int:
    return (pow(a, p - 1, p ** (N + 1)) - 1) // p % p**N


def teichmuller(a: int, p: int, N: int) -> PadicApprox:
    """omega(a): the (p-1)-th root of unity congruent to a mod p."""
    if a % p == 0:
        raise NotAUnit(f"{p} divides {a}")
    mod = p**N
    x = a % p
    while True:
        y = pow(x, p, mod)
        if y == x:
            return PadicApprox(p, x, N)
        x = y


# T-functions ------------------------------------------------------------------

@dataclass(frozen=True)
class TSpec:
    p: int
    l: int
    r: int = 1
    chi: QuadChar = field(default=PRINCIPAL)
    N: int = 10

    def validate(self) -> None:
        if self.p % 2 == 0:
            raise UnsupportedCase("T-functions need an odd prime")
        if self.r < 1:
            raise ValueError("r must be positive")
        if self.chi.conductor % self.p == 0:
            raise UnsupportedCase(f"{self.p} divides the conductor")


def _terms(p: int, chi: QuadChar) -> list:
    """(a, chi(a)) for a <= p f coprime to p with chi(a) != 0."""
    f = chi.conductor
    return [(a, chi(a)) for a in range(1, p * f + 1) if a % p and chi(a)]


def _value_table(p: int, l: int, r: int, chi: QuadChar, count: int, N: int) -> list:
    """T^r_{p,l}(s, chi) mod p^N for s = 0..count-1 in one pass over a."""
    mod = p**N
    e = l + chi.parity
    acc = [0] * count
    for a, c in _terms(p, chi):
        u = pow(a, p - 1, mod)
        term = c * pow(a, e, mod) * pow(_fq(a, p, N), r, mod) % mod
        for s in range(count):
            acc[s] += term
            term = term * u % mod
    finv = pow(chi.conductor, -1, mod)
    return [PadicApprox(p, x * finv % mod, N) for x in acc]


def T_value(p: int, l: int, r: int, chi: QuadChar, s: int, N: int) -> PadicApprox:
    """T^r_{p,l}(s, chi) mod p^N for an integer s >= 0 by the defining sum."""
    mod = p**N
    e = l + chi.parity
    acc = 0
    for a, c in _terms(p, chi):
        u = pow(a, p - 1, mod)
        acc += c * pow(a, e, mod) * pow(_fq(a, p, N), r, mod) * pow(u, s, mod)
    return PadicApprox(p, acc * pow(chi.conductor, -1, mod) % mod, N)


def build_T(spec: TSpec) -> KummerFn:
    """T^r_{p,l}(., chi) with c_nu = T^(r+nu)(0) mod p^(N-nu).

    The value table from T(0..3) is compared against the coefficients as a
    second route; a mismatch raises RelationViolated.
    """
    spec.validate()
    p, l, r, chi, N = spec.p, spec.l, spec.r, spec.chi, spec.N
    mod = p**N
    e = l + chi.parity
    acc = [0] * N
    for a, c in _terms(p, chi):
        q = _fq(a, p, N)
        term = c * pow(a, e, mod) * pow(q, r, mod) % mod
        for nu in range(N):
            acc[nu] += term
            term = term * q % mod
    finv = pow(chi.conductor, -1, mod)
    coeffs = [PadicApprox(p, acc[nu] * finv % p ** (N - nu), N - nu) for nu in range(N)]
    f = KummerFn(p, tuple(coeffs), N)
    check = min(4, N)
    g = from_values(p, _value_table(p, l, r, chi, check, N), N)
    for nu in range(check):
        a, b = f.coeffs[nu], g.coeffs[nu]
        prec = min(a.precision, b.precision)
        if (a.residue - b.residue) % p**prec:
            raise RelationViolated(f"coefficient {nu} of T disagrees with its value table")
    return KummerFn(p, f.coeffs, N, value_table=g.value_table)


def T_from_power_sums(p: int, l: int, r: int, chi: QuadChar = PRINCIPAL, s: int = 0, N: int = 4) -> PadicApprox:
    """T^r_{p,l}(s, chi) = f^-1 p^-r Delta^r_{p-1} S*_{t,chi}(p f) at t = l + delta + s(p-1)."""
    if l < 0 or s < 0:
        raise ValueError("l and s must be nonnegative")
    f = chi.conductor
    m = p * f
    t0 = l + chi.parity + s * (p - 1)
    terms = [(a, chi(a)) for a in range(1, m + 1) if a % p and chi(a)]

    def S(t: int) -> int:
        return sum(c * a**t for a, c in terms)

    total = sum(math.comb(r, i) * (-1) ** (r - i) * S(t0 + i * (p - 1)) for i in range(r + 1))
    if total % p**r:
        raise NotDivisible(f"Delta^{r} S* is not divisible by {p}^{r}")
    mod = p**N
    return PadicApprox(p, (total // p**r) * pow(f, -1, mod) % mod, N)


# numpy kernels mod p ------------------------------------------------------------

def _powmod_vec(base: np.ndarray, e: int, m: int) -> np.ndarray:
    """base^e mod m elementwise; m < 2^31 keeps products inside int64."""
    result = np.ones_like(base)
    b = base % m
    while e:
        if e & 1:
            result = result * b % m
        b = b * b % m
        e >>= 1
    return result


def _mul_p2(x0, x1, y0, y1, p):
    """(x0 + x1 p)(y0 + y1 p) mod p^2 as two base-p digits."""
    z = x0 * y0
    c1 = z // p
    d0 = z - c1 * p
    d1 = (c1 + x0 * y1 % p + x1 * y0 % p) % p
    return d0, d1


def _fermat_quotients_vec(a: np.ndarray, p: int) -> np.ndarray:
    """q(a) mod p for a vector of units, via two-digit arithmetic mod p^2."""
    r0, r1 = np.ones_like(a), np.zeros_like(a)
    b0, b1 = a % p, a // p % p
    e = p - 1
    while e:
        if e & 1:
            r0, r1 = _mul_p2(r0, r1, b0, b1, p)
        b0, b1 = _mul_p2(b0, b1, b0, b1, p)
        e >>= 1
    # a^(p-1) = 1 + p q(a): the low digit is 1
    return r1


def _weights(p: int, chi: QuadChar, r: int) -> tuple:
    """(a0, W_r(a0)) with W_r(a0) = sum_j chi(a0 + jp) (q(a0) - j/a0)^r mod p.

    Writing a = a0 + jp, q(a) = q(a0) - j/a0 mod p, so the sum over a <= p f
    collapses onto the residues a0 = 1..p-1.
    """
    if p >= 2**31:
        raise UnsupportedCase("vectorized kernels need p < 2^31")
    f = chi.conductor
    a0 = np.arange(1, p, dtype=np.int64)
    q0 = _fermat_quotients_vec(a0, p)
    inv = _powmod_vec(a0, p - 2, p)
    table = np.array([chi(k) for k in range(f)], dtype=np.int64)
    W = np.zeros_like(a0)
    for j in range(f):
        c = table[(a0 + j * p) % f]
        x = (q0 - j * inv) % p
        W = (W + c * _powmod_vec(x, r, p)) % p
    return a0, W


def t_values_mod_p(p: int, chi: QuadChar, r: int, ls: Sequence[int]) -> list:
    """T^r_{p,l}(0, chi) mod p for each l in ls."""
    a0, W = _weights(p, chi, r)
    finv = pow(chi.conductor, -1, p)
    out = []
    for l in ls:
        pw = _powmod_vec(a0, (l + chi.parity) % (p - 1), p)
        out.append(int((pw * W % p).sum() % p) * finv % p)
    return out


def t_scan_mod_p(p: int, chi: QuadChar, r: int = 1) -> dict:
    """T^r_{p,l}(0, chi) mod p for every even l in [2, p-3], by running powers."""
    a0, W = _weights(p, chi, r)
    finv = pow(chi.conductor, -1, p)
    sq = a0 * a0 % p
    pw = _powmod_vec(a0, 2 + chi.parity, p)
    out = {}
    for l in range(2, p - 2, 2):
        out[l] = int((pw * W % p).sum() % p) * finv % p
        pw = pw * sq % p
    return out


# congruences linking T and L ----------------------------------------------------

@dataclass
class CongruenceReport:
    p: int
    l: int
    chi: QuadChar
    checks: dict
    details: dict

    @property
    def ok(self) -> bool:
        return all(v for v in self.checks.values() if v is not None)


def _unit_ratio(num: int, den: int, p: int) -> int:
    """Unit part of num/den mod p when both have the same valuation."""
    vn, vd = ord_p(num, p), ord_p(den, p)
    if vn != vd:
        raise RelationViolated(f"valuations {vn} and {vd} differ")
    return (num // p**vn) * pow(den // p**vd, -1, p) % p


def congruence_suite(p: int, l: int, chi: QuadChar = PRINCIPAL, digits: int = 4, samples: int = 11) -> CongruenceReport:
    """Evaluate the T/L congruences at (p, l, chi), both sides computed independently.

    Each entry of ``checks`` is True, False, or None when the identity does
    not apply to the input.
    """
    from .lfunc import LplSpec, build_Lpl, lp_value
    from .solver import find_fixed_point, find_zero

    if p <= 3 or l % 2 or not 0 <= l <= p - 3:
        raise UnsupportedCase("need p > 3 and even l in [0, p-3]")
    if chi.is_principal and l == 0:
        raise UnsupportedCase("principal character needs l >= 2")
    N = max(digits + 1, 4)
    L = build_Lpl(LplSpec(p, l, chi, N))
    T = build_T(TSpec(p, l, 1, chi, N))
    d = chi.parity
    checks: dict = {}
    details: dict = {}

    # T(s) = L(s) mod p, the L side straight from Bernoulli numbers;
    # u(a)^s = 1 mod p makes T(s) = T(0) mod p
    ok = True
    shifted = l == 0 and d == 0
    tv = T.coeffs[0].residue % p
    for s in range(samples):
        if s == 0 and shifted:
            lv = L.coeffs[0].residue % p
        else:
            lv = lp_value(d + l + (p - 1) * s, chi, p, 1).residue
        ok &= tv == lv
    checks["T=L mod p"] = ok

    dT, dL = T.delta, L.delta
    details["delta_T"], details["delta_L"] = dT, dL
    if chi.is_principal and l == 2:
        checks["Delta_T=2Delta_L"] = None
    else:
        checks["Delta_T=2Delta_L"] = dT == 2 * dL % p

    cT, cL = classify(T), classify(L)
    details["label_T"], details["label_L"] = cT.label, cL.label
    checks["KS* transfer"] = (cT.label == "KS*") == (cL.label == "KS*")
    checks["WKS0 transfer"] = (cT.label == "WKS0") == (cL.label == "WKS0")

    if chi.is_principal:
        checks["Delta(2)"] = checks["Delta(3)"] = None
    else:
        f2 = chi.conductor**2
        l2 = p - 3 if l == 0 else l - 2
        t3 = T.coeffs[2].residue % p
        t4 = T.coeffs[3].residue % p
        t1_l2 = t_values_mod_p(p, chi, 1, [l2])[0]
        t2_l2 = t_values_mod_p(p, chi, 2, [l2])[0]
        checks["Delta(2)"] = 3 * L.coeffs[2].residue % p == (t3 - f2 * t1_l2) % p
        checks["Delta(3)"] = 4 * L.coeffs[3].residue % p == (t4 - 2 * f2 * t2_l2) % p

    checks["reciprocity"] = None
    if cL.label == "WKS0" and cT.label == "WKS0":
        xL = find_zero(L, digits).value
        xT = find_zero(T, digits).value
        tL = find_fixed_point(L, digits).value
        tT = find_fixed_point(T, digits).value
        details.update(xi_L=xL, xi_T=xT, tau_L=tL, tau_T=tT)
        if 0 in (xL, xT, tL, tT):
            checks["reciprocity"] = None
        else:
            ratio = _unit_ratio(tT * xL, tL * xT, p)
            details["reciprocity_ratio"] = ratio
            checks["reciprocity"] = ratio == 2 % p
    return CongruenceReport(p, l, chi, checks, details)


# fixed points of a^s ---------------------------------------------------------------

def kappa_probe(p: int, samples: int = 50, N: int = 8, seed: int = 0) -> dict:
    """Probe the map a -> tau with a^tau = tau on 1 + pZ_p.

    For a, b in 1 + pZ_p, ord(tau_a - tau_b) = ord(a - b), and
    ord(a^tau - 1) = ord(a - 1) for tau in 1 + pZ_p; both are checked on
    random samples.  Returns counts of checked cases.
    """
    from .mahler import exp_function
    from .solver import find_fixed_point

    rng = random.Random(seed)
    mod = p**N
    inj = 0
    for _ in range(samples):
        a = 1 + p * rng.randrange(p ** (N - 1))
        b = 1 + p * rng.randrange(p ** (N - 1))
        if (a - b) % mod == 0:
            continue
        ta = find_fixed_point(exp_function(a, p, N), N).value
        tb = find_fixed_point(exp_function(b, p, N), N).value
        if ord_p(ta - tb, p) != ord_p(a - b, p):
            raise RelationViolated(f"ord(tau_a - tau_b) != ord(a - b) for a={a}, b={b}")
        inj += 1
    unit = 0
    for _ in range(samples):
        a = 1 + p * rng.randrange(p ** (N - 1))
        if (a - 1) % mod == 0:
            continue
        tau = 1 + p * rng.randrange(p ** (N - 1))
        v = ord_p((pow(a, tau, mod) - 1) % mod, p)
        if min(v, N) != ord_p(a - 1, p):
            raise RelationViolated(f"a^tau = 1 mod p^{ord_p(a - 1, p) + 1} with a={a}")
        unit += 1
    return {"injective": inj, "a_tau": unit}
