"""Digit-by-digit zeros and fixed points of Kummer functions.

Each solver produces one base-p digit per step.  At step r the current
approximation x_{r-1} (an exact integer below p^(r-1)) is plugged into a
truncated Mahler sum, which determines f(x_{r-1}) modulo p^(r+1); the next
digit then follows from a single division mod p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import (
    DoubleRootModP,
    InsufficientEntries,
    NoZeroModP,
    NotInWKS0,
    NotInWKSd,
    PrecisionExhausted,
    RelationViolated,
    UnsupportedCase,
)
from .mahler import (
    DegenerateFn,
    KummerFn,
    classify,
    compose_linear,
    divide_out_zero,
    evaluate,
    from_values,
    values,
)
from .padic import INF, DigitExpansion, PadicApprox, binom_mod, div_exact_p, lucas_binom, ord_p

__all__ = [
    "ZeroResult",
    "FixedPointResult",
    "find_zero",
    "find_fixed_point",
    "find_zero_degenerate",
    "find_two_zeros",
    "verify_zero_relations",
]


@dataclass(frozen=True)
class ZeroResult:
    digits: DigitExpansion
    method: str
    residual_valuations: tuple

    @property
    def value(self) -> int:
        return self.digits.value


@dataclass(frozen=True)
class FixedPointResult:
    digits: DigitExpansion
    consistency: bool

    @property
    def value(self) -> int:
        return self.digits.value


def _check_wks0(f: KummerFn) -> None:
    p = f.p
    if len(f.coeffs) < 2:
        raise PrecisionExhausted("need at least two coefficients")
    if f.coeffs[0].residue % p:
        raise NotInWKS0("f(0) is a unit")
    if not f.coeffs[1].is_unit():
        raise NotInWKS0(f"Delta_f = {f.delta} is not a unit")
    if p == 2 and (len(f.coeffs) < 3 or f.coeffs[2].residue % 2):
        raise NotInWKS0("p = 2 needs 2 | Delta_f(2)")


def _residual(f: KummerFn, x: int) -> Union[int, float]:
    v = evaluate(f, x, f.M)
    return v.valuation()


def find_zero(f: KummerFn, n: int, method: str = "coefficients") -> ZeroResult:
    """The unique simple zero of f in WKS0, to n digits.

    ``coefficients`` sums c_nu p^(nu-1) C(x, nu) for nu <= r with the top
    binomial taken digitwise (Lucas); ``values`` uses f(nu)/p with the
    reflection weights C(x,nu) C(r-x, r-nu).
    """
    _check_wks0(f)
    p = f.p
    if len(f.coeffs) < n + 1 or f.base_precision < n + 1:
        raise PrecisionExhausted(f"{n} digits need base precision {n + 1}, have {f.base_precision}")
    inv = -pow(f.coeffs[1].residue, -1, p) % p
    cs = [0 if c.exact_zero else c.residue for c in f.coeffs]
    if method == "values":
        vals = f.value_table if f.value_table and len(f.value_table) >= n + 1 else values(f, n + 1)
        vt = [0 if v.exact_zero else v.residue for v in vals]
        if any(v % p for v in vt[: n + 1]):
            raise RelationViolated("a value f(nu) is not divisible by p")
        tilde = [v // p for v in vt]
    elif method != "coefficients":
        raise ValueError(f"unknown method {method!r}")

    xi = 0
    residuals = []
    for r in range(1, n + 1):
        mod = p**r
        if method == "coefficients":
            gamma = cs[0] // p
            for nu in range(1, r):
                gamma += cs[nu] * p ** (nu - 1) * binom_mod(xi, nu, p, r - nu + 1)
            gamma += cs[r] * p ** (r - 1) * lucas_binom(xi, r, p)
        else:
            gamma = 0
            for nu in range(r + 1):
                gamma += tilde[nu] * binom_mod(xi, nu, p, r) * binom_mod(r - xi, r - nu, p, r)
        gamma %= mod
        step = p ** (r - 1)
        if gamma % step:
            raise RelationViolated(f"gamma_{r - 1} is not divisible by p^{r - 1}")
        digit = gamma // step * inv % p
        xi += digit * step
        residuals.append(_residual(f, xi))
    return ZeroResult(DigitExpansion.from_int(xi, p, n), method, tuple(residuals))


def find_fixed_point(f: KummerFn, n: int) -> FixedPointResult:
    """The fixed point tau = f(tau), to n digits."""
    p = f.p
    if len(f.coeffs) < n or f.base_precision < n:
        raise PrecisionExhausted(f"{n} digits need base precision {n}, have {f.base_precision}")
    cs = [0 if c.exact_zero else c.residue for c in f.coeffs]
    tau = cs[0] % p
    for r in range(1, n):
        mod = p ** (r + 1)
        acc = -tau
        for nu in range(r):
            acc += cs[nu] * p**nu * binom_mod(tau, nu, p, r + 1 - nu)
        acc %= mod
        if acc % p**r:
            raise RelationViolated(f"fixed-point sum at step {r} is not divisible by p^{r}")
        t = (acc // p**r + cs[r] * lucas_binom(tau, r, p)) % p
        tau += t * p**r
    check = evaluate(f, tau, n - 1).residue == tau % p**n
    if not check:
        raise RelationViolated("f(tau) != tau at the computed precision")
    return FixedPointResult(DigitExpansion.from_int(tau, p, n), check)


def find_zero_degenerate(g: DegenerateFn, n: int) -> ZeroResult:
    """The unique simple zero of a degenerate function in WKS^d, to n digits.

    Works in the stored variable t = s - origin and translates back.
    """
    p = g.p
    if len(g.entries) < 2:
        raise InsufficientEntries("need at least two entries")
    if not g.in_ksd():
        raise NotInWKSd("exponent schedule violates the KS^d bounds")
    d0, u0 = g.entries[0]
    if not u0.exact_zero and (u0.residue * p**d0) % p:
        raise NotInWKSd("g(origin) is a unit")
    delta = g.delta
    if delta % p == 0:
        raise NotInWKSd("Delta_g is not a unit")
    if p == 2:
        d2, u2 = g.entries[2]
        if not u2.exact_zero and d2 == 2 and u2.residue % 2:
            raise NotInWKSd("p = 2 needs 2 | Delta_g(2)")
    inv = -pow(delta, -1, p) % p

    x = 0
    residuals = []
    for r in range(1, n + 1):
        stop = g.eta(r + 1)
        mod = p ** (r + 1)
        acc = 0
        for nu in range(stop):
            d, u = g.entries[nu]
            if u.exact_zero:
                continue
            if u.precision + d < r + 1:
                raise PrecisionExhausted(f"entry {nu} known mod p^{u.precision + d} < p^{r + 1}")
            acc += u.residue * p**d * binom_mod(x, nu, p, r + 1 - d)
        acc %= mod
        if acc % p**r:
            raise RelationViolated(f"degenerate sum at step {r} is not divisible by p^{r}")
        digit = acc // p**r * inv % p
        x += digit * p ** (r - 1)
        residuals.append(ord_p(acc, p))
    xi = (x + g.origin) % p**n
    return ZeroResult(DigitExpansion.from_int(xi, p, n), "degenerate", tuple(residuals))


def _quadratic_roots(f: KummerFn) -> tuple:
    """Roots mod p of f(0)/p^2 + (c_1/p) s + c_2 C(s,2), and the derivative there."""
    p = f.p
    a = f.coeffs[0].residue // p**2 % p
    b = f.coeffs[1].residue // p % p
    c = f.coeffs[2].residue % p
    inv2 = pow(2, -1, p)
    roots = []
    for s in range(p):
        if (a + b * s + c * s * (s - 1) * inv2) % p == 0:
            roots.append((s, (b + c * (2 * s - 1) * inv2) % p))
    return tuple(roots)


def _rescaled(f: KummerFn, rho: int) -> KummerFn:
    """h(s) = f(rho + p s)/p^2, a WKS0 function near a simple root rho."""
    g = compose_linear(f, rho, f.p)
    vals = [div_exact_p(v, 2) for v in values(g)]
    return from_values(f.p, vals, g.base_precision - 2)


def find_two_zeros(
    f: KummerFn, n: int, seeds: Optional[Sequence[int]] = None
) -> tuple:
    """Both zeros of a KS2 function, each to n digits.

    Every simple root rho of the mod-p quadratic gives a zero rho + p * xi_h,
    where xi_h is the zero of h(s) = f(rho + p s)/p^2.  When a seed is 0 and
    f(0) vanishes exactly, the partner zero is also computed from the
    degenerate function f/(ps) and the two routes are compared.
    """
    p = f.p
    if p <= 3:
        raise UnsupportedCase("two-zero splitting needs p > 3")
    if len(f.coeffs) < 3:
        raise PrecisionExhausted("need at least three coefficients")
    if f.coeffs[1].residue % p or not f.coeffs[2].is_unit():
        raise UnsupportedCase("not in KS2: need Delta_f = 0 and Delta_f(2) a unit")
    if f.coeffs[0].valuation() < 2 or f.coeffs[1].valuation() < 1:
        raise NoZeroModP("|f(s)| = |f(0)| > p^-2 everywhere")
    if f.base_precision < n + 2:
        raise PrecisionExhausted(f"{n} digits need base precision {n + 2}")
    roots = _quadratic_roots(f)
    if not roots:
        raise NoZeroModP("the mod-p quadratic has no root")
    for rho, deriv in roots:
        if deriv == 0:
            raise DoubleRootModP(f"double root {rho} mod {p}")
    order = [r for r, _ in roots]
    if seeds:
        for s in seeds:
            if s % p not in order:
                raise NoZeroModP(f"seed {s} is not a root mod {p}")
        order = [s % p for s in seeds] + [r for r in order if r not in {s % p for s in seeds}]

    zeros = []
    for rho in order[:2]:
        h = _rescaled(f, rho)
        xh = find_zero(h, n - 1).value if n > 1 else 0
        zeros.append(DigitExpansion.from_int(rho + p * xh, p, n))

    if seeds and 0 in [s % p for s in seeds] and f.coeffs[0].exact_zero:
        g = divide_out_zero(f)
        other = find_zero_degenerate(g, n).digits
        if other != zeros[1]:
            raise RelationViolated("degenerate and rescaled routes disagree on the partner zero")
    return zeros[0], zeros[1]


def _as_padic(x, p: int) -> PadicApprox:
    if isinstance(x, ZeroResult) or isinstance(x, FixedPointResult):
        x = x.digits
    if isinstance(x, DigitExpansion):
        return x.to_padic()
    return x


def verify_zero_relations(f: KummerFn, xi, tau, samples: int = 100, seed: int = 0) -> dict:
    """Check the relations tying f(0), the zero xi and the fixed point tau."""
    p = f.p
    _check_wks0(f)
    xi = _as_padic(xi, p)
    tau = _as_padic(tau, p)
    v_xi = xi.valuation()
    v_tau = tau.valuation()
    v_f0 = f.coeffs[0].valuation()
    report = {"ord_f0": v_f0, "ord_tau": v_tau, "ord_xi": v_xi}
    if v_xi >= xi.precision or v_tau >= tau.precision:
        raise RelationViolated("not enough digits to determine the valuations")
    if not (v_f0 == v_tau == 1 + v_xi):
        raise RelationViolated(f"ord f(0) = {v_f0}, ord tau = {v_tau}, 1 + ord xi = {1 + v_xi}")
    if tau.precision < v_tau + 1 or xi.precision < v_xi + 1:
        raise RelationViolated("not enough digits for the unit parts")
    tau_u = tau.residue // p**v_tau % p
    xi_u = xi.residue // p**v_xi % p
    f0_u = f.coeffs[0].residue // p**v_f0 % p
    ratio = tau_u * pow(xi_u, -1, p) % p
    report["tau_over_p_xi"] = ratio
    if ratio != -f.delta % p:
        raise RelationViolated(f"tau/(p xi) = {ratio} != -Delta_f")
    if f0_u * pow(tau_u, -1, p) % p != 1:
        raise RelationViolated("f(0)/tau is not 1 mod p")
    rng = random.Random(seed)
    n = xi.precision
    checked = 0
    for _ in range(samples):
        s = rng.randrange(p**n)
        diff = s - xi.residue
        if diff % p**n == 0:
            continue
        v = ord_p(diff, p)
        if 1 + v > f.M:
            continue
        val = evaluate(f, s, f.M).valuation()
        if val != 1 + v:
            raise RelationViolated(f"|f({s})| != |p(s - xi)|")
        checked += 1
    report["samples_checked"] = checked
    return report
