"""Kummer functions stored by their normalized Mahler coefficients.

A function f in the Kummer space over Z_p is written

    f(s) = sum_nu c_nu p^nu C(s, nu),    c_nu = Delta^nu f(0) / p^nu,

and a :class:`KummerFn` keeps c_0 .. c_{N-1}, with c_nu known modulo p^(N-nu).
A :class:`DegenerateFn` allows an arbitrary monotone exponent schedule
delta(nu) in place of nu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import (
    InsufficientEntries,
    NonzeroConstant,
    NotAUnit,
    NotKummer,
    PrecisionExhausted,
    PrimeMismatch,
)
from .padic import INF, PadicApprox, binom_mod, floor_log, ord_p

__all__ = [
    "KummerFn",
    "DegenerateFn",
    "Classification",
    "from_values",
    "from_coefficients",
    "constant",
    "exp_function",
    "values",
    "evaluate",
    "evaluate_negative",
    "reflect_coeffs",
    "shift_op",
    "scale",
    "multiply",
    "invert",
    "compose_linear",
    "volkenborn",
    "classify",
    "divide_out_zero",
    "evaluate_degenerate",
    "translate_degenerate",
    "dumps",
    "loads",
]

Scalar = Union[int, PadicApprox]


@dataclass(frozen=True)
class KummerFn:
    """Normalized Mahler coefficients c_0..c_M of a function in KS_{p,2}.

    ``finite`` marks functions whose coefficients beyond the stored ones are
    exactly zero (constants, explicit polynomials).  ``factors`` records the
    class labels of the operands when the function was built as a product.
    """

    p: int
    coeffs: tuple
    base_precision: int
    finite: bool = False
    factors: tuple = ()
    value_table: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) > self.base_precision:
            raise ValueError("at most N coefficients at base precision N")
        for c in self.coeffs:
            if c.p != self.p:
                raise PrimeMismatch(f"{c.p} != {self.p}")

    @property
    def M(self) -> int:
        """Index of the last stored coefficient."""
        return len(self.coeffs) - 1

    @property
    def delta(self) -> int:
        """Delta_f = c_1 mod p."""
        return self.coeffs[1].residue % self.p

    def __mul__(self, other: "KummerFn") -> "KummerFn":
        return multiply(self, other)


@dataclass(frozen=True)
class Classification:
    delta_f: Optional[int]
    lambda_f: Optional[int]
    mu_f: Optional[int]
    ord_f0: Union[int, float]
    label: str
    p2_condition: bool
    mu_exact: bool = False
    product_label: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "delta": self.delta_f,
            "lambda": self.lambda_f,
            "ord_f0": None if self.ord_f0 == INF else self.ord_f0,
            "label": self.label,
        }


# construction ---------------------------------------------------------------

def _value_residue(v: Scalar, p: int, N: int) -> int:
    if isinstance(v, int):
        return v % p**N
    if v.exact_zero:
        return 0
    if v.precision < N:
        raise PrecisionExhausted(f"value known mod {p}^{v.precision} < {p}^{N}")
    return v.residue % p**N


def from_values(p: int, vals: Sequence[Scalar], N: Optional[int] = None) -> KummerFn:
    """Mahler coefficients from f(0), f(1), ... by iterated differences."""
    if N is None:
        precs = [v.precision for v in vals if isinstance(v, PadicApprox) and not v.exact_zero]
        if not precs:
            raise PrecisionExhausted("no precision given and all values exact")
        N = min(precs)
    mod = p**N
    row = [_value_residue(v, p, N) for v in vals]
    count = min(len(row), N)
    first_exact = isinstance(vals[0], PadicApprox) and vals[0].exact_zero
    coeffs = []
    nu = 0
    while row:
        d = row[0] % mod
        if nu < count:
            pk = p**nu
            if d % pk:
                raise NotKummer(f"Delta^{nu} f(0) has valuation {ord_p(d, p)} < {nu}")
            if nu == 0 and first_exact:
                coeffs.append(PadicApprox.zero(p, N))
            else:
                coeffs.append(PadicApprox(p, d // pk, N - nu))
        elif d:
            # Delta^nu f(0) must lie in p^nu Z_p, hence vanish mod p^N
            raise NotKummer(f"Delta^{nu} f(0) is not 0 mod {p}^{N}")
        row = [(row[i + 1] - row[i]) % mod for i in range(len(row) - 1)]
        nu += 1
    table = tuple(
        v if isinstance(v, PadicApprox) and v.exact_zero else PadicApprox(p, _value_residue(v, p, N), N)
        for v in vals[:count]
    )
    return KummerFn(p, tuple(coeffs), N, value_table=table)


def from_coefficients(p: int, coeffs: Sequence[Scalar], N: int, finite: bool = False) -> KummerFn:
    """Build from given c_nu; ints are reduced to precision N - nu."""
    out = []
    for nu, c in enumerate(coeffs):
        if isinstance(c, int):
            out.append(PadicApprox.zero(p, N) if c == 0 and finite else PadicApprox.from_int(c, p, N - nu))
        else:
            out.append(c if c.exact_zero else c.reduce(min(c.precision, N - nu)))
    return KummerFn(p, tuple(out), N, finite=finite)


def constant(c: Scalar, p: int, N: int) -> KummerFn:
    """The constant function c (all higher coefficients exactly zero)."""
    if isinstance(c, int):
        c0 = PadicApprox.zero(p, N) if c == 0 else PadicApprox.from_int(c, p, N)
    else:
        c0 = c if c.exact_zero else c.reduce(min(N, c.precision))
    zeros = [PadicApprox.zero(p, N) for _ in range(1, N)]
    return KummerFn(p, (c0, *zeros), N, finite=True)


def exp_function(a: int, p: int, N: int) -> KummerFn:
    """f_a(s) = a^s for a in 1 + pZ_p, from the values a^0..a^(N-1)."""
    mod = p**N
    return from_values(p, [PadicApprox(p, pow(a, k, mod), N) for k in range(N)], N)


# evaluation -----------------------------------------------------------------

def values(f: KummerFn, count: Optional[int] = None) -> list:
    """f(0), f(1), ... mod p^N reconstructed from the coefficients."""
    p, N = f.p, f.base_precision
    count = len(f.coeffs) if count is None else count
    mod = p**N
    out = []
    for k in range(count):
        if k == 0 and f.coeffs[0].exact_zero:
            out.append(f.coeffs[0])
            continue
        acc = 0
        for nu in range(min(k, f.M) + 1):
            c = f.coeffs[nu]
            if c.exact_zero:
                continue
            acc += c.residue * p**nu * math.comb(k, nu)
        out.append(PadicApprox(p, acc % mod, N))
    return out


def _lift(s: Scalar) -> tuple:
    """(integer lift, precision) of an argument; ints are exact."""
    if isinstance(s, int):
        return s, INF
    if s.exact_zero:
        return 0, INF
    return s.residue, s.precision


def evaluate(f: KummerFn, s: Scalar, n: Optional[int] = None) -> PadicApprox:
    """f(s) mod p^(n+1) from the truncated Mahler series."""
    p = f.p
    n = f.M if n is None else n
    if n > f.M:
        raise PrecisionExhausted(f"level {n} exceeds stored coefficients (M={f.M})")
    x, prec = _lift(s)
    if prec < n + 1:
        raise PrecisionExhausted(f"argument known mod {p}^{prec}, need {n + 1}")
    if x == 0 and prec == INF:
        c0 = f.coeffs[0]
        return c0 if c0.exact_zero else c0.reduce(min(c0.precision, n + 1))
    mod = p ** (n + 1)
    acc = 0
    for nu in range(n + 1):
        c = f.coeffs[nu]
        if c.exact_zero:
            continue
        acc += c.residue * p**nu * binom_mod(x, nu, p, n + 1 - nu)
    return PadicApprox(p, acc % mod, n + 1)


def evaluate_negative(f: KummerFn, r: int, n: Optional[int] = None) -> PadicApprox:
    """f(-r) mod p^(n+1) via (-1)^n r C(n+r, r) Delta^n [f(s)/(s+r)] at s = 0.

    The weights r C(n,nu) C(n+r,r)/(nu+r) = C(nu+r-1,r-1) C(n+r,nu+r) are
    integers, so no division by s + r is performed.
    """
    p = f.p
    n = f.M if n is None else n
    if r < 1:
        raise ValueError("r must be positive")
    if n > f.M:
        raise PrecisionExhausted(f"level {n} exceeds stored coefficients")
    mod = p ** (n + 1)
    vals = values(f, n + 1)
    acc = 0
    for nu, v in enumerate(vals):
        if v.exact_zero:
            continue
        w = math.comb(nu + r - 1, r - 1) * math.comb(n + r, nu + r)
        acc += (-1) ** nu * w * v.residue
    return PadicApprox(p, acc % mod, n + 1)


def reflect_coeffs(f: KummerFn, s: Scalar, n: Optional[int] = None) -> tuple:
    """Weights a_nu = C(s,nu) C(n-s,n-nu) and the value f(n-s) = sum a_(n-nu) f(nu).

    The weights are computed from an integer lift of s, which is enough since
    f(s) mod p^(n+1) only depends on s mod p^n.
    """
    p = f.p
    n = f.M if n is None else n
    if n > f.M:
        raise PrecisionExhausted(f"level {n} exceeds stored coefficients")
    x, prec = _lift(s)
    if prec < n + 1:
        raise PrecisionExhausted(f"argument known mod {p}^{prec}, need {n + 1}")
    mod = p ** (n + 1)
    w = [binom_mod(x, nu, p, n + 1) * binom_mod(n - x, n - nu, p, n + 1) % mod for nu in range(n + 1)]
    vals = values(f, n + 1)
    res = [0 if v.exact_zero else v.residue for v in vals]
    at_reflected = sum(w[n - nu] * res[nu] for nu in range(n + 1)) % mod
    weights = tuple(PadicApprox(p, c, n + 1) for c in w)
    return weights, PadicApprox(p, at_reflected, n + 1)


def evaluate_by_reflection(f: KummerFn, s: Scalar, n: Optional[int] = None) -> PadicApprox:
    """f(s) mod p^(n+1) as sum_nu a_nu f(nu) with the reflection weights."""
    n = f.M if n is None else n
    weights, _ = reflect_coeffs(f, s, n)
    vals = values(f, n + 1)
    mod = f.p ** (n + 1)
    acc = sum(w.residue * (0 if v.exact_zero else v.residue) for w, v in zip(weights, vals))
    return PadicApprox(f.p, acc % mod, n + 1)


# algebra --------------------------------------------------------------------

def shift_op(f: KummerFn, r: int) -> KummerFn:
    """nabla^r f = p^(-r) Delta^r f, whose coefficients are c_(nu+r)."""
    if r == 0:
        return f
    if r > f.M:
        raise PrecisionExhausted(f"shift {r} exceeds stored coefficients (M={f.M})")
    return KummerFn(f.p, f.coeffs[r:], f.base_precision - r, finite=f.finite)


def scale(f: KummerFn, u: Scalar) -> KummerFn:
    """u * f for a constant u."""
    return multiply(f, constant(u, f.p, f.base_precision))


def _factor_labels(f: KummerFn) -> tuple:
    return f.factors if f.factors else (classify(f).label,)


def multiply(f: KummerFn, g: KummerFn) -> KummerFn:
    """Pointwise product through the value tables."""
    if f.p != g.p:
        raise PrimeMismatch(f"{f.p} != {g.p}")
    N = min(f.base_precision, g.base_precision)
    count = min(len(f.coeffs), len(g.coeffs), N)
    fv = [v if v.exact_zero else v.reduce(N) for v in values(f, count)]
    gv = [v if v.exact_zero else v.reduce(N) for v in values(g, count)]
    h = from_values(f.p, [a * b for a, b in zip(fv, gv)], N)
    factors = () if (f.finite or g.finite) else _factor_labels(f) + _factor_labels(g)
    return KummerFn(h.p, h.coeffs, h.base_precision, factors=factors, value_table=h.value_table)


def invert(f: KummerFn) -> KummerFn:
    """1/f for f(0) a unit, by pointwise inversion of the value table."""
    if not f.coeffs[0].is_unit():
        raise NotAUnit("f(0) is not a unit")
    N = f.base_precision
    mod = f.p**N
    inv = [PadicApprox(f.p, pow(v.residue, -1, mod), N) for v in values(f)]
    return from_values(f.p, inv, N)


def compose_linear(f: KummerFn, a: Scalar, b: int) -> KummerFn:
    """s -> f(a + b s); the result's coefficients gain divisibility by p^(nu ord_p b)."""
    p, N = f.p, f.base_precision
    x, prec = _lift(a)
    N = int(min(N, prec, len(f.coeffs)))
    if b == 0:
        return constant(evaluate(f, a, N - 1), p, N)
    vals = [evaluate(f, x + b * k, N - 1) for k in range(N)]
    if isinstance(a, int) and a == 0 and b == 1:
        vals[0] = f.coeffs[0] if f.coeffs[0].exact_zero else vals[0]
    g = from_values(p, vals, N)
    e = ord_p(b, p)
    for nu, c in enumerate(g.coeffs):
        need = min(nu * e, c.precision)
        if c.valuation() < need:
            raise NotKummer(f"coefficient {nu} of the composition is not divisible by p^{nu * e}")
    return g


def volkenborn(f: KummerFn) -> PadicApprox:
    """sum_nu (-1)^nu c_nu p^nu / (nu + 1) over the stored coefficients.

    The reported precision accounts both for the coefficient precisions and
    for the omitted tail, whose terms have valuation >= nu - ord_p(nu+1).
    """
    p, N = f.p, f.base_precision
    L = len(f.coeffs)
    # tail bound: min over nu >= L of nu - ord_p(nu + 1)
    tail = INF
    nu = L
    while nu - floor_log(p, nu + 1) < tail:
        tail = min(tail, nu - ord_p(nu + 1, p))
        nu += 1
    prec = tail
    for nu, c in enumerate(f.coeffs):
        if not c.exact_zero:
            prec = min(prec, c.precision + nu - ord_p(nu + 1, p))
    prec = int(prec)
    mod = p**prec
    acc = 0
    for nu, c in enumerate(f.coeffs):
        if c.exact_zero:
            continue
        k = ord_p(nu + 1, p)
        unit = (nu + 1) // p**k
        acc += (-1) ** nu * c.residue * p ** (nu - k) * pow(unit, -1, mod)
    return PadicApprox(p, acc % mod, prec)


# classification -------------------------------------------------------------

def classify(f: KummerFn) -> Classification:
    """Decidable part of the classification of f from its stored coefficients."""
    p, cs = f.p, f.coeffs
    c0 = cs[0]
    v0 = c0.valuation()
    determined0 = c0.exact_zero or v0 < c0.precision
    lam = next((nu for nu, c in enumerate(cs) if c.is_unit()), None)
    delta_f = cs[1].residue % p if len(cs) > 1 else None
    if p == 2:
        p2 = len(cs) > 2 and cs[2].residue % 2 == 0
    else:
        p2 = True

    if lam is not None:
        mu, mu_exact = 0, True
    else:
        known = [c.valuation() for c in cs if not c.exact_zero and c.valuation() < c.precision]
        mu = min(known) if known else None
        mu_exact = f.finite and all(
            c.exact_zero or c.valuation() < c.precision for c in cs
        )

    label = "indeterminate"
    if v0 == 0:
        label = "KS*"
    elif lam == 1 and p2:
        label = "WKS0"
    elif lam == 2 and v0 >= 2 and p > 3:
        label = "KS2"
    elif determined0 and v0 != INF and lam is not None and v0 < lam and all(
        cs[nu].valuation() > v0 - nu for nu in range(1, int(v0) + 1) if nu < len(cs)
    ):
        label = "KSc"
    elif lam is None and mu_exact and mu == 1 and v0 == 1:
        label = "pKS*"

    product_label = None
    if f.factors and label == "KS2" and all(x == "WKS0" for x in f.factors):
        product_label = "KSs"
    return Classification(delta_f, lam, mu, v0, label, p2, mu_exact, product_label)


# degenerate functions -------------------------------------------------------

@dataclass(frozen=True)
class DegenerateFn:
    """g(s) = sum_nu u_nu p^delta(nu) C(s - origin, nu)."""

    p: int
    entries: tuple
    base_precision: int
    origin: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple((int(d), u) for d, u in self.entries))
        ds = [d for d, _ in self.entries]
        if any(b < a for a, b in zip(ds, ds[1:])):
            raise ValueError("exponent schedule must be non-decreasing")

    def schedule(self) -> list:
        return [d for d, _ in self.entries]

    def defect_index(self) -> int:
        """theta = min{nu : delta(nu) < nu}; len(entries) if none is stored."""
        for nu, (d, _) in enumerate(self.entries):
            if d < nu:
                return nu
        return len(self.entries)

    def eta(self, n: int) -> int:
        """eta(n) = min{nu : delta(nu) >= n}."""
        for nu, (d, _) in enumerate(self.entries):
            if d >= n:
                return nu
        raise InsufficientEntries(f"no stored entry has delta >= {n}")

    def in_ksd(self) -> bool:
        if self.defect_index() < 3:
            return False
        return all(
            d >= 2 + floor_log(self.p, nu) for nu, (d, _) in enumerate(self.entries) if nu >= 3
        )

    def coefficient(self, nu: int) -> PadicApprox:
        """Full Mahler coefficient u_nu p^delta(nu)."""
        d, u = self.entries[nu]
        if u.exact_zero:
            return u
        return PadicApprox(self.p, u.residue * self.p**d, u.precision + d)

    @property
    def delta(self) -> int:
        """Delta_g: the coefficient of p C(s,1), reduced mod p."""
        d, u = self.entries[1]
        if u.exact_zero or d > 1:
            return 0
        return u.residue * self.p ** (d - 1) % self.p if d >= 1 else u.residue // self.p % self.p


def _monotone_schedule(p: int, count: int) -> list:
    """Largest non-decreasing minorant of nu - ord_p(nu + 1), nu < count."""
    out = []
    for nu in range(count):
        best = nu - ord_p(nu + 1, p)
        k = nu + 1
        while k - floor_log(p, k + 1) < best:
            best = min(best, k - ord_p(k + 1, p))
            k += 1
        out.append(best)
    return out


def divide_out_zero(f: KummerFn) -> DegenerateFn:
    """g with f(s) = p s g(s), written in t = s - 1 (origin 1).

    The entries are c_(nu+1) p^nu / (nu + 1) with the exponent schedule
    nu - ord_p(nu+1), replaced by its monotone minorant where that formula
    would decrease.
    """
    p = f.p
    c0 = f.coeffs[0]
    if not (c0.exact_zero or c0.residue == 0):
        raise NonzeroConstant("f(0) does not vanish")
    count = len(f.coeffs) - 1
    sched = _monotone_schedule(p, count)
    entries = []
    for nu in range(count):
        c = f.coeffs[nu + 1]
        k = ord_p(nu + 1, p)
        extra = nu - k - sched[nu]
        if c.exact_zero:
            entries.append((sched[nu], c))
            continue
        prec = c.precision + extra
        mod = p**prec
        unit = (nu + 1) // p**k
        u = c.residue * p**extra * pow(unit, -1, mod) % mod
        entries.append((sched[nu], PadicApprox(p, u, prec)))
    return DegenerateFn(p, tuple(entries), f.base_precision - 1, origin=1)


def evaluate_degenerate(g: DegenerateFn, s: Scalar, n: int) -> PadicApprox:
    """g(s) mod p^n from the entries nu < eta(n)."""
    p = g.p
    stop = g.eta(n)
    x, prec = _lift(s)
    t = x - g.origin
    mod = p**n
    acc = 0
    for nu in range(stop):
        d, u = g.entries[nu]
        if u.exact_zero:
            continue
        if u.precision + d < n:
            raise PrecisionExhausted(f"entry {nu} known mod {p}^{u.precision + d} < {p}^{n}")
        if nu and d + prec - floor_log(p, nu) < n:
            raise PrecisionExhausted(f"argument precision too low for C(s,{nu})")
        acc += u.residue * p**d * binom_mod(t, nu, p, max(n - d, 0) or 1)
    return PadicApprox(p, acc % mod, n)


def translate_degenerate(g: DegenerateFn, t: int) -> DegenerateFn:
    """s -> g(s + t) for an integer t, keeping the same exponent schedule.

    New coefficients are sum_k C(t,k) a_(nu+k); the unstored tail limits
    their precision to below p^delta(last stored entry).
    """
    p = g.p
    L = len(g.entries)
    cap = g.entries[-1][0]
    entries = []
    for nu in range(L):
        d = g.entries[nu][0]
        prec = cap - d
        acc = 0
        for k in range(L - nu):
            dk, u = g.entries[nu + k]
            if u.exact_zero:
                continue
            prec = min(prec, u.precision + dk - d)
            acc += binom_mod(t, k, p, max(prec + d, 1)) * u.residue * p**dk
        if prec < 1:
            break
        mod = p ** (prec + d)
        acc %= mod
        if acc % p**d:
            raise NotKummer("translated coefficient lost its exponent")
        entries.append((d, PadicApprox(p, acc // p**d % p**prec, prec)))
    return DegenerateFn(p, tuple(entries), g.base_precision, origin=g.origin - t)


# serialization --------------------------------------------------------------

def dumps(f: KummerFn) -> str:
    """Text record: ``KFN1``, ``p N``, then ``nu residue precision`` lines.

    An exact zero coefficient is written with precision 0.
    """
    lines = ["KFN1", f"{f.p} {f.base_precision}"]
    for nu, c in enumerate(f.coeffs):
        lines.append(f"{nu} {c.residue} {0 if c.exact_zero else c.precision}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> KummerFn:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "KFN1":
        raise ValueError("missing KFN1 header")
    p, N = map(int, lines[1].split())
    coeffs = []
    for i, ln in enumerate(lines[2:]):
        nu, res, prec = map(int, ln.split())
        if nu != i:
            raise ValueError(f"coefficient index {nu} out of order")
        coeffs.append(PadicApprox.zero(p, N) if prec == 0 else PadicApprox(p, res, prec))
    return KummerFn(p, tuple(coeffs), N)
