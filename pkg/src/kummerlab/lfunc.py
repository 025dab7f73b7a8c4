"""p-adic L-functions L_{p,l}(., chi) on residue classes, scanners and structure checks.

With q = p (q = 4 for p = 2), delta the parity of chi and

    L_p(1 - n, chi) = (1 - chi(p) p^(n-1)) (-B_{n,chi}/n),

the function L_{p,l}(s, chi) = L_p(1 - (delta + l + phi(q) s), chi) is built
values-first.  When l = delta = 0 and chi is even and non-principal the value
at s = 0 is undefined; it is recovered from the values at s >= 1.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .charnum import PRINCIPAL, QuadChar, bernoulli_over_n_mod, gen_bernoulli
from .errors import (
    DigitDepthExceeded,
    InvariantViolation,
    NotPIntegral,
    ParityMismatch,
    PrecisionExhausted,
    UnsupportedCase,
)
from .fermat import t_scan_mod_p, t_values_mod_p
from .mahler import (
    DegenerateFn,
    KummerFn,
    classify,
    divide_out_zero,
    evaluate,
    evaluate_degenerate,
    from_values,
    multiply,
)
from .padic import INF, PadicApprox, ord_p
from .solver import find_zero, find_zero_degenerate

__all__ = [
    "LplSpec",
    "IrregularPair",
    "ExceptionalPair",
    "ScanResult",
    "StructureReport",
    "primes_up_to",
    "lp_value",
    "build_Lpl",
    "build_product_L",
    "build_tilde_L",
    "scan_irregular",
    "scan_exceptional",
    "write_scan",
    "read_scan",
    "structure_check",
    "smallest_indices",
    "verify_smallest_indices",
    "strong_kummer_check",
    "strong_kummer_witness",
]


def primes_up_to(n: int) -> list:
    """Primes <= n by a numpy sieve."""
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, math.isqrt(n) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return [int(x) for x in np.flatnonzero(sieve)]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _phi_q(p: int) -> int:
    return 2 if p == 2 else p - 1


# specs -------------------------------------------------------------------------

@dataclass(frozen=True)
class LplSpec:
    p: int
    l: int
    chi: QuadChar = field(default=PRINCIPAL)
    N: int = 10

    @property
    def phi_q(self) -> int:
        return _phi_q(self.p)

    @property
    def q(self) -> int:
        return 4 if self.p == 2 else self.p

    @property
    def shifted(self) -> bool:
        return self.l == 0 and self.chi.parity == 0 and not self.chi.is_principal

    def index(self, s: int) -> int:
        """n with L_{p,l}(s) = L_p(1 - n)."""
        return self.chi.parity + self.l + self.phi_q * s

    def validate(self) -> None:
        p, l = self.p, self.l
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if l % 2 or not 0 <= l <= self.phi_q - 2:
            raise ValueError(f"l = {l} must be even in [0, {self.phi_q - 2}]")
        if self.chi.conductor % p == 0:
            raise UnsupportedCase(f"{p} divides the conductor {self.chi.conductor}")
        if self.chi.is_principal and (p <= 3 or l == 0):
            raise UnsupportedCase("the principal character needs p > 3 and l != 0")
        if self.N < 1:
            raise ValueError("precision must be positive")


@dataclass(frozen=True)
class IrregularPair:
    p: int
    l: int
    D: int
    ord_f0: int
    delta: int
    lambda_f: Optional[int]

    def line(self) -> str:
        return f"{self.p} {self.l} {self.D} {self.ord_f0} {self.delta} {_fmt(self.lambda_f)}"


@dataclass(frozen=True)
class ExceptionalPair:
    """ord_f1 is ord_p L_{p,0}(1, chi) to precision 3."""

    p: int
    D: int
    ord_f1: int
    delta: int
    lambda_f: Optional[int]
    ord_delta2: Optional[int]
    l: int = 0

    def line(self) -> str:
        return f"{self.p} {self.l} {self.D} {self.ord_f1} {self.delta} {_fmt(self.lambda_f)}"


def _fmt(x) -> str:
    return "-" if x is None else str(x)


@dataclass
class ScanResult:
    kind: str
    chi: QuadChar
    pairs: list
    index: dict

    @property
    def primes(self) -> list:
        return sorted({pr.p for pr in self.pairs})


# values and builders -------------------------------------------------------------

def lp_value(n: int, chi: QuadChar, p: int, N: int) -> PadicApprox:
    """L_p(1 - n, chi) = (1 - chi(p) p^(n-1)) (-B_{n,chi}/n) mod p^N."""
    if n < 1:
        raise ValueError("n must be positive")
    cp = chi(p)
    if cp == 1 and n == 1:
        return PadicApprox.zero(p, N)
    if n % 2 != chi.parity and not (chi.is_principal and n == 1):
        return PadicApprox.zero(p, N)
    if chi.is_principal and n % (p - 1) == 0:
        raise NotPIntegral(f"p - 1 divides n = {n}: the principal value has a pole-adjacent denominator")
    mod = p**N
    euler = (1 - cp * pow(p, n - 1, mod)) % mod
    b = bernoulli_over_n_mod(n, chi, p, N)
    if b.exact_zero:
        return b
    return PadicApprox(p, -euler * b.residue % mod, N)


def build_Lpl(spec: LplSpec) -> KummerFn:
    """L_{p,l}(., chi) at base precision N from the values at s = 0..N.

    The extra value feeds the Kummer check in from_values.
    """
    spec.validate()
    p, N, chi = spec.p, spec.N, spec.chi
    if spec.shifted:
        vals = [lp_value(spec.index(s), chi, p, N) for s in range(1, N + 2)]
        F = from_values(p, vals, N)
        vals = [evaluate(F, -1, N - 1)] + vals[:N]
        return from_values(p, vals, N)
    vals = [lp_value(spec.index(s), chi, p, N) for s in range(N + 1)]
    return from_values(p, vals, N)


def build_product_L(specs: Sequence[LplSpec]) -> KummerFn:
    """The pointwise product of L_{p,l}(., chi_i) over characters of equal parity."""
    if not specs:
        raise ValueError("need at least one factor")
    first = specs[0]
    for s in specs[1:]:
        if (s.p, s.l, s.N) != (first.p, first.l, first.N):
            raise ValueError("factors must share p, l and N")
        if s.chi.parity != first.chi.parity:
            raise ParityMismatch("characters of different parity")
    out = build_Lpl(first)
    for s in specs[1:]:
        out = multiply(out, build_Lpl(s))
    return out


def build_tilde_L(p: int, chi: QuadChar, N: int) -> DegenerateFn:
    """L_{p,0}(s, chi)/(p s) for odd chi with chi(p) = 1, as a degenerate function."""
    if p <= 3:
        raise UnsupportedCase("need p > 3")
    if chi.parity != 1:
        raise UnsupportedCase("need an odd character")
    if chi(p) != 1:
        raise UnsupportedCase(f"need chi({p}) = 1")
    return divide_out_zero(build_Lpl(LplSpec(p, 0, chi, N)))


# scanners ------------------------------------------------------------------------

def _eligible_irregular(p: int, chi: QuadChar) -> bool:
    return p > 3 and chi.conductor % p != 0


def _irregular_at(p: int, D: int) -> tuple:
    chi = QuadChar(D)
    table = t_scan_mod_p(p, chi, 1)
    out = []
    for l, v in table.items():
        if v:
            continue
        n = chi.parity + l
        val = lp_value(n, chi, p, 3)
        if val.valuation() < 1:
            raise InvariantViolation(f"T-sieve flags ({p},{l}) but L_p(1-{n}) is a unit")
        # Delta_f = (f(1) - f(0))/p mod p
        f1 = lp_value(n + p - 1, chi, p, 2)
        delta = (f1.residue - val.residue) % p**2 // p
        lam = 1 if delta else None
        out.append(IrregularPair(p, l, D, int(min(val.valuation(), 3)), delta, lam))
    return p, out


def _exceptional_at(p: int, D: int) -> tuple:
    chi = QuadChar(D)
    v = t_values_mod_p(p, chi, 2, [0])[0]
    if v:
        return p, None
    f1 = lp_value(p, chi, p, 3)
    o1 = f1.valuation()
    if o1 < 2:
        raise InvariantViolation(f"T^2 sieve flags {p} but ord L_(p,0)(1) = {o1}")
    f = build_Lpl(LplSpec(p, 0, chi, 3))
    c = classify(f)
    c2 = f.coeffs[2]
    od2 = None if c2.valuation() >= c2.precision else int(c2.valuation())
    return p, ExceptionalPair(p, D, int(min(o1, 3)), f.delta, c.lambda_f, od2)


def _run(worker, primes: list, D: int, jobs: int) -> list:
    if jobs > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(worker, primes, [D] * len(primes), chunksize=8))
    return [worker(p, D) for p in primes]


def _prime_list(p_range: Iterable[int]) -> list:
    if isinstance(p_range, range):
        return [p for p in primes_up_to(p_range.stop - 1) if p >= p_range.start]
    return sorted(p for p in p_range if _is_prime(p))


def scan_irregular(
    chi: QuadChar,
    p_range: Iterable[int],
    jobs: int = 1,
    checkpoint: Optional[str] = None,
) -> ScanResult:
    """All chi-irregular pairs (p, l) for primes p in the range.

    A prime is flagged by T_{p,l}(0, chi) = 0 mod p; every flagged pair is
    confirmed from Bernoulli numbers before it is reported.
    """
    primes = [p for p in _prime_list(p_range) if _eligible_irregular(p, chi)]
    pairs, index = [], {}
    done = set()
    if checkpoint and os.path.exists(checkpoint):
        kind, old, through = read_scan(checkpoint)
        if kind == "IRR1":
            pairs = [pr for pr in old if pr.D == chi.D]
            done = {p for p in primes if p <= through}
            for p in done:
                index[p] = sum(1 for pr in pairs if pr.p == p)
    todo = [p for p in primes if p not in done]
    for start in range(0, len(todo), 100):
        block = todo[start : start + 100]
        for p, found in _run(_irregular_at, block, chi.D, jobs):
            pairs.extend(found)
            index[p] = len(found)
        if checkpoint:
            write_scan(checkpoint, "IRR1", pairs, through=block[-1])
    pairs.sort(key=lambda x: (x.p, x.l))
    return ScanResult("IRR1", chi, pairs, dict(sorted(index.items())))


def scan_exceptional(
    chi: QuadChar,
    p_range: Iterable[int],
    jobs: int = 1,
    checkpoint: Optional[str] = None,
) -> ScanResult:
    """chi-exceptional primes: p > 3, chi(p) = 1 and L_{p,0}(1, chi) in p^2 Z_p."""
    if chi.parity != 1:
        raise UnsupportedCase("exceptional pairs need an odd character")
    primes = [p for p in _prime_list(p_range) if p > 3 and chi(p) == 1]
    pairs, index = [], {}
    done = set()
    if checkpoint and os.path.exists(checkpoint):
        kind, old, through = read_scan(checkpoint)
        if kind == "EXC1":
            pairs = [pr for pr in old if pr.D == chi.D]
            done = {p for p in primes if p <= through}
            for p in done:
                index[p] = sum(1 for pr in pairs if pr.p == p)
    todo = [p for p in primes if p not in done]
    for start in range(0, len(todo), 100):
        block = todo[start : start + 100]
        for p, found in _run(_exceptional_at, block, chi.D, jobs):
            if found is not None:
                pairs.append(found)
            index[p] = int(found is not None)
        if checkpoint:
            write_scan(checkpoint, "EXC1", pairs, through=block[-1])
    pairs.sort(key=lambda x: x.p)
    return ScanResult("EXC1", chi, pairs, dict(sorted(index.items())))


def write_scan(path: str, kind: str, pairs: Sequence, through: Optional[int] = None) -> None:
    """Sorted ``p l D ord delta lambda`` lines under an IRR1/EXC1 header."""
    lines = [kind]
    for pr in sorted(pairs, key=lambda x: (x.p, x.l, x.D)):
        lines.append(pr.line())
    if through is not None:
        lines.append(f"# through {through}")
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_scan(path: str) -> tuple:
    """(kind, pairs, through) from a scan file; ``through`` is 0 when absent."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] not in ("IRR1", "EXC1"):
        raise ValueError("missing IRR1/EXC1 header")
    kind = lines[0]
    pairs, through = [], 0
    for ln in lines[1:]:
        if ln.startswith("#"):
            parts = ln.split()
            if len(parts) == 3 and parts[1] == "through":
                through = int(parts[2])
            continue
        p, l, D, o, d, lam = ln.split()
        lam_v = None if lam == "-" else int(lam)
        if kind == "IRR1":
            pairs.append(IrregularPair(int(p), int(l), int(D), int(o), int(d), lam_v))
        else:
            pairs.append(ExceptionalPair(int(p), int(D), int(o), int(d), lam_v, None))
    return kind, pairs, through


# structure of L(1 - n, chi) --------------------------------------------------------

@dataclass
class StructureReport:
    n: int
    chars: tuple
    value: Fraction
    I: Fraction
    S: Fraction
    D: Fraction
    cofactor: int
    bound: int
    irregular: list
    d_parts: Optional[dict]
    conjectures: list

    @property
    def holds(self) -> bool:
        return self.value == self.I * self.S * self.D * self.cofactor


def _prime_factors(m: int) -> list:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _pp(p: int, e: int) -> Fraction:
    return Fraction(p) ** e


_IRR_CACHE: dict = {}


def _irregular_set(chi: QuadChar, bound: int) -> set:
    key = (chi.D, bound)
    if key not in _IRR_CACHE:
        res = scan_irregular(chi, range(2, bound + 1))
        _IRR_CACHE[key] = {(pr.p, pr.l) for pr in res.pairs}
    return _IRR_CACHE[key]


def _zero_distance(p: int, l: int, chi: QuadChar, s: int, depth: int = 4) -> Optional[tuple]:
    """(ord_p(s - xi), exact) for the zero xi of L_{p,l}; None if not WKS0."""
    f = build_Lpl(LplSpec(p, l, chi, depth + 1))
    if classify(f).label != "WKS0":
        return None
    xi = find_zero(f, depth).value
    diff = (s - xi) % p**depth
    if diff == 0:
        return depth, False
    return ord_p(diff, p), True


def _structure_one(n: int, chi: QuadChar, bound: int, depth: int) -> dict:
    d = chi.parity
    m = d + n
    x = abs(gen_bernoulli(m, chi) / m)
    if x == 0:
        raise InvariantViolation(f"L(1-{m}) vanishes")
    f = chi.conductor
    S = Fraction(1)
    for p in _prime_factors(f):
        S *= _pp(p, ord_p(x, p))
    dprimes = [k + 1 for k in range(1, n + 1) if n % k == 0 and _is_prime(k + 1) and f % (k + 1)]
    Dv = Fraction(1)
    for p in dprimes:
        Dv *= _pp(p, ord_p(x, p))

    irr = _irregular_set(chi, bound)
    I = Fraction(1)
    contributions, conj = [], []
    for p in primes_up_to(bound):
        if p <= 3 or f % p == 0 or n % (p - 1) == 0:
            continue
        l = n % (p - 1)
        e = ord_p(x, p)
        if (p, l) in irr:
            if e < 1:
                raise InvariantViolation(f"irregular pair ({p},{l}) but ord_p L = {e}")
            I *= _pp(p, e)
            contributions.append((p, l, e))
            s = (n - l) // (p - 1)
            dist = _zero_distance(p, l, chi, s, depth)
            if dist is None:
                conj.append({"p": p, "l": l, "ord": e, "predicted": None, "agree": None})
            else:
                k, exact = dist
                pred = 1 + k
                agree = pred == e if exact else e >= pred
                conj.append({"p": p, "l": l, "ord": e, "predicted": pred, "agree": agree})
        elif e != 0:
            raise InvariantViolation(f"({p},{l}) is regular but ord_p L = {e}")

    rest = x / (I * S * Dv)
    if rest.denominator != 1:
        raise InvariantViolation(f"cofactor {rest} is not an integer")
    cof = rest.numerator
    for p in primes_up_to(bound):
        if cof % p == 0:
            raise InvariantViolation(f"cofactor has the prime {p} <= {bound}")

    d_parts = None
    if d == 1:
        d_parts = _d_refinement(n, chi, x, dprimes, depth)
        prod = d_parts["D23"] * d_parts["D+"] * d_parts["D-"] * d_parts["D0"]
        if prod != Dv:
            raise InvariantViolation(f"refined D-product {prod} != {Dv}")
        conj.extend(d_parts.pop("conjectures"))
    return {"x": x, "I": I, "S": S, "D": Dv, "cof": cof, "irr": contributions, "d_parts": d_parts, "conj": conj}


def _d_refinement(n: int, chi: QuadChar, x: Fraction, dprimes: list, depth: int) -> dict:
    b1 = gen_bernoulli(1, chi)
    D23 = Dp = Dm = D0 = Fraction(1)
    conj = []
    for p in (2, 3):
        c = chi(p)
        if c != 0 and ord_p((1 - c) * b1, p) >= 1:
            D23 *= _pp(p, ord_p(x, p))
    for p in dprimes:
        if p <= 3:
            continue
        c = chi(p)
        if c == 1:
            Dp *= _pp(p, 1 + ord_p(n, p))
            if lp_value(p, chi, p, 3).valuation() >= 2:
                s = n // (p - 1)
                g = build_tilde_L(p, chi, depth + 3)
                v = evaluate_degenerate(g, s, depth).valuation()
                D0 *= _pp(p, v)
                entry = {"p": p, "l": 0, "ord": v, "predicted": None, "agree": None, "kind": "exceptional"}
                try:
                    xi = find_zero_degenerate(g, depth).value
                    diff = (s - xi) % p**depth
                    k = depth if diff == 0 else ord_p(diff, p)
                    entry["predicted"] = 1 + k
                    entry["agree"] = (1 + k == v) if diff else v >= 1 + k
                except Exception as exc:  # not in WKS^d: report only
                    entry["error"] = type(exc).__name__
                conj.append(entry)
        elif c == -1 and b1.numerator % p == 0:
            Dm *= _pp(p, ord_p(x, p))
    return {"D23": D23, "D+": Dp, "D-": Dm, "D0": D0, "conjectures": conj}


def structure_check(n: int, chars, bound: int = 200, depth: int = 4) -> StructureReport:
    """Factor |L(1 - (delta + n), chi)|_inf as I * S * D and check it exactly.

    ``chars`` is one character or a sequence of characters of equal parity
    (a product of L-functions).  The theorem parts raise InvariantViolation on
    failure; the conjectural zero distances are only reported.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and positive")
    if isinstance(chars, QuadChar):
        chars = (chars,)
    chars = tuple(chars)
    if len({c.parity for c in chars}) > 1:
        raise ParityMismatch("characters of different parity")
    value = I = S = Dv = Fraction(1)
    cof = 1
    irr, conj = [], []
    d_parts = None
    for chi in chars:
        r = _structure_one(n, chi, bound, depth)
        value *= r["x"]
        I *= r["I"]
        S *= r["S"]
        Dv *= r["D"]
        cof *= r["cof"]
        irr.extend((chi.D,) + t for t in r["irr"])
        conj.extend(dict(c, D=chi.D) for c in r["conj"])
        if r["d_parts"] is not None and len(chars) == 1:
            d_parts = r["d_parts"]
    report = StructureReport(n, chars, value, I, S, Dv, cof, bound, irr, d_parts, conj)
    if not report.holds:
        raise InvariantViolation("product identity failed")
    return report


# indices with prescribed valuation -----------------------------------------------------

def smallest_indices(p: int, l: int, chi: QuadChar, nu_max: int, zero=None) -> list:
    """n_1..n_nu_max: the least n = l + phi(q) s with ord_p L_{p,l}(s) = nu.

    ``zero`` may be a precomputed ZeroResult or DigitExpansion; otherwise the
    zero is solved to nu_max digits.
    """
    spec = LplSpec(p, l, chi, nu_max + 1)
    if zero is None:
        zero = find_zero(build_Lpl(spec), nu_max)
    digits = getattr(zero, "digits", zero)
    ds = list(getattr(digits, "digits", digits))
    if nu_max > len(ds):
        raise DigitDepthExceeded(f"{nu_max} indices need {nu_max} digits, have {len(ds)}")
    xi = sum(dg * p**i for i, dg in enumerate(ds))
    out = []
    for nu in range(1, nu_max + 1):
        base = xi % p ** (nu - 1)
        s = base if ds[nu - 1] != 0 else base + p ** (nu - 1)
        out.append(l + spec.phi_q * s)
    return out


def verify_smallest_indices(p: int, l: int, chi: QuadChar, indices: Sequence[int]) -> list:
    """ord_p L_p(1 - (delta + n_nu), chi) at precision nu + 1 for each index."""
    out = []
    for nu, n in enumerate(indices, start=1):
        v = lp_value(chi.parity + n, chi, p, nu + 1).valuation()
        out.append(v)
    return out


# strong Kummer congruences ---------------------------------------------------------------

def _kummer_condition(p: int, l: int) -> bool:
    """B_{l+p-1}/(l+p-1) != eps_l B_l/l mod p^2, from exact Bernoulli numbers."""
    from .charnum import bernoulli

    eps = 1 - p if l == 2 else 1
    a = bernoulli(l + p - 1) / (l + p - 1) - eps * bernoulli(l) / l
    return ord_p(a, p) < 2


def strong_kummer_check(p: int, l: int, samples: int = 50, seed: int = 0, rmax: int = 3) -> bool:
    """Whether Delta of zeta_{p,l} is nonzero; if so, test the biconditional.

    For sampled s, t and r <= rmax the check is
    s = t mod p^(r-1)  <=>  zeta_{p,l}(s) = zeta_{p,l}(t) mod p^r,
    i.e. n = m mod phi(p^r) for the corresponding indices.
    """
    if p <= 3 or l % 2 or not 0 < l < p - 1:
        raise UnsupportedCase("need p > 3 and even l in (0, p-1)")
    f = build_Lpl(LplSpec(p, l, PRINCIPAL, rmax + 1))
    nonzero = f.delta != 0
    if nonzero != _kummer_condition(p, l):
        raise InvariantViolation("Delta from the function disagrees with the Bernoulli condition")
    if not nonzero:
        return False
    rng = random.Random(seed)
    for _ in range(samples):
        r = rng.randint(1, rmax)
        s = rng.randrange(p**rmax)
        j = rng.randint(0, rmax)
        t = s + rng.randrange(1, p) * p**j
        left = (s - t) % p ** (r - 1) == 0
        vs = evaluate(f, s, rmax).residue
        vt = evaluate(f, t, rmax).residue
        right = (vs - vt) % p**r == 0
        if left != right:
            raise InvariantViolation(f"strong Kummer biconditional fails at s={s}, t={t}, r={r}")
    return True


def strong_kummer_witness(p: int, l: int, rmax: int = 3) -> Optional[tuple]:
    """(n, m, r) breaking the converse direction when Delta = 0, else None."""
    f = build_Lpl(LplSpec(p, l, PRINCIPAL, rmax + 1))
    if f.delta != 0:
        return None
    for s in range(p):
        t = s + 1
        vs = evaluate(f, s, rmax).residue
        vt = evaluate(f, t, rmax).residue
        if (vs - vt) % p**2 == 0:
            return l + (p - 1) * s, l + (p - 1) * t, 2
    raise InvariantViolation("Delta = 0 but no witness among s < p")
