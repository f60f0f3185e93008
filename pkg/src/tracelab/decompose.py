"""Functional compositeness of trace polynomials and the equidistribution verdict.

A polynomial P is composite when P = h(Q) with deg h >= 2; for trace
polynomials viewed as univariate in u over the coefficient field k(s, t),
compositeness of f_w mod p decides whether the word map of w
equidistributes on SL(2, p^n) for large n.  Three verdicts per prime:

* NoncompositeP: f_w mod p admits no decomposition at all.
* SpecialP: f_w mod p = core^(p^k) with k >= 1 and noncomposite core;
  the outer layer z^(p^k) permutes every finite extension, so
  equidistribution survives.
* CompositeNotSpecial: the core itself is composite; some outer layer of
  degree >= 2 is not a permutation polynomial of all extensions, and
  equidistribution fails.

The search space is finite: an outer of degree n forces n | deg_u f, and
when the exponent sums A, B are not both zero the outer is a Dickson
polynomial D_d with d dividing every nonzero member of {A, B}.  The
general tame case is decided by decompose_in_u; the wild part of the
characteristic is handled entirely by Frobenius stripping, and exotic
wild outers beyond that are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .gf import primes_in
from .tripoly import TriPoly, coeff_nth_root, frobenius_strip
from .trace import TraceEngine, trace_poly
from .unipoly import UniPoly, dickson, dickson_apply
from .words import DegenerateWordError, Word, canonicalize, proper_power_root, stats

NONCOMPOSITE_P = "NoncompositeP"
SPECIAL_P = "SpecialP"
COMPOSITE_NOT_SPECIAL = "CompositeNotSpecial"
NONCOMPOSITE_Q = "NoncompositeQ"
COMPOSITE_Q = "CompositeQ"


class WildCompositionError(ValueError):
    """Outer degree divisible by the characteristic: Frobenius-strip first."""


@dataclass(frozen=True)
class CompositionWitness:
    """An exact decomposition target = outer(inner)."""

    outer: UniPoly
    inner: TriPoly
    p: Optional[int]
    dickson_index: Optional[int] = None

    def recompose(self) -> TriPoly:
        acc = TriPoly.const(self.outer.leading_coeff(), self.p)
        for i in range(self.outer.degree - 1, -1, -1):
            acc = acc * self.inner + TriPoly.const(self.outer[i], self.p)
        return acc


@dataclass(frozen=True)
class PrimeVerdict:
    p: int
    verdict: str  # NoncompositeP | SpecialP | CompositeNotSpecial
    witness: Optional[CompositionWitness]
    frobenius_k: int


@dataclass(frozen=True)
class GlobalVerdict:
    word: Word
    rational_class: str  # NoncompositeQ | CompositeQ
    rational_witness: Optional[CompositionWitness]
    per_prime: Tuple[PrimeVerdict, ...]
    conclusion: str
    certified_to: Optional[int]
    bad_prime: Optional[int]


@dataclass(frozen=True)
class PowerWordReport:
    word: Word
    root: Word
    multiplicity: int
    dickson_index: Optional[int]
    consistent: bool
    note: str


def _divisors(n: int) -> List[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _unit_inverse(c: int, p: Optional[int]):
    if p is None:
        return Fraction(1, c)
    return pow(c % p, -1, p)


def _roots_of_unity(d: int, p: Optional[int]) -> List:
    if p is None:
        return [1, -1] if d % 2 == 0 else [1]
    return [a for a in range(1, p) if pow(a, d, p) == 1]


# -- Dickson-outer decomposition ------------------------------------------------


def dickson_decompose(f: TriPoly, d: int) -> Optional[TriPoly]:
    """The inner Q with f = D_d(Q), or None.

    Solved by top-down u-block matching: the leading u-block of Q is a
    d-th root of f's leading block (all root choices are tried), lower
    blocks follow by linear elimination, and the candidate is verified by
    exact recomposition.  Unique up to sign when d is even; the returned
    representative comes from the canonical root choice.
    """
    if d < 2:
        raise ValueError("Dickson index must be >= 2")
    r = f.deg("u")
    if r < 1 or r % d:
        raise ValueError(f"index {d} does not divide u-degree {r}")
    m = r // d
    blocks = f.u_coefficients()
    root0 = blocks[r].nth_root(d)
    if root0 is None:
        return None
    for zeta in _roots_of_unity(d, f.p):
        lead = root0.scale(zeta)
        q = [TriPoly.zero(f.p) for _ in range(m)] + [lead]
        denom = lead ** (d - 1)
        denom = denom.scale(d)
        ok = True
        for j in range(1, m + 1):
            partial = TriPoly.from_u_coefficients(q, f.p)
            excess = partial**d
            have = excess.u_coefficients()
            cur = have[r - j] if r - j < len(have) else TriPoly.zero(f.p)
            num = blocks[r - j] - cur
            sol = num.divide_exact(denom)
            if sol is None:
                ok = False
                break
            q[m - j] = sol
        if not ok:
            continue
        cand = TriPoly.from_u_coefficients(q, f.p)
        if dickson_apply(d, cand) == f:
            return cand
    return None


# -- general tame decomposition in u --------------------------------------------
#
# Coefficients live in k[s,t] localized at lam (the monic n-th root of the
# normalized leading block): a pair (g, e) stands for g / lam^e.


class _Loc:
    def __init__(self, lam: TriPoly, p: Optional[int]):
        self.lam = lam
        self.p = p
        self.zero = (TriPoly.zero(p), 0)
        self.one = (TriPoly.const(1, p), 0)
        self._pows = {0: TriPoly.const(1, p), 1: lam}

    def lam_pow(self, e: int) -> TriPoly:
        if e not in self._pows:
            self._pows[e] = self.lam_pow(e - 1) * self.lam
        return self._pows[e]

    def norm(self, x):
        g, e = x
        if g.is_zero:
            return (g, 0)
        while e > 0:
            q = g.divide_exact(self.lam)
            if q is None:
                break
            g, e = q, e - 1
        return (g, e)

    def add(self, x, y):
        gx, ex = x
        gy, ey = y
        e = max(ex, ey)
        return self.norm((gx * self.lam_pow(e - ex) + gy * self.lam_pow(e - ey), e))

    def sub(self, x, y):
        return self.add(x, (-y[0], y[1]))

    def mul(self, x, y):
        return self.norm((x[0] * y[0], x[1] + y[1]))

    def scale(self, x, c):
        return (x[0].scale(c), x[1])

    def is_zero(self, x) -> bool:
        return x[0].is_zero


def _up_mul(ctx: _Loc, a: List, b: List) -> List:
    out = [ctx.zero] * (len(a) + len(b) - 1)
    for i, xa in enumerate(a):
        if ctx.is_zero(xa):
            continue
        for j, xb in enumerate(b):
            out[i + j] = ctx.add(out[i + j], ctx.mul(xa, xb))
    return out


def _up_pow(ctx: _Loc, a: List, n: int) -> List:
    out = [ctx.one]
    for _ in range(n):
        out = _up_mul(ctx, out, a)
    return out


def _up_divmod_monic(ctx: _Loc, num: List, den: List) -> Tuple[List, List]:
    # den monic in u (leading coefficient exactly 1)
    num = list(num)
    dd = len(den) - 1
    q = [ctx.zero] * max(len(num) - dd, 1)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if ctx.is_zero(c):
            continue
        q[i - dd] = c
        for j in range(dd + 1):
            num[i - dd + j] = ctx.sub(num[i - dd + j], ctx.mul(c, den[j]))
    return q, num[:dd]


def decompose_in_u(f: TriPoly, n: int) -> Optional[CompositionWitness]:
    """A witness f = h(Q) with deg h = n and constant coefficients, or None.

    Tame algorithm over the coefficient field k(s, t): normalize by the
    leading u-block, complete the monic approximate n-th root Q0, expand
    f in base Q0 and demand u-free digits, then check that the outer
    coefficients h_i = digit_i / lam^i are constants and the inner
    Q = lam * Q0 clears all denominators.  Every returned witness
    recomposes exactly.  Raises in the wild case (characteristic
    divides n).
    """
    if n < 2:
        raise ValueError("outer degree must be >= 2")
    r = f.deg("u")
    if r < 1 or r % n:
        raise ValueError(f"outer degree {n} does not divide u-degree {r}")
    if f.p is not None and n % f.p == 0:
        raise WildCompositionError(f"outer degree {n} is wild in characteristic {f.p}")
    m = r // n
    p = f.p
    blocks = f.u_coefficients()
    lc = blocks[r].leading_coeff()
    lam = blocks[r].scale(_unit_inverse(lc, p)).nth_root(n)
    if lam is None:
        return None
    ctx = _Loc(lam, p)
    inv_fr = (TriPoly.const(1, p).scale(_unit_inverse(lc, p)), n)  # 1 / F_r
    ftil = [ctx.norm(ctx.mul((b, 0), inv_fr)) for b in blocks]
    inv_n = _unit_inverse(n, p)

    # monic approximate n-th root: match the top m+1 u-blocks of ftil
    q0 = [ctx.zero] * m + [ctx.one]
    for j in range(1, m + 1):
        power = _up_pow(ctx, q0, n)
        cur = power[r - j] if r - j < len(power) else ctx.zero
        delta = ctx.sub(ftil[r - j], cur)
        q0[m - j] = ctx.scale(delta, inv_n)

    # base-Q0 digits of f itself; all must be u-free
    rem = [(b, 0) for b in blocks]
    hs = []
    for i in range(n):
        rem, digit = _up_divmod_monic(ctx, rem, q0)
        if any(not ctx.is_zero(c) for c in digit[1:]):
            return None
        hs.append(digit[0] if digit else ctx.zero)
    if any(not ctx.is_zero(c) for c in rem[1:]):
        return None
    hs.append(rem[0] if rem else ctx.zero)

    # outer coefficients h_i = digit_i / lam^i must be constants
    coeffs = []
    for i, hv in enumerate(hs):
        g, e = ctx.norm((hv[0], hv[1] + i))
        if e != 0 or not g.is_constant:
            return None
        coeffs.append(g.constant_value())
    outer = UniPoly(coeffs, p)
    if outer.degree != n:
        return None

    # inner Q = lam * Q0 must clear all denominators
    inner_blocks = []
    for g, e in q0:
        if e >= 1:
            g2, e2 = ctx.norm((g, e - 1))
        else:
            g2, e2 = g * lam, 0
        if e2 != 0:
            return None
        inner_blocks.append(g2)
    inner = TriPoly.from_u_coefficients(inner_blocks, p)

    witness = _dickson_normalize(outer, inner, p)
    if witness.recompose() != f:
        return None
    return witness


def _dickson_normalize(outer: UniPoly, inner: TriPoly, p: Optional[int]) -> CompositionWitness:
    """Present the outer as a literal D_n when it is one up to scaling."""
    n = outer.degree
    base = dickson(n, p)
    cands = []
    if p is None:
        c = coeff_nth_root(outer.leading_coeff(), n, None)
        if c is not None:
            cands = [c, -c] if n % 2 == 0 else [c]
    else:
        cands = [c for c in range(1, p) if pow(c, n, p) == outer.leading_coeff()]
    for c in cands:
        if all(outer[i] == _cmul(base[i], c, i, p) for i in range(n + 1)):
            return CompositionWitness(
                outer=base, inner=inner.scale(c), p=p, dickson_index=n
            )
    return CompositionWitness(outer=outer, inner=inner, p=p, dickson_index=None)


def _cmul(b, c, i: int, p: Optional[int]):
    v = b * c**i
    if p is not None:
        v %= p
    elif isinstance(v, Fraction) and v.denominator == 1:
        v = int(v)
    return v


# -- per-prime and global classification ----------------------------------------


def _dickson_candidates(A: int, B: int, r: int, p: Optional[int]) -> List[int]:
    g = math.gcd(abs(A), abs(B))  # gcd(a, 0) = a covers one-sided zero
    cand = [
        d
        for d in _divisors(g)
        if d >= 2 and r % d == 0 and (p is None or d % p)
    ]
    return sorted(cand, reverse=True)


def _find_witness(
    f: TriPoly, A: int, B: int, p: Optional[int]
) -> Optional[CompositionWitness]:
    """Composite witness for f over QQ or F_p, trying large outers first."""
    r = f.deg("u")
    if r < 2:
        return None
    if (A, B) != (0, 0):
        for d in _dickson_candidates(A, B, r, p):
            q = dickson_decompose(f, d)
            if q is not None:
                return CompositionWitness(
                    outer=dickson(d, p), inner=q, p=p, dickson_index=d
                )
        return None
    for n in sorted((d for d in _divisors(r) if d >= 2), reverse=True):
        if p is not None and n % p == 0:
            continue  # wild outers beyond Frobenius layers are out of scope
        w = decompose_in_u(f, n)
        if w is not None:
            return w
    return None


def _require_canonical(w: Word) -> Word:
    canon, rec = canonicalize(w)
    if rec.degenerate:
        raise DegenerateWordError(f"classification needs complexity >= 1: {w!r}")
    return canon


def classify_p(w: Word, p: int, engine: Optional[TraceEngine] = None) -> PrimeVerdict:
    """Verdict for one prime: strip Frobenius layers, then test the core."""
    w = _require_canonical(w)
    st = stats(w)
    f = trace_poly(w, engine=engine).f.reduce_mod(p)
    core, k, _ = frobenius_strip(f)
    witness = _find_witness(core, st.A, st.B, p)
    if witness is None:
        if k == 0:
            return PrimeVerdict(p=p, verdict=NONCOMPOSITE_P, witness=None, frobenius_k=0)
        frob = UniPoly([0] * (p**k) + [1], p)  # z^(p^k), a permutation of every F_{p^n}
        witness = CompositionWitness(outer=frob, inner=core, p=p, dickson_index=p**k)
        return PrimeVerdict(p=p, verdict=SPECIAL_P, witness=witness, frobenius_k=k)
    if k > 0:
        witness = CompositionWitness(
            outer=witness.outer,
            inner=witness.inner ** (p**k),
            p=p,
            dickson_index=witness.dickson_index,
        )
    return PrimeVerdict(
        p=p, verdict=COMPOSITE_NOT_SPECIAL, witness=witness, frobenius_k=k
    )


def classify_rational(
    w: Word, engine: Optional[TraceEngine] = None
) -> Tuple[str, Optional[CompositionWitness]]:
    """Compositeness of f_w over the rationals."""
    w = _require_canonical(w)
    st = stats(w)
    f = trace_poly(w, engine=engine).f
    witness = _find_witness(f, st.A, st.B, None)
    if witness is None:
        return NONCOMPOSITE_Q, None
    return COMPOSITE_Q, witness


def classify_global(
    w: Word, p_max: int, engine: Optional[TraceEngine] = None
) -> GlobalVerdict:
    """Rational class plus per-prime verdicts for all p <= p_max.

    NotEquidistributed as soon as one prime is CompositeNotSpecial;
    otherwise the verdict certifies equidistribution only up to p_max,
    since the set of exceptional primes has no effective bound here.
    """
    w = _require_canonical(w)
    rational_class, rational_witness = classify_rational(w, engine=engine)
    per_prime = []
    bad = None
    for p in primes_in(2, p_max):
        v = classify_p(w, p, engine=engine)
        per_prime.append(v)
        if bad is None and v.verdict == COMPOSITE_NOT_SPECIAL:
            bad = p
    if bad is not None:
        conclusion = "NotEquidistributed"
        certified = None
    else:
        conclusion = f"Equidistributed-certified-to-{p_max}"
        certified = p_max
    return GlobalVerdict(
        word=w,
        rational_class=rational_class,
        rational_witness=rational_witness,
        per_prime=tuple(per_prime),
        conclusion=conclusion,
        certified_to=certified,
        bad_prime=bad,
    )


def power_word_report(w: Word, engine: Optional[TraceEngine] = None) -> PowerWordReport:
    """Cross-check the free-group power structure against the classifier.

    A proper power (x^a y^b ... )^k must show a Dickson witness D_d with
    k | d whose inner at index k matches the root's trace polynomial; an
    aperiodic word must be rationally noncomposite.  Any mismatch is
    flagged rather than raised, since it would contradict the classified
    dichotomy in the tested regime.
    """
    w = _require_canonical(w)
    root, k = proper_power_root(w)
    _, witness = classify_rational(w, engine=engine)
    d = witness.dickson_index if witness is not None else None
    if k == 1:
        consistent = witness is None
        note = (
            "aperiodic and rationally noncomposite"
            if consistent
            else "aperiodic but composite over the rationals"
        )
        return PowerWordReport(w, root, k, d, consistent, note)
    f = trace_poly(w, engine=engine).f
    f_root = trace_poly(root, engine=engine).f
    q = dickson_decompose(f, k)
    inner_ok = q is not None and (q == f_root or (k % 2 == 0 and q == -f_root))
    consistent = witness is not None and d is not None and d % k == 0 and inner_ok
    note = (
        f"power of index {k} with matching Dickson witness"
        if consistent
        else f"power of index {k} but witness does not match"
    )
    return PowerWordReport(w, root, k, d, consistent, note)
