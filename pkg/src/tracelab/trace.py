"""Trace polynomials of words evaluated on SL(2) generator pairs.

For x, y in SL(2) over any commutative ring, the trace of a word w(x, y)
is an integer polynomial f_w(s, u, t) in the three coordinates s = tr x,
u = tr xy, t = tr y.  The engine here computes f_w exactly from the
classical identities

    tr 1 = 2,  tr U^-1 = tr U,  tr UV = tr VU,
    tr UV = tr U * tr V - tr UV^-1,
    tr g^e R = tr g * tr g^(e-1) R - tr g^(e-2) R  (two-sided in e),

with memoization keyed on a normal form invariant under cyclic rotation
and inversion, both of which preserve the trace.  An independent oracle
evaluates the word on explicit matrices over a finite field and must
agree pointwise.

Writing a canonical word as x^a1 y^b1 ... x^ar y^br, the expansion
f_w = sum_k u^k G_k(s, t) stops exactly at k = r, and the single-syllable
polynomials f_{x^a y^b} = u*g_{a,b} + h_{a,b} are the building blocks of
the leading coefficient G_r = prod_i g_{a_i,b_i}.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional, Tuple

from .tripoly import TriPoly
from .unipoly import dickson_apply
from .words import Block, Word, X, Y, canonicalize, _reduce

_S = TriPoly.var("s")
_T = TriPoly.var("t")
_U = TriPoly.var("u")
_TWO = TriPoly.const(2)


def _cyclic_reduce(blocks: Tuple[Block, ...]) -> Tuple[Block, ...]:
    """Conjugation-minimal representative: merge blocks across the wrap."""
    b = list(blocks)
    while len(b) >= 2 and b[0][0] == b[-1][0]:
        g, a = b[0]
        _, c = b[-1]
        e = a + c
        b = ([(g, e)] if e else []) + b[1:-1]
    return tuple(b)


def _invert(blocks: Tuple[Block, ...]) -> Tuple[Block, ...]:
    return tuple((g, -e) for g, e in reversed(blocks))


def _canonical_cyclic(blocks: Tuple[Block, ...]) -> Tuple[Block, ...]:
    """Least rotation of the block sequence or its inverse."""
    best = None
    for seq in (blocks, _invert(blocks)):
        n = len(seq)
        for i in range(n):
            cand = seq[i:] + seq[:i]
            if best is None or cand < best:
                best = cand
    return best


class TraceEngine:
    """Fricke-style reduction with a memo table.

    ``use_power_shortcut`` controls whether f_{v^k} is computed as
    D_k(f_v); tests that verify that identity run with it disabled so the
    check is not circular.  The memo may be shared between threads: the
    lock guards the dict, and since every entry is a pure function of its
    key, racing recomputation is harmless.
    """

    def __init__(self, use_power_shortcut: bool = True):
        self.use_power_shortcut = use_power_shortcut
        self._memo: dict = {}
        self._lock = threading.Lock()

    def trace_word(self, w: Word) -> TriPoly:
        return self._trace(w.blocks)

    def _trace(self, blocks: Tuple[Block, ...]) -> TriPoly:
        blocks = _cyclic_reduce(_reduce(blocks))
        n = len(blocks)
        if n == 0:
            return _TWO
        if n == 1:
            g, e = blocks[0]
            return dickson_apply(abs(e), _S if g == X else _T)
        key = _canonical_cyclic(blocks)
        with self._lock:
            f = self._memo.get(key)
        if f is None:
            f = self._reduce_step(key)
            with self._lock:
                self._memo[key] = f
        return f

    def _reduce_step(self, blocks: Tuple[Block, ...]) -> TriPoly:
        # blocks: canonical representative, even length, alternating, x first
        n = len(blocks)
        if self.use_power_shortcut and n >= 4:
            for m in range(2, n // 2 + 1, 2):
                if n % m == 0 and blocks == blocks[:m] * (n // m):
                    return dickson_apply(n // m, self._trace(blocks[:m]))
        idx = max(range(n), key=lambda i: abs(blocks[i][1]))
        g, e = blocks[idx]
        if abs(e) >= 2:
            rest = blocks[idx + 1 :] + blocks[:idx]
            step = 1 if e > 0 else -1
            var = _S if g == X else _T
            c1 = self._trace(((g, e - step),) + rest)
            c2 = self._trace(((g, e - 2 * step),) + rest)
            return var * c1 - c2
        if n == 2:
            a, b = blocks[0][1], blocks[1][1]
            return _U if a * b > 0 else _S * _T - _U
        head, tail = blocks[:2], blocks[2:]
        cross = self._trace(head + _invert(tail))
        return self._trace(head) * self._trace(tail) - cross


_DEFAULT_ENGINE = TraceEngine()


@dataclass(frozen=True)
class TraceResult:
    """f_w together with its u-direction structure."""

    word: Word
    f: TriPoly
    u_degree: int
    leading: TriPoly


@dataclass(frozen=True)
class SyllablePair:
    """The two s,t-polynomials with f_{x^a y^b} = u*g + h."""

    a: int
    b: int
    g: TriPoly
    h: TriPoly


def trace_poly(w: Word, engine: Optional[TraceEngine] = None) -> TraceResult:
    """Exact trace polynomial of any word, including degenerate ones."""
    eng = engine if engine is not None else _DEFAULT_ENGINE
    f = eng.trace_word(w)
    if w.is_empty:
        canon = w
    else:
        canon, _ = canonicalize(w)
    u_degree = max(f.deg("u"), 0)
    if canon.is_canonical and u_degree != canon.complexity:
        raise RuntimeError(
            f"u-degree {u_degree} != complexity {canon.complexity} for {canon}"
        )
    leading = f.u_coefficients()[-1]
    return TraceResult(word=canon, f=f, u_degree=u_degree, leading=leading)


def syllable_polys(a: int, b: int, engine: Optional[TraceEngine] = None) -> SyllablePair:
    """g_{a,b}, h_{a,b} for the single syllable x^a y^b."""
    if a == 0 or b == 0:
        raise ValueError("syllable exponents must be nonzero")
    eng = engine if engine is not None else _DEFAULT_ENGINE
    f = eng._trace(((X, a), (Y, b)))
    parts = f.u_coefficients()
    h = parts[0]
    g = parts[1] if len(parts) > 1 else TriPoly.zero()
    if g.deg("s") != abs(a) - 1 or g.deg("t") != abs(b) - 1:
        raise RuntimeError(f"degree contract failed for syllable ({a}, {b})")
    return SyllablePair(a=a, b=b, g=g, h=h)


def u_expansion(f: TriPoly) -> list:
    """Coefficients [G_0, ..., G_r] of f as a polynomial in u."""
    return f.u_coefficients()


# -- matrix-evaluation oracle -------------------------------------------------


def eval_trace_direct(w: Word, field, s: int, u: int, t: int) -> int:
    """tr w(X, Y) for explicit matrices with tr X = s, tr XY = u, tr Y = t.

    Works in R = F_q[T]/(T^2 - u*T + 1): with xi the class of T we have
    xi * (u - xi) = 1, so X = [[s, -1], [1, 0]] and Y = [[0, xi],
    [-(u - xi), t]] are in SL(2, R) and realize the three traces.  The
    word's trace is a polynomial in s, u, t with integer coefficients, so
    it lands in F_q; the T-component is checked to vanish.
    """
    F = field

    def radd(p, q):
        return (F.add(p[0], q[0]), F.add(p[1], q[1]))

    def rmul(p, q):
        a, b = p
        c, d = q
        bd = F.mul(b, d)
        re = F.sub(F.mul(a, c), bd)
        im = F.add(F.add(F.mul(a, d), F.mul(b, c)), F.mul(u, bd))
        return (re, im)

    zero = (0, 0)
    one = (1, 0)

    def mmul(A, B):
        a00, a01, a10, a11 = A
        b00, b01, b10, b11 = B
        return (
            radd(rmul(a00, b00), rmul(a01, b10)),
            radd(rmul(a00, b01), rmul(a01, b11)),
            radd(rmul(a10, b00), rmul(a11, b10)),
            radd(rmul(a10, b01), rmul(a11, b11)),
        )

    def rneg(p):
        return (F.neg(p[0]), F.neg(p[1]))

    def minv(A):
        # determinant is 1 throughout, so the adjugate inverts
        a00, a01, a10, a11 = A
        return (a11, rneg(a01), rneg(a10), a00)

    def mpow(A, e):
        out = (one, zero, zero, one)
        while e:
            if e & 1:
                out = mmul(out, A)
            e >>= 1
            if e:
                A = mmul(A, A)
        return out

    xi = (0, 1)
    mx = ((s, 0), (F.neg(1), 0), one, zero)
    my = (zero, xi, (F.neg(u), 1), (t, 0))
    acc = (one, zero, zero, one)
    for g, e in w.blocks:
        base = mx if g == X else my
        if e < 0:
            base, e = minv(base), -e
        acc = mmul(acc, mpow(base, e))
    tr = radd(acc[0], acc[3])
    if tr[1] != 0:
        raise RuntimeError("trace left the base field")
    return tr[0]
