"""Exact enumeration laboratory over SL(2,q) and PSL(2,q).

Conjugacy class tables, word-map fiber distributions, the trace-triple map
pi(x,y) = (tr x, tr xy, tr y) and its fiber counts, minimal-epsilon
equidistribution reports, image and omitted-value analysis, and point-count
screens for level-set irreducibility.

Matrices are row-major 4-tuples (a, b, c, d) of field element codes for
[[a, b], [c, d]].  Fiber counting iterates class representatives on the x
side against the whole group on the y side; the inner loop is vectorized
with numpy table lookups and accumulated in a fixed class order, so results
are deterministic regardless of batch partitioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .gf import GF, field
from .probes import level_set_counts
from .trace import TraceEngine, trace_poly
from .tripoly import TriPoly
from .words import Word, X as _GEN_X

# Fiber enumeration is O(#classes * |G|); beyond this q the batches stop
# fitting comfortably in desk-scale memory/time.
MAX_FIBER_Q = 81

Matrix = tuple[int, int, int, int]

_IDENTITY: Matrix = (1, 0, 0, 1)


# ---------------------------------------------------------------------------
# matrix arithmetic on batches (entries are ints or int64 arrays of codes)


def _mat_mul(F: GF, M, N):
    a, b, c, d = M
    e, f, g, h = N
    mt, at = F.mul_table, F.add_table
    return (
        at[mt[a, e], mt[b, g]],
        at[mt[a, f], mt[b, h]],
        at[mt[c, e], mt[d, g]],
        at[mt[c, f], mt[d, h]],
    )


def _mat_inv(F: GF, M):
    # adjugate; valid only for determinant 1
    a, b, c, d = M
    nt = F.neg_table
    return (d, nt[b], nt[c], a)


def _mat_pow(F: GF, M, e: int):
    if e < 0:
        M = _mat_inv(F, M)
        e = -e
    if e == 0:
        return _IDENTITY
    result = None
    base = M
    while e:
        if e & 1:
            result = base if result is None else _mat_mul(F, result, base)
        e >>= 1
        if e:
            base = _mat_mul(F, base, base)
    return result


def _mat_det(F: GF, M) -> int:
    a, b, c, d = M
    return F.sub(F.mul(a, d), F.mul(b, c))


def word_value(w: Word, X: Matrix, Y: Matrix, F: GF) -> Matrix:
    """Evaluate w at the pair (X, Y); matrix powers use repeated squaring."""
    for name, M in (("X", X), ("Y", Y)):
        if _mat_det(F, M) != F.one:
            raise ValueError(f"{name} does not have determinant 1")
    acc = _IDENTITY
    for gen, exp in w.blocks:
        M = X if gen == _GEN_X else Y
        acc = _mat_mul(F, acc, _mat_pow(F, M, exp))
    return tuple(int(v) for v in acc)


def _eval_word_batch(F: GF, w: Word, xmat: Matrix, ys):
    """w(xmat, Y) for a whole batch of Y matrices (tuple of 4 code arrays)."""
    n = ys[0].shape[0]
    acc = None
    xpow: dict[int, Matrix] = {}
    for gen, exp in w.blocks:
        if gen == _GEN_X:
            if exp not in xpow:
                xpow[exp] = _mat_pow(F, xmat, exp)
            M = xpow[exp]
        else:
            M = _mat_pow(F, ys, exp)
        acc = M if acc is None else _mat_mul(F, acc, M)
    if acc is None:
        one = np.full(n, F.one, dtype=np.int64)
        zero = np.zeros(n, dtype=np.int64)
        return (one, zero, zero, one.copy())
    return tuple(np.broadcast_to(v, (n,)) for v in acc)


def enumerate_group(F: GF):
    """All of SL(2,q) as four parallel code arrays (a, b, c, d).

    Deterministic order: ascending a, then b, then the free coordinate.
    """
    q = F.q
    mt, at, one = F.mul_table, F.add_table, F.one
    cols = [[], [], [], []]
    free = np.arange(q, dtype=np.int64)
    for a in range(q):
        if a != 0:
            inv_a = F.inv(a)
            for b in range(q):
                # d = a^{-1} (1 + b c), c free
                d = mt[inv_a, at[one, mt[b, free]]]
                cols[0].append(np.full(q, a, dtype=np.int64))
                cols[1].append(np.full(q, b, dtype=np.int64))
                cols[2].append(free)
                cols[3].append(d)
        else:
            for b in range(1, q):
                # bc = -1 forces c; d free
                c = F.neg(F.inv(b))
                cols[0].append(np.zeros(q, dtype=np.int64))
                cols[1].append(np.full(q, b, dtype=np.int64))
                cols[2].append(np.full(q, c, dtype=np.int64))
                cols[3].append(free)
    out = tuple(np.concatenate(col) for col in cols)
    if out[0].shape[0] != q**3 - q:
        raise RuntimeError("group enumeration does not match |SL(2,q)|")
    return out


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass(frozen=True)
class ClassInfo:
    class_id: str
    rep: Matrix
    trace: int
    ctype: str
    size: int


class ClassTable:
    """Conjugacy classes of SL(2,q) with O(1) vectorized class lookup.

    Noncentral trace +-2 elements are separated by the square class of the
    invariant beta(g) = b if b != 0 else -c, read off after normalizing the
    trace sign; this matches conjugation by hand on the standard
    representatives and is re-verified against a brute-force orbit oracle
    in the test suite.
    """

    def __init__(self, F: GF, classes: Sequence[ClassInfo]):
        self.field = F
        self.q = F.q
        self.classes = tuple(classes)
        self.by_id = {c.class_id: i for i, c in enumerate(self.classes)}
        self.sizes = np.array([c.size for c in self.classes], dtype=np.int64)
        q = F.q
        self._semis = np.full(q, -1, dtype=np.int64)
        self._central: dict[int, int] = {}
        self._unipotent: dict[tuple[int, int], int] = {}
        for i, c in enumerate(self.classes):
            if c.ctype.startswith("semisimple"):
                self._semis[c.trace] = i
            elif c.ctype == "central":
                self._central[c.trace] = i
            else:
                subkey = 1 if c.ctype.endswith("-1") else 2
                self._unipotent[(c.trace, subkey)] = i
        self._sq_mask = np.zeros(q, dtype=bool)
        for v in F.squares:
            self._sq_mask[v] = True
        two = F.embed_int(2)
        # (trace code, negate-before-reading-invariant) per special trace
        if F.p == 2:
            self._special = ((two, False),)
        else:
            self._special = ((two, False), (F.neg(two), True))

    def classify_array(self, a, b, c, d) -> np.ndarray:
        F = self.field
        tr = F.add_table[a, d]
        out = self._semis[tr]
        for code, negate in self._special:
            mask = tr == code
            if not mask.any():
                continue
            ha, hb, hc, hd = a[mask], b[mask], c[mask], d[mask]
            if negate:
                nt = F.neg_table
                ha, hb, hc, hd = nt[ha], nt[hb], nt[hc], nt[hd]
            res = np.empty(ha.shape[0], dtype=np.int64)
            ident = (ha == F.one) & (hb == 0) & (hc == 0) & (hd == F.one)
            res[ident] = self._central[code]
            rest = ~ident
            if rest.any():
                beta = np.where(hb[rest] != 0, hb[rest], F.neg_table[hc[rest]])
                if F.p == 2:
                    res[rest] = self._unipotent[(code, 1)]
                else:
                    res[rest] = np.where(
                        self._sq_mask[beta],
                        self._unipotent[(code, 1)],
                        self._unipotent[(code, 2)],
                    )
            out[mask] = res
        if (out < 0).any():
            raise RuntimeError("class lookup failed to resolve some elements")
        return out

    def class_of(self, mat: Matrix) -> int:
        arrs = tuple(np.array([v], dtype=np.int64) for v in mat)
        return int(self.classify_array(*arrs)[0])


def build_class_table(q: int) -> ClassTable:
    """All conjugacy classes of SL(2,q), validated against |G| = q(q^2-1)."""
    F = field(q)
    classes: list[ClassInfo] = []
    two = F.embed_int(2)
    if F.p != 2:
        mone = F.neg(F.one)
        mtwo = F.neg(two)
        nonsq = min(v for v in range(1, q) if v not in F.squares)
        half = (q * q - 1) // 2
        classes.append(ClassInfo(f"central_tr{two}", _IDENTITY, two, "central", 1))
        classes.append(
            ClassInfo(f"central_tr{mtwo}", (mone, 0, 0, mone), mtwo, "central", 1)
        )
        classes.append(
            ClassInfo(
                f"unipotent-split-1_tr{two}", (1, 1, 0, 1), two, "unipotent-split-1", half
            )
        )
        classes.append(
            ClassInfo(
                f"unipotent-split-2_tr{two}",
                (1, nonsq, 0, 1),
                two,
                "unipotent-split-2",
                half,
            )
        )
        classes.append(
            ClassInfo(
                f"unipotent-split-1_tr{mtwo}",
                (mone, mone, 0, mone),
                mtwo,
                "unipotent-split-1",
                half,
            )
        )
        classes.append(
            ClassInfo(
                f"unipotent-split-2_tr{mtwo}",
                (mone, F.neg(nonsq), 0, mone),
                mtwo,
                "unipotent-split-2",
                half,
            )
        )
        special = {two, mtwo}
    else:
        classes.append(ClassInfo("central_tr0", _IDENTITY, 0, "central", 1))
        classes.append(
            ClassInfo(
                "unipotent-split-1_tr0", (1, 1, 0, 1), 0, "unipotent-split-1", q * q - 1
            )
        )
        special = {0}
    for z in range(q):
        if z in special:
            continue
        nroots = F.quad_root_count(z)
        if nroots == 2:
            ctype, size = "semisimple-split", q * (q + 1)
        elif nroots == 0:
            ctype, size = "semisimple-nonsplit", q * (q - 1)
        else:
            raise RuntimeError(f"trace {z} has a repeated eigenvalue off the center")
        classes.append(ClassInfo(f"{ctype}_tr{z}", (0, F.neg(F.one), 1, z), z, ctype, size))
    total = sum(c.size for c in classes)
    if total != q * (q * q - 1):
        raise RuntimeError(f"class sizes sum to {total}, expected {q * (q * q - 1)}")
    return ClassTable(F, classes)


# ---------------------------------------------------------------------------
# fiber distributions


@dataclass(frozen=True)
class FiberRow:
    class_id: str
    trace: int
    ctype: str
    class_size: int
    fiber_per_element: int
    deviation: Fraction


@dataclass(frozen=True)
class FiberReport:
    word: Word
    q: int
    group: str
    order: int
    total_pairs: int
    rows: tuple[FiberRow, ...]

    def to_csv(self) -> str:
        lines = ["class_id,trace,type,class_size,fiber_per_element,deviation"]
        for r in self.rows:
            lines.append(
                f"{r.class_id},{r.trace},{r.ctype},{r.class_size},"
                f"{r.fiber_per_element},{r.deviation}"
            )
        return "\n".join(lines) + "\n"

    def row_by_id(self, class_id: str) -> FiberRow:
        for r in self.rows:
            if r.class_id == class_id:
                return r
        raise KeyError(class_id)


def class_fiber_counts(
    w: Word, table: ClassTable, ys, xmat: Matrix
) -> np.ndarray:
    """#{y in batch : w(xmat, y) lands in class C}, per class C."""
    vals = _eval_word_batch(table.field, w, xmat, ys)
    idx = table.classify_array(*vals)
    return np.bincount(idx, minlength=len(table.classes))


def fiber_distribution(w: Word, q: int) -> FiberReport:
    """Exact per-element fiber counts of the word map on SL(2,q).

    Iterates class representatives x_c against all y, accumulating the class
    of w(x_c, y) weighted by |class(x_c)|, then divides per-class totals by
    the target class size; exactness of that division is asserted.
    """
    if q > MAX_FIBER_Q:
        raise ValueError(f"resource guard exceeded: q = {q} > {MAX_FIBER_Q}")
    table = build_class_table(q)
    F = table.field
    ys = enumerate_group(F)
    order = q**3 - q
    ncls = len(table.classes)
    totals = np.zeros(ncls, dtype=np.int64)
    for cls in table.classes:
        counts = class_fiber_counts(w, table, ys, cls.rep)
        totals += cls.size * counts
    if (totals % table.sizes != 0).any():
        raise RuntimeError("per-class totals are not divisible by class sizes")
    per_element = totals // table.sizes
    checksum = int((table.sizes * per_element).sum())
    if checksum != order * order:
        raise RuntimeError("fiber counts do not partition |G|^2")
    rows = tuple(
        FiberRow(
            class_id=c.class_id,
            trace=c.trace,
            ctype=c.ctype,
            class_size=c.size,
            fiber_per_element=int(pe),
            deviation=abs(Fraction(int(pe), order) - 1),
        )
        for c, pe in zip(table.classes, per_element)
    )
    return FiberReport(
        word=w, q=q, group="SL(2,q)", order=order, total_pairs=order * order, rows=rows
    )


def psl_fiber_distribution(
    w: Word, q: int, sl_report: Optional[FiberReport] = None
) -> FiberReport:
    """Per-element fibers over PSL(2,q), odd q.

    For the two preimages g, -g of a PSL element, the PSL fiber is
    (fiber(g) + fiber(-g)) / 4; the division is asserted exact.
    """
    F = field(q)
    if F.p == 2:
        raise ValueError("PSL(2,q) = SL(2,q) for even q; use fiber_distribution")
    report = sl_report if sl_report is not None else fiber_distribution(w, q)
    if report.q != q or report.group != "SL(2,q)":
        raise ValueError("sl_report does not match the requested group")
    table = build_class_table(q)
    nt = F.neg_table
    partner = []
    for c in table.classes:
        neg_rep = tuple(int(nt[v]) for v in c.rep)
        partner.append(table.class_of(neg_rep))
    order = (q**3 - q) // 2
    rows = []
    seen = set()
    for i, c in enumerate(table.classes):
        if i in seen:
            continue
        j = partner[i]
        seen.add(i)
        seen.add(j)
        fib_i = report.rows[i].fiber_per_element
        fib_j = report.rows[j].fiber_per_element
        paired_sum = fib_i + fib_j
        if paired_sum % 4 != 0:
            raise RuntimeError("paired fiber sum is not divisible by 4")
        per_element = paired_sum // 4
        if j == i:
            if c.size % 2 != 0:
                raise RuntimeError("self-paired class has odd size")
            size = c.size // 2
        else:
            if table.classes[j].size != c.size:
                raise RuntimeError("negation pairs classes of different sizes")
            size = c.size
        rows.append(
            FiberRow(
                class_id=f"psl:{c.class_id}",
                trace=c.trace,
                ctype=c.ctype,
                class_size=size,
                fiber_per_element=per_element,
                deviation=abs(Fraction(per_element, order) - 1),
            )
        )
    checksum = sum(r.class_size * r.fiber_per_element for r in rows)
    if checksum != order * order:
        raise RuntimeError("PSL fiber counts do not partition |PSL|^2")
    return FiberReport(
        word=w,
        q=q,
        group="PSL(2,q)",
        order=order,
        total_pairs=order * order,
        rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# minimal-epsilon equidistribution reports


@dataclass(frozen=True)
class EquidistReport:
    q: int
    group: str
    order: int
    degree: int
    epsilon: Fraction
    excluded_classes: tuple[str, ...]
    kept_classes: tuple[str, ...]
    q0: int
    A: int
    alpha: int
    B: int
    beta: Fraction
    cor311_epsilon: float

    def params(self) -> dict:
        return {"q0": self.q0, "A": self.A, "alpha": self.alpha, "B": self.B, "beta": self.beta}

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "epsilon": str(self.epsilon),
            "excluded_classes": list(self.excluded_classes),
            "params": {
                "q0": self.q0,
                "A": self.A,
                "alpha": self.alpha,
                "B": self.B,
                "beta": float(self.beta),
            },
            "cor311_epsilon": self.cor311_epsilon,
        }


def epsilon_feasible(report: FiberReport, eps: Fraction) -> bool:
    """Can a set of at most eps*|G| elements absorb every deviation > eps?

    Deviations are constant on classes, so the optimal excluded set is a
    union of whole classes plus possibly part of one; excluding the
    worst-deviation elements first is optimal, hence the simple count.
    """
    excluded = sum(r.class_size for r in report.rows if r.deviation > eps)
    return Fraction(excluded, report.order) <= eps


def equidist_epsilon(
    report: FiberReport, engine: Optional[TraceEngine] = None
) -> EquidistReport:
    """Minimal epsilon in the exclusion sense, plus the theoretical pack.

    Scans per-element deviations in descending order; after excluding the k
    worst elements the feasible epsilon is max(next deviation, k/|G|), and
    the minimum over class-boundary prefixes is reported.  Ties prefer
    fewer excluded elements.
    """
    order = report.order
    items = sorted(report.rows, key=lambda r: (r.deviation, r.class_id), reverse=True)
    best_eps: Optional[Fraction] = None
    best_cut = 0
    cum = 0
    for cut in range(len(items) + 1):
        next_dev = items[cut].deviation if cut < len(items) else Fraction(0)
        eps = max(next_dev, Fraction(cum, order))
        if best_eps is None or eps < best_eps:
            best_eps = eps
            best_cut = cut
        if cut < len(items):
            cum += items[cut].class_size
    excluded = tuple(r.class_id for r in items[:best_cut])
    kept = tuple(r.class_id for r in items[best_cut:])
    d = trace_poly(report.word, engine=engine).f.total_degree()
    return EquidistReport(
        q=report.q,
        group=report.group,
        order=order,
        degree=d,
        epsilon=best_eps,
        excluded_classes=excluded,
        kept_classes=kept,
        q0=4 * (50 * d**4) ** 2,
        A=2 * (d + 8),
        alpha=1,
        B=100 * d**4 + 1,
        beta=Fraction(1, 2),
        cor311_epsilon=3 * (100 * d**4 + 1) / math.sqrt(report.q),
    )


def fraction_le_inv_sqrt(eps: Fraction, c: Union[int, Fraction], q: int) -> bool:
    """Exact test of eps <= c / sqrt(q) by squaring (both sides nonnegative)."""
    c = Fraction(c)
    if eps < 0 or c < 0:
        raise ValueError("comparison requires nonnegative quantities")
    return eps * eps * q <= c * c


# ---------------------------------------------------------------------------
# trace-triple fibers and the degenerate locus


def pi_fiber_count(q: int, s: int, u: int, t: int) -> int:
    """Exact #{(x,y) : tr x = s, tr xy = u, tr y = t} over SL(2,q).

    Runs over the <= 4 classes of trace s; for each representative the y
    side is scanned over its free entries in O(q^2) table operations.
    """
    table = build_class_table(q)
    F = table.field
    q_ = F.q
    for v in (s, u, t):
        if not 0 <= v < q_:
            raise ValueError("trace coordinates must be element codes")
    mt, at, nt = F.mul_table, F.add_table, F.neg_table
    total = 0
    a_col = np.arange(q_, dtype=np.int64)[:, None]
    b_row = np.arange(1, q_, dtype=np.int64)[None, :]
    for cls in table.classes:
        if cls.trace != s:
            continue
        x0, x1, x2, x3 = cls.rep
        # y = (a, b, c, d) with d = t - a and det ad - bc = 1
        d_col = at[t, nt[a_col]]
        # b != 0: c = b^{-1} (ad - 1)
        ad = mt[a_col, d_col]
        c_grid = mt[F.inv_table[b_row], at[ad, nt[F.one]]]
        tr_grid = at[
            at[mt[x0, a_col], mt[x1, c_grid]],
            at[mt[x2, b_row], mt[x3, d_col]],
        ]
        cnt = int((tr_grid == u).sum())
        # b == 0: need ad = 1, c free
        for a in range(1, q_):
            d = F.sub(t, a)
            if F.mul(a, d) != F.one:
                continue
            base = F.add(F.mul(x0, a), F.mul(x3, d))
            if x1 == 0:
                cnt += q_ if base == u else 0
            else:
                cnt += 1  # unique c with x1*c = u - base
        total += cls.size * cnt
    return total


def pi_fiber_table(q: int) -> np.ndarray:
    """All pi-fiber counts at once, indexed [s, u, t]; O(#classes * |G|)."""
    table = build_class_table(q)
    F = table.field
    ys = enumerate_group(F)
    a, b, c, d = ys
    tr_y = F.add_table[a, d]
    out = np.zeros((q, q, q), dtype=np.int64)
    for cls in table.classes:
        x0, x1, x2, x3 = cls.rep
        mt, at = F.mul_table, F.add_table
        tr_xy = at[at[mt[x0, a], mt[x1, c]], at[mt[x2, b], mt[x3, d]]]
        grid = np.zeros((q, q), dtype=np.int64)
        np.add.at(grid, (tr_xy, tr_y), 1)
        out[cls.trace] += cls.size * grid
    if int(out.sum()) != (q**3 - q) ** 2:
        raise RuntimeError("pi-fiber table does not partition |G|^2")
    return out


def delta_locus(q: int) -> set[tuple[int, int, int]]:
    """F_q-points of (t^2-4)(s^2-4)(s^2+t^2+u^2-ust-4) = 0."""
    F = field(q)
    four = F.embed_int(4)
    pts = set()
    sq = [F.mul(v, v) for v in range(q)]
    for s in range(q):
        f1 = F.sub(sq[s], four)
        for t in range(q):
            f2 = F.sub(sq[t], four)
            st = F.mul(s, t)
            base = F.sub(F.add(sq[s], sq[t]), four)
            for u in range(q):
                f3 = F.sub(F.add(base, sq[u]), F.mul(u, st))
                if F.mul(F.mul(f1, f2), f3) == 0:
                    pts.add((s, u, t))
    return pts


# ---------------------------------------------------------------------------
# image / omitted-value analysis


@dataclass(frozen=True)
class ImageReport:
    word: Word
    q: int
    omitted_traces: tuple[int, ...]
    semisimple_coverage: bool
    omitted_element_fraction: Fraction
    zero_fiber_classes: tuple[str, ...]
    outer_degree: Optional[int]
    omitted_trace_bound: Optional[Fraction]
    lower_bound_ok: Optional[bool]


def image_analysis(
    w: Word,
    q: int,
    outer_degree: Optional[int] = None,
    sl_report: Optional[FiberReport] = None,
) -> ImageReport:
    """Omitted traces and coverage of noncentral semisimple classes.

    A trace z is omitted when every class of trace z has fiber zero.  When
    outer_degree d1 is supplied (composite-not-special words), the count of
    omitted traces is checked against the floor (q-1)/d1 - 2; the slack 2
    absorbs the exceptional +-2 traces reachable through the center.
    """
    report = sl_report if sl_report is not None else fiber_distribution(w, q)
    zero_rows = [r for r in report.rows if r.fiber_per_element == 0]
    hit_traces = {r.trace for r in report.rows if r.fiber_per_element > 0}
    omitted = tuple(z for z in range(q) if z not in hit_traces)
    coverage = all(
        r.fiber_per_element > 0
        for r in report.rows
        if r.ctype.startswith("semisimple")
    )
    omitted_fraction = Fraction(sum(r.class_size for r in zero_rows), report.order)
    bound = None
    bound_ok = None
    if outer_degree is not None:
        if outer_degree < 2:
            raise ValueError("outer degree of a composition is at least 2")
        bound = Fraction(q - 1, outer_degree) - 2
        bound_ok = len(omitted) >= bound
    return ImageReport(
        word=w,
        q=q,
        omitted_traces=omitted,
        semisimple_coverage=coverage,
        omitted_element_fraction=omitted_fraction,
        zero_fiber_classes=tuple(r.class_id for r in zero_rows),
        outer_degree=outer_degree,
        omitted_trace_bound=bound,
        lower_bound_ok=bound_ok,
    )


# ---------------------------------------------------------------------------
# level-set point-count screens


@dataclass(frozen=True)
class LevelSetRow:
    z: int
    count: int
    passed: bool


@dataclass(frozen=True)
class LangWeilReport:
    q: int
    degree: int
    excluded: tuple[int, ...]
    rows: tuple[LevelSetRow, ...]
    all_pass: bool
    max_residual: float
    est01_applicable: bool
    est01_ok: Optional[bool]

    def bound(self) -> float:
        d, q = self.degree, self.q
        return (d - 1) * (d - 2) * q**1.5 + 12 * (d + 3) ** 4 * q


def lang_weil_check(
    f: TriPoly, q: int, spectrum_exclusions: Iterable[int] = ()
) -> LangWeilReport:
    """Check |N_z - q^2| <= (d-1)(d-2)q^{3/2} + 12(d+3)^4 q off the exclusions.

    The irrational bound is compared exactly by isolating the q^{3/2} term
    and squaring.  When d > 4 and q > 16 the sharper residual form
    |N_z - q^2| < 50 d^4 q is evaluated as well.
    """
    if f.is_constant:
        raise ValueError("level-set screen requires a nonconstant polynomial")
    F = field(q)
    counts = level_set_counts(f, F)
    d = f.total_degree()
    excluded = tuple(sorted(set(spectrum_exclusions)))
    c1 = (d - 1) * (d - 2)
    c2 = 12 * (d + 3) ** 4
    rows = []
    max_res = 0.0
    est01_applicable = d > 4 and q > 16
    est01_ok = True if est01_applicable else None
    all_pass = True
    for z in range(q):
        if z in excluded:
            continue
        diff = abs(int(counts[z]) - q * q)
        head = diff - c2 * q
        ok = head <= 0 or head * head <= c1 * c1 * q**3
        all_pass = all_pass and ok
        max_res = max(max_res, diff / q**1.5)
        if est01_applicable and not diff < 50 * d**4 * q:
            est01_ok = False
        rows.append(LevelSetRow(z=z, count=int(counts[z]), passed=ok))
    return LangWeilReport(
        q=q,
        degree=d,
        excluded=excluded,
        rows=tuple(rows),
        all_pass=all_pass,
        max_residual=max_res,
        est01_applicable=est01_applicable,
        est01_ok=est01_ok,
    )


@dataclass(frozen=True)
class SpectrumProbe:
    p: int
    n_list: tuple[int, ...]
    flagged: tuple[int, ...]
    per_field: dict[int, tuple[int, ...]]
    degree: int
    heuristic: bool
    threshold: str


def spectrum_probe(f: TriPoly, p: int, n_list: Sequence[int]) -> SpectrumProbe:
    """Heuristic level-reducibility screen over the fields F_{p^n}, n in n_list.

    Flags prime-field levels z whose point count deviates from q^2 by at
    least q^2/2 at every probed field.  This is a one-sided screen, not an
    irreducibility certificate: reducible levels split into components
    whose counts are near multiples of q^2, while irreducible levels stay
    within the point-count bound at these desk-scale q.  Candidates are
    restricted to the prime field, where the embedding into every probed
    extension is canonical.
    """
    if not n_list:
        raise ValueError("n_list must be nonempty")
    fq = f.reduce_mod(p) if f.p is None else f
    if fq.p != p:
        raise ValueError(f"polynomial is over F_{fq.p}, probe requested p = {p}")
    d = f.total_degree()
    per_field: dict[int, tuple[int, ...]] = {}
    flagged: Optional[set[int]] = None
    for n in sorted(set(n_list)):
        q = p**n
        counts = level_set_counts(fq, field(q))
        deviants = tuple(
            z for z in range(p) if 2 * abs(int(counts[z]) - q * q) >= q * q
        )
        if len(deviants) > max(d - 1, 0):
            raise RuntimeError(
                f"probe at q = {q} flagged {len(deviants)} levels, "
                f"exceeding the spectrum cardinality bound {max(d - 1, 0)}"
            )
        per_field[n] = deviants
        flagged = set(deviants) if flagged is None else flagged & set(deviants)
    return SpectrumProbe(
        p=p,
        n_list=tuple(sorted(set(n_list))),
        flagged=tuple(sorted(flagged or ())),
        per_field=per_field,
        degree=d,
        heuristic=True,
        threshold="2*|N_z - q^2| >= q^2 at every probed field",
    )
