"""Point counting for trilinear-coordinate level sets over small finite fields.

Counts N_z = #{(s,u,t) in F_q^3 : f(s,u,t) = z} for every z at once by
evaluating f on the full coordinate grid.  Evaluation is organized as a
Horner recursion in u over q x q grids of (s,t) values, so the work is
O(q^3 * deg_u f) table lookups, all vectorized.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from .gf import GF, field
from .tripoly import TriPoly


def _as_field(q_or_field: Union[int, GF]) -> GF:
    if isinstance(q_or_field, GF):
        return q_or_field
    return field(q_or_field)


def _prepare(f: TriPoly, F: GF) -> TriPoly:
    if f.p is None:
        return f.reduce_mod(F.p)
    if f.p != F.p:
        raise ValueError(f"polynomial over F_{f.p} cannot be evaluated in F_{F.q}")
    return f


def _grid_powers(F: GF, codes: np.ndarray, max_exp: int) -> list[np.ndarray]:
    # pows[i] = codes**i elementwise in F
    pows = [np.full_like(codes, F.one), codes.copy()]
    for _ in range(2, max_exp + 1):
        pows.append(F.mul_table[pows[-1], codes])
    return pows[: max_exp + 1]


def _u_blocks_on_grid(f: TriPoly, F: GF) -> list[np.ndarray]:
    """Evaluate each u-coefficient block G_j(s,t) on the q x q grid.

    Returns arrays indexed [s, t].
    """
    q = F.q
    blocks = f.u_coefficients()
    max_s = max((blk.deg("s") for blk in blocks), default=0)
    max_t = max((blk.deg("t") for blk in blocks), default=0)
    codes = np.arange(q, dtype=np.int64)
    spows = _grid_powers(F, codes, max(max_s, 1))
    tpows = _grid_powers(F, codes, max(max_t, 1))
    out = []
    for blk in blocks:
        acc = np.zeros((q, q), dtype=np.int64)
        for (i, _j, k), coef in sorted(blk.terms()):
            cval = F.embed_int(coef)
            mono = F.mul_table[spows[i][:, None], tpows[k][None, :]]
            acc = F.add_table[acc, F.mul_table[cval, mono]]
        out.append(acc)
    return out


def level_set_counts(f: TriPoly, q_or_field: Union[int, GF]) -> np.ndarray:
    """All level-set sizes at once: counts[z] = N_z, an array of length q."""
    F = _as_field(q_or_field)
    fq = _prepare(f, F)
    q = F.q
    grids = _u_blocks_on_grid(fq, F)
    counts = np.zeros(q, dtype=np.int64)
    for u in range(q):
        val = grids[-1]
        for j in range(len(grids) - 2, -1, -1):
            val = F.add_table[F.mul_table[val, u], grids[j]]
        counts += np.bincount(val.ravel(), minlength=q)
    if int(counts.sum()) != q**3:
        raise RuntimeError("level-set counts do not partition the coordinate cube")
    return counts


def count_level_set(f: TriPoly, q_or_field: Union[int, GF], z: int) -> int:
    """N_z = #{(s,u,t) : f(s,u,t) = z} over F_q."""
    F = _as_field(q_or_field)
    if not 0 <= z < F.q:
        raise ValueError(f"level {z} is not an element code of F_{F.q}")
    return int(level_set_counts(f, F)[z])
