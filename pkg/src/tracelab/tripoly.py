"""Exact sparse polynomials in the trace coordinates s, u, t.

Coefficients are arbitrary-precision integers (Fractions are allowed in
characteristic 0, where intermediate decompositions need them) or residues
modulo a prime p.  Monomials are packed into a single integer key,
16 bits per exponent, ordered (s, u, t) from high to low; packed keys add
under monomial multiplication and compare lexicographically, which keeps
the arithmetic loops tight.

The text format is fixed: monomials sorted by u-degree, then s-degree,
then t-degree, all descending; each monomial renders its variables
alphabetically (s, t, u) with unit parts omitted; terms join with
`` + `` / `` - ``.  Example: ``u^2 - s*t*u + s^2 + t^2 - 2``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple

_SH_S = 32
_SH_U = 16
_MASK = (1 << 16) - 1
_MAX_EXP = (1 << 15) - 1  # headroom so one key addition never carries between fields


def _pack(i: int, j: int, k: int) -> int:
    if i > _MAX_EXP or j > _MAX_EXP or k > _MAX_EXP or min(i, j, k) < 0:
        raise ValueError(f"exponent out of range: {(i, j, k)}")
    return (i << _SH_S) | (j << _SH_U) | k


def _unpack(key: int) -> Tuple[int, int, int]:
    return key >> _SH_S, (key >> _SH_U) & _MASK, key & _MASK


def _norm_coeff(c, p: Optional[int]):
    if p is not None:
        return c % p
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def coeff_nth_root(c, n: int, p: Optional[int]):
    """An n-th root of the scalar c in F_p or QQ, or None.

    Over F_p the least root is returned; over the rationals the positive
    root when n is even, making the choice reproducible.
    """
    if p is not None:
        for a in range(p):
            if pow(a, n, p) == c % p:
                return a
        return None
    frac = Fraction(c)
    if frac == 0:
        return 0
    sign = 1
    if frac < 0:
        if n % 2 == 0:
            return None
        sign, frac = -1, -frac

    def iroot(m: int) -> Optional[int]:
        # floor n-th root by integer Newton iteration, then exactness check
        if m < 2:
            return m if m >= 0 else None
        x = 1 << ((m.bit_length() + n - 1) // n + 1)
        while True:
            y = ((n - 1) * x + m // x ** (n - 1)) // n
            if y >= x:
                break
            x = y
        return x if x**n == m else None

    num = iroot(frac.numerator)
    den = iroot(frac.denominator)
    if num is None or den is None:
        return None
    return _norm_coeff(Fraction(sign * num, den), None)


class TriPoly:
    """Immutable-by-convention sparse polynomial in s, u, t."""

    __slots__ = ("_c", "p")

    def __init__(self, coeffs: Dict[int, object], p: Optional[int] = None):
        # assumes packed keys; normalizes and drops zeros
        c = {}
        for key, val in coeffs.items():
            val = _norm_coeff(val, p)
            if val:
                c[key] = val
        self._c = c
        self.p = p

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_terms(terms: Dict[Tuple[int, int, int], object], p: Optional[int] = None) -> "TriPoly":
        return TriPoly({_pack(*m): c for m, c in terms.items()}, p)

    @staticmethod
    def zero(p: Optional[int] = None) -> "TriPoly":
        return TriPoly({}, p)

    @staticmethod
    def const(c, p: Optional[int] = None) -> "TriPoly":
        return TriPoly({0: c}, p)

    @staticmethod
    def var(name: str, p: Optional[int] = None) -> "TriPoly":
        i, j, k = {"s": (1, 0, 0), "u": (0, 1, 0), "t": (0, 0, 1)}[name]
        return TriPoly({_pack(i, j, k): 1}, p)

    @staticmethod
    def monomial(c, i: int, j: int, k: int, p: Optional[int] = None) -> "TriPoly":
        return TriPoly({_pack(i, j, k): c}, p)

    def ring_const(self, c) -> "TriPoly":
        """Constant polynomial in the same coefficient ring as self."""
        return TriPoly({0: c}, self.p)

    # -- inspection ---------------------------------------------------------

    def terms(self) -> Iterator[Tuple[Tuple[int, int, int], object]]:
        for key, c in self._c.items():
            yield _unpack(key), c

    def coeff(self, i: int, j: int, k: int):
        return self._c.get(_pack(i, j, k), 0)

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def constant_value(self):
        return self._c.get(0, 0)

    def __len__(self) -> int:
        return len(self._c)

    def deg(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self._c:
            return -1
        sh = {"s": _SH_S, "u": _SH_U, "t": 0}[name]
        return max((key >> sh) & _MASK for key in self._c)

    def total_degree(self) -> int:
        if not self._c:
            return -1
        return max(sum(_unpack(key)) for key in self._c)

    def leading_key(self) -> int:
        return max(self._c)

    def leading_coeff(self):
        """Coefficient of the largest monomial in (s, u, t)-lex order."""
        return self._c[self.leading_key()]

    # -- ring structure ------------------------------------------------------

    def _check(self, other: "TriPoly"):
        if self.p != other.p:
            raise ValueError(f"mixed coefficient rings: {self.p} vs {other.p}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TriPoly)
            and self.p == other.p
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.p, frozenset(self._c.items())))

    def __add__(self, other: "TriPoly") -> "TriPoly":
        self._check(other)
        c = dict(self._c)
        for key, val in other._c.items():
            c[key] = c.get(key, 0) + val
        return TriPoly(c, self.p)

    def __sub__(self, other: "TriPoly") -> "TriPoly":
        self._check(other)
        c = dict(self._c)
        for key, val in other._c.items():
            c[key] = c.get(key, 0) - val
        return TriPoly(c, self.p)

    def __neg__(self) -> "TriPoly":
        return TriPoly({key: -val for key, val in self._c.items()}, self.p)

    def __mul__(self, other: "TriPoly") -> "TriPoly":
        self._check(other)
        a, b = self._c, other._c
        if len(a) > len(b):
            a, b = b, a
        out: Dict[int, object] = {}
        get = out.get
        for ka, va in a.items():
            for kb, vb in b.items():
                key = ka + kb  # packed keys add without carries in range
                out[key] = get(key, 0) + va * vb
        return TriPoly(out, self.p)

    def scale(self, c) -> "TriPoly":
        return TriPoly({key: val * c for key, val in self._c.items()}, self.p)

    def __pow__(self, n: int) -> "TriPoly":
        if n < 0:
            raise ValueError("negative power")
        result = TriPoly.const(1, self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed and n:
                base = base * base
        return result

    # -- coefficient-ring moves ----------------------------------------------

    def reduce_mod(self, p: int) -> "TriPoly":
        if self.p is not None:
            raise ValueError("already over a prime field")
        for c in self._c.values():
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise ValueError("denominator not invertible mod p")
        out = {}
        for key, c in self._c.items():
            if isinstance(c, Fraction):
                c = c.numerator * pow(c.denominator, -1, p)
            out[key] = c % p
        return TriPoly(out, p)

    def content(self) -> int:
        """gcd of integer coefficients (0 for the zero polynomial)."""
        import math

        g = 0
        for c in self._c.values():
            if isinstance(c, Fraction):
                raise ValueError("content needs integer coefficients")
            g = math.gcd(g, abs(c))
        return g

    # -- u-direction views -----------------------------------------------------

    def u_coefficients(self) -> list:
        """List [G_0, ..., G_r] of s,t-polynomials with self = sum u^j G_j."""
        r = max(self.deg("u"), 0)
        blocks = [dict() for _ in range(r + 1)]
        for key, c in self._c.items():
            j = (key >> _SH_U) & _MASK
            blocks[j][key - (j << _SH_U)] = c
        return [TriPoly(b, self.p) for b in blocks]

    @staticmethod
    def from_u_coefficients(blocks, p: Optional[int] = None) -> "TriPoly":
        out: Dict[int, object] = {}
        for j, blk in enumerate(blocks):
            if p is None:
                p = blk.p
            elif blk.p is not None and blk.p != p:
                raise ValueError("mixed coefficient rings in u-blocks")
            for key, c in blk._c.items():
                out[key + (j << _SH_U)] = out.get(key + (j << _SH_U), 0) + c
        return TriPoly(out, p)

    # -- substitution and evaluation -----------------------------------------

    def substitute(self, s_val: "TriPoly", u_val: "TriPoly", t_val: "TriPoly") -> "TriPoly":
        """Compose with polynomial values for the three variables."""
        p = self.p
        pow_cache = {"s": {0: TriPoly.const(1, p)}, "u": {0: TriPoly.const(1, p)}, "t": {0: TriPoly.const(1, p)}}
        vals = {"s": s_val, "u": u_val, "t": t_val}

        def vpow(name, e):
            cache = pow_cache[name]
            if e not in cache:
                cache[e] = vpow(name, e - 1) * vals[name]
            return cache[e]

        out = TriPoly.zero(p)
        for (i, j, k), c in self.terms():
            term = TriPoly.const(c, p)
            if i:
                term = term * vpow("s", i)
            if j:
                term = term * vpow("u", j)
            if k:
                term = term * vpow("t", k)
            out = out + term
        return out

    def evaluate(self, field, s: int, u: int, t: int) -> int:
        """Evaluate at field elements (encoded ints) of ``field``."""
        if self.p is None:
            raise ValueError("reduce mod p before evaluating in a field")
        if field.characteristic != self.p:
            raise ValueError("field characteristic does not match")
        mul = field.mul
        add = field.add
        maxdeg = {"s": self.deg("s"), "u": self.deg("u"), "t": self.deg("t")}
        pows = {}
        for name, base in (("s", s), ("u", u), ("t", t)):
            row = [field.one]
            for _ in range(max(maxdeg[name], 0)):
                row.append(mul(row[-1], base))
            pows[name] = row
        acc = field.zero
        for (i, j, k), c in self.terms():
            term = field.embed_int(c)
            if i:
                term = mul(term, pows["s"][i])
            if j:
                term = mul(term, pows["u"][j])
            if k:
                term = mul(term, pows["t"][k])
            acc = add(acc, term)
        return acc

    # -- exact division and roots ----------------------------------------------

    def divide_exact(self, divisor: "TriPoly") -> Optional["TriPoly"]:
        """Return q with self = q * divisor, or None (division over QQ or F_p)."""
        self._check(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        p = self.p
        dlk = divisor.leading_key()
        di, dj, dk = _unpack(dlk)
        dlc = divisor._c[dlk]
        rem = dict(self._c)
        out: Dict[int, object] = {}
        while rem:
            lk = max(rem)
            i, j, k = _unpack(lk)
            if i < di or j < dj or k < dk:
                return None
            qkey = lk - dlk
            if p is None:
                qc = Fraction(rem[lk]) / Fraction(dlc)
            else:
                qc = rem[lk] * pow(dlc, -1, p)
            qc = _norm_coeff(qc, p)
            out[qkey] = qc
            for key, c in divisor._c.items():
                nk = key + qkey
                nv = rem.get(nk, 0) - qc * c
                nv = _norm_coeff(nv, p)
                if nv:
                    rem[nk] = nv
                elif nk in rem:
                    del rem[nk]
        return TriPoly(out, p)

    def _coeff_nth_root(self, c, n: int):
        return coeff_nth_root(c, n, self.p)

    def nth_root(self, n: int) -> Optional["TriPoly"]:
        """Exact n-th root, or None.  In characteristic p requires p not | n."""
        if n < 1:
            raise ValueError("root index must be >= 1")
        if n == 1:
            return self
        if self.is_zero:
            return TriPoly.zero(self.p)
        if self.p is not None and n % self.p == 0:
            raise ValueError("wild root index (characteristic divides n)")
        lk = self.leading_key()
        li, lj, lkk = _unpack(lk)
        if li % n or lj % n or lkk % n:
            return None
        lc_root = self._coeff_nth_root(self._c[lk], n)
        if lc_root is None:
            return None
        root = TriPoly({_pack(li // n, lj // n, lkk // n): lc_root}, self.p)
        lead_pow = root ** (n - 1)
        lead_key = lead_pow.leading_key()
        lead_coeff = lead_pow._c[lead_key]
        prev_key = None
        while True:
            err = self - root**n
            if err.is_zero:
                return root
            ek = err.leading_key()
            if prev_key is not None and ek >= prev_key:
                return None
            prev_key = ek
            ei, ej, ekk = _unpack(ek)
            bi, bj, bk = _unpack(lead_key)
            if ei < bi or ej < bj or ekk < bk:
                return None
            if self.p is None:
                c = Fraction(err._c[ek]) / (n * Fraction(lead_coeff))
            else:
                c = err._c[ek] * pow(n * lead_coeff % self.p, -1, self.p)
            term = TriPoly({ek - lead_key: _norm_coeff(c, self.p)}, self.p)
            if term.is_zero:
                return None
            root = root + term

    # -- text format -------------------------------------------------------------

    def render(self) -> str:
        if not self._c:
            return "0"
        items = sorted(
            (( -j, -i, -k), (i, j, k), c)
            for (i, j, k), c in self.terms()
        )
        pieces = []
        for idx, (_, (i, j, k), c) in enumerate(items):
            if self.p is None:
                neg = c < 0
                mag = -c if neg else c
            else:
                neg = False
                mag = c
            factors = []
            if mag != 1 or (i == 0 and j == 0 and k == 0):
                factors.append(str(mag))
            if i:
                factors.append("s" if i == 1 else f"s^{i}")
            if k:
                factors.append("t" if k == 1 else f"t^{k}")
            if j:
                factors.append("u" if j == 1 else f"u^{j}")
            body = "*".join(factors)
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        ring = "ZZ" if self.p is None else f"F{self.p}"
        return f"TriPoly[{ring}]({self.render()})"

    @staticmethod
    def parse(text: str, p: Optional[int] = None) -> "TriPoly":
        """Inverse of :meth:`render`."""
        text = text.strip()
        if text == "0":
            return TriPoly.zero(p)
        # split into signed terms at top level
        terms = []
        sign = 1
        if text.startswith("-"):
            sign = -1
            text = text[1:]
        for chunk in re.split(r"\s([+-])\s", text):
            if chunk == "+":
                sign = 1
            elif chunk == "-":
                sign = -1
            else:
                terms.append((sign, chunk))
        out: Dict[int, object] = {}
        for sgn, chunk in terms:
            coeff: object = 1
            exps = {"s": 0, "t": 0, "u": 0}
            for factor in chunk.split("*"):
                factor = factor.strip()
                if not factor:
                    raise ValueError(f"empty factor in {chunk!r}")
                if factor[0].isdigit():
                    coeff = (
                        Fraction(factor) if "/" in factor else int(factor)
                    )
                else:
                    name = factor[0]
                    if name not in exps:
                        raise ValueError(f"unknown variable in {factor!r}")
                    e = 1
                    if len(factor) > 1:
                        if not factor[1] == "^":
                            raise ValueError(f"malformed factor {factor!r}")
                        e = int(factor[2:])
                    if exps[name]:
                        raise ValueError(f"repeated variable in {chunk!r}")
                    exps[name] = e
            key = _pack(exps["s"], exps["u"], exps["t"])
            out[key] = out.get(key, 0) + sgn * coeff
        return TriPoly(out, p)


def frobenius_strip(f: TriPoly) -> Tuple[TriPoly, int, int]:
    """Write f = core^{p^k} + b with k maximal, over a prime field.

    Over F_p the constant can always be absorbed, so b = 0; it is returned
    for interface completeness.  Constant input is rejected.
    """
    if f.p is None:
        raise ValueError("frobenius_strip needs a prime-field polynomial")
    if f.is_constant:
        raise ValueError("constant input")
    p = f.p
    import math

    g = 0
    for (i, j, k), _ in f.terms():
        if (i, j, k) == (0, 0, 0):
            continue
        g = math.gcd(g, math.gcd(i, math.gcd(j, k)))
    k_max = 0
    while g % p == 0:
        g //= p
        k_max += 1
    if k_max == 0:
        return f, 0, 0
    q = p**k_max
    const = f.constant_value()
    core: Dict[int, object] = {}
    for (i, j, kk), c in f.terms():
        if (i, j, kk) == (0, 0, 0):
            continue
        core[_pack(i // q, j // q, kk // q)] = c
    core[0] = core.get(0, 0) + const  # c^{p^k} = c over F_p
    return TriPoly(core, p), k_max, 0
