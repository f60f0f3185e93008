"""Dense univariate polynomials and the classical recurrence families.

Two families built on the recurrence f_{n+1} = z*f_n - f_{n-1}:

* ``chebyshev_v``: V_0 = 0, V_1 = 1.  These satisfy M^n = V_n(tr M)*M -
  V_{n-1}(tr M)*I for M in SL(2), which is how powers of a generator
  leave the trace ring.
* ``dickson``: D_0 = 2, D_1 = z.  These satisfy D_n(tr M) = tr(M^n),
  D_{-n} = D_n, and D_{nm} = D_n(D_m); they are the permutation-like
  outer compositions that do not break equidistribution.

``dickson_apply`` evaluates D_n at any ring element supporting +, -, *
and a ``ring_const`` hook, without building D_n's coefficients first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional


def _norm(c, p: Optional[int]):
    if p is not None:
        return c % p
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class UniPoly:
    """Polynomial in one variable with exact scalar coefficients."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: List, p: Optional[int] = None):
        cs = [_norm(c, p) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs
        self.p = p

    @staticmethod
    def const(c, p: Optional[int] = None) -> "UniPoly":
        return UniPoly([c], p)

    @staticmethod
    def var(p: Optional[int] = None) -> "UniPoly":
        return UniPoly([0, 1], p)

    def ring_const(self, c) -> "UniPoly":
        return UniPoly([c], self.p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coeff(self):
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UniPoly)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, tuple(self.coeffs)))

    def _check(self, other: "UniPoly"):
        if self.p != other.p:
            raise ValueError(f"mixed coefficient rings: {self.p} vs {other.p}")

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] + other[i] for i in range(n)], self.p)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] - other[i] for i in range(n)], self.p)

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs], self.p)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        if self.is_zero or other.is_zero:
            return UniPoly([], self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out, self.p)

    def scale(self, c) -> "UniPoly":
        return UniPoly([a * c for a in self.coeffs], self.p)

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly.const(1, self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """self(inner) by Horner over the polynomial ring."""
        self._check(inner)
        acc = UniPoly([], self.p)
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly.const(c, self.p)
        return acc

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
            if self.p is not None:
                acc %= self.p
        return acc

    def reduce_mod(self, p: int) -> "UniPoly":
        if self.p is not None:
            raise ValueError("already over a prime field")
        out = []
        for c in self.coeffs:
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise ValueError("denominator not invertible mod p")
                c = c.numerator * pow(c.denominator, -1, p)
            out.append(c % p)
        return UniPoly(out, p)

    def render(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            if self.p is None:
                neg = c < 0
                mag = -c if neg else c
            else:
                neg = False
                mag = c
            factors = []
            if mag != 1 or e == 0:
                factors.append(str(mag))
            if e == 1:
                factors.append(var)
            elif e > 1:
                factors.append(f"{var}^{e}")
            body = "*".join(factors)
            if not pieces:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        ring = "QQ" if self.p is None else f"F{self.p}"
        return f"UniPoly[{ring}]({self.render()})"


def chebyshev_v(n: int, p: Optional[int] = None) -> UniPoly:
    """V_n with V_0 = 0, V_1 = 1, V_{n+1} = z*V_n - V_{n-1}; V_{-n} = -V_n."""
    if n < 0:
        return -chebyshev_v(-n, p)
    a, b = UniPoly([], p), UniPoly([1], p)  # V_0 = 0, V_1 = 1
    if n == 0:
        return a
    z = UniPoly.var(p)
    for _ in range(n - 1):
        a, b = b, z * b - a
    return b


def dickson(n: int, p: Optional[int] = None) -> UniPoly:
    """D_n with D_0 = 2, D_1 = z, D_{n+1} = z*D_n - D_{n-1}; D_{-n} = D_n."""
    n = abs(n)
    a, b = UniPoly([2], p), UniPoly([0, 1], p)  # D_0, D_1
    if n == 0:
        return a
    z = UniPoly.var(p)
    for _ in range(n - 1):
        a, b = b, z * b - a
    return b


def dickson_apply(n: int, g):
    """D_n(g) for any ring element with +, -, * and ring_const."""
    n = abs(n)
    two = g.ring_const(2)
    if n == 0:
        return two
    a, b = two, g
    for _ in range(n - 1):
        a, b = b, g * b - a
    return b


def is_permutation_all_extensions(h: UniPoly):
    """Test whether h permutes F_{p^n} for every n, with a shape witness.

    That happens exactly when h = a*z^(p^k) + b with a != 0, k >= 0.
    Returns (True, (a, k, b)) or (False, None).
    """
    if h.p is None:
        raise ValueError("needs a prime-field polynomial")
    if h.is_zero:
        raise ValueError("zero polynomial")
    d = h.degree
    if d < 1:
        return False, None
    k = 0
    m = d
    while m % h.p == 0:
        m //= h.p
        k += 1
    if m != 1:
        return False, None
    if any(c and i not in (0, d) for i, c in enumerate(h.coeffs)):
        return False, None
    return True, (h.coeffs[d], k, h[0])
