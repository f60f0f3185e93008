"""Reduced words in the free group on two generators x and y.

A word is stored as a tuple of blocks ``(gen, exp)`` with ``gen`` 0 for x
and 1 for y, nonzero integer exponents, and no two adjacent blocks on the
same generator (free reduction).  The canonical shape used everywhere else
in the package starts with an x-block and ends with a y-block, so the word
factors into syllables x^a_i y^b_i.  Words that cannot be brought to that
shape by conjugation -- the empty word and pure powers x^a, y^b -- are
*degenerate*; they are legal values, and operations that need complexity
r >= 1 reject them explicitly.

Text syntax: letters x, y, X, Y (capitals are inverses), each optionally
followed by ``^`` and a signed decimal exponent; whitespace is ignored.
Canonical rendering is lowercase with caret exponents, e.g. ``x^2y^-1xy``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

X = 0
Y = 1

_LETTERS = {"x": (X, 1), "X": (X, -1), "y": (Y, 1), "Y": (Y, -1)}
_NAMES = {X: "x", Y: "y"}

Block = Tuple[int, int]


class WordSyntaxError(ValueError):
    """Malformed word text: bad character, malformed or zero exponent."""


class DegenerateWordError(ValueError):
    """The operation needs a non-degenerate (complexity >= 1) word."""


def _reduce(blocks: Sequence[Block]) -> Tuple[Block, ...]:
    out: list[Block] = []
    for gen, exp in blocks:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; immutable and usable as a dict key."""

    blocks: Tuple[Block, ...] = ()

    @staticmethod
    def from_blocks(blocks: Sequence[Block]) -> "Word":
        return Word(_reduce(blocks))

    @staticmethod
    def from_syllables(syllables: Sequence[Tuple[int, int]]) -> "Word":
        blocks: list[Block] = []
        for a, b in syllables:
            blocks.append((X, a))
            blocks.append((Y, b))
        return Word(_reduce(blocks))

    @staticmethod
    def identity() -> "Word":
        return Word(())

    # -- basic structure -------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.blocks

    @property
    def is_degenerate(self) -> bool:
        return len(self.blocks) <= 1

    @property
    def is_canonical(self) -> bool:
        return (
            bool(self.blocks)
            and self.blocks[0][0] == X
            and self.blocks[-1][0] == Y
        )

    @property
    def syllables(self) -> Tuple[Tuple[int, int], ...]:
        if not self.is_canonical:
            raise DegenerateWordError(f"word {self!r} is not in canonical form")
        it = iter(self.blocks)
        return tuple((a, b) for (_, a), (_, b) in zip(it, it))

    @property
    def complexity(self) -> int:
        return len(self.syllables)

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.blocks)

    # -- group operations ------------------------------------------------

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.blocks)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce(self.blocks + other.blocks))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        out = Word.identity()
        for _ in range(k):
            out = out * self
        return out

    def render(self) -> str:
        parts = []
        for gen, exp in self.blocks:
            name = _NAMES[gen]
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.render() or "1"

    def __repr__(self) -> str:
        return f"Word({self.render()!r})"


def parse(text: str) -> Word:
    """Parse word text into a freely reduced :class:`Word`.

    Cyclically unreduced input is preserved; use :func:`canonicalize` for
    the conjugation-normalized form.
    """
    blocks: list[Block] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch not in _LETTERS:
            raise WordSyntaxError(f"invalid character {ch!r} at position {i}")
        gen, sign = _LETTERS[ch]
        i += 1
        exp = 1
        if i < n and text[i] == "^":
            i += 1
            j = i
            if j < n and text[j] == "-":
                j += 1
            k = j
            while k < n and text[k].isdigit():
                k += 1
            if k == j:
                raise WordSyntaxError(f"malformed exponent at position {i}")
            exp = int(text[i:k])
            if exp == 0:
                raise WordSyntaxError(f"zero exponent at position {i}")
            i = k
        blocks.append((gen, sign * exp))
    return Word(_reduce(blocks))


@dataclass(frozen=True)
class CanonicalizeRecord:
    """How the canonical word was obtained: original = c * canonical * c^-1."""

    conjugator: Word
    degenerate: bool


def canonicalize(w: Word) -> Tuple[Word, CanonicalizeRecord]:
    """Cyclically reduce and rotate so the word starts with an x-power.

    Pure powers of a single generator come back flagged degenerate; the
    empty word is an error.  Rotation and cyclic reduction are conjugations,
    so every trace-level quantity is unchanged.
    """
    if w.is_empty:
        raise DegenerateWordError("cannot canonicalize the empty word")
    blocks = list(w.blocks)
    conj: list[Block] = []
    while len(blocks) >= 2 and blocks[0][0] == blocks[-1][0]:
        g, a = blocks[0]
        _, b = blocks[-1]
        conj.append((g, a))
        mid = blocks[1:-1]
        if a + b:
            mid.append((g, a + b))
        blocks = list(_reduce(mid))
        if not blocks:
            break
    if len(blocks) >= 2 and blocks[0][0] == Y:
        g, a = blocks[0]
        conj.append((g, a))
        blocks = blocks[1:] + [(g, a)]
    out = Word(tuple(blocks))
    return out, CanonicalizeRecord(
        conjugator=Word(_reduce(conj)), degenerate=out.is_degenerate
    )


@dataclass(frozen=True)
class WordStats:
    r: int
    A: int
    B: int
    Abar: int
    Bbar: int
    length: int


def stats(w: Word) -> WordStats:
    sylls = w.syllables  # raises on non-canonical input
    return WordStats(
        r=len(sylls),
        A=sum(a for a, _ in sylls),
        B=sum(b for _, b in sylls),
        Abar=sum(abs(a) for a, _ in sylls),
        Bbar=sum(abs(b) for _, b in sylls),
        length=w.length,
    )


def similarity_signature(w: Word):
    """(r, sorted |a_i| multiset, sorted |b_i| multiset)."""
    sylls = w.syllables
    return (
        len(sylls),
        tuple(sorted(abs(a) for a, _ in sylls)),
        tuple(sorted(abs(b) for _, b in sylls)),
    )


def trace_similar(w: Word, v: Word) -> bool:
    """Equal complexity with matching multisets of absolute exponents."""
    return similarity_signature(w) == similarity_signature(v)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def proper_power_root(w: Word) -> Tuple[Word, int]:
    """Maximal (v, k) with w = v^k in the free group; k = 1 if aperiodic."""
    sylls = w.syllables
    r = len(sylls)
    for k in sorted((d for d in _divisors(r) if d >= 2), reverse=True):
        m = r // k
        if sylls == sylls[:m] * k:
            return Word.from_syllables(sylls[:m]), k
    return w, 1


@dataclass(frozen=True)
class ConvenientForm:
    word: Word
    swapped_xy: bool
    found_repeat: bool


def _swap_generators(w: Word) -> Tuple[Tuple[int, int], ...]:
    # exchange the roles of x and y, then rotate back to x-start
    swapped = tuple((1 - g, e) for g, e in w.blocks)
    rotated = swapped[1:] + swapped[:1]
    return Word(rotated).syllables


def convenient_form(w: Word) -> ConvenientForm:
    """Expose a repeated syllable at the front when rotations allow it.

    The moves are cyclic permutation of syllables and (optionally)
    exchanging the roles of x and y; the trace polynomial of the result is
    that of ``w`` up to the s <-> t swap.  All syllables must share one
    magnitude shape x^{+-a} y^{+-b}.
    """
    sylls = w.syllables
    mags = {(abs(a), abs(b)) for a, b in sylls}
    if len(mags) != 1:
        raise ValueError("syllable shapes not uniform")
    r = len(sylls)
    candidates = []
    for swapped, base in ((False, sylls), (True, _swap_generators(w))):
        for rot in range(r):
            rotated = base[rot:] + base[:rot]
            candidates.append((rotated, swapped))
    with_repeat = [c for c in candidates if c[0][0] in c[0][1:]]
    pool = with_repeat or candidates

    def key(cand):
        rotated, swapped = cand
        positive = rotated[0][0] > 0 and rotated[0][1] > 0
        return (positive, rotated, not swapped)

    best, swapped = max(pool, key=key)
    return ConvenientForm(
        word=Word.from_syllables(best),
        swapped_xy=swapped,
        found_repeat=bool(with_repeat),
    )


# -- enumeration and sampling ---------------------------------------------

def _compositions(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _signed(word_shape: Tuple[int, ...], signbits: int) -> Tuple[Tuple[int, int], ...]:
    vals = []
    for i, m in enumerate(word_shape):
        vals.append(-m if (signbits >> i) & 1 else m)
    it = iter(vals)
    return tuple(zip(it, it))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def enumerate_words(max_length: int, prime_complexity: bool = False) -> Iterator[Word]:
    """All canonical words with length <= max_length, in a fixed order."""
    for n in range(2, max_length + 1):
        for r in range(1, n // 2 + 1):
            if prime_complexity and not _is_prime(r):
                continue
            for shape in _compositions(n, 2 * r):
                for bits in range(1 << (2 * r)):
                    yield Word.from_syllables(_signed(shape, bits))


def _candidate_cells(max_length: int, prime_complexity: bool):
    """(n, r, count) cells of the candidate set, with exact counts."""
    cells = []
    for n in range(2, max_length + 1):
        for r in range(1, n // 2 + 1):
            if prime_complexity and not _is_prime(r):
                continue
            count = math.comb(n - 1, 2 * r - 1) * 4**r
            cells.append((n, r, count))
    return cells


def sample_words(
    max_length: int,
    count: Optional[int],
    seed: int = 0,
    constraint: str = "any",
) -> Iterator[Word]:
    """Deterministic stream of canonical words, uniform over the candidate set.

    The candidate set is every canonical word of length <= max_length
    (syllable exponent lists with the stated sign choices), optionally
    restricted to prime complexity.  ``count=None`` switches to exhaustive
    enumeration in a fixed order.
    """
    if max_length < 2:
        raise ValueError("max_length must be >= 2")
    if constraint not in ("any", "prime-complexity"):
        raise ValueError(f"unknown constraint {constraint!r}")
    prime = constraint == "prime-complexity"
    if prime and max_length < 4:
        raise ValueError("prime complexity needs length >= 4")
    if count is None:
        yield from enumerate_words(max_length, prime)
        return
    cells = _candidate_cells(max_length, prime)
    total = sum(c for _, _, c in cells)
    rng = random.Random(seed)
    for _ in range(count):
        idx = rng.randrange(total)
        for n, r, c in cells:
            if idx < c:
                break
            idx -= c
        cuts = sorted(rng.sample(range(1, n), 2 * r - 1))
        bounds = [0] + cuts + [n]
        shape = tuple(bounds[i + 1] - bounds[i] for i in range(2 * r))
        bits = rng.getrandbits(2 * r)
        yield Word.from_syllables(_signed(shape, bits))
