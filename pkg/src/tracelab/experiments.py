"""End-to-end verification runs tying classifier verdicts to fiber data.

Three entry points: per-prime theorem runs (verdict vs. observed epsilon and
omitted-value fractions along a tower q = p^n), measure-preservation bound
sheets, and the genericity scan over the canonical-word ensemble.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .decompose import (
    COMPOSITE_NOT_SPECIAL,
    NONCOMPOSITE_P,
    NONCOMPOSITE_Q,
    SPECIAL_P,
    PrimeVerdict,
    classify_p,
    classify_rational,
)
from .sl2 import (
    MAX_FIBER_Q,
    equidist_epsilon,
    fiber_distribution,
    fraction_le_inv_sqrt,
    image_analysis,
)
from .trace import TraceEngine, trace_poly
from .words import Word, enumerate_words, proper_power_root, sample_words

EXHAUSTIVE_SCAN_LIMIT = 14


@dataclass(frozen=True)
class TheoremRun:
    word: Word
    p: int
    q_list: tuple[int, ...]
    verdict: PrimeVerdict
    epsilons: tuple[Fraction, ...]
    omitted_fractions: tuple[Fraction, ...]
    consistent: bool
    note: str

    def to_csv(self) -> str:
        lines = ["word,p,q,verdict,epsilon,omitted_fraction,consistent"]
        for q, eps, om in zip(self.q_list, self.epsilons, self.omitted_fractions):
            lines.append(
                f"{self.word},{self.p},{q},{self.verdict.verdict},"
                f"{eps},{om},{str(self.consistent).lower()}"
            )
        return "\n".join(lines) + "\n"


def verify_theorem_p_equi(
    w: Word,
    p: int,
    q_list: Sequence[int],
    engine: Optional[TraceEngine] = None,
) -> TheoremRun:
    """Classify w at p and check the verdict against fibers along q = p^n.

    A noncomposite-or-special verdict must come with a nonincreasing epsilon
    trend across the q list (endpoint comparison); a composite-not-special
    verdict must come with omitted-element fractions at least
    (q-1)/(d1*q) - 2/q where d1 is the outer degree of the witness, and can
    never coexist with epsilon below the floor 1/(2*d1).
    """
    if not q_list:
        raise ValueError("q_list must be nonempty")
    qs = tuple(q_list)
    for q in qs:
        t = q
        while t % p == 0:
            t //= p
        if t != 1 or q < p:
            raise ValueError(f"{q} is not a power of {p}")
        if q > MAX_FIBER_Q:
            raise ValueError(f"resource guard exceeded: q = {q} > {MAX_FIBER_Q}")
    verdict = classify_p(w, p, engine=engine)
    epsilons: list[Fraction] = []
    omitted: list[Fraction] = []
    for q in qs:
        report = fiber_distribution(w, q)
        epsilons.append(equidist_epsilon(report, engine=engine).epsilon)
        omitted.append(
            image_analysis(w, q, sl_report=report).omitted_element_fraction
        )
    if verdict.verdict in (NONCOMPOSITE_P, SPECIAL_P):
        consistent = epsilons[-1] <= epsilons[0]
        note = (
            "epsilon trend nonincreasing"
            if consistent
            else "epsilon increased across the q list"
        )
    else:
        d1 = verdict.witness.outer.degree
        floor = Fraction(1, 2 * d1)
        for q, eps in zip(qs, epsilons):
            if eps < floor:
                raise RuntimeError(
                    f"composite-not-special at p={p} but epsilon {eps} < {floor} "
                    f"at q={q}: verdict and fibers contradict each other"
                )
        checks = [
            om >= Fraction(q - 1, d1 * q) - Fraction(2, q)
            for q, om in zip(qs, omitted)
        ]
        consistent = all(checks)
        note = (
            f"omitted fractions meet the (q-1)/{d1}q - 2/q floor"
            if consistent
            else "omitted fraction fell below the floor"
        )
    return TheoremRun(
        word=w,
        p=p,
        q_list=qs,
        verdict=verdict,
        epsilons=tuple(epsilons),
        omitted_fractions=tuple(omitted),
        consistent=consistent,
        note=note,
    )


@dataclass(frozen=True)
class MeasureSheet:
    word: Word
    q: int
    degree: int
    q0: int
    theoretical_epsilon: float
    theoretical_active: bool
    observed_epsilon: Optional[Fraction]
    consistent: Optional[bool]
    note: str

    def to_text(self) -> str:
        lines = [
            f"word: {self.word}",
            f"q: {self.q}   degree d: {self.degree}   q0: {self.q0}",
            f"theoretical epsilon 3(100d^4+1)q^(-1/2): {self.theoretical_epsilon!r}"
            + ("" if self.theoretical_active else "   (not active at this q)"),
        ]
        if self.observed_epsilon is None:
            lines.append("observed epsilon: enumeration out of range at this q")
        else:
            lines.append(f"observed epsilon: {self.observed_epsilon}")
        lines.append(f"note: {self.note}")
        return "\n".join(lines) + "\n"


def measure_preserving_report(
    w: Word, q: int, engine: Optional[TraceEngine] = None
) -> MeasureSheet:
    """Theoretical measure-preservation bound next to the observed epsilon.

    The theoretical row only binds for q > q0 = 4(50d^4)^2, which no
    enumerable q reaches; it is still printed for reference.  The observed
    row is filled whenever q is within the enumeration guard.
    """
    d = trace_poly(w, engine=engine).f.total_degree()
    q0 = 4 * (50 * d**4) ** 2
    b_const = 100 * d**4 + 1
    theoretical = 3 * b_const / math.sqrt(q)
    active = q > q0
    observed: Optional[Fraction] = None
    consistent: Optional[bool] = None
    if q <= MAX_FIBER_Q:
        observed = equidist_epsilon(fiber_distribution(w, q), engine=engine).epsilon
        if active:
            consistent = fraction_le_inv_sqrt(observed, b_const, q)
    if active:
        note = "theoretical bound active; consistency checked"
    else:
        note = "not active at this q (q <= q0); observed row informative only"
    return MeasureSheet(
        word=w,
        q=q,
        degree=d,
        q0=q0,
        theoretical_epsilon=theoretical,
        theoretical_active=active,
        observed_epsilon=observed,
        consistent=consistent,
        note=note,
    )


@dataclass(frozen=True)
class GenericityReport:
    n: int
    ensemble: str
    mode: str
    total: int
    proper_powers: int
    certified: int
    mu_power: Fraction
    mu_certified: Fraction
    mu_nonpower: Fraction


def genericity_csv(reports: Sequence[GenericityReport]) -> str:
    lines = ["n,total,proper_powers,certified,mu_power,mu_certified"]
    for r in reports:
        lines.append(
            f"{r.n},{r.total},{r.proper_powers},{r.certified},"
            f"{float(r.mu_power)!r},{float(r.mu_certified)!r}"
        )
    return "\n".join(lines) + "\n"


def _scan_counts(
    words: Iterator[Word], engine: TraceEngine, certify: bool
) -> Iterator[tuple[int, bool, bool]]:
    for w in words:
        is_power = proper_power_root(w)[1] >= 2
        if certify:
            cls, _ = classify_rational(w, engine=engine)
            certified = cls == NONCOMPOSITE_Q
        else:
            certified = False
        yield w.length, is_power, certified


def genericity_scan(
    n_max: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    constraint: str = "any",
    engine: Optional[TraceEngine] = None,
    certify: bool = True,
) -> list[GenericityReport]:
    """Fractions of proper powers and certified-noncomposite words per length.

    Exhaustive mode walks every canonical word of length <= n and reports
    exact cumulative counts; sampled mode draws ``samples`` words uniformly
    from the length <= n candidate set per n.  ``certify=False`` skips the
    classifier column (it stays zero) when only power statistics are needed.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exhaustive" and n_max > EXHAUSTIVE_SCAN_LIMIT:
        raise ValueError(
            f"exhaustive scan capped at n_max = {EXHAUSTIVE_SCAN_LIMIT}"
        )
    eng = engine if engine is not None else TraceEngine()
    reports: list[GenericityReport] = []
    ensemble = f"canonical words, constraint={constraint}"
    if mode == "exhaustive":
        by_len: dict[int, list[int]] = {}
        stream = enumerate_words(n_max, constraint == "prime-complexity")
        for length, is_power, certified in _scan_counts(stream, eng, certify):
            cell = by_len.setdefault(length, [0, 0, 0])
            cell[0] += 1
            cell[1] += int(is_power)
            cell[2] += int(certified)
        total = powers = certified_n = 0
        for n in sorted(by_len):
            cell = by_len[n]
            total += cell[0]
            powers += cell[1]
            certified_n += cell[2]
            reports.append(
                GenericityReport(
                    n=n,
                    ensemble=ensemble,
                    mode="exhaustive",
                    total=total,
                    proper_powers=powers,
                    certified=certified_n,
                    mu_power=Fraction(powers, total),
                    mu_certified=Fraction(certified_n, total),
                    mu_nonpower=1 - Fraction(powers, total),
                )
            )
        return reports
    min_n = 4 if constraint == "prime-complexity" else 2
    for n in range(min_n, n_max + 1):
        stream = sample_words(n, samples, seed=seed + n, constraint=constraint)
        total = powers = certified_n = 0
        for _length, is_power, certified in _scan_counts(stream, eng, certify):
            total += 1
            powers += int(is_power)
            certified_n += int(certified)
        reports.append(
            GenericityReport(
                n=n,
                ensemble=ensemble,
                mode=f"sampled({samples},seed={seed})",
                total=total,
                proper_powers=powers,
                certified=certified_n,
                mu_power=Fraction(powers, total),
                mu_certified=Fraction(certified_n, total),
                mu_nonpower=1 - Fraction(powers, total),
            )
        )
    return reports
