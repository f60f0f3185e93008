from fractions import Fraction

import pytest

from tracelab.decompose import (
    COMPOSITE_NOT_SPECIAL,
    NONCOMPOSITE_P,
    SPECIAL_P,
)
from tracelab.experiments import (
    EXHAUSTIVE_SCAN_LIMIT,
    genericity_csv,
    genericity_scan,
    measure_preserving_report,
    verify_theorem_p_equi,
)
from tracelab.words import parse, proper_power_root

from _oracles import canonical_strings, string_is_proper_power


class TestTheoremRuns:
    def test_commutator_is_p_equidistributed(self):
        run = verify_theorem_p_equi(parse("xyXY"), 5, [5, 25])
        assert run.verdict.verdict == NONCOMPOSITE_P
        assert run.consistent
        assert all(e > 0 for e in run.epsilons)
        assert run.epsilons[-1] < run.epsilons[0]

    def test_square_word_omits_traces(self):
        run = verify_theorem_p_equi(parse("xyxy"), 3, [3, 9, 27])
        assert run.verdict.verdict == COMPOSITE_NOT_SPECIAL
        assert run.consistent
        d1 = run.verdict.witness.outer.degree
        assert d1 == 2
        for q, frac in zip(run.q_list, run.omitted_fractions):
            assert frac >= Fraction(q - 1, d1 * q) - Fraction(2, q)

    def test_cube_word_special_at_three(self):
        run = verify_theorem_p_equi(parse("xy") ** 3, 3, [3, 9])
        assert run.verdict.verdict == SPECIAL_P
        assert run.consistent
        assert run.epsilons[-1] <= run.epsilons[0]

    def test_rejects_mismatched_characteristic(self):
        with pytest.raises(ValueError):
            verify_theorem_p_equi(parse("xy"), 5, [5, 9])

    def test_rejects_oversized_field(self):
        with pytest.raises(ValueError):
            verify_theorem_p_equi(parse("xy"), 3, [3, 243])

    def test_csv_schema(self):
        run = verify_theorem_p_equi(parse("xy"), 5, [5])
        lines = run.to_csv().strip().splitlines()
        assert lines[0] == "word,p,q,verdict,epsilon,omitted_fraction,consistent"
        assert lines[1].startswith("xy,5,5,")
        assert lines[1].endswith(",true")


class TestMeasureSheets:
    def test_symbolic_row_above_threshold(self):
        q = 10**9 + 7
        ms = measure_preserving_report(parse("xyXY"), q)
        assert ms.theoretical_active
        assert ms.observed_epsilon is None
        assert ms.theoretical_epsilon == pytest.approx(3 * 8101 * q**-0.5)

    def test_small_q_row_is_informative_only(self):
        ms = measure_preserving_report(parse("xyXY"), 9)
        assert not ms.theoretical_active  # 9 < q0
        assert ms.observed_epsilon == Fraction(13, 36)
        assert ms.consistent is None
        assert "(not active at this q)" in ms.to_text()

    def test_uniform_word_observed_zero(self):
        ms = measure_preserving_report(parse("xy"), 7)
        assert ms.observed_epsilon == 0


class TestGenericity:
    def test_exhaustive_counts_match_string_oracle(self):
        reports = genericity_scan(8, mode="exhaustive", certify=False)
        total = 0
        powers = 0
        by_n = {}
        for n in range(2, 9):
            strings = canonical_strings(n)
            total += len(strings)
            powers += sum(string_is_proper_power(t) for t in strings)
            by_n[n] = (total, powers)
        for rep in reports:
            assert (rep.total, rep.proper_powers) == by_n[rep.n]
            assert rep.mu_power == Fraction(rep.proper_powers, rep.total)

    def test_certified_column(self):
        reports = genericity_scan(6, mode="exhaustive", certify=True)
        last = reports[-1]
        assert last.total == 364
        assert last.proper_powers == 16
        # rational noncompositeness implies not a proper power
        assert last.certified + last.proper_powers <= last.total
        assert last.mu_certified == Fraction(last.certified, last.total)

    def test_power_words_never_certified(self):
        # certified words are exactly the rationally noncomposite ones, and
        # every proper power is rationally composite
        reports = genericity_scan(6, mode="exhaustive", certify=True)
        assert all(r.certified + r.proper_powers <= r.total for r in reports)

    def test_sampled_mode_reproducible(self):
        a = genericity_scan(8, mode="sampled", samples=200, seed=5, certify=False)
        b = genericity_scan(8, mode="sampled", samples=200, seed=5, certify=False)
        assert [(r.total, r.proper_powers) for r in a] == [
            (r.total, r.proper_powers) for r in b
        ]

    def test_sampled_tracks_exhaustive(self):
        ex = {r.n: r for r in genericity_scan(8, mode="exhaustive", certify=False)}
        sm = genericity_scan(8, mode="sampled", samples=400, seed=9, certify=False)
        for rep in sm:
            mu_true = float(ex[rep.n].mu_power)
            mu_obs = float(rep.mu_power)
            sigma = (mu_true * (1 - mu_true) / rep.total) ** 0.5
            assert abs(mu_obs - mu_true) <= max(3 * sigma, 0.02)

    def test_exhaustive_cap(self):
        assert EXHAUSTIVE_SCAN_LIMIT == 14
        with pytest.raises(ValueError):
            genericity_scan(15, mode="exhaustive")

    def test_csv_schema(self):
        reports = genericity_scan(4, mode="exhaustive", certify=False)
        lines = genericity_csv(reports).strip().splitlines()
        assert lines[0] == "n,total,proper_powers,certified,mu_power,mu_certified"
        assert len(lines) == len(reports) + 1
