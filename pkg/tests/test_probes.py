import pytest

from tracelab.gf import field
from tracelab.probes import count_level_set, level_set_counts
from tracelab.trace import trace_poly
from tracelab.tripoly import TriPoly
from tracelab.words import parse

from _oracles import naive_level_counts

U = TriPoly.var("u", None)
S = TriPoly.var("s", None)
T = TriPoly.var("t", None)


class TestLevelSetCounts:
    @pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9])
    def test_linear_polynomial_is_uniform(self, q):
        counts = level_set_counts(U, q)
        assert list(counts) == [q * q] * q

    @pytest.mark.parametrize("q", [3, 5, 7, 8, 9])
    def test_total_is_cube(self, q):
        f = trace_poly(parse("xyXY")).f
        counts = level_set_counts(f, q)
        assert counts.sum() == q**3

    @pytest.mark.parametrize("q", [3, 4, 5, 7])
    def test_matches_scalar_oracle(self, q):
        for w in ("xy", "xyxy", "xyXY", "xxyXY"):
            f = trace_poly(parse(w)).f
            got = list(level_set_counts(f, q))
            assert got == naive_level_counts(f, q)

    def test_accepts_field_object(self):
        F = field(5)
        f = trace_poly(parse("xyXY")).f
        assert list(level_set_counts(f, F)) == list(level_set_counts(f, 5))

    def test_constant_polynomial(self):
        counts = level_set_counts(TriPoly.const(3, None), 5)
        assert counts[3] == 125
        assert counts.sum() == 125

    def test_characteristic_mismatch(self):
        f = trace_poly(parse("xy")).f.reduce_mod(3)
        with pytest.raises(ValueError):
            level_set_counts(f, 5)


class TestCountLevelSet:
    @pytest.mark.parametrize("q", [3, 5, 9])
    def test_single_level(self, q):
        f = trace_poly(parse("xyxy")).f
        counts = level_set_counts(f, q)
        for z in range(q):
            assert count_level_set(f, q, z) == counts[z]

    def test_out_of_range_level(self):
        with pytest.raises(ValueError):
            count_level_set(U, 5, 5)
