import random

import pytest
from hypothesis import given, settings, strategies as st

from tracelab.gf import field
from tracelab.trace import (
    TraceEngine,
    eval_trace_direct,
    syllable_polys,
    trace_poly,
    u_expansion,
)
from tracelab.tripoly import TriPoly
from tracelab.unipoly import chebyshev_v, dickson, dickson_apply
from tracelab.words import Word, enumerate_words, parse, sample_words, stats

from _oracles import (
    LAU_S,
    LAU_X,
    LAU_XINV,
    lau_add,
    lau_from_unipoly,
    lau_mul,
    lau_pow,
    lau_scale,
)

S = TriPoly.var("s", None)
U = TriPoly.var("u", None)
T = TriPoly.var("t", None)


def C(c):
    return TriPoly.const(c, None)


def syllable_words(max_r=4, hi=3):
    exps = st.integers(-hi, hi).filter(lambda n: n != 0)
    return st.lists(st.tuples(exps, exps), min_size=1, max_size=max_r).map(
        Word.from_syllables
    )


CLOSED_FORMS = {
    # complexity one and two, plus the cubic with three distinct syllables
    "xy": U,
    "xY": S * T - U,
    "xxy": S * U - T,
    "xyxY": -(U**2) + S * T * U - T**2 + C(2),
    "xyXY": U**2 - S * T * U + S**2 + T**2 - C(2),
    "xyXy": -(U**2) + S * T * U - S**2 + C(2),
    "xyxYXY": -(U**3) + S * T * U**2 + U * (C(3) - T**2 - S**2) + S * T,
}


class TestClosedForms:
    @pytest.mark.parametrize("text,expect", CLOSED_FORMS.items())
    def test_symbolic_equality(self, text, expect, engine):
        assert trace_poly(parse(text), engine=engine).f == expect

    def test_render_matches_display_convention(self, engine):
        f = trace_poly(parse("xyXY"), engine=engine).f
        assert f.render() == "u^2 - s*t*u + s^2 + t^2 - 2"
        assert trace_poly(parse("xY"), engine=engine).f.render() == "-u + s*t"

    def test_cubic_under_syllable_inversion(self, engine):
        # replacing y by y^-1 in the first syllable acts as u -> st - u
        a4 = CLOSED_FORMS["xyxYXY"]
        a6 = trace_poly(parse("xyXyxY"), engine=engine).f
        assert a6 == a4.substitute(S, S * T - U, T)

    def test_relabeling_invariance(self, engine):
        # xyx^-1y^-1x^-1y is a cyclic rotation of the mirrored cubic word
        assert trace_poly(parse("xyXYXy"), engine=engine).f == CLOSED_FORMS["xyxYXY"]


class TestDegenerate:
    def test_single_generator_powers(self, engine):
        assert trace_poly(parse("x"), engine=engine).f == S
        assert trace_poly(parse("xxx"), engine=engine).f == S**3 - S.scale(3)
        assert trace_poly(parse("yy"), engine=engine).f == T**2 - C(2)
        assert trace_poly(parse(""), engine=engine).f == C(2)

    def test_conjugates_of_degenerate(self, engine):
        assert trace_poly(parse("yxY"), engine=engine).f == S


class TestInvariance:
    @given(syllable_words())
    def test_inverse_invariance(self, w):
        assert trace_poly(w).f == trace_poly(w.inverse()).f

    @given(syllable_words(), st.integers(0, 5))
    def test_cyclic_invariance(self, w, shift):
        syl = list(w.syllables)
        k = shift % len(syl)
        rotated = Word.from_syllables(syl[k:] + syl[:k])
        assert trace_poly(w).f == trace_poly(rotated).f

    @given(st.text(alphabet="xXyY", min_size=1, max_size=10))
    def test_conjugation_invariance(self, text):
        w = parse(text)
        c = parse("xy")
        assert trace_poly(w).f == trace_poly(c * w * c.inverse()).f


class TestOracleAgreement:
    def test_exhaustive_small_words_small_field(self, engine):
        F = field(3)
        for w in enumerate_words(6):
            f = trace_poly(w, engine=engine).f.reduce_mod(3)
            for s in range(3):
                for u in range(3):
                    for t in range(3):
                        assert f.evaluate(F, s, u, t) == eval_trace_direct(w, F, s, u, t)

    def test_random_words_larger_field(self, engine):
        F = field(25)
        rng = random.Random(4)
        for w in sample_words(16, 40, seed=11):
            f = trace_poly(w, engine=engine).f.reduce_mod(5)
            for _ in range(8):
                s, u, t = (rng.randrange(25) for _ in range(3))
                assert f.evaluate(F, s, u, t) == eval_trace_direct(w, F, s, u, t)


class TestUStructure:
    @given(syllable_words())
    def test_u_degree_is_complexity(self, w):
        res = trace_poly(w)
        assert res.u_degree == stats(w).r
        assert res.f.deg("u") == stats(w).r

    @given(syllable_words(max_r=3))
    def test_leading_coefficient_factorizes(self, w):
        # leading u-coefficient is the product of signed Chebyshev factors
        res = trace_poly(w)
        lead = res.leading
        expect = C(1)
        for a, b in w.syllables:
            sa = chebyshev_v(abs(a), None)
            sb = chebyshev_v(abs(b), None)
            fa = TriPoly.zero()
            for i, cc in enumerate(sa.coeffs):
                fa = fa + (S**i).scale(cc)
            fb = TriPoly.zero()
            for i, cc in enumerate(sb.coeffs):
                fb = fb + (T**i).scale(cc)
            if a < 0:
                fa = -fa
            if b < 0:
                fb = -fb
            expect = expect * fa * fb
        assert lead == expect

    def test_u_expansion_matches_u_coefficients(self, engine):
        f = trace_poly(parse("xyxYXY"), engine=engine).f
        blocks = u_expansion(f)
        assert TriPoly.from_u_coefficients(blocks) == f

    @given(syllable_words(max_r=3))
    def test_constant_block_degree_bound(self, w):
        # for single-letter syllables with leading syllable xy (so that u is
        # the trace of the first syllable), f(s, 0, t) has degree below 2r
        syl = w.syllables
        if syl[0] == (1, 1) and all(abs(a) == 1 and abs(b) == 1 for a, b in syl):
            r = stats(w).r
            g = u_expansion(trace_poly(w).f)[0]
            assert g.total_degree() < 2 * r


class TestSyllablePolys:
    @given(
        st.integers(-6, 6).filter(lambda n: n != 0),
        st.integers(-6, 6).filter(lambda n: n != 0),
    )
    def test_linear_expansion_of_single_syllable(self, a, b):
        sp = syllable_polys(a, b)
        w = Word.from_syllables([(a, b)])
        assert trace_poly(w).f == sp.g * U + sp.h
        assert sp.g.deg("u") <= 0 and sp.h.deg("u") <= 0

    @given(
        st.integers(-6, 6).filter(lambda n: n != 0),
        st.integers(-6, 6).filter(lambda n: n != 0),
    )
    def test_leading_block_laurent_identity(self, a, b):
        # g_{a,b}(s,s) * (x - 1/x)^2 = +/- (x^a - x^-a)(x^b - x^-b) at s = x + 1/x
        sp = syllable_polys(a, b)
        gss = sp.g.substitute(S, TriPoly.zero(), S)  # collapse t to s
        # evaluate in the Laurent ring: each s^i becomes (x + 1/x)^i
        lhs = {}
        for (i, _, k), c in gss.terms():
            lhs = lau_add(lhs, lau_scale(lau_pow(LAU_S, i + k), c))
        diff_sq = lau_pow(lau_add(LAU_X, lau_scale(LAU_XINV, -1)), 2)
        lhs = lau_mul(lhs, diff_sq)
        xa = lau_add({a: 1}, {-a: -1})
        xb = lau_add({b: 1}, {-b: -1})
        rhs = lau_mul(xa, xb)
        assert lhs in (rhs, lau_scale(rhs, -1))


class TestPowerRule:
    @given(v=syllable_words(max_r=2, hi=2), k=st.integers(2, 4))
    @settings(max_examples=30)
    def test_shortcut_agrees_with_plain_expansion(self, engine, plain_engine, v, k):
        w = v**k
        assert trace_poly(w, engine=engine).f == trace_poly(w, engine=plain_engine).f

    @given(v=syllable_words(max_r=2, hi=2), k=st.integers(2, 5))
    @settings(max_examples=30)
    def test_power_is_dickson_of_base(self, plain_engine, v, k):
        # non-circular: both sides computed without the power shortcut
        fv = trace_poly(v, engine=plain_engine).f
        fw = trace_poly(v**k, engine=plain_engine).f
        assert fw == dickson_apply(k, fv)


class TestSpecializations:
    @given(syllable_words(max_r=3, hi=2))
    @settings(max_examples=40)
    def test_four_dickson_specializations(self, w):
        st_ = stats(w)
        f = trace_poly(w).f
        cases = [
            (S, S, C(2), st_.A),  # y = x
            (C(2), T, T, st_.B),  # x = 1
            (S, C(2), S, st_.A - st_.B),  # y = x^-1
            (S, S**2 - C(2), S, st_.A + st_.B),  # y = x^2 collapses u
        ]
        for s_val, u_val, t_val, idx in cases:
            got = f.substitute(s_val, u_val, t_val)
            var = s_val if not s_val.is_constant else t_val
            assert got == dickson_apply(idx, var)


class TestEngineBehavior:
    def test_memo_reuse_is_consistent(self):
        eng = TraceEngine()
        w = parse("xxyXYxyy")
        first = trace_poly(w, engine=eng).f
        second = trace_poly(w, engine=eng).f
        assert first == second
        fresh = trace_poly(w, engine=TraceEngine()).f
        assert first == fresh

    def test_result_fields(self, engine):
        res = trace_poly(parse("xxyXY"), engine=engine)
        assert res.word == parse("xxyXY")
        assert res.u_degree == 2
        assert res.leading == res.f.u_coefficients()[-1]
