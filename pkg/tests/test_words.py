import pytest
from hypothesis import given, strategies as st

from tracelab.words import (
    DegenerateWordError,
    Word,
    WordSyntaxError,
    canonicalize,
    convenient_form,
    enumerate_words,
    parse,
    proper_power_root,
    sample_words,
    similarity_signature,
    stats,
    trace_similar,
)

from _oracles import canonical_strings, string_is_proper_power

# letter strategy for random words, possibly unreduced
letters = st.text(alphabet="xXyY", min_size=0, max_size=14)


def syllable_words(max_r=4, lo=-4, hi=4):
    exps = st.integers(lo, hi).filter(lambda n: n != 0)
    return st.lists(st.tuples(exps, exps), min_size=1, max_size=max_r).map(
        Word.from_syllables
    )


class TestParseRender:
    def test_parse_blocks(self):
        w = parse("xxyXY")
        assert w.blocks == ((0, 2), (1, 1), (0, -1), (1, -1))
        assert w.length == 5
        assert w.render() == "x^2yx^-1y^-1"

    def test_parse_empty_is_identity(self):
        assert parse("").is_empty
        assert parse("xX").is_empty
        assert parse("x y").blocks == parse("xy").blocks  # whitespace skipped

    def test_parse_free_reduction(self):
        assert parse("xyY") == parse("x")
        assert parse("xYyX").is_empty

    def test_invalid_characters(self):
        for bad in ("xz", "x2", "abc"):
            with pytest.raises(WordSyntaxError):
                parse(bad)

    @given(syllable_words())
    def test_syllable_round_trip(self, w):
        assert Word.from_syllables(w.syllables) == w


class TestGroupOps:
    @given(letters)
    def test_inverse_cancels(self, text):
        w = parse(text)
        assert (w * w.inverse()).is_empty
        assert (w.inverse() * w).is_empty

    @given(letters, st.integers(-3, 3))
    def test_pow_matches_repeated_product(self, text, k):
        w = parse(text)
        prod = parse("")
        base = w if k >= 0 else w.inverse()
        for _ in range(abs(k)):
            prod = prod * base
        assert w**k == prod

    def test_pow_negative(self):
        assert (parse("xy") ** -2) == parse("YXYX")


class TestCanonicalize:
    def test_cyclic_reduction(self):
        c, rec = canonicalize(parse("Yxy"))
        assert c == parse("x")
        assert rec.degenerate

    @given(letters.filter(lambda t: not parse(t).is_empty))
    def test_recomposition(self, text):
        w = parse(text)
        c, rec = canonicalize(w)
        assert rec.conjugator * c * rec.conjugator.inverse() == w

    def test_empty_word_rejected(self):
        with pytest.raises(DegenerateWordError):
            canonicalize(parse("yY"))

    @given(syllable_words())
    def test_canonical_words_are_fixed_points(self, w):
        c, rec = canonicalize(w)
        assert c == w
        assert rec.conjugator.is_empty
        assert not rec.degenerate

    def test_degenerate_flag_for_single_generator(self):
        c, rec = canonicalize(parse("xxx"))
        assert rec.degenerate
        c, rec = canonicalize(parse("yXY"))  # conjugate of x
        assert rec.degenerate


class TestStats:
    def test_commutator(self):
        st_ = stats(parse("xyXY"))
        assert (st_.r, st_.A, st_.B, st_.Abar, st_.Bbar) == (2, 0, 0, 2, 2)
        assert st_.length == 4

    def test_requires_canonical(self):
        with pytest.raises(DegenerateWordError):
            stats(parse("yx"))

    @given(syllable_words())
    def test_stats_match_syllables(self, w):
        st_ = stats(w)
        syl = w.syllables
        assert st_.r == len(syl)
        assert st_.A == sum(a for a, _ in syl)
        assert st_.B == sum(b for _, b in syl)
        assert st_.Abar == sum(abs(a) for a, _ in syl)
        assert st_.Bbar == sum(abs(b) for _, b in syl)

    def test_similarity(self):
        assert similarity_signature(parse("xxyXY")) == (2, (1, 2), (1, 1))
        assert trace_similar(parse("xxyXY"), parse("XyxxY"))
        assert not trace_similar(parse("xxyXY"), parse("xYXyy"))


class TestProperPowers:
    def test_examples(self):
        assert proper_power_root(parse("xyxy")) == (parse("xy"), 2)
        assert proper_power_root(parse("xxy")) == (parse("xxy"), 1)

    @given(syllable_words(max_r=3), st.integers(2, 4))
    def test_power_detected(self, v, k):
        root, mult = proper_power_root(v**k)
        assert mult % k == 0
        assert root**mult == v**k

    def test_matches_string_oracle(self):
        for n in range(2, 9):
            for text in canonical_strings(n):
                w = parse(text)
                _, mult = proper_power_root(w)
                assert (mult > 1) == string_is_proper_power(text), text


class TestEnumerate:
    def test_counts_match_string_oracle(self):
        # enumerate_words yields all canonical words of length 2..n
        for n in range(2, 7):
            got = {w.render() for w in enumerate_words(n)}
            expect = {
                parse(t).render() for m in range(2, n + 1) for t in canonical_strings(m)
            }
            assert got == expect

    def test_prime_complexity_filter(self):
        for w in enumerate_words(6, prime_complexity=True):
            r = stats(w).r
            assert r in (2, 3)  # primes reachable at length <= 6

    def test_sampler_reproducible(self):
        a = [str(w) for w in sample_words(12, 20, seed=7)]
        b = [str(w) for w in sample_words(12, 20, seed=7)]
        assert a == b
        c = [str(w) for w in sample_words(12, 20, seed=8)]
        assert a != c

    def test_sampler_constraint(self):
        def isprime(n):
            return n >= 2 and all(n % d for d in range(2, n))

        for w in sample_words(12, 40, seed=1, constraint="prime-complexity"):
            assert isprime(stats(w).r)

    def test_sampler_lengths(self):
        assert all(w.length <= 9 for w in sample_words(9, 50, seed=2))


class TestConvenientForm:
    def test_repeat_exposed(self):
        cf = convenient_form(parse("xyxyxY"))
        assert cf.found_repeat
        syl = cf.word.syllables
        assert syl[0] == syl[1]

    def test_no_repeat(self):
        cf = convenient_form(parse("xyXyxY"))
        assert not cf.found_repeat

    @given(
        st.integers(1, 3),
        st.integers(1, 3),
        st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=4),
    )
    def test_rearrangement_preserves_signature(self, a, b, signs):
        # uniform syllable shape |a_i| = a, |b_i| = b with varying signs
        w = Word.from_syllables(
            [(a if sa else -a, b if sb else -b) for sa, sb in signs]
        )
        cf = convenient_form(w)
        sig = similarity_signature(cf.word)
        ref = similarity_signature(w)
        if cf.swapped_xy:
            assert sig == (ref[0], ref[2], ref[1])
        else:
            assert sig == ref

    def test_requires_uniform_shape(self):
        with pytest.raises(ValueError):
            convenient_form(parse("xyxyy"))
