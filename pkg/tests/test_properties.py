"""Randomized invariants: algebra laws, round trips, certified enclosures."""

from __future__ import annotations

import json
import math

from hypothesis import given, settings, strategies as st

from dnccap import (
    ChannelSpec,
    Concat,
    Epsilon,
    ForbiddenPatterns,
    Free,
    GeneralizedPolynomial,
    RationalGF,
    Regex,
    SpecError,
    Star,
    Symbol,
    SymbolDef,
    Union,
    WeightBasis,
    WeightVector,
    expand_series,
    parse_regex,
    parse_spec,
    render_spec,
    smallest_positive_root,
)


BASIS = WeightBasis.from_mapping({"unit": 1.0, "half": 0.5})


def vectors():
    return st.tuples(
        st.integers(min_value=0, max_value=4),
        st.integers(min_value=0, max_value=4),
    ).map(WeightVector)


def polynomials(min_coeff=-5, max_coeff=5):
    return st.dictionaries(
        vectors(),
        st.integers(min_value=min_coeff, max_value=max_coeff),
        max_size=5,
    ).map(lambda terms: GeneralizedPolynomial(BASIS, terms))


class TestPolynomialAlgebra:
    @given(polynomials(), polynomials())
    def test_addition_commutes(self, a, b):
        assert a + b == b + a

    @given(polynomials(), polynomials(), polynomials())
    def test_addition_associates(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(polynomials(), polynomials())
    def test_multiplication_commutes(self, a, b):
        assert a * b == b * a

    @given(polynomials(), polynomials(), polynomials())
    def test_multiplication_distributes(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(polynomials(), polynomials())
    def test_subtraction_inverts_addition(self, a, b):
        assert (a + b) - b == a

    @given(
        polynomials(),
        polynomials(),
        st.floats(min_value=0.1, max_value=0.9),
    )
    def test_evaluation_is_a_homomorphism(self, a, b, y):
        assert math.isclose(
            (a + b).evaluate(y), a.evaluate(y) + b.evaluate(y), abs_tol=1e-9
        )
        assert math.isclose(
            (a * b).evaluate(y),
            a.evaluate(y) * b.evaluate(y),
            rel_tol=1e-9,
            abs_tol=1e-9,
        )


def regex_nodes():
    leaves = st.sampled_from(
        [Epsilon(), Symbol("0"), Symbol("1")]
    )

    def extend(children):
        return st.one_of(
            st.lists(children, min_size=2, max_size=3).map(
                lambda ps: Union(tuple(ps))
            ),
            st.lists(children, min_size=2, max_size=3).map(
                lambda ps: Concat(tuple(ps))
            ),
            children.map(Star),
        )

    return st.recursive(leaves, extend, max_leaves=8)


def atom_mappings():
    return st.sampled_from(
        [
            {"unit": 1.0},
            {"unit": 1.0, "half": 0.5},
            {"unit": 1.0, "pi": math.pi},
        ]
    )


def constraints():
    patterns = st.lists(
        st.lists(st.sampled_from(["0", "1"]), min_size=1, max_size=3).map(tuple),
        min_size=1,
        max_size=2,
    ).map(lambda ps: ForbiddenPatterns(tuple(ps)))
    return st.one_of(
        st.just(Free()),
        patterns,
        regex_nodes().map(Regex),
    )


def channel_specs():
    def build(atoms, constraint):
        basis = WeightBasis.from_mapping(atoms)
        name = next(iter(atoms))
        symbols = tuple(
            SymbolDef(s, WeightVector.from_mapping(basis, {name: 1}))
            for s in ("0", "1")
        )
        return ChannelSpec(basis, symbols, constraint)

    return st.builds(build, atom_mappings(), constraints())


class TestSpecRoundTrip:
    @given(channel_specs())
    def test_render_then_parse_is_identity(self, spec):
        assert parse_spec(render_spec(spec)) == spec

    @given(channel_specs())
    def test_rendering_is_canonical(self, spec):
        once = render_spec(spec)
        assert render_spec(parse_spec(once)) == once


class TestParserRobustness:
    @given(st.text(max_size=200))
    @settings(max_examples=300)
    def test_parse_spec_never_crashes_on_text(self, text):
        try:
            parse_spec(text)
        except SpecError:
            pass

    @given(st.binary(max_size=200))
    @settings(max_examples=300)
    def test_parse_spec_never_crashes_on_bytes(self, blob):
        try:
            parse_spec(blob)
        except SpecError:
            pass

    @given(st.text(alphabet="01()|*ε ", max_size=40))
    @settings(max_examples=300)
    def test_parse_regex_never_crashes(self, text):
        try:
            parse_regex(text, ("0", "1"))
        except SpecError:
            pass

    @given(st.dictionaries(st.text(max_size=10), st.floats() | st.text(max_size=10), max_size=4))
    def test_parse_spec_never_crashes_on_json_objects(self, doc):
        try:
            parse_spec(json.dumps(doc))
        except SpecError:
            pass


def growth_polynomials():
    positive_vectors = vectors().filter(lambda wv: not wv.is_zero())
    return st.dictionaries(
        positive_vectors,
        st.integers(min_value=1, max_value=5),
        min_size=1,
        max_size=4,
    ).map(lambda terms: GeneralizedPolynomial(BASIS, terms))


class TestRootCertificates:
    @given(growth_polynomials(), st.integers(min_value=1, max_value=4))
    def test_enclosure_brackets_the_target(self, growth, d0):
        result = smallest_positive_root(growth, float(d0))
        assert result.low <= result.root <= result.high
        assert result.high - result.low <= 1e-12
        assert growth.evaluate(result.low) <= d0
        assert growth.evaluate(result.high) >= d0


class TestSeriesMonotonicity:
    @given(
        growth_polynomials(),
        st.floats(min_value=1.0, max_value=6.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_longer_expansion_extends_shorter(self, growth, cutoff):
        # 1 / (1 - E) with E free of constant term always counts
        # something (compositions into weighted parts), so expansion
        # succeeds, counts are nonnegative, and a higher cutoff only
        # appends entries.
        gf = RationalGF(
            GeneralizedPolynomial.one(BASIS),
            GeneralizedPolynomial.one(BASIS) - growth,
        )
        short = expand_series(gf, cutoff)
        long = expand_series(gf, 2.0 * cutoff)
        assert all(c >= 0 for c in long.counts())
        assert long.entries[: len(short.entries)] == short.entries

    @given(
        growth_polynomials(),
        st.floats(min_value=0.05, max_value=0.3),
    )
    @settings(max_examples=50, deadline=None)
    def test_partial_sums_increase_toward_the_quotient(self, growth, y):
        gf = RationalGF(
            GeneralizedPolynomial.one(BASIS),
            GeneralizedPolynomial.one(BASIS) - growth,
        )
        short = expand_series(gf, 4.0)
        long = expand_series(gf, 8.0)
        a, b = short.evaluate(y), long.evaluate(y)
        assert a <= b + 1e-12
        if gf.denominator.evaluate(y) > 0:
            assert b <= gf.evaluate(y) + 1e-9
