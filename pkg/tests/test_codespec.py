from math import comb

import numpy as np
import pytest

from rmae.codespec import (
    RULE_INFO,
    RULE_ZERO,
    build_constraint,
    constraint_from_text,
    constraint_to_text,
    count_stable_variants,
    enumerate_stable_variants,
    make_spec,
    max_dynamic_count,
    monomial_of_row,
    stable_weight_classes,
)
from rmae.exceptions import ConfigurationError, DimensionOverflowError
from rmae.gf2 import mat_mul


def all_specs(max_n=8):
    return [make_spec(r, n) for n in range(max_n + 1) for r in range(n + 1)]


def test_make_spec_partition():
    for spec in all_specs():
        assert spec.N == 1 << spec.n
        assert spec.K == sum(comb(spec.n, i) for i in range(spec.r + 1))
        assert set(spec.info_set) | set(spec.frozen_set) == set(range(spec.N))
        assert not set(spec.info_set) & set(spec.frozen_set)
        assert all(k.bit_count() >= spec.n - spec.r for k in spec.info_set)
        assert all(k.bit_count() < spec.n - spec.r for k in spec.frozen_set)


def test_make_spec_validation():
    with pytest.raises(ConfigurationError):
        make_spec(4, 3)
    with pytest.raises(ConfigurationError):
        make_spec(-1, 3)
    with pytest.raises(ConfigurationError):
        make_spec(1.0, 3)
    with pytest.raises(DimensionOverflowError):
        make_spec(1, 99)


def test_monomial_degree_matches_weight():
    for k in range(32):
        m = monomial_of_row(k, 5)
        assert m.degree == 5 - k.bit_count()


def test_stable_weight_classes():
    assert stable_weight_classes(make_spec(3, 7)) == (1, 2, 3)
    assert stable_weight_classes(make_spec(1, 3)) == (1,)
    assert stable_weight_classes(make_spec(5, 8)) == (1, 2)
    # No classes when the code is trivial on either side.
    assert stable_weight_classes(make_spec(0, 4)) == ()
    assert stable_weight_classes(make_spec(3, 4)) == ()
    for spec in all_specs():
        lo = min(spec.n - spec.r - 1, spec.r)
        assert stable_weight_classes(spec) == tuple(range(1, lo + 1))


def test_build_constraint_rules():
    spec = make_spec(3, 7)
    c = build_constraint(spec, frozenset({1, 2, 3}))
    for k in range(spec.N):
        tag = int(c.rule[k])
        if k in spec.info_set:
            assert tag == RULE_INFO
        elif tag == RULE_ZERO:
            pass
        else:
            # A dynamic bit lives in the top half, copies from the
            # complementary index, and that index carries information.
            assert k >= spec.N // 2
            assert tag == (spec.N - 1) ^ k
            assert tag in spec.info_set
    dynamic_weights = {k.bit_count() for k in c.dynamic_indices}
    assert dynamic_weights == {1, 2, 3}


def test_variant_restricts_dynamic_weights():
    spec = make_spec(3, 7)
    c = build_constraint(spec, frozenset({3}))
    assert {k.bit_count() for k in c.dynamic_indices} == {3}
    assert c.dynamic_count == 15
    empty = build_constraint(spec, frozenset())
    assert empty.dynamic_count == 0
    assert all(t in (RULE_INFO, RULE_ZERO) for t in empty.rule)


def test_build_constraint_rejects_bad_variant():
    spec = make_spec(3, 7)
    with pytest.raises(ConfigurationError):
        build_constraint(spec, frozenset({4}))
    with pytest.raises(ConfigurationError):
        build_constraint(spec, frozenset({0}))


def test_max_dynamic_count_known_codes():
    for (r, n), want in (((3, 7), 22), ((3, 8), 29), ((4, 8), 29), ((5, 8), 8)):
        assert max_dynamic_count(make_spec(r, n)) == want


def test_max_dynamic_count_is_full_variant_count():
    for spec in all_specs():
        classes = stable_weight_classes(spec)
        c = build_constraint(spec, frozenset(classes))
        assert c.dynamic_count == max_dynamic_count(spec)
        assert max_dynamic_count(spec) <= spec.N // 2


def test_count_stable_variants_matches_enumeration():
    for spec in all_specs():
        if not 0 < spec.r < spec.n:
            with pytest.raises(ConfigurationError):
                count_stable_variants(spec)
            continue
        variants = list(enumerate_stable_variants(spec))
        assert len(variants) == len(set(variants))
        assert len(variants) == count_stable_variants(spec)
    assert count_stable_variants(make_spec(3, 7)) == 8


def test_constraint_matrices_orthogonal():
    for r, n in ((1, 3), (2, 5), (3, 7), (5, 8)):
        spec = make_spec(r, n)
        for variant in enumerate_stable_variants(spec):
            c = build_constraint(spec, variant)
            assert c.V.shape == (spec.N - spec.K, spec.N)
            assert c.W.shape == (spec.K, spec.N)
            prod = mat_mul(c.W, c.V.transpose())
            assert not prod.to_array().any()


def test_constraint_text_round_trip():
    for r, n in ((1, 3), (3, 7)):
        spec = make_spec(r, n)
        for variant in enumerate_stable_variants(spec):
            c = build_constraint(spec, variant)
            again = constraint_from_text(constraint_to_text(c))
            assert again.spec == c.spec
            assert again.variant == c.variant
            assert np.array_equal(again.rule, c.rule)


def test_constraint_text_rejects_tampering():
    c = build_constraint(make_spec(1, 3), frozenset({1}))
    text = constraint_to_text(c)
    broken = text.replace("4 copy 3", "4 copy 5")
    with pytest.raises(ConfigurationError):
        constraint_from_text(broken)
