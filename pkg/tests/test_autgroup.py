import numpy as np
import pytest

from conftest import golden_matrix
from rmae.autgroup import (
    enumerate_group,
    ga_group,
    group_from_name,
    group_size,
    identity_group,
    identity_perm,
    is_stable,
    lta_group,
    permute_monomial,
    perms_from_text,
    perms_to_text,
    pl_group,
    post_transformation_matrix,
    sample_blta_pl,
    sample_group,
    stability_survey,
    stable_group,
    to_permutation,
    transform_constraint,
)
from rmae.codespec import build_constraint, enumerate_stable_variants, make_spec
from rmae.exceptions import ConfigurationError
from rmae.gf2 import BitMatrix, kron_power, mat_mul


def bitswap_perm():
    return to_permutation(BitMatrix.from_array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
                          [0, 0, 0])


def lta_example_perm():
    return to_permutation(BitMatrix.from_array([[1, 0, 0], [0, 1, 0], [1, 0, 1]]),
                          [1, 1, 1])


def test_known_permutation_vectors():
    assert bitswap_perm().perm.tolist() == [0, 2, 1, 3, 4, 6, 5, 7]
    assert lta_example_perm().perm.tolist() == [7, 2, 5, 0, 3, 6, 1, 4]


def test_apply_inverse_round_trip(rng):
    for p in sample_group(ga_group(5), 10, seed=2):
        v = rng.integers(0, 2, 32, dtype=np.uint8)
        assert np.array_equal(p.apply_inverse(p.apply(v)), v)
        assert np.array_equal(p.apply(p.apply_inverse(v)), v)
        q = p.inverse()
        assert np.array_equal(q.apply(p.apply(v)), v)
        assert not p.is_identity()
    assert identity_perm(5).is_identity()


def test_to_permutation_rejects_singular():
    with pytest.raises(ConfigurationError):
        to_permutation(BitMatrix.from_array([[1, 1], [1, 1]]), [0, 0])


def test_group_sizes():
    assert group_size(identity_group(4)) == 1
    assert group_size(stable_group(7)) == 720          # (n-1)! block perms
    assert group_size(lta_group(7)) == 1 << 28         # 2^(n(n-1)/2) * 2^n
    assert group_size(pl_group(3)) == 6                # variable permutations
    assert group_size(ga_group(3)) == 168 * 8          # |GL(3,2)| * 2^n


def test_group_from_name():
    assert group_from_name("stable", 7) == stable_group(7)
    assert group_from_name("blta-pl:6,1", 7) == stable_group(7)
    assert group_from_name("blta:1,1,1", 3).pl is False
    with pytest.raises(ConfigurationError):
        group_from_name("blta-pl:2,2", 7)
    with pytest.raises(ConfigurationError):
        group_from_name("nonsense", 7)


def test_enumerate_small_groups():
    members = list(enumerate_group(stable_group(3)))
    assert len(members) == 2
    assert sorted(p.perm.tolist() for p in members) == [
        [0, 1, 2, 3, 4, 5, 6, 7],
        [0, 2, 1, 3, 4, 6, 5, 7],
    ]
    only = list(enumerate_group(identity_group(6)))
    assert len(only) == 1 and only[0].is_identity


def test_sample_group_contract():
    a = sample_group(stable_group(7), 8, seed=0)
    b = sample_group(stable_group(7), 8, seed=0)
    c = sample_group(stable_group(7), 8, seed=1)
    assert [p.perm.tolist() for p in a] == [p.perm.tolist() for p in b]
    assert [p.perm.tolist() for p in a] != [p.perm.tolist() for p in c]
    keys = {p.perm.tobytes() for p in a}
    assert len(keys) == 8
    assert not any(p.is_identity() for p in a)
    assert sample_blta_pl(7, 8, seed=0)[0].perm.tolist() == a[0].perm.tolist()
    # Asking for the whole group is allowed and then includes identity.
    full = sample_group(stable_group(3), 2, seed=0)
    assert any(p.is_identity() for p in full)
    with pytest.raises(ConfigurationError):
        sample_group(stable_group(3), 3, seed=0)


def test_permute_monomial_tracks_apply(rng):
    # Permuting evaluation points maps each monomial row to another row.
    for p in sample_group(pl_group(4), 6, seed=3):
        g = kron_power(4).to_array()
        for k in rng.integers(0, 16, 8):
            moved = permute_monomial(p, int(k))
            assert np.array_equal(p.apply(g[int(k)]), g[moved])


def test_post_transformation_matrix_convention(rng):
    # Row-vector times T moves coordinate perm[i] to slot i.
    for p in sample_group(ga_group(4), 6, seed=4):
        t = post_transformation_matrix(p)
        x = rng.integers(0, 2, 16, dtype=np.uint8)
        moved = mat_mul(BitMatrix.from_array(x[None, :]), t).to_array()[0]
        assert np.array_equal(moved, p.apply_inverse(x))


def test_transformed_constraint_annihilates_permuted_codewords(rng):
    # The defining property of V_T: a decoder seeing permuted channel
    # values checks its parity rules against permuted codewords.
    from rmae.encdec import encode, polar_transform

    c = build_constraint(make_spec(3, 7), frozenset({1, 2, 3}))
    v_raw = c.V.to_array()
    for grp, raw_should_hold in ((stable_group(7), True), (lta_group(7), False)):
        p = sample_group(grp, 1, seed=6)[0]
        vt = transform_constraint(c.V, p).to_array()
        raw_held = True
        for _ in range(25):
            word = rng.integers(0, 2, c.spec.K, dtype=np.uint8)
            u_perm = polar_transform(p.apply(encode(word, c)))
            assert not ((vt @ u_perm) & 1).any()
            raw_held = raw_held and not ((v_raw @ u_perm) & 1).any()
        assert raw_held == raw_should_hold


def test_transformed_constraints_match_worked_example():
    c = build_constraint(make_spec(1, 3), frozenset({1}))
    assert transform_constraint(c.V, bitswap_perm()) == golden_matrix(
        "r13_variant1_vt_bitswap")
    assert transform_constraint(c.V, lta_example_perm()) == golden_matrix(
        "r13_variant1_vt_lta")


def test_transformed_constraints_stay_orthogonal():
    c = build_constraint(make_spec(1, 3), frozenset({1}))
    for p in (bitswap_perm(), lta_example_perm()):
        vt = transform_constraint(c.V, p)
        assert not mat_mul(c.W, vt.transpose()).to_array().any()


def test_is_stable_identity_and_stable_group():
    spec = make_spec(3, 7)
    for variant in enumerate_stable_variants(spec):
        c = build_constraint(spec, variant)
        assert is_stable(c, identity_perm(7))
        for p in sample_group(stable_group(7), 20, seed=5):
            assert is_stable(c, p)


def test_is_stable_rejects_mismatched_length():
    c = build_constraint(make_spec(3, 7), frozenset({3}))
    with pytest.raises(ConfigurationError):
        is_stable(c, identity_perm(6))


def test_lta_breaks_stability_for_longer_codes():
    # The worked 8-bit example happens to stay equivalent under an LTA
    # member; for R(3,7) sampled LTA members do not.
    c = build_constraint(make_spec(3, 7), frozenset({1, 2, 3}))
    assert any(not is_stable(c, p) for p in sample_group(lta_group(7), 10, seed=6))


def test_small_lta_example_is_equivalent():
    c = build_constraint(make_spec(1, 3), frozenset({1}))
    assert is_stable(c, lta_example_perm())


def test_stability_survey_exhaustive_flag():
    c = build_constraint(make_spec(3, 7), frozenset({3}))
    rep = stability_survey(c, stable_group(7), samples=1000, seed=0)
    assert rep.exhaustive and rep.checked == 720
    assert rep.stable == 720 and rep.fraction == 1.0
    sampled = stability_survey(c, lta_group(7), samples=25, seed=0)
    assert not sampled.exhaustive and sampled.checked == 25
    assert sampled.counterexamples
    assert not is_stable(c, sampled.counterexamples[0])


def test_perm_serialization_round_trip():
    perms = sample_group(ga_group(6), 5, seed=7)
    again = perms_from_text(perms_to_text(perms))
    assert len(again) == 5
    for p, q in zip(perms, again):
        assert np.array_equal(p.perm, q.perm)
        assert p.A == q.A and np.array_equal(p.b, q.b)
