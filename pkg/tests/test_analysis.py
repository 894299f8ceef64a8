"""Weight spectra, union bounds, and storage accounting.

Exhaustive encoding is the ground truth here: the closed-form
minimum-weight count and the noiseless list sweep are both checked
against it on codes small enough to enumerate, and only then is the
closed form trusted at sizes where enumeration is out of reach.
"""

import math

import numpy as np
import pytest

from rmae.analysis import (
    KNOWN_PERMS,
    STABLE,
    UNKNOWN_PERMS,
    WeightSpectrum,
    bound_points,
    bound_points_to_text,
    brute_weight_enum,
    formula_spectrum,
    known_perms_storage,
    low_weight_enum_scl,
    memory_requirements,
    qfunc,
    rm_minweight_count,
    spectrum_to_text,
    truncated_union_bound,
)
from rmae.autgroup import lta_group, sample_group, stable_group, transform_constraint
from rmae.codespec import build_constraint, make_spec, max_dynamic_count
from rmae.exceptions import ConfigurationError, ResourceCapError
from rmae.gf2 import rref


def _plain(r, n):
    return build_constraint(make_spec(r, n), ())


# ---------------------------------------------------------------- brute force


def test_brute_extended_hamming_spectrum():
    # The (r=1, n=3) code is the [8,4,4] extended Hamming code, whose
    # spectrum is classical: 1 + 14 z^4 + z^8.
    ws = brute_weight_enum(_plain(1, 3))
    assert ws.counts == {0: 1, 4: 14, 8: 1}
    assert ws.exact
    assert ws.method == "brute"
    assert ws.min_weight() == 4


def test_brute_counts_sum_to_codebook_size():
    for r, n, variant in [(1, 4, ()), (2, 4, (1,)), (2, 5, (1, 2))]:
        c = build_constraint(make_spec(r, n), variant)
        ws = brute_weight_enum(c)
        assert sum(ws.counts.values()) == 1 << c.spec.K
        # Copy rules are linear, so the codebook is a linear space and
        # contains the zero word exactly once.
        assert ws.counts[0] == 1


def test_brute_respects_dimension_cap():
    with pytest.raises(ResourceCapError):
        brute_weight_enum(_plain(3, 7))  # K = 64


# ------------------------------------------------------- closed-form counts


def test_minweight_count_matches_brute_enumeration():
    for r, n in [(1, 3), (1, 4), (2, 4), (3, 4), (2, 5), (1, 5)]:
        ws = brute_weight_enum(_plain(r, n))
        assert rm_minweight_count(r, n) == ws.count(1 << (n - r)), (r, n)


def test_minweight_count_large_code():
    # Trusted beyond enumeration range only because the formula is
    # verified against brute force above.
    assert rm_minweight_count(3, 7) == 94488


def test_minweight_count_rejects_degenerate_orders():
    with pytest.raises(ConfigurationError):
        rm_minweight_count(0, 4)
    with pytest.raises(ConfigurationError):
        rm_minweight_count(4, 4)


def test_formula_spectrum_floor():
    ws = formula_spectrum(3, 7)
    assert ws.counts == {0: 1, 16: 94488}
    assert not ws.exact
    assert ws.method == "formula"
    assert ws.min_weight() == 16


# ------------------------------------------------------------- list sweeps


def test_list_sweep_exact_when_list_covers_codebook():
    c = _plain(1, 3)
    ws = low_weight_enum_scl(c, L=16)
    assert ws.exact
    assert ws.counts == brute_weight_enum(c).counts


def test_list_sweep_lower_bounds_brute_counts():
    c = _plain(1, 3)
    ws = low_weight_enum_scl(c, L=8)
    assert not ws.exact
    exact = brute_weight_enum(c).counts
    assert sum(ws.counts.values()) == 8
    for w, count in ws.counts.items():
        assert count <= exact[w]
    # The all-zero word has the best metric of all, so it always survives.
    assert ws.counts[0] == 1


def test_list_sweep_counts_grow_with_list_size():
    c = build_constraint(make_spec(3, 7), (3,))
    small = low_weight_enum_scl(c, L=256)
    large = low_weight_enum_scl(c, L=1024)
    assert any(large.count(w) > small.count(w) for w in large.counts)
    for w, count in small.counts.items():
        assert large.count(w) >= count


def test_list_sweep_finds_the_true_minimum_weight():
    # Exhaustion fixes the true minimum weight of this variant; a
    # modest list must surface codewords at exactly that weight.
    c = build_constraint(make_spec(2, 5), (1, 2))
    exact = brute_weight_enum(c)
    swept = low_weight_enum_scl(c, L=64)
    assert swept.min_weight() == exact.min_weight()
    assert swept.count(exact.min_weight()) <= exact.count(exact.min_weight())


def test_list_sweep_parameter_validation():
    c = _plain(1, 3)
    with pytest.raises(ConfigurationError):
        low_weight_enum_scl(c, L=0)
    with pytest.raises(ConfigurationError):
        low_weight_enum_scl(c, w_max=0)
    with pytest.raises(ConfigurationError):
        low_weight_enum_scl(c, w_max=25)


def test_list_sweep_memory_cap():
    with pytest.raises(ResourceCapError):
        low_weight_enum_scl(_plain(3, 8), L=1 << 21)


# ------------------------------------------------------------- union bound


def test_qfunc_against_numerical_integration():
    # Independent oracle: integrate the standard normal density over
    # the tail with a fine trapezoid rule.
    for x in [0.0, 0.5, 1.0, 2.0, 3.5]:
        grid = np.linspace(x, x + 14.0, 280001)
        pdf = np.exp(-0.5 * grid * grid) / math.sqrt(2.0 * math.pi)
        tail = float(np.trapezoid(pdf, grid))
        assert math.isclose(qfunc(x), tail, rel_tol=1e-7), x


def test_qfunc_symmetry():
    assert qfunc(0.0) == 0.5
    for x in [0.3, 1.7, 2.9]:
        assert math.isclose(qfunc(x) + qfunc(-x), 1.0, rel_tol=1e-12)


def test_union_bound_matches_hand_sum():
    ws = WeightSpectrum(counts={0: 1, 4: 14, 8: 1}, exact=True, method="brute")
    rate, ebn0 = 0.5, 2.0
    esno = 10.0 ** (ebn0 / 10.0)
    expect = 14 * qfunc(math.sqrt(2 * rate * 4 * esno)) + qfunc(
        math.sqrt(2 * rate * 8 * esno)
    )
    got = truncated_union_bound(ws, rate, ebn0)
    assert math.isclose(got, expect, rel_tol=1e-12)
    # The zero weight never contributes; truncation drops the w=8 term.
    only_w4 = truncated_union_bound(ws, rate, ebn0, w_max=4)
    assert math.isclose(only_w4, 14 * qfunc(math.sqrt(2 * rate * 4 * esno)), rel_tol=1e-12)


def test_union_bound_decreases_with_snr():
    ws = brute_weight_enum(_plain(1, 3))
    rate = 4 / 8
    bounds = [truncated_union_bound(ws, rate, e) for e in (1.0, 2.0, 3.0, 4.0)]
    assert all(a > b for a, b in zip(bounds, bounds[1:]))


def test_union_bound_rejects_empty_spectrum():
    empty = WeightSpectrum(counts={}, exact=False, method="formula")
    with pytest.raises(ConfigurationError):
        truncated_union_bound(empty, 0.5, 2.0)


def test_bound_points_tabulation():
    ws = brute_weight_enum(_plain(1, 3))
    pts = bound_points(ws, 0.5, [1.0, 2.5])
    assert [e for e, _ in pts] == [1.0, 2.5]
    for e, b in pts:
        assert b == truncated_union_bound(ws, 0.5, e)
    text = bound_points_to_text(pts)
    lines = text.strip().split("\n")
    assert lines[0].startswith("1,") and lines[1].startswith("2.5,")


# ------------------------------------------------------ storage accounting


def test_stable_storage_is_the_shared_rule_table():
    spec = make_spec(3, 7)
    assert memory_requirements(spec, 8, STABLE) == max_dynamic_count(spec)
    # One shared table: the price does not scale with the ensemble.
    assert memory_requirements(spec, 64, STABLE) == memory_requirements(
        spec, 1, STABLE
    )


def test_unknown_perms_storage_is_full_matrices():
    spec = make_spec(3, 7)
    assert memory_requirements(spec, 8, UNKNOWN_PERMS) == 8 * 128 * (128 - 64)


def test_known_perms_storage_with_stable_members_collapses():
    # A stable permutation preserves the constraint row space, so each
    # reduced matrix equals the reduced original and the totals are
    # exact multiples of the single-matrix figures.
    c = build_constraint(make_spec(3, 7), (1, 2, 3))
    perms = sample_group(stable_group(7), 4, seed=5)
    base, _ = rref(c.V)
    base_nnz = int(base.to_array().sum())
    row_bits, nonzeros = known_perms_storage(c, perms)
    assert row_bits == 4 * base.rows * 128
    assert nonzeros == 4 * base_nnz


def test_known_perms_storage_general_members():
    c = build_constraint(make_spec(3, 7), (1, 2, 3))
    perms = sample_group(lta_group(7), 3, seed=2)
    row_bits, nonzeros = known_perms_storage(c, perms)
    expect_bits = 0
    expect_nnz = 0
    for p in perms:
        reduced, _ = rref(transform_constraint(c.V, p))
        expect_bits += reduced.rows * 128
        expect_nnz += int(reduced.to_array().sum())
    assert (row_bits, nonzeros) == (expect_bits, expect_nnz)


def test_memory_requirements_validation():
    spec = make_spec(3, 7)
    c = build_constraint(spec, (3,))
    perms = sample_group(stable_group(7), 2, seed=0)
    with pytest.raises(ConfigurationError):
        memory_requirements(spec, -1, STABLE)
    with pytest.raises(ConfigurationError):
        memory_requirements(spec, 2, KNOWN_PERMS)  # no constraint/perms
    with pytest.raises(ConfigurationError):
        memory_requirements(spec, 3, KNOWN_PERMS, constraint=c, perms=perms)
    with pytest.raises(ConfigurationError):
        memory_requirements(
            make_spec(2, 5), 2, KNOWN_PERMS, constraint=c, perms=perms
        )
    with pytest.raises(ConfigurationError):
        memory_requirements(spec, 2, "ad-hoc")
    with pytest.raises(ConfigurationError):
        known_perms_storage(c, [])


# ---------------------------------------------------------------- rendering


def test_spectrum_text_round_readable():
    ws = WeightSpectrum(counts={8: 1, 0: 1, 4: 14}, exact=True, method="brute")
    assert spectrum_to_text(ws) == "# method=brute exact=yes\n0,1\n4,14\n8,1\n"


def test_min_weight_requires_nonzero_entries():
    with pytest.raises(ConfigurationError):
        WeightSpectrum(counts={0: 1}, exact=True, method="brute").min_weight()
