import math

import numpy as np
import numpy.testing as npt
import pytest

from nonpaving import (
    ResourceLimitError,
    block_layout,
    build_nonpavable_general,
    build_nonpavable_r2,
    col_square_sums,
    column_orthogonality_defect,
    delta_schedule,
    dft_matrix,
    doubled_family,
    doubling_step,
    frame_bounds,
    gram,
    gram_block_residual,
    restriction_identity_residual,
    row_square_sums,
    sidecar_dict,
    FrameFamily,
)

from oracles import delta_fraction, partial_sum_fraction


# ---------------------------------------------------------------------------
# delta_schedule
# ---------------------------------------------------------------------------

def test_schedule_r2_n3():
    sched = delta_schedule(2, 3)
    assert sched.deltas == (0.5, 1.5)


def test_schedule_r3_n2():
    sched = delta_schedule(3, 2)
    npt.assert_allclose(sched.deltas, (0.6, 0.9, 1.5), atol=1e-15)
    npt.assert_allclose(sched.partial_sums, (0.6, 1.5, 3.0), atol=1e-15)


def test_schedule_r2_n1_is_all_ones():
    assert delta_schedule(2, 1).deltas == (1.0, 1.0)


def test_schedule_r2_n2():
    sched = delta_schedule(2, 2)
    npt.assert_allclose(sched.deltas, (2.0 / 3.0, 4.0 / 3.0), atol=1e-16)


@pytest.mark.parametrize("r", range(2, 7))
@pytest.mark.parametrize("n", range(1, 9))
def test_schedule_invariants(r, n):
    """Every delta matches the exact rational; partials telescope; total is r."""
    sched = delta_schedule(r, n)
    for k in range(1, r + 1):
        assert sched.deltas[k - 1] == float(delta_fraction(r, n, k))
        closed = float(partial_sum_fraction(r, n, k))
        assert abs(sched.partial_sums[k - 1] - closed) <= 1e-12
        if k < r:
            assert sched.partial_sums[k - 1] < r
    assert abs(sched.partial_sums[-1] - r) <= 1e-12
    # base case of the recursion
    assert abs(sched.deltas[0] - r / ((r - 1) * n + 1)) <= 1e-15


@pytest.mark.parametrize("r", range(2, 7))
def test_schedule_monotone_in_n(r):
    """For k < r the deltas head to zero in n.

    delta_k(n) is a ratio of a linear to a quadratic in n, so it decays like
    1/n eventually but is NOT monotone from n = 1 when k is close to r: the
    stationary point sits at n^2 = k(k-1)/((r-k)(r-k+1)), e.g. delta_3 rises
    from 1 to 16/15 between n = 1 and n = 2 at r = 4. Strict decrease is
    asserted from n = k onward (which clears the stationary point), plus a
    decay-ratio check over a 4x window: a clean 1/3 for k <= r-2 (and all of
    r <= 3), a looser 1/2 for the slow k = r-1 cases.
    """
    by_n = {n: delta_schedule(r, n).deltas for n in range(1, 33)}
    for k in range(1, r):
        values = [by_n[n][k - 1] for n in range(1, 33)]
        tail = values[k - 1 :]
        assert all(a > b for a, b in zip(tail, tail[1:]))
        ratio_cap = 1.0 / 3.0 if (k <= r - 2 or r <= 3) else 0.5
        assert by_n[32][k - 1] < by_n[8][k - 1] * ratio_cap


def test_schedule_not_monotone_near_last_block():
    # the documented counterexamples to decrease-from-n=1
    assert delta_schedule(4, 1).deltas[2] < delta_schedule(4, 2).deltas[2]
    assert delta_schedule(5, 2).deltas[3] == delta_schedule(5, 3).deltas[3]


def test_schedule_rejects_small_r():
    with pytest.raises(ValueError):
        delta_schedule(1, 3)


def test_schedule_rejects_small_n():
    with pytest.raises(ValueError):
        delta_schedule(2, 0)


def test_schedule_rejects_bool():
    with pytest.raises(ValueError):
        delta_schedule(True, 2)


# ---------------------------------------------------------------------------
# block_layout
# ---------------------------------------------------------------------------

def test_layout_r3_n2_widths_and_weights():
    layout = block_layout(3, 2)
    width = 6
    for k, b in enumerate(layout.blocks, start=1):
        assert b.zero_width + b.band_width + b.tail_width == width
        assert b.zero_width == (k - 1) * 1
    # last block has no band
    assert layout.blocks[-1].band_width == 0
    assert layout.blocks[-1].band_weight == 0.0
    sched = delta_schedule(3, 2)
    assert layout.blocks[0].band_weight == pytest.approx(math.sqrt(3.0))
    assert layout.blocks[1].band_weight == pytest.approx(math.sqrt(3.0 - 0.6))
    for k in range(3):
        assert layout.blocks[k].tail_weight == pytest.approx(math.sqrt(sched.deltas[k]))


def test_layout_column_weights_cover_the_row():
    layout = block_layout(2, 3)
    w1 = layout.column_weights(1)
    assert w1.shape == (6,)
    npt.assert_allclose(w1[:2], math.sqrt(2.0))
    npt.assert_allclose(w1[2:], math.sqrt(0.5))
    w2 = layout.column_weights(2)
    npt.assert_allclose(w2[:2], 0.0)
    npt.assert_allclose(w2[2:], math.sqrt(1.5))
    assert list(layout.band_columns(1)) == [0, 1]
    assert list(layout.band_columns(2)) == []


def test_layout_band_disappears_at_n1():
    layout = block_layout(4, 1)
    for b in layout.blocks:
        assert b.zero_width == 0
        assert b.band_width == 0
        assert b.tail_width == 4


# ---------------------------------------------------------------------------
# the stacked families
# ---------------------------------------------------------------------------

def test_r2_n2_shape_and_sums():
    fam = build_nonpavable_r2(2)
    assert fam.vectors.shape == (8, 4)
    npt.assert_allclose(row_square_sums(fam.vectors), np.ones(8), atol=1e-10)
    npt.assert_allclose(col_square_sums(fam.vectors), 2.0 * np.ones(4), atol=1e-10)
    assert column_orthogonality_defect(fam.vectors) <= 1e-10


def test_r2_n1_is_two_plain_dft_blocks():
    fam = build_nonpavable_r2(1)
    base = dft_matrix(2)
    npt.assert_array_equal(fam.vectors, np.vstack([base, base]))
    assert fam.vacuous


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_r2_special_case_equals_general_route(n):
    """The closed-form two-block build and the general stack must agree bitwise."""
    npt.assert_array_equal(
        build_nonpavable_r2(n).vectors, build_nonpavable_general(2, n).vectors
    )


def test_general_r3_n2_shape_and_sums():
    fam = build_nonpavable_general(3, 2)
    assert fam.vectors.shape == (18, 6)
    npt.assert_allclose(row_square_sums(fam.vectors), np.ones(18), atol=1e-10)
    npt.assert_allclose(col_square_sums(fam.vectors), 3.0 * np.ones(6), atol=1e-10)
    assert column_orthogonality_defect(fam.vectors) <= 1e-10


def test_general_zero_prefix_structure():
    fam = build_nonpavable_general(3, 3)
    rn = 9
    for k in range(1, 4):
        block = fam.vectors[(k - 1) * rn : k * rn]
        bands = fam.layout.blocks[k - 1]
        assert bands.zero_width == (k - 1) * 2
        if bands.zero_width:
            assert np.max(np.abs(block[:, : bands.zero_width])) == 0.0
        live = block[:, bands.zero_width :]
        assert np.min(np.abs(live)) > 0.0


def test_general_r4_n3_per_block_column_decomposition():
    """A column in band k collects delta_j from each earlier block's tail,
    the band weight squared from block k, and nothing from later blocks."""
    fam = build_nonpavable_general(4, 3)
    sched = fam.schedule
    rn = 12
    for k in range(1, 4):
        col = fam.layout.band_columns(k)[0]
        contributions = [
            float(np.sum(np.abs(fam.vectors[j * rn : (j + 1) * rn, col]) ** 2))
            for j in range(4)
        ]
        for j in range(k - 1):
            assert contributions[j] == pytest.approx(sched.deltas[j], abs=1e-10)
        assert contributions[k - 1] == pytest.approx(
            sched.residual_weight_sq(k), abs=1e-10
        )
        for j in range(k, 4):
            assert contributions[j] == pytest.approx(0.0, abs=1e-15)
        assert sum(contributions) == pytest.approx(4.0, abs=1e-10)


@pytest.mark.parametrize("r,n", [(2, 4), (3, 3), (4, 2)])
def test_general_families_are_unit_norm_r_tight(r, n):
    fam = build_nonpavable_general(r, n)
    npt.assert_allclose(row_square_sums(fam.vectors), np.ones(r * r * n), atol=1e-10)
    lo, hi = frame_bounds(fam)
    assert abs(lo - r) <= 1e-8 and abs(hi - r) <= 1e-8
    assert fam.claimed_tightness == float(r)
    assert not fam.vacuous


def test_sidecar_dict_round_trips_the_layout():
    fam = build_nonpavable_general(3, 2)
    side = sidecar_dict(fam)
    assert side["r"] == 3 and side["n"] == 2
    assert side["deltas"] == [0.6, 0.9, 1.5]
    assert len(side["layout"]) == 3
    assert side["layout"][2]["band_width"] == 0


# ---------------------------------------------------------------------------
# doubling
# ---------------------------------------------------------------------------

def test_doubling_two_ones_exactly():
    seed = FrameFamily(np.array([[1.0], [1.0]], dtype=complex))
    out = doubling_step(seed)
    s = 1.0 / math.sqrt(2.0)
    expected = np.array([[s, s], [s, s], [s, -s], [s, -s]], dtype=complex)
    npt.assert_allclose(out.vectors, expected, atol=1e-15)
    g = gram(out.vectors)
    npt.assert_allclose(g[:2, :2], [[1, 1], [1, 1]], atol=1e-15)
    npt.assert_allclose(g[2:, 2:], [[1, 1], [1, 1]], atol=1e-15)
    npt.assert_allclose(g[:2, 2:], 0.0, atol=1e-15)


def test_doubling_preserves_frame_bounds():
    fam = build_nonpavable_r2(2)
    before = frame_bounds(fam)
    after = frame_bounds(doubling_step(fam))
    assert abs(before[0] - after[0]) <= 1e-10
    assert abs(before[1] - after[1]) <= 1e-10


def test_doubling_shrinks_entries():
    fam = build_nonpavable_r2(2)
    out = doubling_step(fam)
    assert np.max(np.abs(out.vectors)) == pytest.approx(
        np.max(np.abs(fam.vectors)) / math.sqrt(2.0), abs=1e-15
    )


def test_doubled_family_zero_steps_is_input():
    fam = build_nonpavable_r2(2)
    assert doubled_family(fam, 0) is fam


def test_doubled_family_twice_on_two_ones():
    seed = FrameFamily(np.array([[1.0], [1.0]], dtype=complex), claimed_tightness=2.0)
    out = doubled_family(seed, 2)
    assert out.vectors.shape == (8, 4)
    npt.assert_allclose(row_square_sums(out.vectors), np.ones(8), atol=1e-12)
    assert frame_bounds(out) == pytest.approx((2.0, 2.0), abs=1e-10)


def test_doubled_family_rejects_negative_steps():
    with pytest.raises(ValueError):
        doubled_family(build_nonpavable_r2(1), -1)


def test_doubled_family_respects_entry_budget():
    fam = build_nonpavable_r2(2)  # 8 x 4
    with pytest.raises(ResourceLimitError):
        doubled_family(fam, 10)  # 8192 x 4096 = 2^25 entries
    # one step below the default budget is fine
    doubled_family(fam, 9, entry_budget=1 << 23)


def test_gram_block_residual_small():
    fam = build_nonpavable_r2(2)
    out = doubled_family(fam, 3)
    assert gram_block_residual(out, fam) <= 1e-12


def test_gram_block_residual_detects_damage():
    fam = build_nonpavable_r2(1)
    out = doubled_family(fam, 1)
    damaged = FrameFamily(out.vectors + 0.01)
    assert gram_block_residual(damaged, fam) > 1e-3


def test_restriction_identity_on_random_coefficients():
    fam = build_nonpavable_r2(2)
    out = doubled_family(fam, 3)
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=(100, 8)) + 1j * rng.normal(size=(100, 8))
    assert restriction_identity_residual(out, fam, coeffs) <= 1e-10


def test_restriction_identity_rejects_bad_width():
    fam = build_nonpavable_r2(2)
    out = doubled_family(fam, 1)
    with pytest.raises(ValueError):
        restriction_identity_residual(out, fam, np.ones((1, 5)))
