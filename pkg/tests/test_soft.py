import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import so3fft as sf


def _random_grid(b, seed):
    rng = np.random.default_rng(seed)
    grid = sf.So3SampleGrid.zeros(b)
    n = grid.data.shape[0]
    grid.data[:] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return grid


def _random_coeffs(b, seed):
    rng = np.random.default_rng(seed)
    coeffs = sf.So3Coefficients.zeros(b)
    n = coeffs.data.shape[0]
    coeffs.data[:] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return coeffs


# ---------------------------------------------------------------------------
# fast vs direct
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("b", [1, 2, 3, 4])
def test_forward_fast_matches_direct(b):
    plan = sf.make_plan(b)
    grid = _random_grid(b, seed=10 + b)
    fast = sf.fsoft_sequential(grid, plan)
    direct = sf.fsoft_direct(grid)
    assert_allclose(fast.data, direct.data, atol=1e-12)


@pytest.mark.parametrize("b", [1, 2, 3, 4])
def test_inverse_fast_matches_direct(b):
    plan = sf.make_plan(b)
    coeffs = _random_coeffs(b, seed=20 + b)
    fast = sf.ifsoft_sequential(coeffs, plan)
    direct = sf.ifsoft_direct(coeffs)
    assert_allclose(fast.data, direct.data, atol=1e-12)


@pytest.mark.parametrize("b", [2, 4, 8, 16])
def test_round_trip_recovers_coefficients(b):
    plan = sf.make_plan(b)
    coeffs = _random_coeffs(b, seed=b)
    grid = sf.ifsoft_sequential(coeffs, plan)
    back = sf.fsoft_sequential(grid, plan)
    assert_allclose(back.data, coeffs.data, atol=1e-11)


# ---------------------------------------------------------------------------
# basis behaviour
# ---------------------------------------------------------------------------

def test_synthesis_of_unit_coefficient_samples_harmonic():
    b = 4
    plan = sf.make_plan(b)
    angles = sf.sample_angles(b)
    for l, m, mp in [(0, 0, 0), (1, 1, -1), (2, -2, 1), (3, 3, 3)]:
        coeffs = sf.So3Coefficients.zeros(b)
        coeffs.data[sf.coeff_index(l, m, mp, b)] = 1.0
        grid = sf.ifsoft_sequential(coeffs, plan).as_3d()
        for i1 in (0, 3):
            for j in (0, 5):
                for k2 in (1, 7):
                    expected = sf.wigner_D(l, m, mp, angles.alphas[i1], angles.betas[j], angles.gammas[k2])
                    assert grid[i1, j, k2] == pytest.approx(expected, abs=1e-12)


def test_constant_function_projects_onto_lowest_harmonic():
    b = 4
    plan = sf.make_plan(b)
    grid = sf.So3SampleGrid.zeros(b)
    grid.data[:] = 1.0
    coeffs = sf.fsoft_sequential(grid, plan)
    expected = np.zeros_like(coeffs.data)
    expected[sf.coeff_index(0, 0, 0, b)] = 1.0
    assert_allclose(coeffs.data, expected, atol=1e-12)


def test_forward_parseval():
    """The analyzed coefficients reproduce the weighted grid norm.

    The alpha and gamma Riemann sums carry a step of pi/B each, while the
    beta weights integrate sin(beta) d(beta) up to a factor B/pi (their sum
    is 2 pi/B against the continuous 2).  The net discrete volume measure is
    therefore (pi/B) w(j) per sample, and exactness of the quadrature on the
    band-limited integrand gives

        (pi/B) sum_{ijk} w(j) |f|^2 = sum |f(l,m,m')|^2 8 pi^2/(2l+1).
    """
    b = 8
    plan = sf.make_plan(b)
    coeffs = _random_coeffs(b, seed=5)
    grid = sf.ifsoft_sequential(coeffs, plan)
    cube = np.abs(grid.as_3d()) ** 2
    w = sf.quadrature_weights(b).values
    grid_energy = (math.pi / b) * np.sum(cube * w[None, :, None])
    ls = np.concatenate([np.full((2 * l + 1) ** 2, l) for l in range(b)])
    coeff_energy = np.sum(np.abs(coeffs.data) ** 2 * 8 * math.pi**2 / (2 * ls + 1))
    assert grid_energy == pytest.approx(coeff_energy, rel=1e-12)


# ---------------------------------------------------------------------------
# plans and policies
# ---------------------------------------------------------------------------

def test_plan_policies_bit_identical():
    b = 8
    grid = _random_grid(b, seed=1)
    coeffs = _random_coeffs(b, seed=2)
    streaming = sf.make_plan(b, matrix_policy="streaming")
    precomputed = sf.make_plan(b, matrix_policy="precomputed")
    assert precomputed.matrices is not None and streaming.matrices is None
    f1 = sf.fsoft_sequential(grid, streaming)
    f2 = sf.fsoft_sequential(grid, precomputed)
    assert np.array_equal(f1.data, f2.data)
    g1 = sf.ifsoft_sequential(coeffs, streaming)
    g2 = sf.ifsoft_sequential(coeffs, precomputed)
    assert np.array_equal(g1.data, g2.data)


def test_plan_partitioners_bit_identical():
    b = 8
    grid = _random_grid(b, seed=3)
    by_kappa = sf.make_plan(b, partitioner="kappa")
    by_sigma = sf.make_plan(b, partitioner="sigma")
    assert np.array_equal(
        sf.fsoft_sequential(grid, by_kappa).data,
        sf.fsoft_sequential(grid, by_sigma).data,
    )


def test_parallel_bit_identical_to_sequential():
    b = 8
    plan = sf.make_plan(b)
    grid = _random_grid(b, seed=4)
    seq = sf.fsoft_sequential(grid, plan)
    for threads in (2, 3):
        par = sf.fsoft_parallel(grid, plan, threads=threads)
        assert np.array_equal(seq.data, par.data)
    coeffs = _random_coeffs(b, seed=6)
    seq_inv = sf.ifsoft_sequential(coeffs, plan)
    par_inv = sf.ifsoft_parallel(coeffs, plan, threads=2)
    assert np.array_equal(seq_inv.data, par_inv.data)


def test_plan_validation():
    with pytest.raises(ValueError):
        sf.make_plan(4, matrix_policy="lazy")
    with pytest.raises(ValueError):
        sf.make_plan(4, partitioner="spiral")
    with pytest.raises(ValueError):
        sf.make_plan(0)
    plan = sf.make_plan(4)
    with pytest.raises(ValueError):
        sf.fsoft_sequential(_random_grid(5, seed=0), plan)
    with pytest.raises(ValueError):
        sf.ifsoft_sequential(_random_coeffs(5, seed=0), plan)
    with pytest.raises(ValueError):
        sf.fsoft_parallel(_random_grid(4, seed=0), plan, threads=0)


def test_direct_cap_enforced():
    b = sf.DIRECT_BANDWIDTH_CAP + 1
    with pytest.raises(ValueError):
        sf.fsoft_direct(_random_grid(b, seed=0))
    with pytest.raises(ValueError):
        sf.ifsoft_direct(_random_coeffs(b, seed=0))
    # the cap is advisory and can be lifted explicitly
    coeffs = _random_coeffs(2, seed=1)
    out = sf.ifsoft_direct(coeffs, max_bandwidth=2)
    assert out.bandwidth == 2


def test_plan_metadata():
    b = 6
    plan = sf.make_plan(b)
    assert plan.bandwidth == b
    assert plan.weights.values.shape == (2 * b,)
    assert len(plan.work_items) == len(plan.clusters)
    covered = sum(len(c.members) for c in plan.clusters)
    assert covered == (2 * b - 1) ** 2
