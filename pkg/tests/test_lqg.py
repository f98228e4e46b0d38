import math

import numpy as np
import pytest

from qlesim import lqg
from qlesim.lqg import Disk, GridField, LqgParams, Mobius

G83 = LqgParams(math.sqrt(8 / 3))


def test_params():
    with pytest.raises(ValueError):
        LqgParams(2.0)
    with pytest.raises(ValueError):
        LqgParams(-0.1)
    for g in (0.3, 1.0, math.sqrt(8 / 3), 1.9):
        p = LqgParams(g)
        assert p.q == 2 / g + g / 2
        assert abs(p.gamma * p.q - p.gamma_q) < 1e-15 * p.gamma_q
    assert LqgParams(0.0).q == math.inf and LqgParams(0.0).gamma_q == 2.0


def test_resolution_checks():
    for n in (32, 100, 96):
        with pytest.raises(ValueError):
            lqg.sample_dgff(n, 0)
    with pytest.raises(ValueError):
        lqg.dgff_variance(64, np.zeros((10, 10)))


def test_green_function_growth():
    # G(c, c) grows by log(2) / (2 pi) per doubling of the resolution
    d = lqg.green_center(256) - lqg.green_center(128)
    assert abs(d / (math.log(2) / (2 * math.pi)) - 1) < 0.10
    r = lqg.green_center(256) / lqg.green_center(128)
    assert abs(r / ((math.log(256) + 1.0) / (math.log(128) + 1.0)) - 1) < 0.10


def test_sampled_centre_variance():
    n = 128
    v = np.array([lqg.sample_dgff(n, s).values[n // 2, n // 2] for s in range(4000)])
    g = lqg.green_center(n)
    se = g * math.sqrt(2 / v.size)
    assert abs(np.mean(v ** 2) - g) < 3 * se


def test_negation_symmetry():
    n = 64
    wts = lqg.circle_average_weights(n, 0.1 + 0.2j, 4.0)
    x = np.array([np.sum(wts * lqg.sample_dgff(n, s).values[1:-1, 1:-1]) for s in range(3000)])
    assert abs(x.mean()) < 3 * x.std() / math.sqrt(x.size)


def test_boundary_exactly_zero():
    v = lqg.lqg_field(64, 3).values
    assert np.all(v[0] == 0) and np.all(v[-1] == 0) and np.all(v[:, 0] == 0) and np.all(v[:, -1] == 0)


def test_deterministic_seed():
    a, b = lqg.sample_dgff(64, 5), lqg.sample_dgff(64, 5)
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, lqg.sample_dgff(64, 6).values)


def test_circle_average_constant():
    f = GridField(np.full((65, 65), 2.5))
    assert lqg.circle_average(f, 0.1 - 0.3j, 5.0) == 2.5
    np.testing.assert_array_equal(lqg.circle_average(f, np.array([0j, 0.2j]), 3.0), [2.5, 2.5])


def test_circle_average_linear():
    f, g = lqg.lqg_field(128, 1), lqg.lqg_field(128, 2)
    z = np.array([0.0, 0.3 + 0.1j, -0.5j])
    lhs = lqg.circle_average(f + g, z, 6.0)
    rhs = lqg.circle_average(f, z, 6.0) + lqg.circle_average(g, z, 6.0)
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12)


def test_circle_average_weights_match():
    f = lqg.sample_dgff(64, 9)
    w = lqg.circle_average_weights(64, 0.2 + 0.1j, 5.0)
    assert np.sum(w * f.values[1:-1, 1:-1]) == pytest.approx(lqg.circle_average(f, 0.2 + 0.1j, 5.0), abs=1e-12)


def test_circle_variance_dyadic_differences():
    # exact variances; each halving of eps adds log(2) / (2 pi)
    n = 256
    v = [lqg.dgff_variance(n, lqg.circle_average_weights(n, 0j, e)) for e in (16.0, 8.0, 4.0, 2.0)]
    diffs = np.diff(v)
    target = math.log(2) / (2 * math.pi)
    assert np.all(np.abs(diffs / target - 1) < 0.15), diffs
    assert np.all(np.abs(diffs / diffs.mean() - 1) < 0.15)


def test_circle_sampled_variance_matches_exact():
    n = 128
    w = lqg.circle_average_weights(n, 0j, 4.0)
    exact = lqg.dgff_variance(n, w)
    x = np.array([lqg.circle_average(lqg.sample_dgff(n, s), 0j, 4.0) for s in range(3000)])
    assert abs(np.mean(x ** 2) - exact) < 3 * exact * math.sqrt(2 / x.size)


def test_circle_leaving_domain():
    f = lqg.lqg_field(64, 0)
    with pytest.raises(ValueError, match="domain"):
        lqg.circle_average(f, 0.95 + 0j, 4.0)
    with pytest.raises(ValueError):
        lqg.circle_average(f, 0j, 1.0)
    with pytest.raises(ValueError):
        lqg.bilinear(f, np.array([1.5]), np.array([0.0]))


def test_gamma_zero_area_is_lebesgue():
    f = lqg.lqg_field(128, 0)
    region = Disk(0.1, 0.4)
    mask = region(*f.cell_centers())
    assert lqg.lqg_area(f, LqgParams(0.0), 4.0, region) == math.fsum([f.h ** 2] * int(mask.sum()))


def test_area_additive():
    f = lqg.lqg_field(128, 4)
    X, Y = f.cell_centers()
    inner = Disk(0j, 0.5)(X, Y)
    left, right = inner & (X < 0), inner & (X >= 0)
    m = lqg.lqg_measure(f, G83, 4.0, inner)
    assert m.total(left) + m.total(right) == pytest.approx(m.total(inner), rel=1e-14)
    assert lqg.lqg_area(f, G83, 4.0, left) == m.total(left)
    assert np.all(m.cell_masses[inner] > 0) and np.all(np.isnan(m.cell_masses[~inner]))
    with pytest.raises(ValueError):
        m.total(np.ones_like(inner))


def test_doubling_field_values():
    f = lqg.lqg_field(128, 5)
    region = Disk(0j, 0.3)
    m1 = lqg.lqg_measure(f, G83, 4.0, region)
    m2 = lqg.lqg_measure(f.scaled(2.0), G83, 4.0, region)
    mask = region(*f.cell_centers())
    X, Y = f.cell_centers()
    he = lqg.circle_average(f, X[mask] + 1j * Y[mask], 4.0)
    np.testing.assert_allclose(m2.cell_masses[mask] / m1.cell_masses[mask], np.exp(G83.gamma * he), rtol=1e-12)


def test_region_exits_domain():
    f = lqg.lqg_field(64, 0)
    with pytest.raises(ValueError, match="domain"):
        lqg.lqg_area(f, G83, 4.0, Disk(0j, 1.0))
    with pytest.raises(ValueError):
        lqg.lqg_area(f, G83, 4.0, np.ones((3, 3), dtype=bool))


def test_dyadic_stability():
    # median ratio of masses at eps = 16 and 8 cells over 20 fields
    region = Disk(0j, 0.5)
    r = [lqg.lqg_area(f, G83, 16.0, region) / lqg.lqg_area(f, G83, 8.0, region)
         for f in (lqg.lqg_field(512, s) for s in range(20))]
    assert abs(np.median(r) - 1) < 0.20


def test_mobius():
    phi = Mobius(0.3 + 0.1j, 0.4)
    z = np.array([0.1 + 0.2j, -0.3j])
    np.testing.assert_allclose(phi.inverse()(phi(z)), z, atol=1e-14)
    h = 1e-6
    np.testing.assert_allclose(phi.deriv(z), (phi(z + h) - phi(z - h)) / (2 * h), rtol=1e-8)
    with pytest.raises(ValueError):
        Mobius(1.0)


def test_coord_change_identity():
    f = lqg.lqg_field(256, 1)
    assert lqg.coord_change_check(f, G83, Mobius()) < 1e-12


def test_coord_change_gamma_zero():
    f = lqg.lqg_field(512, 0)
    for phi in (Mobius(0.3), Mobius(0.3).inverse(), Mobius(0.2j, 0.5)):
        assert lqg.coord_change_check(f, LqgParams(0.0), phi) < 0.01


def test_coord_change_symmetric_in_phi():
    phi = Mobius(0.3)
    f = lqg.lqg_field(512, 0)
    p0 = LqgParams(0.0)
    bound = 2 * max(lqg.coord_change_check(f, p0, phi), lqg.coord_change_check(f, p0, phi.inverse()))
    assert abs(lqg.coord_change_check(f, p0, phi) - lqg.coord_change_check(f, p0, phi.inverse())) <= bound
    a, b = [], []
    for s in range(10):
        f = lqg.lqg_field(512, s)
        a.append(lqg.coord_change_check(f, G83, phi))
        b.append(lqg.coord_change_check(f, G83, phi.inverse()))
    assert 0.5 < np.median(a) / np.median(b) < 2.0


def test_coord_change_margin():
    f = lqg.lqg_field(128, 0)
    with pytest.raises(ValueError, match="domain"):
        lqg.coord_change_check(f, G83, Mobius(0.3), region=Disk(0j, 0.8))


def test_chord_length():
    f = lqg.lqg_field(128, 2)
    assert lqg.boundary_length_chord(f, LqgParams(0.0), 4.0) == pytest.approx(1.0, rel=1e-12)
    v = lqg.boundary_length_chord(f, G83, 4.0, y0=0.2)
    assert math.isfinite(v) and v > 0


def test_save_load(tmp_path):
    f = lqg.lqg_field(64, 7)
    p = lqg.save_field(f, tmp_path / "fields" / "f7")
    g = lqg.load_field(p)
    np.testing.assert_array_equal(f.values, g.values)
    assert g.seed == 7 and g.boundary == "zero" and g.resolution == 64
