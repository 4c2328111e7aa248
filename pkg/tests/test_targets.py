import math

import numpy as np
import pytest
from scipy import special

import langevin_bounds as lb
from langevin_bounds.errors import InvalidDensityError, NumericDomainError


def test_exponential_power_floor_equals_exponent():
    assert lb.make_exponential_power(2.0).b == 2.0
    assert lb.make_exponential_power(1.1).b == 1.1


def test_exponential_power_normalizer():
    # Gaussian-type case integrates to sqrt(pi); general case 2 Gamma(1 + 1/beta).
    assert lb.make_exponential_power(2.0).z_const == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert lb.make_exponential_power(1.1).z_const == pytest.approx(
        2.0 * math.gamma(1.0 + 1.0 / 1.1), rel=1e-14
    )


@pytest.mark.parametrize("beta", [1.0, 0.5, 0.0, -3.0, math.nan])
def test_exponent_at_most_one_rejected(beta):
    with pytest.raises(InvalidDensityError):
        lb.make_exponential_power(beta)


def test_exponential_power_drift_shape():
    d = lb.make_exponential_power(1.5)
    xs = np.linspace(-6.0, 6.0, 101)
    g = d.grad_log_density(xs)
    # odd function, inward-pointing, with non-decreasing magnitude beyond 1
    assert np.allclose(g, -d.grad_log_density(-xs))
    assert np.all(g[xs > 0] < 0)
    mag = -d.grad_log_density(np.linspace(1.0, 30.0, 200))
    assert np.all(np.diff(mag) >= 0)
    assert d.grad_log_density(0.0) == 0.0


def test_mass_interval_normalization_and_symmetry():
    d = lb.make_exponential_power(2.0)
    assert lb.mass_interval(d, -math.inf, math.inf) == pytest.approx(1.0, abs=1e-9)
    assert lb.mass_interval(d, 0.0, math.inf) == pytest.approx(0.5, abs=1e-9)
    for y in (0.3, 1.0, 2.5, 7.0):
        assert lb.mass_interval(d, 0.0, y) == pytest.approx(lb.mass_interval(d, -y, 0.0), rel=1e-12)


def test_mass_interval_against_erf():
    d = lb.make_exponential_power(2.0)
    # int_0^2 e^{-x^2} dx / sqrt(pi) = erf(2) / 2
    assert lb.mass_interval(d, 0.0, 2.0) == pytest.approx(float(special.erf(2.0)) / 2.0, rel=1e-9)


def test_mass_interval_monotone_in_window():
    d = lb.make_exponential_power(1.2)
    masses = [lb.mass_interval(d, -x, x) for x in (1.0, 2.0, 4.0, 8.0, 16.0)]
    assert all(m2 >= m1 for m1, m2 in zip(masses, masses[1:]))
    assert masses[-1] == pytest.approx(1.0, abs=1e-9)


def test_mass_interval_rejects_inverted_interval():
    d = lb.make_exponential_power(2.0)
    with pytest.raises(ValueError):
        lb.mass_interval(d, 1.0, 0.0)


def test_check_a1_exponential_power_is_analytic():
    report = lb.check_a1(lb.make_exponential_power(2.0))
    assert report.analytic and report.passed
    assert {c.name for c in report.conditions} == {"symmetry", "drift-sign", "drift-floor"}


def test_check_a1_outward_drift_fails_at_first_grid_point():
    d = lb.make_custom_density(
        log_density_unnorm=lambda x: -np.abs(x),
        grad_log_density=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        b=0.5,
        z_const=2.0,
    )
    report = lb.check_a1(d, grid_max=10.0, grid_n=101)
    sign = next(c for c in report.conditions if c.name == "drift-sign")
    assert not report.passed and not sign.passed
    assert sign.worst_x == 0.0
    assert sign.worst_value == pytest.approx(-1.0)


def test_check_a1_overdeclared_floor_fails_near_one():
    # Gaussian-type density but with floor declared as 3: inward drift at 1 is 2 < 3.
    d = lb.make_custom_density(
        log_density_unnorm=lambda x: -np.asarray(x, dtype=float) ** 2,
        grad_log_density=lambda x: -2.0 * np.asarray(x, dtype=float),
        b=3.0,
        z_const=math.sqrt(math.pi),
    )
    report = lb.check_a1(d, grid_max=10.0, grid_n=1001)
    floor = next(c for c in report.conditions if c.name == "drift-floor")
    assert not report.passed and not floor.passed
    assert floor.worst_x == pytest.approx(1.0)
    assert floor.worst_value == pytest.approx(2.0, rel=1e-12)


def test_check_a1_asymmetric_density_flagged():
    d = lb.make_custom_density(
        log_density_unnorm=lambda x: np.where(np.asarray(x) >= 0, -np.abs(x), -2.0 * np.abs(x)),
        grad_log_density=lambda x: -np.sign(np.asarray(x, dtype=float)),
        b=1.0,
        z_const=1.5,
    )
    report = lb.check_a1(d, grid_max=5.0, grid_n=51)
    sym = next(c for c in report.conditions if c.name == "symmetry")
    assert not sym.passed


def test_custom_density_autonormalizes():
    d = lb.make_custom_density(lambda x: -np.asarray(x, dtype=float) ** 2, b=2.0)
    assert d.z_const == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    assert lb.mass_interval(d, 0.0, 2.0) == pytest.approx(float(special.erf(2.0)) / 2.0, rel=1e-8)


def test_custom_density_finite_difference_drift():
    d = lb.make_custom_density(lambda x: -np.asarray(x, dtype=float) ** 2, b=2.0)
    for x in (-2.0, -0.5, 0.7, 3.0):
        assert float(d.grad_log_density(x)) == pytest.approx(-2.0 * x, abs=1e-5)


def test_custom_from_samples_round_trip(tmp_path):
    xs = np.linspace(-8.0, 8.0, 401)
    path = tmp_path / "gauss.csv"
    path.write_text("x,logp\n" + "\n".join(f"{x},{-x * x}" for x in xs) + "\n")
    d = lb.custom_from_samples(path, b=2.0)
    assert d.kind == "custom"
    assert d.z_const == pytest.approx(math.sqrt(math.pi), rel=1e-7)
    assert float(d.log_density_unnorm(1.5)) == pytest.approx(-2.25, abs=1e-9)
    assert float(d.grad_log_density(1.5)) == pytest.approx(-3.0, abs=1e-4)
    assert lb.check_a1(d, grid_max=7.5, grid_n=501).passed
    # outside the sampled range the density is treated as zero
    assert float(d.log_density_unnorm(9.0)) == -math.inf


def test_custom_from_samples_needs_enough_points(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("0,0\n1,-1\n")
    with pytest.raises(InvalidDensityError):
        lb.custom_from_samples(path, b=1.0)


def test_nan_log_density_raises_numeric_domain():
    d = lb.make_custom_density(
        log_density_unnorm=lambda x: np.where(np.abs(np.asarray(x)) > 3.0, np.nan, -np.asarray(x) ** 2),
        grad_log_density=lambda x: -2.0 * np.asarray(x, dtype=float),
        b=2.0,
        z_const=math.sqrt(math.pi),
    )
    with pytest.raises(NumericDomainError):
        lb.mass_interval(d, 0.0, math.inf)


def test_invalid_floor_rejected():
    with pytest.raises(InvalidDensityError):
        lb.make_custom_density(lambda x: -np.asarray(x) ** 2, b=0.0, z_const=1.0)
    with pytest.raises(InvalidDensityError):
        lb.make_custom_density(lambda x: -np.asarray(x) ** 2, b=-1.0, z_const=1.0)
