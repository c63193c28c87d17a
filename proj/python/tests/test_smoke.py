import math

import pytest

import qpsmc


def test_reduced_units():
    p = qpsmc.build_params(0.16, 0.5, 17.0, n_particles=4)
    assert p.epsilon == pytest.approx(49.22, rel=1e-3)
    assert p.omega == pytest.approx(3.508, rel=1e-3)
    assert p.lambda_th == pytest.approx(1.34, abs=5e-3)
    assert p.u_cut == 5.0


def test_bad_parameters_raise():
    with pytest.raises(ValueError, match="sym_order"):
        qpsmc.build_params(0.16, 0.5, 17.0, n_particles=4, sym_order=4)
    with pytest.raises(ValueError):
        qpsmc.Configuration([0.0, 1e-9])


def test_closed_form_matches_series():
    exact = qpsmc.w_sho_closed_form(0.4, -0.7, 2.0)
    series = qpsmc.w_sho_series(0.4, -0.7, 2.0, 40)
    assert abs(exact - series) < 1e-10
    assert abs(qpsmc.gaussian_moment(1.0, 0.0, 0) - math.sqrt(2 * math.pi)) < 1e-12


def test_configuration_weight_is_real():
    p = qpsmc.build_params(0.16, 0.5, 17.0, n_particles=4, sym_order=3, statistics="fermion")
    w = qpsmc.configuration_weight(qpsmc.Configuration([-1.5, -0.45, 0.55, 1.5]), p)
    assert w.imag_residual < 1e-10
    assert math.isfinite(w.log_scale)


def test_oscillator_run():
    beta_lj = qpsmc.beta_lj_from_trap_units(1.0, 0.5)
    p = qpsmc.build_params(0.16, 0.5, beta_lj, quadrature="mehler", u_cut=1e6)
    rc = qpsmc.RunConfig()
    rc.n_blocks = 20
    rc.cycles_per_block = 1200
    rc.seed = 3
    r = qpsmc.run(p, rc)
    exact = qpsmc.sho_exact_energy(p.beta, p.omega)
    assert abs(r.energy.mean - exact) < 5 * r.energy.sigma + 1e-9
    assert len(r.density) == rc.density_bins


def test_oracle_levels():
    p = qpsmc.build_params(0.16, 0.5, 17.0)
    levels = qpsmc.grid_levels(p, extent=4.0, spacing=0.01, n_levels=5)
    assert levels == pytest.approx([p.omega * (n + 0.5) for n in range(5)], rel=1e-4)
    energy, truncated = qpsmc.canonical_energy(levels, 10.0 / p.omega)
    assert energy == pytest.approx(0.5 * p.omega, rel=1e-3)
    assert not truncated


def test_scan_from_config(tmp_path):
    setup = qpsmc.parse_config(
        "n_particles = 2\nde_boer = 0.16\ntrap_ratio = 0.5\nbeta_lj = 5, 10\n"
        "n_blocks = 4\ncycles_per_block = 60\n"
    )
    assert "# n_particles = 2" in qpsmc.provenance_header(setup)
    points = qpsmc.run_scan(setup, tmp_path)
    assert [pt.beta_lj for pt in points] == [5.0, 10.0]
    assert (tmp_path / "energy.csv").exists()
