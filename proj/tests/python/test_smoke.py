import math
import pathlib

import numpy as np
import pytest

import ckdvlab


def test_airy_wronskian():
    for z in np.linspace(-10.0, 3.0, 50):
        ai, aip, bi, bip = ckdvlab.airy(float(z))
        assert abs(ai * bip - aip * bi - 1.0 / math.pi) < 1e-10


def test_soliton_field_matches_pointwise():
    x = ckdvlab.grid_nodes(512, 200.0, -50.0)
    f = ckdvlab.soliton_field(20.0, 512, 200.0, -50.0)
    assert f.shape == (512,)
    for j in (0, 100, 300, 511):
        assert f[j] == pytest.approx(ckdvlab.soliton_amplitude(20.0, x[j]), rel=1e-12, abs=1e-15)
    assert np.all(ckdvlab.soliton_field(2.0, 64, 20.0, 0.0, alpha=0.0) == 0.0)


def test_ckdv_evolve_keeps_zero_mean_and_decays():
    x = ckdvlab.grid_nodes(256, 40.0)
    a0 = -2.0 * x * np.exp(-x * x)
    traj = ckdvlab.ckdv_evolve(a0, 40.0, rho1=1.5, outputs=[1.25])
    assert [r for r, _ in traj] == pytest.approx([1.0, 1.25, 1.5])
    final = traj[-1][1]
    assert abs(final.mean()) < 1e-12
    assert np.isfinite(final).all()
    with pytest.raises(ValueError):
        ckdvlab.ckdv_evolve(a0[:-1], 40.0)


def test_change_of_variables():
    for u in (-0.2, 0.0, 0.1, 0.4):
        assert ckdvlab.v_to_u(ckdvlab.u_to_v(u)) == pytest.approx(u, abs=1e-15)


def test_residual_sweep_slopes():
    r = ckdvlab.residual_sweep([0.2, 0.14, 0.1, 0.07])
    assert len(r["rows"]) == 4
    assert abs(r["slope_l2"] - 7.5) < 0.3
    assert abs(r["slope_anti"] - 6.5) < 0.3
    assert math.isnan(ckdvlab.residual_sweep([0.1])["slope_l2"])


def test_zero_amplitude_theorem1_run():
    d = ckdvlab.theorem1_error(0.12, amplitude=0.0)
    assert d["sup_u_error"] == 0.0
    assert d["max_energy"] == 0.0


def test_self_checks_and_fault_injection():
    assert all(ok for _, ok, _, _ in ckdvlab.self_checks())
    bad = {name: ok for name, ok, _, _ in ckdvlab.self_checks(True)}
    assert not bad["boussinesq bessel oracle"]


def test_run_from_config(tmp_path: pathlib.Path):
    ini = ckdvlab.default_config("residual-sweep")
    status, files, summary = ckdvlab.run(ini, str(tmp_path))
    assert status == 0
    names = {pathlib.Path(f).name for f in files}
    assert {"residual_scaling.csv", "residual_summary.csv", "manifest.txt"} <= names
    assert any("7.5" in line for line in summary)
    with pytest.raises(ValueError):
        ckdvlab.run("[model]\neps =\n[run]\ncommand = residual-sweep\n")
