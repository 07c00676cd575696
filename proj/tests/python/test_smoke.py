"""Smoke tests for the python module and the installed CLI binary."""

import math
import os
import subprocess

import numpy as np
import pytest

import qcarpet as qc


def natural(box=1.0, q=1.0, qp=1.0):
    return qc.PhysicalParams.natural(box, q, qp)


def packet(m_min, m_max, center=0.5, width=1e-2):
    spec = qc.PacketSpec()
    spec.m_min = m_min
    spec.m_max = m_max
    spec.center = center
    spec.width = width
    return spec


def test_spectrum_basics():
    params = natural(math.pi, 0.5)
    assert qc.dirac_energy(1, params) == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert qc.dirac_momentum(1, params) == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-14)
    assert qc.dirac_phase(0.41421356237309515) == pytest.approx(3 * math.pi / 4, rel=1e-14)
    with pytest.raises(ValueError):
        qc.dirac_phase(1.5)


def test_modeset_and_grid():
    params = natural(1.0, 1e-6)
    modeset = qc.build_modeset(qc.ModelKind.Schrodinger, packet(1, 40), params)
    assert modeset.size == 40
    assert np.abs(np.sum(np.abs(modeset.coeffs) ** 2) - 1.0) < 1e-12

    spec = qc.GridSpec()
    spec.nz = 64
    spec.nt = 32
    grid = qc.density_grid(modeset, spec)
    values = grid.values
    assert values.shape == (32, 64)
    assert values.min() >= 0.0
    assert grid.norm0 == pytest.approx(1.0, rel=1e-12)
    assert grid.max_row_norm_deviation() < 1e-9

    oracle = qc.double_sum_oracle(modeset, spec)
    assert np.max(np.abs(oracle.values - values)) < 1e-10


def test_autocorrelation_and_revivals():
    params = natural(1.0, 1.0)  # quadratic period 2
    modeset = qc.build_modeset(qc.ModelKind.Schrodinger, packet(1, 40, center=0.3), params)
    times = np.linspace(0.0, 2.0, 1001)
    trace = qc.autocorrelation(modeset, times)
    assert trace.shape == (1001, 2)
    assert trace[0, 1] == pytest.approx(1.0, abs=1e-12)
    assert trace[-1, 1] == pytest.approx(1.0, abs=1e-12)

    peaks = qc.detect_revivals(trace, 0.9)
    assert len(peaks) == 1
    assert peaks[0].t == pytest.approx(2.0, abs=2.0 / 1000)


def test_revival_time_ratio():
    dirac = natural(1.0, 1.0)
    kg_half_box = natural(0.5, 1.0, 1.0)  # doubled boson rest energy
    td = qc.analytic_revival_time(qc.ModelKind.DiracExact, dirac, 80)
    tk = qc.analytic_revival_time(qc.ModelKind.KleinGordon, kg_half_box, 80)
    assert td / tk == 2.0
    assert td == pytest.approx(math.sqrt(25601.0) / 80.0, rel=1e-14)


def test_degenerate_packet_raises():
    with pytest.raises(qc.DegeneratePacketError):
        qc.build_modeset(qc.ModelKind.Schrodinger, packet(1, 40, width=50.0), natural())


def test_csv_roundtrip(tmp_path):
    modeset = qc.build_modeset(qc.ModelKind.KleinGordon, packet(1, 20), natural())
    grid = qc.density_grid_over(modeset, 24, 12, 1.0)
    path = tmp_path / "grid.csv"
    qc.write_grid_csv(grid, path)
    loaded = qc.read_grid_csv(path)
    assert np.array_equal(loaded.values, grid.values)
    assert loaded.model == qc.ModelKind.KleinGordon
    assert qc.compare_grids(loaded, grid).max_abs == 0.0


def test_image_outputs(tmp_path):
    modeset = qc.build_modeset(qc.ModelKind.DiracExact, packet(65, 95), natural(1.0, 1.0))
    grid = qc.density_grid_over(modeset, 48, 48, 2.0)
    pgm = tmp_path / "carpet.pgm"
    png = tmp_path / "carpet.png"
    qc.write_pgm(grid, pgm)
    qc.write_png(grid, qc.ColorMap("viridis", 0.5), png)
    assert pgm.read_bytes().startswith(b"P5\n")
    assert png.read_bytes().startswith(b"\x89PNG\r\n\x1a\n")


@pytest.fixture(scope="module")
def cli():
    path = os.environ.get("QCARPET_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("QCARPET_CLI not set (CLI binary not built)")
    return path


def run_cli(cli, *args, cwd):
    return subprocess.run([cli, *args], cwd=cwd, capture_output=True, text=True)


def test_cli_carpet_and_compare(cli, tmp_path):
    result = run_cli(cli, "carpet", "--model", "kg", "--qprime", "1", "--mmin", "1",
                     "--mmax", "20", "--nz", "32", "--nt", "32", "--out", "fig2a",
                     cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    for suffix in (".csv", ".pgm", ".png"):
        assert (tmp_path / f"fig2a{suffix}").stat().st_size > 0

    same = run_cli(cli, "compare", "fig2a.csv", "fig2a.csv", cwd=tmp_path)
    assert same.returncode == 0
    assert "verdict=PASS" in same.stdout

    (tmp_path / "broken.csv").write_text("not a grid\n")
    broken = run_cli(cli, "compare", "fig2a.csv", "broken.csv", cwd=tmp_path)
    assert broken.returncode == 2


def test_cli_limits_exit_codes(cli, tmp_path):
    good = run_cli(cli, "limits", "--q", "1e-6", "--mmin", "1", "--mmax", "12", "--nz", "32",
                   "--nt", "32", cwd=tmp_path)
    assert good.returncode == 0
    assert "verdict=PASS" in good.stdout

    bad = run_cli(cli, "limits", "--q", "1", "--mmin", "65", "--mmax", "95", "--nz", "32",
                  "--nt", "32", cwd=tmp_path)
    assert bad.returncode == 1

    usage = run_cli(cli, "limits", "--q", "1e-6", "--not-a-flag", cwd=tmp_path)
    assert usage.returncode == 2
