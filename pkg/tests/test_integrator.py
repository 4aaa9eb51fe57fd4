"""Limit-cycle extraction: anchors, invariances, failure paths, CSV output."""

from __future__ import annotations

import math
import re

import numpy as np
import pytest

from limitcycles.errors import ConvergenceError, DomainError
from limitcycles.integrator import (
    AmplitudeCurve,
    IntegratorConfig,
    amplitude_sweep,
    integrate,
    limit_cycle,
)
from limitcycles.oscillators import OscillatorSpec


def harmonic_spec() -> OscillatorSpec:
    """Plain y'' + y = 0 via the custom hook (zero damping)."""
    return OscillatorSpec.lienard(1.0, lambda y, z: 0.0, lambda y: y)


def test_config_validation():
    for bad in (
        dict(rel_tol=0.0),
        dict(abs_tol=-1e-9),
        dict(cycle_tol=0.0),
        dict(max_cycles=1),
        dict(n_samples=4),
        dict(transient_time=-1.0),
    ):
        with pytest.raises(DomainError):
            IntegratorConfig(**bad)


def test_integrate_shapes_and_validation():
    spec = OscillatorSpec.rayleigh(1.0)
    traj = integrate(spec, 10.0, n_samples=256)
    assert traj.t.shape == traj.y.shape == traj.z.shape == (256,)
    assert np.allclose(np.diff(traj.t), traj.t[1] - traj.t[0])
    with pytest.raises(DomainError):
        integrate(spec, 0.0)


def test_harmonic_oscillator_recovers_circle():
    # y(0)=2, z(0)=0 stays on the circle of radius 2 with period 2*pi;
    # every numeric claim here has the analytic solution as its oracle.
    cfg = IntegratorConfig(transient_time=0.0)
    rec = limit_cycle(harmonic_spec(), cfg)
    assert rec.amplitude == pytest.approx(2.0, abs=1e-8)
    assert rec.period == pytest.approx(2.0 * math.pi, abs=1e-8)
    radius = np.hypot(rec.y, rec.z)
    assert np.max(np.abs(radius - 2.0)) < 1e-7


def test_rayleigh_amplitude_anchor():
    rec = limit_cycle(OscillatorSpec.rayleigh(1.0))
    assert rec.converged
    assert rec.amplitude == pytest.approx(2.17271, abs=2e-3)


def test_van_der_pol_amplitude_anchor():
    rec = limit_cycle(OscillatorSpec.van_der_pol(1.0))
    assert rec.amplitude == pytest.approx(2.0086, abs=2e-3)


def test_seed_independence():
    a = limit_cycle(
        OscillatorSpec.rayleigh(1.0), IntegratorConfig(seed=(0.3, 0.0))
    ).amplitude
    b = limit_cycle(
        OscillatorSpec.rayleigh(1.0), IntegratorConfig(seed=(5.0, 1.0))
    ).amplitude
    assert a == pytest.approx(b, abs=1e-5)


def test_cycle_is_odd_symmetric():
    # both systems are invariant under (y, z) -> (-y, -z); the converged
    # cycle must map onto itself half a period later, sign-flipped
    cfg = IntegratorConfig(n_samples=1001)
    rec = limit_cycle(OscillatorSpec.van_der_pol(1.0), cfg)
    half = 500
    folded = rec.y[: half + 1] + rec.y[half:]
    assert np.max(np.abs(folded)) < 5e-4


def test_amplitude_matches_sampled_extremum():
    rec = limit_cycle(OscillatorSpec.rayleigh(2.0))
    assert rec.amplitude >= np.max(np.abs(rec.y)) - 1e-12
    assert rec.amplitude == pytest.approx(np.max(np.abs(rec.y)), abs=1e-5)


def test_non_convergence_paths():
    cfg = IntegratorConfig(transient_time=0.0, max_cycles=2, cycle_tol=1e-16)
    with pytest.raises(ConvergenceError):
        limit_cycle(OscillatorSpec.rayleigh(5.0), cfg)
    rec = limit_cycle(OscillatorSpec.rayleigh(5.0), cfg, strict=False)
    assert not rec.converged
    assert rec.cycles_used >= 2


def test_sweep_records_failures_without_aborting():
    cfg = IntegratorConfig(transient_time=0.0, max_cycles=2, cycle_tol=1e-16)
    curve = amplitude_sweep("rayleigh", [1.0], cfg)
    assert math.isnan(curve.amplitude[0])
    assert "settled" in curve.errors[0]


def test_sweep_serial_and_parallel_agree(tmp_path):
    eps = [0.5, 1.0]
    serial = amplitude_sweep("rayleigh", eps)
    parallel = amplitude_sweep("rayleigh", eps, jobs=2)
    assert serial.errors == ("", "")
    np.testing.assert_allclose(serial.amplitude, parallel.amplitude, rtol=0, atol=0)
    with pytest.raises(DomainError):
        amplitude_sweep("lienard", eps)
    # CSV round-trip sanity
    path = tmp_path / "sweep.csv"
    serial.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "eps,amplitude,error"
    assert len(lines) == 3


def test_cycle_csv_format(tmp_path):
    cfg = IntegratorConfig(n_samples=64, transient_time=0.0)
    rec = limit_cycle(harmonic_spec(), cfg)
    path = tmp_path / "cycle.csv"
    rec.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,y,z"
    assert len(lines) == 65
    # every value carries 12 significant digits in scientific notation
    value = r"-?\d\.\d{11}e[+-]\d{2,3}"
    row = re.compile(rf"^{value},{value},{value}$")
    assert all(row.match(line) for line in lines[1:])
