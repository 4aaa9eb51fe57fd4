"""Limit-cycle extraction by adaptive Runge-Kutta integration.

The workhorse is :func:`scipy.integrate.solve_ivp` with the Dormand-Prince
embedded 4(5) pair (``method="RK45"``), dense local interpolants, and event
location.  Cycle structure comes from the Poincare section ``z = y' = 0``:
the extrema of ``y`` sit exactly on that section, so the event refinement
gives amplitude readings without any extra peak interpolation.

:func:`limit_cycle` integrates past a transient, then watches successive
section crossings until the per-cycle amplitude stabilizes below
``cycle_tol``; the converged cycle is re-sampled uniformly over one period.
:func:`amplitude_sweep` maps that over a grid of nonlinearity values,
optionally across processes, recording per-point failures instead of
aborting the sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DomainError
from .oscillators import LIENARD, OscillatorSpec

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "CycleRecord",
    "AmplitudeCurve",
    "integrate",
    "limit_cycle",
    "amplitude_sweep",
]


@dataclass(frozen=True)
class IntegratorConfig:
    """Tunable knobs for trajectory and limit-cycle computations.

    ``transient_time=None`` picks ``max(50, 20*epsilon)``, long enough for
    the strongly relaxational large-epsilon cycles to pull the seed in.
    """

    method: str = "RK45"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    transient_time: Optional[float] = None
    cycle_tol: float = 1e-6
    max_cycles: int = 200
    seed: Tuple[float, float] = (2.0, 0.0)
    n_samples: int = 1000

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.cycle_tol <= 0:
            raise DomainError("cycle_tol must be positive")
        if self.max_cycles < 2:
            raise DomainError("max_cycles must be at least 2")
        if self.n_samples < 8:
            raise DomainError("n_samples must be at least 8")
        if self.transient_time is not None and self.transient_time < 0:
            raise DomainError("transient_time must be nonnegative")

    def transient_for(self, epsilon: float) -> float:
        if self.transient_time is not None:
            return self.transient_time
        return max(50.0, 20.0 * epsilon)


class Trajectory(NamedTuple):
    """Sampled phase-plane path."""

    t: np.ndarray
    y: np.ndarray
    z: np.ndarray


@dataclass
class CycleRecord:
    """One converged limit cycle, sampled uniformly over a single period.

    ``history`` holds the per-cycle amplitude readings that led to
    convergence; ``state_gap`` is the max-norm mismatch between the start and
    end states of the sampled period (a closure diagnostic, not a gate).
    """

    kind: str
    epsilon: float
    amplitude: float
    period: float
    t: np.ndarray
    y: np.ndarray
    z: np.ndarray
    converged: bool
    cycles_used: int
    history: Tuple[float, ...]
    state_gap: float

    def write_csv(self, path) -> None:
        """Write the sampled cycle as ``t,y,z`` rows, 12 significant digits."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,y,z\n")
            for t, y, z in zip(self.t, self.y, self.z):
                fh.write(f"{t:.11e},{y:.11e},{z:.11e}\n")


@dataclass
class AmplitudeCurve:
    """Amplitude-versus-epsilon sweep with per-point error notes.

    Failed grid points keep their slot: ``amplitude`` holds NaN and the
    matching ``errors`` entry carries the failure message (empty on success).
    """

    kind: str
    eps: np.ndarray
    amplitude: np.ndarray
    errors: Tuple[str, ...]

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("eps,amplitude,error\n")
            for e, a, msg in zip(self.eps, self.amplitude, self.errors):
                a_text = f"{a:.11e}" if math.isfinite(a) else ""
                fh.write(f"{e:.11e},{a_text},{msg}\n")


def _solve(fun, t_span, state, config: IntegratorConfig, **kw):
    sol = solve_ivp(
        fun,
        t_span,
        state,
        method=config.method,
        rtol=config.rel_tol,
        atol=config.abs_tol,
        **kw,
    )
    if not sol.success:
        raise ConvergenceError(f"integration failed: {sol.message}")
    return sol


def integrate(
    spec: OscillatorSpec,
    t_final: float,
    *,
    seed: Optional[Sequence[float]] = None,
    config: Optional[IntegratorConfig] = None,
    n_samples: Optional[int] = None,
) -> Trajectory:
    """Integrate from ``seed`` over ``[0, t_final]``.

    With ``n_samples`` the output is uniform in time (via the dense
    interpolant); otherwise the solver's own accepted steps are returned.
    """
    cfg = config or IntegratorConfig()
    if t_final <= 0:
        raise DomainError("t_final must be positive")
    state = np.asarray(seed if seed is not None else cfg.seed, dtype=float)
    t_eval = np.linspace(0.0, t_final, n_samples) if n_samples else None
    sol = _solve(spec.field_function(), (0.0, t_final), state, cfg, t_eval=t_eval)
    return Trajectory(sol.t, sol.y[0], sol.y[1])


def _section_events():
    """Poincare-section event pair: upward and downward crossings of z = 0."""

    def up(t, state):
        return state[1]

    def down(t, state):
        return state[1]

    up.direction = 1.0
    down.direction = -1.0
    return up, down


def limit_cycle(
    spec: OscillatorSpec,
    config: Optional[IntegratorConfig] = None,
    *,
    strict: bool = True,
) -> CycleRecord:
    """Converge onto the attracting limit cycle and sample one period.

    Convergence criterion: the amplitude read at successive downward section
    crossings (the maxima of ``y``) changes by less than ``cycle_tol``.  If
    ``max_cycles`` maxima pass without that happening, raises
    :class:`~limitcycles.errors.ConvergenceError` (or, with ``strict=False``,
    returns the best cycle seen flagged ``converged=False``).
    """
    cfg = config or IntegratorConfig()
    fun = spec.field_function()
    up, down = _section_events()

    # pull the seed toward the cycle before watching the section
    state = np.asarray(cfg.seed, dtype=float)
    t_trans = cfg.transient_for(spec.epsilon)
    if t_trans > 0:
        sol = _solve(fun, (0.0, t_trans), state, cfg)
        state = sol.y[:, -1]

    period_est = 2.0 * math.pi
    down_t: list = []  # times of y-maxima (z: + -> -)
    down_states: list = []
    amps: list = []  # |y| at downward crossings
    up_abs: list = []  # |y| at upward crossings (the minima)
    t_now = 0.0
    converged = False

    while len(amps) < cfg.max_cycles:
        chunk = max(25.0, 3.0 * period_est)
        sol = _solve(
            fun, (t_now, t_now + chunk), state, cfg, events=[up, down], dense_output=False
        )
        t_up, t_dn = sol.t_events
        s_dn = sol.y_events[1]
        for t_i, s_i in zip(t_dn, s_dn):
            down_t.append(float(t_i))
            down_states.append(np.asarray(s_i, dtype=float))
            amps.append(abs(float(s_i[0])))
        for s_i in sol.y_events[0]:
            up_abs.append(abs(float(s_i[0])))
        if len(down_t) >= 2:
            period_est = down_t[-1] - down_t[-2]
        state = sol.y[:, -1]
        t_now = float(sol.t[-1])
        if len(amps) >= 2 and abs(amps[-1] - amps[-2]) < cfg.cycle_tol:
            converged = True
            break
        if not (len(t_up) or len(t_dn)) and t_now > t_trans + 100 * max(
            period_est, 1.0
        ):
            raise ConvergenceError(
                f"no section crossings found for {spec.kind} eps={spec.epsilon}"
            )

    if not converged and strict:
        raise ConvergenceError(
            f"amplitude not settled after {len(amps)} cycles "
            f"(last delta {abs(amps[-1] - amps[-2]):.3e}, tol {cfg.cycle_tol:.1e})"
            if len(amps) >= 2
            else f"fewer than two section crossings for {spec.kind} eps={spec.epsilon}"
        )
    if len(down_t) < 2:
        raise ConvergenceError(
            f"could not isolate a full cycle for {spec.kind} eps={spec.epsilon}"
        )

    # one anchored period, re-sampled uniformly from the penultimate maximum
    period = down_t[-1] - down_t[-2]
    anchor = down_states[-2]
    t_eval = np.linspace(0.0, period, cfg.n_samples)
    sol = _solve(fun, (0.0, period), anchor, cfg, t_eval=t_eval)
    y, z = sol.y
    state_gap = float(np.max(np.abs(sol.y[:, -1] - anchor)))

    amplitude = max(float(np.max(np.abs(y))), amps[-1], up_abs[-1] if up_abs else 0.0)
    return CycleRecord(
        kind=spec.kind,
        epsilon=spec.epsilon,
        amplitude=amplitude,
        period=period,
        t=sol.t,
        y=y,
        z=z,
        converged=converged,
        cycles_used=len(amps),
        history=tuple(amps),
        state_gap=state_gap,
    )


def _sweep_point(args) -> Tuple[int, float, str]:
    index, kind, eps, config = args
    try:
        record = limit_cycle(OscillatorSpec(kind, eps), config)
        return index, record.amplitude, ""
    except (ConvergenceError, DomainError) as exc:
        return index, math.nan, str(exc)


def amplitude_sweep(
    kind: str,
    eps_values: Sequence[float],
    config: Optional[IntegratorConfig] = None,
    *,
    jobs: int = 1,
) -> AmplitudeCurve:
    """Limit-cycle amplitude over a grid of nonlinearity values.

    ``jobs > 1`` distributes grid points over worker processes (named
    oscillator kinds only — custom callables do not cross process
    boundaries).  Output ordering matches ``eps_values`` regardless of
    worker scheduling.
    """
    cfg = config or IntegratorConfig()
    if kind == LIENARD:
        raise DomainError("sweeps are defined for the named oscillator kinds")
    eps_arr = np.asarray(list(eps_values), dtype=float)
    tasks = [(i, kind, float(e), cfg) for i, e in enumerate(eps_arr)]
    results: list = [None] * len(tasks)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for index, amp, msg in pool.map(_sweep_point, tasks):
                results[index] = (amp, msg)
    else:
        for task in tasks:
            index, amp, msg = _sweep_point(task)
            results[index] = (amp, msg)
    amplitude = np.array([r[0] for r in results], dtype=float)
    errors = tuple(r[1] for r in results)
    return AmplitudeCurve(kind=kind, eps=eps_arr, amplitude=amplitude, errors=errors)
