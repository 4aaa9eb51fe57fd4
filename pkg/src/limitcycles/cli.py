"""Command-line surface: amplitudes, sweeps, cycles, fits, and reports.

Five subcommands:

* ``amplitude`` — one number by one method (exact integration, tuned
  second-order expansion, plain flow balance, calibrated closed form, or the
  high-accuracy van der Pol fit), printed and recorded as JSON;
* ``sweep`` — a comparison table over a grid of nonlinearity values,
  written as CSV plus an SVG overlay plot;
* ``cycle`` — one integrated limit cycle as CSV plus a phase-plane SVG,
  optionally overlaid with a fresh arc/segment fit (``--fit``) or with the
  bundled reference tables and their audit (``--appendix-c``);
* ``fit`` — just the arc/segment fit, written as a curve file;
* ``report`` — the full reproduction bundle: anchors, both sweeps, both
  phase portraits, and a discrepancy-notes file collecting every place the
  published numbers disagree with recomputation.

Exit codes: 0 success, 1 domain error, 2 convergence failure.  The output
directory is the ``--output-dir`` flag when given, else the
``LIMITCYCLES_OUTPUT_DIR`` environment variable, else the working directory.
All CSV numbers use 12 significant digits so artifacts diff cleanly.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import geometry
from .errors import ConvergenceError, DomainError
from .ham import (
    B_TABLE,
    DEFAULT_CONTROL,
    TABLE_ONLY_CONTROL,
    HamControl,
    LinearTail,
    amplitude_ham,
    breakpoint_jumps,
    control_h,
)
from .integrator import IntegratorConfig, amplitude_sweep, limit_cycle
from .irgm import PRESETS, amplitude_irgm, consistency_report, get_preset, vdp_fit
from .oscillators import RAYLEIGH, VAN_DER_POL, OscillatorSpec
from .rgflow import a_rg
from .svgplot import Series, save_plot

__all__ = ["RunConfig", "ComparisonRow", "build_comparison", "main"]

OUTPUT_DIR_ENV = "LIMITCYCLES_OUTPUT_DIR"

_SYSTEM_ALIASES = {
    "rayleigh": RAYLEIGH,
    "vdp": VAN_DER_POL,
    "vanderpol": VAN_DER_POL,
    "van-der-pol": VAN_DER_POL,
}

METHODS = ("exact", "ham", "rg", "irgm", "fit")

_DEFAULT_PRESET = {RAYLEIGH: "rayleigh", VAN_DER_POL: "vdp-consistent"}


def _canonical_system(name: str) -> str:
    try:
        return _SYSTEM_ALIASES[name.lower()]
    except KeyError:
        raise DomainError(
            f"unknown system {name!r}; choose from {sorted(_SYSTEM_ALIASES)}"
        ) from None


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Complete, serializable description of a sweep/report run.

    Every field has a default, so the tool runs with zero configuration;
    a JSON file with the same explicit keys reproduces a run exactly.
    """

    system: str = RAYLEIGH
    eps_grid: Tuple[float, ...] = (
        0.5, 1.0, 2.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0,
    )
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    ham_control: HamControl = field(default_factory=lambda: DEFAULT_CONTROL)
    irgm_preset: str = "rayleigh"
    output_dir: str = "."

    def __post_init__(self):
        object.__setattr__(self, "system", _canonical_system(self.system))
        object.__setattr__(self, "eps_grid", tuple(float(e) for e in self.eps_grid))
        if not self.eps_grid:
            raise DomainError("eps_grid must not be empty")
        if any(e <= 0 for e in self.eps_grid):
            raise DomainError("eps_grid values must be positive")
        if any(b <= a for a, b in zip(self.eps_grid, self.eps_grid[1:])):
            raise DomainError("eps_grid must be strictly increasing")
        if self.irgm_preset not in PRESETS:
            raise DomainError(
                f"unknown calibration preset {self.irgm_preset!r}; "
                f"choose from {sorted(PRESETS)}"
            )

    def to_dict(self) -> dict:
        cfg = self.integrator
        control = self.ham_control
        return {
            "system": self.system,
            "eps_grid": list(self.eps_grid),
            "integrator": {
                "method": cfg.method,
                "rel_tol": cfg.rel_tol,
                "abs_tol": cfg.abs_tol,
                "transient_time": cfg.transient_time,
                "cycle_tol": cfg.cycle_tol,
                "max_cycles": cfg.max_cycles,
                "seed": list(cfg.seed),
                "n_samples": cfg.n_samples,
            },
            "ham_control": {
                "b_table": [list(row) for row in control.b_table],
                "tail": None
                if control.tail is None
                else {
                    "slope": control.tail.slope,
                    "intercept": control.tail.intercept,
                    "eps_switch": control.tail.eps_switch,
                },
            },
            "irgm_preset": self.irgm_preset,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        defaults = cls()
        integrator = defaults.integrator
        if "integrator" in data:
            raw = dict(data["integrator"])
            if "seed" in raw:
                raw["seed"] = tuple(raw["seed"])
            integrator = IntegratorConfig(**raw)
        control = defaults.ham_control
        if "ham_control" in data:
            raw = data["ham_control"]
            tail = raw.get("tail")
            control = HamControl(
                b_table=tuple(tuple(row) for row in raw["b_table"]),
                tail=None if tail is None else LinearTail(**tail),
            )
        return cls(
            system=data.get("system", defaults.system),
            eps_grid=tuple(data.get("eps_grid", defaults.eps_grid)),
            integrator=integrator,
            ham_control=control,
            irgm_preset=data.get("irgm_preset", defaults.irgm_preset),
            output_dir=data.get("output_dir", defaults.output_dir),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


def _load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        return RunConfig.from_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from None


# ---------------------------------------------------------------------------
# comparison rows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    """One grid point of the method-comparison table (errors in percent)."""

    eps: float
    a_exact: Optional[float] = None
    a_ham: Optional[float] = None
    a_rg: Optional[float] = None
    a_irgm: Optional[float] = None
    rel_err_ham: Optional[float] = None
    rel_err_irgm: Optional[float] = None
    error: str = ""

    CSV_HEADER = "eps,a_exact,a_ham,a_rg,a_irgm,rel_err_ham,rel_err_irgm,error"

    def csv_row(self) -> str:
        def cell(v: Optional[float]) -> str:
            return "" if v is None or not math.isfinite(v) else f"{v:.11e}"

        return ",".join(
            [
                f"{self.eps:.11e}",
                cell(self.a_exact),
                cell(self.a_ham),
                cell(self.a_rg),
                cell(self.a_irgm),
                cell(self.rel_err_ham),
                cell(self.rel_err_irgm),
                self.error,
            ]
        )


def _relative_percent(approx: Optional[float], exact: Optional[float]) -> Optional[float]:
    if approx is None or exact is None:
        return None
    if not (math.isfinite(approx) and math.isfinite(exact)) or exact == 0:
        return None
    return abs((exact - approx) / exact) * 100.0


def _method_amplitude(
    system: str,
    eps: float,
    method: str,
    *,
    preset: Optional[str],
    h_rg: float,
    control: HamControl,
) -> float:
    """Closed-form methods only; ``exact`` is handled by the sweep driver."""
    if method == "ham":
        if system != RAYLEIGH:
            raise DomainError(
                "the tuned control table is calibrated for the rayleigh system"
            )
        return amplitude_ham(eps, control)
    if method == "rg":
        if system != RAYLEIGH:
            raise DomainError("the flow-balance amplitude applies to the rayleigh system")
        return a_rg(eps)
    if method == "irgm":
        name = preset or _DEFAULT_PRESET[system]
        calibration = get_preset(name)
        if calibration.system != system:
            raise DomainError(
                f"preset {name!r} calibrates the {calibration.system} system, "
                f"not {system}"
            )
        return amplitude_irgm(eps, h_rg, calibration.constant)
    if method == "fit":
        if system != VAN_DER_POL:
            raise DomainError("the two-branch amplitude fit covers the vanderpol system")
        return vdp_fit(eps)
    raise DomainError(f"unknown method {method!r}; choose from {METHODS}")


def build_comparison(
    system: str,
    eps_grid: Sequence[float],
    methods: Sequence[str],
    *,
    config: Optional[IntegratorConfig] = None,
    jobs: int = 1,
    preset: Optional[str] = None,
    h_rg: float = 1.0,
    control: HamControl = DEFAULT_CONTROL,
) -> List[ComparisonRow]:
    """Evaluate the requested methods over the grid, one row per point.

    Per-point integration failures land in the row's ``error`` column and
    the run continues.  ``irgm`` and ``fit`` share the closed-form column,
    so they are mutually exclusive in one table.
    """
    system = _canonical_system(system)
    for method in methods:
        if method not in METHODS:
            raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    if "irgm" in methods and "fit" in methods:
        raise DomainError(
            "irgm and fit share the closed-form column; request one of them"
        )

    exact: Dict[float, float] = {}
    errors: Dict[float, str] = {}
    if "exact" in methods:
        curve = amplitude_sweep(system, eps_grid, config, jobs=jobs)
        for e, a, msg in zip(curve.eps, curve.amplitude, curve.errors):
            exact[float(e)] = float(a)
            errors[float(e)] = msg

    rows = []
    for eps in eps_grid:
        values: Dict[str, Optional[float]] = {
            "ham": None, "rg": None, "irgm": None,
        }
        notes = []
        if errors.get(eps):
            notes.append(errors[eps])
        for method in methods:
            if method == "exact":
                continue
            column = "irgm" if method == "fit" else method
            try:
                values[column] = _method_amplitude(
                    system, eps, method,
                    preset=preset, h_rg=h_rg, control=control,
                )
            except DomainError as exc:
                notes.append(f"{method}: {exc}")
        a_exact = exact.get(eps)
        if a_exact is not None and not math.isfinite(a_exact):
            a_exact = None
        rows.append(
            ComparisonRow(
                eps=eps,
                a_exact=a_exact,
                a_ham=values["ham"],
                a_rg=values["rg"],
                a_irgm=values["irgm"],
                rel_err_ham=_relative_percent(values["ham"], a_exact),
                rel_err_irgm=_relative_percent(values["irgm"], a_exact),
                error="; ".join(notes),
            )
        )
    return rows


def write_comparison_csv(rows: Sequence[ComparisonRow], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ComparisonRow.CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.csv_row() + "\n")


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _resolve_output_dir(flag_value: Optional[str]) -> Path:
    value = flag_value or os.environ.get(OUTPUT_DIR_ENV) or "."
    path = Path(value)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_grid(text: str) -> Tuple[float, ...]:
    """Either a comma list (``0.5,1,2``) or ``start:stop:step`` inclusive."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise DomainError(f"bad grid range {text!r}")
        n = int(round((stop - start) / step))
        values = [start + i * step for i in range(n + 1)]
        if values[-1] > stop + 1e-9 * step:
            values.pop()
        return tuple(round(v, 12) for v in values)
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise DomainError(f"cannot parse grid {text!r}") from None


def _spec_for(system: str, eps: float) -> OscillatorSpec:
    if system == RAYLEIGH:
        return OscillatorSpec.rayleigh(eps)
    return OscillatorSpec.van_der_pol(eps)


def _curve_series(curve: geometry.PiecewiseCurve, label: str, *, per_piece: int = 120) -> Series:
    """Sample a piecewise curve (and its mirror) with NaN breaks between pieces."""
    xs: List[float] = []
    ys: List[float] = []

    def add(piece_points):
        if xs:
            xs.append(math.nan)
            ys.append(math.nan)
        xs.extend(p[0] for p in piece_points)
        ys.extend(p[1] for p in piece_points)

    halves = [1.0]
    if curve.symmetric:
        halves.append(-1.0)
    for sign in halves:
        for piece in curve.pieces:
            real = piece.real_domain()
            if real is None:
                continue
            grid = np.linspace(real[0], real[1], per_piece)
            add([(sign * y, sign * piece.value(y)) for y in grid])
    return Series(label, xs, ys, dashed=True)


def _eps_label(eps: float) -> str:
    return f"{eps:g}".replace(".", "p")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_amplitude(args) -> int:
    system = _canonical_system(args.system)
    eps = float(args.eps)
    out_dir = _resolve_output_dir(args.output_dir)
    record: Dict[str, object] = {
        "system": system,
        "eps": eps,
        "method": args.method,
    }
    if args.method == "exact":
        config = IntegratorConfig() if args.rel_tol is None else IntegratorConfig(
            rel_tol=args.rel_tol
        )
        cycle = limit_cycle(_spec_for(system, eps), config)
        record["amplitude"] = cycle.amplitude
        record["period"] = cycle.period
        record["cycles_used"] = cycle.cycles_used
    else:
        control = TABLE_ONLY_CONTROL if args.table_only else DEFAULT_CONTROL
        record["amplitude"] = _method_amplitude(
            system, eps, args.method,
            preset=args.preset, h_rg=args.hrg, control=control,
        )
        if args.method == "ham":
            record["control_h"] = control_h(eps, control)
        if args.method == "irgm":
            record["preset"] = args.preset or _DEFAULT_PRESET[system]
            record["h_rg"] = args.hrg
    print(f"amplitude = {record['amplitude']:.10g}")
    path = out_dir / f"amplitude_{system}_{args.method}_eps{_eps_label(eps)}.json"
    path.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    config = _load_config(args.config)
    if args.system is not None:
        config = replace(config, system=_canonical_system(args.system))
    if args.grid is not None:
        config = replace(config, eps_grid=_parse_grid(args.grid))
    if args.preset is not None:
        config = replace(config, irgm_preset=args.preset)
    out_dir = _resolve_output_dir(args.output_dir or config.output_dir)

    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    rows = build_comparison(
        config.system,
        config.eps_grid,
        methods,
        config=config.integrator,
        jobs=args.jobs,
        preset=config.irgm_preset if "irgm" in methods else None,
        h_rg=args.hrg,
        control=config.ham_control,
    )

    csv_path = out_dir / f"sweep_{config.system}.csv"
    write_comparison_csv(rows, csv_path)
    svg_path = out_dir / f"sweep_{config.system}.svg"
    save_plot(
        svg_path,
        _sweep_series(rows, methods),
        title=f"{config.system}: amplitude vs nonlinearity",
        xlabel="eps",
        ylabel="amplitude",
    )
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")

    for column, label in (("rel_err_ham", "ham"), ("rel_err_irgm", "irgm/fit")):
        errs = [getattr(r, column) for r in rows if getattr(r, column) is not None]
        if errs:
            print(f"max rel err ({label}) = {max(errs):.6g}%")
    failures = [r for r in rows if r.error]
    if failures:
        print(f"{len(failures)} grid point(s) recorded errors; see the CSV")
    return 0


def _sweep_series(rows: Sequence[ComparisonRow], methods: Sequence[str]) -> List[Series]:
    eps = [r.eps for r in rows]

    def column(name: str) -> List[float]:
        return [
            getattr(r, name) if getattr(r, name) is not None else math.nan
            for r in rows
        ]

    series = []
    if "exact" in methods:
        series.append(Series("exact", eps, column("a_exact"), markers=True))
    if "ham" in methods:
        series.append(Series("tuned 2nd order", eps, column("a_ham"), dashed=True))
    if "rg" in methods:
        series.append(Series("flow balance", eps, column("a_rg"), dashed=True))
    if "irgm" in methods:
        series.append(Series("calibrated closed form", eps, column("a_irgm"), dashed=True))
    if "fit" in methods:
        series.append(Series("two-branch fit", eps, column("a_irgm"), dashed=True))
    return series


def cmd_cycle(args) -> int:
    system = _canonical_system(args.system)
    eps = float(args.eps)
    out_dir = _resolve_output_dir(args.output_dir)
    config = IntegratorConfig(n_samples=args.samples)
    cycle = limit_cycle(_spec_for(system, eps), config)

    tag = f"{system}_eps{_eps_label(eps)}"
    csv_path = out_dir / f"cycle_{tag}.csv"
    cycle.write_csv(csv_path)
    print(f"amplitude = {cycle.amplitude:.10g}")
    print(f"period = {cycle.period:.10g}")
    print(f"wrote {csv_path}")

    closed_y = np.append(cycle.y, cycle.y[0])
    closed_z = np.append(cycle.z, cycle.z[0])
    series = [Series("exact cycle", closed_y, closed_z)]

    if args.fit is not None:
        fitted = geometry.fit_cycle(cycle, tol=args.fit, max_pieces=args.max_pieces)
        curve_path = out_dir / f"fit_{tag}.curve"
        geometry.write_curve(fitted, curve_path)
        print(f"wrote {curve_path}")
        _print_fit_summary(fitted, cycle)
        series.append(_curve_series(fitted, f"arc/segment fit (tol {args.fit:g})"))

    if args.appendix_c:
        table = _bundled_for(system, eps)
        series.append(_curve_series(table, "published table"))
        _print_table_audit(table, cycle)

    svg_path = out_dir / f"phase_{tag}.svg"
    save_plot(
        svg_path,
        series,
        title=f"{system} limit cycle, eps = {eps:g}",
        xlabel="y",
        ylabel="dy/dt",
    )
    print(f"wrote {svg_path}")
    return 0


def _bundled_for(system: str, eps: float) -> geometry.PiecewiseCurve:
    if eps != 5.0:
        raise DomainError("bundled reference tables exist only for eps = 5")
    name = "rayleigh_eps5" if system == RAYLEIGH else "vdp_eps5"
    return geometry.load_bundled(name)


def _print_fit_summary(curve: geometry.PiecewiseCurve, cycle) -> None:
    report = geometry.curve_distance(curve, cycle)
    gaps = [j.gap for j in geometry.joint_gaps(curve) if j.gap is not None]
    arcs = sum(isinstance(p.shape, geometry.Arc) for p in curve.pieces)
    print(
        f"fit: {len(curve.pieces)} pieces ({arcs} arcs, "
        f"{len(curve.pieces) - arcs} segments), "
        f"max distance {report.max_dist:.4g}, mean {report.mean_dist:.4g}, "
        f"largest joint gap {max(gaps) if gaps else 0.0:.4g}"
    )


def _print_table_audit(table: geometry.PiecewiseCurve, cycle) -> None:
    print(f"published table {table.name!r}: {len(table.pieces)} pieces")
    for joint in geometry.joint_gaps(table):
        if joint.gap is None:
            print(
                f"  joint y={joint.joint_y:g}: {joint.defect} "
                f"(pieces {joint.left_piece}/{joint.right_piece})"
            )
        else:
            print(f"  joint y={joint.joint_y:g}: gap {joint.gap:.4g}")
    for audit in geometry.domain_audit(table):
        if audit.status != "real":
            print(f"  piece {audit.index} is {audit.status}: {audit.detail}")
    report = geometry.curve_distance(table, cycle)
    print(
        f"  distance to the exact cycle: max {report.max_dist:.4g}, "
        f"mean {report.mean_dist:.4g}"
    )


def cmd_fit(args) -> int:
    system = _canonical_system(args.system)
    eps = float(args.eps)
    out_dir = _resolve_output_dir(args.output_dir)
    cycle = limit_cycle(_spec_for(system, eps), IntegratorConfig(n_samples=args.samples))
    fitted = geometry.fit_cycle(cycle, tol=args.tol, max_pieces=args.max_pieces)
    curve_path = out_dir / f"fit_{system}_eps{_eps_label(eps)}.curve"
    geometry.write_curve(fitted, curve_path)
    _print_fit_summary(fitted, cycle)
    print(f"wrote {curve_path}")
    return 0


def cmd_report(args) -> int:
    config = _load_config(args.config)
    out_dir = _resolve_output_dir(args.output_dir or config.output_dir)
    jobs = args.jobs
    notes: List[str] = []

    # 1. anchor amplitudes
    anchors = []
    for system, eps, cited, tol in (
        (RAYLEIGH, 1.0, 2.17271, 0.002),
        (RAYLEIGH, 7.0, 5.63108, 0.01),
        (VAN_DER_POL, 1.0, 2.0086, 0.002),
    ):
        cycle = limit_cycle(_spec_for(system, eps), config.integrator)
        gap = abs(cycle.amplitude - cited)
        flag = "ok" if gap <= tol else "MISMATCH"
        anchors.append(
            {
                "system": system,
                "eps": eps,
                "amplitude": cycle.amplitude,
                "published": cited,
                "difference": gap,
                "status": flag,
            }
        )
        print(
            f"anchor {system} eps={eps:g}: {cycle.amplitude:.6f} "
            f"(published {cited}) {flag}"
        )
        if flag != "ok":
            notes.append(
                f"anchor {system} eps={eps:g}: recomputed {cycle.amplitude:.6f} "
                f"vs published {cited} (|diff| = {gap:.2e} > {tol})"
            )
    (out_dir / "anchors.json").write_text(
        json.dumps(anchors, indent=2) + "\n", encoding="utf-8"
    )

    # 2. Rayleigh comparison: exact vs all three closed forms
    ray_rows = build_comparison(
        RAYLEIGH, config.eps_grid, ("exact", "ham", "rg", "irgm"),
        config=config.integrator, jobs=jobs,
        preset="rayleigh", control=config.ham_control,
    )
    write_comparison_csv(ray_rows, out_dir / "rayleigh_comparison.csv")
    save_plot(
        out_dir / "rayleigh_amplitude.svg",
        _sweep_series(ray_rows, ("exact", "ham", "rg", "irgm")),
        title="rayleigh: amplitude vs nonlinearity",
        xlabel="eps", ylabel="amplitude",
    )
    ham_errs = [r.rel_err_ham for r in ray_rows if r.rel_err_ham is not None]
    if ham_errs:
        worst = max(ham_errs)
        print(f"rayleigh tuned-2nd-order worst rel err: {worst:.4g}%")
        if worst >= 1.0:
            notes.append(
                f"tuned second-order claim (<1%) not reproduced: worst {worst:.4g}%"
            )

    # 3. Van der Pol comparison: exact vs the two-branch fit
    vdp_grid = tuple(
        e for e in (0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 20.0, 50.0)
    )
    vdp_rows = build_comparison(
        VAN_DER_POL, vdp_grid, ("exact", "fit"),
        config=config.integrator, jobs=jobs,
    )
    write_comparison_csv(vdp_rows, out_dir / "vdp_comparison.csv")
    save_plot(
        out_dir / "vdp_amplitude.svg",
        _sweep_series(vdp_rows, ("exact", "fit")),
        title="vanderpol: amplitude vs nonlinearity",
        xlabel="eps", ylabel="amplitude",
    )
    fit_errs = [r.rel_err_irgm for r in vdp_rows if r.rel_err_irgm is not None]
    if fit_errs:
        worst = max(fit_errs)
        print(f"vanderpol two-branch fit worst rel err: {worst:.4g}%")
        if worst >= 0.05:
            notes.append(
                f"two-branch fit claim (<0.05%) not reproduced on the report grid: "
                f"worst {worst:.4g}%"
            )

    # 4. phase portraits with fits and published tables
    for system in (RAYLEIGH, VAN_DER_POL):
        cycle = limit_cycle(
            _spec_for(system, 5.0), replace(config.integrator, n_samples=2000)
        )
        fitted = geometry.fit_cycle(cycle, tol=0.1, max_pieces=20)
        table = _bundled_for(system, 5.0)
        geometry.write_curve(fitted, out_dir / f"fit_{system}_eps5.curve")
        closed_y = np.append(cycle.y, cycle.y[0])
        closed_z = np.append(cycle.z, cycle.z[0])
        save_plot(
            out_dir / f"phase_{system}_eps5.svg",
            [
                Series("exact cycle", closed_y, closed_z),
                _curve_series(fitted, "arc/segment fit"),
                _curve_series(table, "published table"),
            ],
            title=f"{system} limit cycle, eps = 5",
            xlabel="y", ylabel="dy/dt",
        )
        table_report = geometry.curve_distance(table, cycle)
        for audit in geometry.domain_audit(table):
            if audit.status != "real":
                notes.append(
                    f"published {system} table, piece {audit.index} is "
                    f"{audit.status}: {audit.detail}"
                )
        numeric_gaps = [
            j.gap for j in geometry.joint_gaps(table) if j.gap is not None
        ]
        notes.append(
            f"published {system} table: max joint gap {max(numeric_gaps):.4g}, "
            f"max distance to the exact cycle {table_report.max_dist:.4g}"
        )

    # 5. calibration consistency and control-law seams
    for line in consistency_report():
        print(line)
        if "INCONSISTENT" in line:
            notes.append(line)

    jumps = breakpoint_jumps(config.ham_control)
    for eps_break, jump in sorted(jumps.items()):
        if jump > 0.02:
            notes.append(
                f"control-law amplitude jump at eps={eps_break:g} is {jump:.4g} "
                "(the stated secondary bound of 0.02 is exceeded)"
            )

    # 6. the published hump location for the van der Pol amplitude
    fine = np.arange(0.5, 4.0 + 1e-9, 0.01)
    fit_amp = np.array([vdp_fit(e) for e in fine])
    hump = float(fine[int(np.argmax(fit_amp))])
    print(f"two-branch fit maximum near eps = {hump:.2f}")
    if not (1.9 <= hump <= 2.15):
        notes.append(
            f"amplitude maximum: published location ~2.02, but the two-branch "
            f"fit (and the exact sweep) put it near eps = {hump:.2f}"
        )

    notes_path = out_dir / "discrepancy_notes.txt"
    header = [
        "Discrepancies between published values and recomputation",
        "=" * 56,
    ]
    notes_path.write_text(
        "\n".join(header + [f"- {n}" for n in notes]) + "\n", encoding="utf-8"
    )
    print(f"wrote {notes_path} ({len(notes)} notes)")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="limitcycles",
        description="Limit-cycle amplitudes of Rayleigh/van der Pol oscillators "
        "by integration, tuned expansion, flow balance, and calibrated closed forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument(
            "--output-dir",
            help=f"artifact directory (default: ${OUTPUT_DIR_ENV} or the "
            "working directory)",
        )

    p = sub.add_parser("amplitude", help="one amplitude by one method")
    p.add_argument("--system", required=True, help="rayleigh or vdp")
    p.add_argument("--eps", required=True, type=float, help="nonlinearity strength")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--preset", help="calibration preset for --method irgm")
    p.add_argument(
        "--hrg", type=float, default=1.0,
        help="scaling exponent for --method irgm (default 1.0)",
    )
    p.add_argument(
        "--table-only", action="store_true",
        help="for --method ham: use the stepwise table beyond its last row "
        "instead of the linear tail",
    )
    p.add_argument("--rel-tol", type=float, help="integrator tolerance for --method exact")
    add_output(p)
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("sweep", help="comparison table over a grid")
    p.add_argument("--system", help="rayleigh or vdp (default from config)")
    p.add_argument(
        "--grid", help="comma list (0.5,1,2) or start:stop:step (0.5:4:0.05)"
    )
    p.add_argument(
        "--methods", default="exact",
        help="comma list from exact,ham,rg,irgm,fit (default: exact)",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel integrations")
    p.add_argument("--preset", help="calibration preset for irgm")
    p.add_argument("--hrg", type=float, default=1.0, help="irgm scaling exponent")
    p.add_argument("--config", help="RunConfig JSON file")
    add_output(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cycle", help="integrate one limit cycle")
    p.add_argument("--system", required=True)
    p.add_argument("--eps", required=True, type=float)
    p.add_argument(
        "--fit", type=float, metavar="TOL",
        help="also fit arcs/segments at this tolerance and overlay",
    )
    p.add_argument(
        "--appendix-c", action="store_true",
        help="overlay the bundled published table (eps = 5 only) and audit it",
    )
    p.add_argument("--max-pieces", type=int, default=20)
    p.add_argument("--samples", type=int, default=2000, help="points per period")
    add_output(p)
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("fit", help="fit arcs/segments to a limit cycle")
    p.add_argument("--system", required=True)
    p.add_argument("--eps", required=True, type=float)
    p.add_argument("--tol", type=float, default=0.1)
    p.add_argument("--max-pieces", type=int, default=20)
    p.add_argument("--samples", type=int, default=2000)
    add_output(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser(
        "report", help="emit the full reproduction bundle with discrepancy notes"
    )
    p.add_argument("--config", help="RunConfig JSON file")
    p.add_argument("--jobs", type=int, default=1)
    add_output(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
