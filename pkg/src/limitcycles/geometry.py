"""Piecewise arc/segment curves in the phase plane.

The upper half of a limit cycle can be matched by a short chain of circular
arcs and straight segments, each valid on a half-open interval ``(yLow,
yHigh]`` of the position coordinate.  This module provides:

* the curve types (:class:`Arc`, :class:`Segment`, :class:`CurvePiece`,
  :class:`PiecewiseCurve`) and strict evaluation (:func:`eval_piecewise`),
  where "strict" means a position outside every domain — or inside a domain
  where an arc's square root turns imaginary — raises with the offending
  piece number rather than guessing;
* audits: :func:`joint_gaps`/:func:`continuity_report` measure the mismatch
  where neighboring pieces meet, :func:`domain_audit` classifies each arc's
  domain against its real interval (the bundled reference tables contain
  genuine defects, which these reports surface rather than hide);
* scoring: :func:`curve_distance` measures Euclidean distance from curve
  samples to an exact integrated cycle;
* fitting: :func:`fit_cycle` greedily covers a computed cycle's upper half
  with the fewest arcs/segments keeping the residual below a tolerance.
  Pieces interpolate their window endpoints, so adjacent pieces meet exactly
  and a straight segment arises naturally as the infinite-radius limit
  (radius above 1e3 is emitted as a :class:`Segment`);
* round-trippable text files for curves, plus two bundled reference tables
  (``rayleigh_eps5``, ``vdp_eps5``) loaded with :func:`load_bundled`.

Piece numbers in reports and error messages are 1-based, matching how the
reference tables are usually cited.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass
from importlib import resources
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, DomainError
from .integrator import CycleRecord

__all__ = [
    "Arc",
    "Segment",
    "CurvePiece",
    "PiecewiseCurve",
    "JointReport",
    "PieceAudit",
    "DistanceReport",
    "eval_piecewise",
    "joint_gaps",
    "continuity_report",
    "domain_audit",
    "clipped",
    "reflect",
    "radius_spread",
    "curve_distance",
    "fit_cycle",
    "write_curve",
    "read_curve",
    "load_bundled",
    "BUNDLED_CURVES",
]

UPPER = "upper"
LOWER = "lower"

LINE_RADIUS_LIMIT = 1e3  # fitted arcs flatter than this become segments


@dataclass(frozen=True)
class Arc:
    """Circular-arc branch ``z = center_z ± sqrt(radius² - (y - center_y)²)``."""

    center: Tuple[float, float]
    radius: float
    branch: str

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DomainError(f"arc radius must be positive, got {self.radius!r}")
        if self.branch not in (UPPER, LOWER):
            raise DomainError(f"arc branch must be upper or lower, got {self.branch!r}")

    @property
    def real_interval(self) -> Tuple[float, float]:
        """Positions where the square root is real: [center_y - r, center_y + r]."""
        return self.center[0] - self.radius, self.center[0] + self.radius

    def value(self, y: float) -> float:
        radicand = self.radius**2 - (y - self.center[0]) ** 2
        if radicand < 0:
            # keep the exact edges y = center_y +- radius usable: a deficit
            # of a few ulps is rounding, not a genuinely imaginary root
            if radicand < -16 * sys.float_info.epsilon * self.radius**2:
                raise DomainError(
                    f"imaginary square root: (y - {self.center[0]})^2 = "
                    f"{(y - self.center[0])**2:.6g} > {self.radius**2:.6g}"
                )
            radicand = 0.0
        root = math.sqrt(radicand)
        return self.center[1] + root if self.branch == UPPER else self.center[1] - root


@dataclass(frozen=True)
class Segment:
    """Straight line ``z = slope*y + intercept``."""

    slope: float
    intercept: float

    def value(self, y: float) -> float:
        return self.slope * y + self.intercept


Shape = Union[Arc, Segment]


@dataclass(frozen=True)
class CurvePiece:
    """One shape restricted to the half-open domain ``(y_low, y_high]``.

    An arc whose domain reaches outside its real interval is permitted here
    — the bundled reference data contains such pieces — and is reported by
    :func:`domain_audit`; evaluation inside the imaginary part raises.
    """

    shape: Shape
    y_low: float
    y_high: float

    def __post_init__(self):
        if not (self.y_low < self.y_high):
            raise DomainError(
                f"empty piece domain ({self.y_low!r}, {self.y_high!r}]"
            )

    def contains(self, y: float) -> bool:
        return self.y_low < y <= self.y_high

    def real_domain(self) -> Optional[Tuple[float, float]]:
        """Intersection of the domain with the shape's real interval, or None."""
        if isinstance(self.shape, Segment):
            return self.y_low, self.y_high
        lo, hi = self.shape.real_interval
        lo, hi = max(lo, self.y_low), min(hi, self.y_high)
        return (lo, hi) if lo < hi else None

    def value(self, y: float) -> float:
        return self.shape.value(y)


@dataclass(frozen=True)
class PiecewiseCurve:
    """Ordered, non-overlapping pieces; optionally odd-symmetric.

    ``symmetric=True`` declares that the other half of the underlying closed
    curve is the image under ``(y, z) -> (-y, -z)`` (see :func:`reflect`).
    Pieces are normally contiguous; clipped variants may leave holes, which
    simply shrink where the curve can be evaluated.
    """

    pieces: Tuple[CurvePiece, ...]
    symmetric: bool = True
    name: str = ""

    def __post_init__(self):
        if not self.pieces:
            raise DomainError("a curve needs at least one piece")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if right.y_low < left.y_high - 1e-12:
                raise DomainError(
                    f"pieces overlap near y={right.y_low!r}; they must be "
                    "ordered and disjoint"
                )

    @property
    def y_min(self) -> float:
        return self.pieces[0].y_low

    @property
    def y_max(self) -> float:
        return self.pieces[-1].y_high

    def piece_index_at(self, y: float) -> int:
        """0-based index of the piece whose domain holds ``y``."""
        for i, piece in enumerate(self.pieces):
            if piece.contains(y):
                return i
        raise DomainError(
            f"y={y!r} outside every piece domain of ({self.y_min!r}, {self.y_max!r}]"
        )


def eval_piecewise(curve: PiecewiseCurve, y: float) -> float:
    """Evaluate the curve at ``y``; strict about domains and real branches."""
    index = curve.piece_index_at(y)
    try:
        return curve.pieces[index].value(y)
    except DomainError as exc:
        raise DomainError(f"piece {index + 1}: {exc}") from None


def reflect(curve: PiecewiseCurve) -> PiecewiseCurve:
    """The odd-symmetric partner: every point (y, z) becomes (-y, -z)."""
    mirrored = []
    for piece in reversed(curve.pieces):
        if isinstance(piece.shape, Arc):
            shape: Shape = Arc(
                center=(-piece.shape.center[0], -piece.shape.center[1]),
                radius=piece.shape.radius,
                branch=LOWER if piece.shape.branch == UPPER else UPPER,
            )
        else:
            shape = Segment(piece.shape.slope, -piece.shape.intercept)
        mirrored.append(CurvePiece(shape, -piece.y_high, -piece.y_low))
    return PiecewiseCurve(
        tuple(mirrored), symmetric=curve.symmetric, name=f"{curve.name}-reflected"
    )


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JointReport:
    """Mismatch record where two pieces meet (piece numbers are 1-based)."""

    joint_y: float
    left_piece: int
    right_piece: int
    left: Optional[float]
    right: Optional[float]
    gap: Optional[float]
    defect: str  # "", "left side non-real", "right side non-real", or both

    @property
    def is_real(self) -> bool:
        return self.defect == ""


def _side_value(piece: CurvePiece, y: float) -> Optional[float]:
    try:
        return piece.value(y)
    except DomainError:
        return None


def joint_gaps(curve: PiecewiseCurve) -> List[JointReport]:
    """Evaluate every interior joint from both sides (no filtering)."""
    reports = []
    for i, (left, right) in enumerate(zip(curve.pieces, curve.pieces[1:])):
        y = left.y_high
        lv = _side_value(left, y)
        rv = _side_value(right, y)
        notes = []
        if lv is None:
            notes.append("left side non-real")
        if rv is None:
            notes.append("right side non-real")
        gap = abs(lv - rv) if lv is not None and rv is not None else None
        reports.append(
            JointReport(
                joint_y=y,
                left_piece=i + 1,
                right_piece=i + 2,
                left=lv,
                right=rv,
                gap=gap,
                defect=", ".join(notes),
            )
        )
    return reports


def continuity_report(curve: PiecewiseCurve, tol: float) -> List[JointReport]:
    """Joints that need attention: gap above ``tol``, or a non-real side."""
    return [
        rep
        for rep in joint_gaps(curve)
        if rep.defect or (rep.gap is not None and rep.gap > tol)
    ]


@dataclass(frozen=True)
class PieceAudit:
    """Domain-versus-real-interval classification of one piece (1-based)."""

    index: int
    status: str  # "real", "partially-real", "non-real"
    domain: Tuple[float, float]
    real_part: Optional[Tuple[float, float]]
    detail: str


def domain_audit(curve: PiecewiseCurve) -> List[PieceAudit]:
    """Classify every piece; arcs may be only partially real (or not at all).

    This is the validation that surfaces defective reference data: a piece
    whose stated domain pokes outside its arc's real interval is reported,
    never silently repaired.
    """
    audits = []
    for i, piece in enumerate(curve.pieces):
        domain = (piece.y_low, piece.y_high)
        if isinstance(piece.shape, Segment):
            audits.append(PieceAudit(i + 1, "real", domain, domain, "segment"))
            continue
        real = piece.real_domain()
        interval = piece.shape.real_interval
        if real is None:
            audits.append(
                PieceAudit(
                    i + 1,
                    "non-real",
                    domain,
                    None,
                    f"arc real only on [{interval[0]:.6g}, {interval[1]:.6g}], "
                    "disjoint from the domain",
                )
            )
        elif real[0] > piece.y_low or real[1] < piece.y_high:
            audits.append(
                PieceAudit(
                    i + 1,
                    "partially-real",
                    domain,
                    real,
                    f"imaginary outside [{real[0]:.6g}, {real[1]:.6g}]",
                )
            )
        else:
            audits.append(PieceAudit(i + 1, "real", domain, domain, "arc"))
    return audits


def clipped(curve: PiecewiseCurve) -> PiecewiseCurve:
    """Copy with every domain intersected with its real interval.

    Pieces that are nowhere real are dropped; the result may therefore have
    holes (it no longer claims contiguity) but is everywhere evaluable.
    """
    kept = []
    for piece in curve.pieces:
        real = piece.real_domain()
        if real is None:
            continue
        kept.append(CurvePiece(piece.shape, real[0], real[1]))
    if not kept:
        raise DomainError("clipping removed every piece")
    return PiecewiseCurve(
        tuple(kept), symmetric=curve.symmetric, name=f"{curve.name}-clipped"
    )


def radius_spread(curve: PiecewiseCurve) -> float:
    """max/min ratio over the arc radii (segments ignored)."""
    radii = [
        p.shape.radius for p in curve.pieces if isinstance(p.shape, Arc)
    ]
    if not radii:
        raise DomainError("curve has no arcs")
    return max(radii) / min(radii)


# ---------------------------------------------------------------------------
# distance scoring
# ---------------------------------------------------------------------------


class DistanceReport(NamedTuple):
    max_dist: float
    mean_dist: float


def _sample_curve(curve: PiecewiseCurve, per_piece: int) -> np.ndarray:
    points = []
    for piece in curve.pieces:
        real = piece.real_domain()
        if real is None:
            continue
        lo, hi = real
        # interior samples: the half-open convention and sqrt endpoints make
        # the exact edges fragile, and they carry no extra information
        ys = np.linspace(lo, hi, per_piece + 2)[1:-1]
        zs = np.array([piece.value(y) for y in ys])
        points.append(np.column_stack([ys, zs]))
    if not points:
        raise DomainError("curve has no evaluable region")
    pts = np.vstack(points)
    if curve.symmetric:
        pts = np.vstack([pts, -pts])
    return pts


def _points_to_polyline(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Distance from each point to a closed polyline, exact per segment."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    ab2 = np.maximum((ab * ab).sum(axis=1), 1e-300)
    out = np.empty(len(points))
    chunk = 256
    for start in range(0, len(points), chunk):
        p = points[start : start + chunk]
        # p: (n,2); a, ab: (m,2) -> pairwise via broadcasting
        ap = p[:, None, :] - a[None, :, :]
        t = np.clip((ap * ab[None, :, :]).sum(axis=2) / ab2[None, :], 0.0, 1.0)
        closest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
        d2 = ((p[:, None, :] - closest) ** 2).sum(axis=2)
        out[start : start + chunk] = np.sqrt(d2.min(axis=1))
    return out


def curve_distance(
    curve: PiecewiseCurve, cycle: CycleRecord, *, per_piece: int = 200
) -> DistanceReport:
    """Euclidean distance statistics from curve samples to an exact cycle.

    Samples each piece's real domain, mirrors them when the curve is
    symmetric, and measures the distance to the cycle's sampled polygon with
    per-segment interpolation.
    """
    if not cycle.converged:
        raise DomainError("distance scoring needs a converged cycle")
    pts = _sample_curve(curve, per_piece)
    poly = np.column_stack([cycle.y, cycle.z])
    dists = _points_to_polyline(pts, poly)
    return DistanceReport(float(dists.max()), float(dists.mean()))


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------


def _upper_half(cycle: CycleRecord) -> Tuple[np.ndarray, np.ndarray]:
    """Samples from the minimum-y turning point to the maximum-y one.

    On this half the velocity is positive, so position increases strictly
    monotonically and ``z`` is a well-defined function of ``y``.
    """
    y, z = np.asarray(cycle.y), np.asarray(cycle.z)
    start = int(np.argmin(y))
    yu, zu = y[start:], z[start:]
    if len(yu) < 8:
        raise DomainError("turning-point decomposition failed: upper half too short")
    keep = np.concatenate([[True], np.diff(yu) > 1e-14])
    yu, zu = yu[keep], zu[keep]
    if not np.all(np.diff(yu) > 0):
        raise DomainError(
            "turning-point decomposition failed: upper half not monotone in y"
        )
    return yu, zu


def _fit_window(y: np.ndarray, z: np.ndarray) -> Shape:
    """Best arc or segment through the window's endpoints.

    The center of any circle through both endpoints lies on their
    perpendicular bisector; the one-parameter family is searched for the
    least-squares geometric residual.  Radii beyond ``LINE_RADIUS_LIMIT``
    collapse to the chord segment.
    """
    p0 = np.array([y[0], z[0]])
    p1 = np.array([y[-1], z[-1]])
    chord = p1 - p0
    length = float(np.hypot(*chord))
    if length <= 0:
        raise DomainError("degenerate window: coincident endpoints")
    mid = 0.5 * (p0 + p1)
    normal = np.array([-chord[1], chord[0]]) / length
    pts = np.column_stack([y, z])

    def cost(s: float) -> float:
        center = mid + s * normal
        radius = math.hypot(0.5 * length, s)
        r = np.hypot(*(pts - center).T) - radius
        return float((r * r).mean())

    if len(y) > 2:
        best = minimize_scalar(
            cost, bounds=(-2.0 * LINE_RADIUS_LIMIT, 2.0 * LINE_RADIUS_LIMIT),
            method="bounded",
            options={"xatol": 1e-10},
        )
        s = float(best.x)
    else:
        s = 2.0 * LINE_RADIUS_LIMIT  # two points: straight chord
    radius = math.hypot(0.5 * length, s)
    if radius > LINE_RADIUS_LIMIT:
        slope = chord[1] / chord[0]
        return Segment(float(slope), float(p0[1] - slope * p0[0]))
    center = mid + s * normal
    branch = UPPER if np.mean(z) >= center[1] else LOWER
    return Arc((float(center[0]), float(center[1])), float(radius), branch)


def _window_residual(shape: Shape, y: np.ndarray, z: np.ndarray) -> float:
    """Max vertical deviation of the window from the shape, inf if non-real."""
    if isinstance(shape, Segment):
        fit = shape.slope * y + shape.intercept
    else:
        radicand = shape.radius**2 - (y - shape.center[0]) ** 2
        if np.any(radicand < 0):
            return math.inf
        root = np.sqrt(radicand)
        fit = shape.center[1] + (root if shape.branch == UPPER else -root)
    return float(np.max(np.abs(fit - z)))


def fit_cycle(
    cycle: CycleRecord, tol: float = 0.1, max_pieces: int = 20
) -> PiecewiseCurve:
    """Cover the cycle's upper half with few arcs/segments within ``tol``.

    Greedy longest-prefix strategy: from the current start sample, grow the
    window as far as a single arc or segment through its endpoints stays
    within ``tol`` of every interior sample (vertical deviation), emit that
    piece, and continue from the window's end.  Because consecutive pieces
    share an interpolated endpoint, the result is continuous up to solver
    noise, and its distance to the cycle is bounded by the fit tolerance.
    """
    if tol <= 0:
        raise DomainError("fit tolerance must be positive")
    if max_pieces < 1:
        raise DomainError("max_pieces must be at least 1")
    yu, zu = _upper_half(cycle)
    n = len(yu)
    pieces: List[CurvePiece] = []
    start = 0
    while start < n - 1:
        if len(pieces) >= max_pieces:
            raise ConvergenceError(
                f"fit needs more than {max_pieces} pieces "
                f"(covered y <= {yu[start]:.6g} of {yu[-1]:.6g})"
            )
        # exponential probe for an upper bound on the reachable window end
        lo = start + 1  # largest known-good end (a 2-point chord always fits)
        hi = min(start + 2, n - 1)
        shape = _fit_window(yu[start : lo + 1], zu[start : lo + 1])
        while hi > lo:
            candidate = _fit_window(yu[start : hi + 1], zu[start : hi + 1])
            if _window_residual(candidate, yu[start : hi + 1], zu[start : hi + 1]) <= tol:
                lo, shape = hi, candidate
                if hi == n - 1:
                    break
                hi = min(start + 2 * (hi - start), n - 1)
            else:
                break
        # bisect between the known-good lo and the failing hi
        bad = hi if hi > lo else n
        while bad - lo > 1:
            mid = (lo + bad) // 2
            candidate = _fit_window(yu[start : mid + 1], zu[start : mid + 1])
            if _window_residual(candidate, yu[start : mid + 1], zu[start : mid + 1]) <= tol:
                lo, shape = mid, candidate
            else:
                bad = mid
        pieces.append(CurvePiece(shape, float(yu[start]), float(yu[lo])))
        start = lo
    return PiecewiseCurve(
        tuple(pieces), symmetric=True, name=f"{cycle.kind}-eps{cycle.epsilon:g}-fit"
    )


# ---------------------------------------------------------------------------
# curve files
# ---------------------------------------------------------------------------

_DOMAIN_RE = re.compile(r"^\(([^,]+),([^\]]+)\]$")

BUNDLED_CURVES = ("rayleigh_eps5", "vdp_eps5")


def write_curve(curve: PiecewiseCurve, path) -> None:
    """Plain-text serialization, one piece per line, exactly round-trippable."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# piecewise phase-plane curve\n")
        fh.write(f"name: {curve.name}\n")
        fh.write(f"symmetric: {'true' if curve.symmetric else 'false'}\n")
        for piece in curve.pieces:
            domain = f"domain=({piece.y_low!r},{piece.y_high!r}]"
            if isinstance(piece.shape, Arc):
                fh.write(
                    f"arc center_y={piece.shape.center[0]!r} "
                    f"center_z={piece.shape.center[1]!r} "
                    f"radius={piece.shape.radius!r} "
                    f"branch={piece.shape.branch} {domain}\n"
                )
            else:
                fh.write(
                    f"segment slope={piece.shape.slope!r} "
                    f"intercept={piece.shape.intercept!r} {domain}\n"
                )


def _parse_piece(line: str, where: str) -> CurvePiece:
    tokens = line.split()
    kind, fields = tokens[0], {}
    for token in tokens[1:]:
        key, _, value = token.partition("=")
        fields[key] = value
    match = _DOMAIN_RE.match(fields.get("domain", ""))
    if not match:
        raise DomainError(f"{where}: malformed domain in {line!r}")
    y_low, y_high = float(match.group(1)), float(match.group(2))
    if kind == "segment":
        shape: Shape = Segment(float(fields["slope"]), float(fields["intercept"]))
    elif kind == "arc":
        if "radius" in fields:
            radius = float(fields["radius"])
        else:
            radius = math.sqrt(float(fields["radius2"]))
        shape = Arc(
            (float(fields["center_y"]), float(fields["center_z"])),
            radius,
            fields["branch"],
        )
    else:
        raise DomainError(f"{where}: unknown piece kind {kind!r}")
    return CurvePiece(shape, y_low, y_high)


def _parse_curve(text: str, where: str) -> PiecewiseCurve:
    name = ""
    symmetric = True
    pieces = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("name:"):
            name = line.split(":", 1)[1].strip()
        elif line.startswith("symmetric:"):
            symmetric = line.split(":", 1)[1].strip().lower() == "true"
        else:
            pieces.append(_parse_piece(line, where))
    if not pieces:
        raise DomainError(f"{where}: no pieces found")
    return PiecewiseCurve(tuple(pieces), symmetric=symmetric, name=name)


def read_curve(path) -> PiecewiseCurve:
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_curve(fh.read(), str(path))


def load_bundled(name: str) -> PiecewiseCurve:
    """One of the shipped reference tables: ``rayleigh_eps5`` or ``vdp_eps5``.

    Shipped verbatim, defects included; see :func:`domain_audit` and
    :func:`clipped`.
    """
    if name not in BUNDLED_CURVES:
        raise DomainError(f"unknown bundled curve {name!r}; choose from {BUNDLED_CURVES}")
    text = (
        resources.files("limitcycles").joinpath(f"data/{name}.curve").read_text()
    )
    return _parse_curve(text, f"bundled:{name}")
