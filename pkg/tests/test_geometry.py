"""Tests for piecewise arc/segment curves, audits, and cycle fitting."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from limitcycles.errors import ConvergenceError, DomainError
from limitcycles.geometry import (
    Arc,
    CurvePiece,
    PiecewiseCurve,
    Segment,
    clipped,
    continuity_report,
    curve_distance,
    domain_audit,
    eval_piecewise,
    fit_cycle,
    joint_gaps,
    load_bundled,
    radius_spread,
    read_curve,
    reflect,
    write_curve,
)
from limitcycles.integrator import IntegratorConfig, limit_cycle
from limitcycles.oscillators import OscillatorSpec


@pytest.fixture(scope="module")
def rayleigh_table():
    return load_bundled("rayleigh_eps5")


@pytest.fixture(scope="module")
def vdp_table():
    return load_bundled("vdp_eps5")


@pytest.fixture(scope="module")
def eps5_cycles():
    config = IntegratorConfig(n_samples=2000)
    return {
        "rayleigh": limit_cycle(OscillatorSpec.rayleigh(5.0), config),
        "vanderpol": limit_cycle(OscillatorSpec.van_der_pol(5.0), config),
    }


# ---------------------------------------------------------------------------
# types and evaluation
# ---------------------------------------------------------------------------


class TestShapes:
    def test_arc_value_upper_and_lower(self):
        arc = Arc((1.0, 2.0), 5.0, "upper")
        assert arc.value(4.0) == pytest.approx(6.0)  # 2 + sqrt(25 - 9)
        assert Arc((1.0, 2.0), 5.0, "lower").value(4.0) == pytest.approx(-2.0)

    def test_arc_real_interval(self):
        assert Arc((3.0, -0.02), 1.4, "upper").real_interval == (1.6, 4.4)

    def test_arc_validation(self):
        with pytest.raises(DomainError):
            Arc((0.0, 0.0), -1.0, "upper")
        with pytest.raises(DomainError):
            Arc((0.0, 0.0), 1.0, "sideways")

    def test_segment_value(self):
        assert Segment(10.0, 43.9).value(-4.3) == pytest.approx(0.9)

    def test_piece_domain_validation(self):
        with pytest.raises(DomainError):
            CurvePiece(Segment(1.0, 0.0), 2.0, 2.0)

    def test_curve_rejects_overlap(self):
        a = CurvePiece(Segment(1.0, 0.0), 0.0, 2.0)
        b = CurvePiece(Segment(1.0, 0.0), 1.0, 3.0)
        with pytest.raises(DomainError):
            PiecewiseCurve((a, b))

    def test_curve_allows_holes(self):
        # clipped variants are not contiguous; only overlap is forbidden
        a = CurvePiece(Segment(1.0, 0.0), 0.0, 1.0)
        b = CurvePiece(Segment(1.0, 0.0), 2.0, 3.0)
        curve = PiecewiseCurve((a, b))
        with pytest.raises(DomainError, match="outside every piece"):
            eval_piecewise(curve, 1.5)

    @given(
        y0=st.floats(-5, 5),
        z0=st.floats(-5, 5),
        r=st.floats(0.1, 10),
        frac=st.floats(-0.999, 0.999),
        branch=st.sampled_from(["upper", "lower"]),
    )
    def test_arc_points_satisfy_circle_equation(self, y0, z0, r, frac, branch):
        arc = Arc((y0, z0), r, branch)
        y = y0 + frac * r
        z = arc.value(y)
        assert (y - y0) ** 2 + (z - z0) ** 2 == pytest.approx(r**2, abs=1e-12 * r**2 + 1e-12)


class TestEvaluation:
    def test_reference_values(self, rayleigh_table, vdp_table):
        # hand-computed from the bundled parameters
        assert eval_piecewise(rayleigh_table, -3.6) == pytest.approx(2.04949130612758)
        assert eval_piecewise(rayleigh_table, 0.0) == pytest.approx(1.689)
        assert eval_piecewise(vdp_table, 0.6) == pytest.approx(6.95)
        assert eval_piecewise(vdp_table, 2.0) == pytest.approx(0.8)

    def test_half_open_membership(self, rayleigh_table):
        # joints belong to the piece on their left
        assert rayleigh_table.piece_index_at(-4.393) == 0
        assert rayleigh_table.piece_index_at(-4.392) == 1

    def test_outside_domain_raises_with_bounds(self, rayleigh_table):
        with pytest.raises(DomainError, match="outside every piece"):
            eval_piecewise(rayleigh_table, 5.0)
        with pytest.raises(DomainError, match="outside every piece"):
            eval_piecewise(rayleigh_table, -4.96)  # left edge is open

    def test_non_real_eval_names_the_piece(self, vdp_table):
        with pytest.raises(DomainError, match="piece 8"):
            eval_piecewise(vdp_table, 2.04)
        with pytest.raises(DomainError, match="piece 1"):
            eval_piecewise(vdp_table, -2.04)

    def test_reflection_is_odd(self, rayleigh_table):
        mirrored = reflect(rayleigh_table)
        for y in (-4.0, -3.7, 0.0, 2.5, 4.2):
            assert eval_piecewise(mirrored, -y) == pytest.approx(
                -eval_piecewise(rayleigh_table, y), abs=1e-12
            )


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


class TestJoints:
    def test_rayleigh_gap_values(self, rayleigh_table):
        gaps = {round(r.joint_y, 4): r.gap for r in joint_gaps(rayleigh_table)}
        assert gaps[-4.393] == pytest.approx(0.0898248905, abs=1e-9)
        assert gaps[-4.23] == pytest.approx(0.0233809621, abs=1e-9)
        assert gaps[-3.6] == pytest.approx(0.0004913061, abs=1e-9)
        assert gaps[3.12] == pytest.approx(0.0021523381, abs=1e-9)

    def test_vdp_gap_values(self, vdp_table):
        reports = {round(r.joint_y, 4): r for r in joint_gaps(vdp_table)}
        assert reports[-1.7].gap == pytest.approx(0.0011186310, abs=1e-9)
        assert reports[-0.633].gap == pytest.approx(0.0138040161, abs=1e-9)
        assert reports[0.6].gap == pytest.approx(0.0027864045, abs=1e-9)
        assert reports[0.9].gap == pytest.approx(0.0010813767, abs=1e-9)
        assert reports[1.28].gap == pytest.approx(0.0021705478, abs=1e-9)
        assert reports[1.8].gap == pytest.approx(0.02, abs=1e-9)
        # at the last joint the final arc cannot be evaluated at all
        last = reports[2.033]
        assert last.gap is None
        assert last.defect == "right side non-real"
        assert last.left == pytest.approx(0.371)

    def test_continuity_report_filters(self, rayleigh_table, vdp_table):
        flagged = continuity_report(rayleigh_table, 0.02)
        assert [round(r.joint_y, 4) for r in flagged] == [-4.393, -4.23]
        # non-real sides are always reported, whatever the tolerance
        loose = continuity_report(vdp_table, 10.0)
        assert len(loose) == 1 and loose[0].defect == "right side non-real"

    def test_all_numeric_gaps_below_point_one(self, rayleigh_table, vdp_table):
        for table in (rayleigh_table, vdp_table):
            for rep in joint_gaps(table):
                if rep.gap is not None:
                    assert rep.gap < 0.1


class TestDomainAudit:
    def test_rayleigh_defects(self, rayleigh_table):
        audits = {a.index: a for a in domain_audit(rayleigh_table)}
        assert [a.status for a in audits.values()] == [
            "partially-real", "real", "real", "real", "partially-real",
        ]
        # the first arc is real only on a 0.007-wide sliver
        lo, hi = audits[1].real_part
        assert lo == pytest.approx(-4.4)
        assert hi == pytest.approx(-4.393)
        # its mirror image has the same defect on the right
        assert audits[5].real_part[1] == pytest.approx(4.4)

    def test_vdp_defects(self, vdp_table):
        audits = {a.index: a for a in domain_audit(vdp_table)}
        statuses = [audits[i].status for i in range(1, 9)]
        assert statuses == [
            "partially-real", "real", "real", "real",
            "real", "real", "real", "non-real",
        ]
        assert audits[1].real_part[0] == pytest.approx(-2.0312958790)
        # piece 8's arc tops out at 1.438 + sqrt(0.352) < 2.033
        assert audits[8].real_part is None
        assert "disjoint" in audits[8].detail

    def test_clipped_is_everywhere_evaluable(self, rayleigh_table, vdp_table):
        for table in (rayleigh_table, vdp_table):
            cut = clipped(table)
            for piece in cut.pieces:
                for frac in (1e-6, 0.5, 1.0):
                    y = piece.y_low + frac * (piece.y_high - piece.y_low)
                    piece.value(y)  # must not raise
            assert all(a.status == "real" for a in domain_audit(cut))
        assert len(clipped(vdp_table).pieces) == 7  # piece 8 dropped

    def test_radius_spread(self, rayleigh_table, vdp_table):
        # the reference tables differ sharply in how circular they are
        assert radius_spread(rayleigh_table) == pytest.approx(2.3664319, abs=1e-6)
        assert radius_spread(vdp_table) == pytest.approx(155.8387445, abs=1e-6)
        with pytest.raises(DomainError):
            radius_spread(
                PiecewiseCurve((CurvePiece(Segment(1.0, 0.0), 0.0, 1.0),))
            )


# ---------------------------------------------------------------------------
# distance and fitting
# ---------------------------------------------------------------------------


class TestDistance:
    def test_tables_track_their_cycles(self, rayleigh_table, vdp_table, eps5_cycles):
        ray = curve_distance(rayleigh_table, eps5_cycles["rayleigh"])
        vdp = curve_distance(vdp_table, eps5_cycles["vanderpol"])
        # published tables are sketches: decent but visibly imperfect
        assert ray.max_dist < 0.15
        assert vdp.max_dist < 0.2
        assert ray.mean_dist < 0.05
        assert vdp.mean_dist < 0.05
        assert ray.mean_dist <= ray.max_dist

    def test_symmetric_flag_doubles_coverage(self, eps5_cycles):
        cycle = eps5_cycles["rayleigh"]
        table = load_bundled("rayleigh_eps5")
        asymmetric = PiecewiseCurve(table.pieces, symmetric=False, name="upper-only")
        sym = curve_distance(table, cycle)
        asym = curve_distance(asymmetric, cycle)
        # the symmetric score adds the mirrored samples, so it can only grow;
        # the cycle itself is odd-symmetric, so it barely does
        assert sym.max_dist >= asym.max_dist
        assert sym.max_dist == pytest.approx(asym.max_dist, abs=1e-3)

    def test_unconverged_cycle_rejected(self, eps5_cycles):
        from dataclasses import replace

        broken = replace(eps5_cycles["rayleigh"], converged=False)
        with pytest.raises(DomainError, match="converged"):
            curve_distance(load_bundled("rayleigh_eps5"), broken)


class TestFitCycle:
    @pytest.mark.parametrize("kind", ["rayleigh", "vanderpol"])
    def test_fit_meets_contract(self, kind, eps5_cycles):
        cycle = eps5_cycles[kind]
        tol = 0.1
        fit = fit_cycle(cycle, tol=tol, max_pieces=20)
        assert len(fit.pieces) <= 20
        assert fit.symmetric
        # pieces are contiguous by construction
        for left, right in zip(fit.pieces, fit.pieces[1:]):
            assert right.y_low == left.y_high
        # distance and continuity post-conditions
        report = curve_distance(fit, cycle)
        assert report.max_dist <= 2 * tol
        for joint in joint_gaps(fit):
            assert joint.gap is not None
            assert joint.gap <= 2 * tol
        # the fit spans the cycle's position range
        assert fit.y_min == pytest.approx(-cycle.amplitude, abs=0.01)
        assert fit.y_max == pytest.approx(cycle.amplitude, abs=0.01)

    def test_tight_tolerance_needs_more_pieces(self, eps5_cycles):
        cycle = eps5_cycles["rayleigh"]
        loose = fit_cycle(cycle, tol=0.2, max_pieces=40)
        tight = fit_cycle(cycle, tol=0.02, max_pieces=40)
        assert len(tight.pieces) > len(loose.pieces)
        assert curve_distance(tight, cycle).max_dist <= 0.04

    def test_piece_budget_enforced(self, eps5_cycles):
        with pytest.raises(ConvergenceError, match="more than 2 pieces"):
            fit_cycle(eps5_cycles["vanderpol"], tol=0.01, max_pieces=2)

    def test_bad_arguments(self, eps5_cycles):
        with pytest.raises(DomainError):
            fit_cycle(eps5_cycles["rayleigh"], tol=0.0)
        with pytest.raises(DomainError):
            fit_cycle(eps5_cycles["rayleigh"], tol=0.1, max_pieces=0)

    def test_harmonic_circle_fits_one_arc(self):
        # epsilon -> 0 limit: the cycle is a circle, one arc suffices
        spec = OscillatorSpec.lienard(1.0, lambda y, z: 0.0, lambda y: y)
        cycle = limit_cycle(
            spec, IntegratorConfig(max_cycles=5, cycle_tol=1.0), strict=False
        )
        fit = fit_cycle(cycle, tol=0.05, max_pieces=20)
        assert len(fit.pieces) == 1
        arc = fit.pieces[0].shape
        assert isinstance(arc, Arc)
        assert arc.radius == pytest.approx(2.0, abs=1e-3)
        assert arc.center[0] == pytest.approx(0.0, abs=1e-3)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------


class TestCurveFiles:
    def test_round_trip_exact(self, tmp_path, vdp_table):
        path = tmp_path / "table.curve"
        write_curve(vdp_table, path)
        back = read_curve(path)
        assert back.name == vdp_table.name
        assert back.symmetric == vdp_table.symmetric
        assert len(back.pieces) == len(vdp_table.pieces)
        for ours, theirs in zip(back.pieces, vdp_table.pieces):
            assert ours == theirs  # dataclass equality, exact floats

    def test_radius_and_radius2_spellings(self, tmp_path):
        text = (
            "name: spellings\n"
            "symmetric: false\n"
            "arc center_y=0.0 center_z=0.0 radius2=4.0 branch=upper domain=(-1.0,0.0]\n"
            "arc center_y=0.0 center_z=0.0 radius=2.0 branch=upper domain=(0.0,1.0]\n"
        )
        path = tmp_path / "s.curve"
        path.write_text(text)
        curve = read_curve(path)
        assert curve.pieces[0].shape.radius == 2.0
        assert curve.pieces[1].shape.radius == 2.0
        assert not curve.symmetric

    def test_malformed_lines_rejected(self, tmp_path):
        path = tmp_path / "bad.curve"
        path.write_text("blob radius=1 domain=(0,1]\n")
        with pytest.raises(DomainError, match="unknown piece kind"):
            read_curve(path)
        path.write_text("segment slope=1 intercept=0 domain=[0,1]\n")
        with pytest.raises(DomainError, match="malformed domain"):
            read_curve(path)
        path.write_text("# nothing here\n")
        with pytest.raises(DomainError, match="no pieces"):
            read_curve(path)

    def test_unknown_bundle_name(self):
        with pytest.raises(DomainError, match="unknown bundled curve"):
            load_bundled("lorenz_eps5")

    def test_bundled_tables_shape(self, rayleigh_table, vdp_table):
        assert len(rayleigh_table.pieces) == 5
        assert len(vdp_table.pieces) == 8
        kinds = [type(p.shape).__name__ for p in rayleigh_table.pieces]
        assert kinds == ["Arc", "Segment", "Arc", "Segment", "Arc"]
        kinds = [type(p.shape).__name__ for p in vdp_table.pieces]
        assert kinds == [
            "Arc", "Arc", "Segment", "Arc", "Arc", "Arc", "Segment", "Arc",
        ]
        assert rayleigh_table.y_min == -4.96 and rayleigh_table.y_max == 4.96
        assert vdp_table.y_min == -2.05 and vdp_table.y_max == 2.05
