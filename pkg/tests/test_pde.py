"""Tests for the full space-time solver and its solution-quality checks."""

import dataclasses
import json
import math

import numpy as np
import pytest

from sonine_rd import kernels, nonlin, pde, spatial, specfun, tstep
from sonine_rd.errors import DomainError


def _zero_source():
    return nonlin.custom(
        lambda v: np.zeros_like(np.asarray(v, dtype=float)), "zero"
    )


def _laplacian(n_modes=16):
    return spatial.build_operator(spatial.DirichletLaplacian(1.0), n_modes)


def _e1_field(op, amplitude=1.0):
    modal = np.zeros(op.n_modes)
    modal[0] = amplitude
    return spatial.Field(modal=modal)


def _bump_field(op):
    x = op.nodal_grid(4 * op.n_modes)
    return spatial.Field(nodal=np.clip(np.sin(math.pi * x), 0.0, 1.0))


class TestLinearExactSolution:
    def test_single_mode_matches_mittag_leffler(self):
        op = _laplacian(4)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.RiemannLiouville(0.5)),
            op=op,
            source=_zero_source(),
            u0=_e1_field(op),
            grid=tstep.TimeGrid.uniform(1.0, 4096),
        )
        report = pde.solve(spec)
        assert report.status == pde.COMPLETED
        exact = np.array(
            [1.0]
            + [
                specfun.mittag_leffler(0.5, 1.0, -math.pi**2 * math.sqrt(t))
                for t in report.times[1:]
            ]
        )
        err = np.abs(report.l2_norms - exact)
        assert err[-1] <= 1e-3
        # away from the weakly singular start the whole trace is accurate
        assert err[report.times >= 0.1].max() <= 1e-3

    def test_error_decreases_under_refinement(self):
        errs = []
        for n in (256, 1024):
            op = _laplacian(4)
            spec = pde.ProblemSpec(
                pair=kernels.make_pair(kernels.RiemannLiouville(0.5)),
                op=op,
                source=_zero_source(),
                u0=_e1_field(op),
                grid=tstep.TimeGrid.uniform(1.0, n),
            )
            report = pde.solve(spec)
            exact = specfun.mittag_leffler(0.5, 1.0, -math.pi**2)
            errs.append(abs(report.l2_norms[-1] - exact))
        assert errs[1] < errs[0]


class TestInvariants:
    def test_zero_initial_data_is_fixed_point(self):
        op = _laplacian(8)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.RiemannLiouville(0.5)),
            op=op,
            source=nonlin.fisher_kpp(),
            u0=spatial.Field(modal=np.zeros(op.n_modes)),
            grid=tstep.TimeGrid.uniform(1.0, 64),
        )
        report = pde.solve(spec)
        assert report.status == pde.COMPLETED
        assert np.all(report.l2_norms == 0.0)

    def test_range_invariance_fisher(self):
        op = _laplacian(32)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.RiemannLiouville(0.5)),
            op=op,
            source=nonlin.fisher_kpp(),
            u0=_bump_field(op),
            grid=tstep.TimeGrid.uniform(2.0, 512),
        )
        report = pde.solve(spec)
        assert report.status == pde.COMPLETED
        assert report.range_min.min() >= -1e-6
        assert report.range_max.max() <= 1.0 + 1e-6

    def test_decay_and_majorant_checks(self):
        op = _laplacian(32)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.Tempered(0.5, 1.0)),
            op=op,
            source=nonlin.fisher_kpp(),
            u0=_bump_field(op),
            grid=tstep.TimeGrid.uniform(2.0, 512),
        )
        report = pde.solve(spec)
        decay = pde.decay_check(report, tol_abs=1e-3)
        assert decay.violations == 0
        majorant = pde.majorant_check(report, tol_abs=1e-3)
        assert majorant.passed

    def test_vanishing_limit_for_nonintegrable_kernels(self):
        for spec_kind in (kernels.RiemannLiouville(0.5), kernels.DistributedOrder()):
            ratios = []
            for horizon in (10.0, 25.0, 50.0):
                op = _laplacian(8)
                spec = pde.ProblemSpec(
                    pair=kernels.make_pair(spec_kind),
                    op=op,
                    source=nonlin.fisher_kpp(),
                    u0=_bump_field(op),
                    grid=tstep.TimeGrid.graded(horizon, 256, 2.0),
                )
                report = pde.solve(spec)
                ratios.append(report.l2_norms[-1] / report.u0_norm)
            assert ratios[-1] <= 0.25
            assert ratios[0] > ratios[1] > ratios[2]

    def test_forged_norms_detected(self):
        op = _laplacian(16)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.RiemannLiouville(0.5)),
            op=op,
            source=nonlin.fisher_kpp(),
            u0=_bump_field(op),
            grid=tstep.TimeGrid.uniform(1.0, 64),
        )
        report = pde.solve(spec)
        forged = dataclasses.replace(
            report, l2_norms=report.l2_norms + 0.5
        )
        assert pde.decay_check(forged, tol_abs=1e-3).violations > 0
        assert not pde.majorant_check(forged, tol_abs=1e-3).passed


class TestEigenProjection:
    def _solve_with_fields(self, amplitude_mode):
        op = _laplacian(4)
        modal = np.zeros(op.n_modes)
        modal[amplitude_mode] = 1.0
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.Dirac()),
            op=op,
            source=_zero_source(),
            u0=spatial.Field(modal=modal),
            grid=tstep.TimeGrid.uniform(0.5, 32),
            keep_fields=True,
        )
        return pde.solve(spec), op

    def test_first_mode_projection(self):
        report, op = self._solve_with_fields(0)
        phi = pde.eigen_projection(report, op, normalization="orthonormal")
        assert phi[0] == pytest.approx(1.0)
        integral_phi = pde.eigen_projection(report, op, normalization="integral")
        phi1_integral = math.sqrt(2.0) * 2.0 / math.pi
        assert integral_phi[0] == pytest.approx(1.0 / phi1_integral)

    def test_second_mode_is_orthogonal(self):
        report, op = self._solve_with_fields(1)
        phi = pde.eigen_projection(report, op, normalization="orthonormal")
        assert np.abs(phi).max() < 1e-12

    def test_requires_retained_fields(self):
        op = _laplacian(4)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.Dirac()),
            op=op,
            source=_zero_source(),
            u0=_e1_field(op),
            grid=tstep.TimeGrid.uniform(0.5, 8),
        )
        report = pde.solve(spec)
        with pytest.raises(DomainError):
            pde.eigen_projection(report, op)


class TestBlowUp:
    def test_supercritical_first_mode_blows_up(self):
        op = _laplacian(16)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.RiemannLiouville(0.5)),
            op=op,
            source=nonlin.fisher_kpp(),
            u0=_e1_field(op, amplitude=12.0),
            grid=tstep.TimeGrid.uniform(2.0, 512),
        )
        report = pde.solve(spec)
        assert report.status == pde.BLOWUP
        assert report.bracket is not None
        low, high = report.bracket
        assert 0.0 < low < high


class TestSerialization:
    def _small_report(self):
        op = _laplacian(8)
        spec = pde.ProblemSpec(
            pair=kernels.make_pair(kernels.RiemannLiouville(0.5)),
            op=op,
            source=nonlin.fisher_kpp(),
            u0=_bump_field(op),
            grid=tstep.TimeGrid.uniform(1.0, 16),
        )
        return pde.solve(spec)

    def test_csv(self, tmp_path):
        report = self._small_report()
        out = tmp_path / "report.csv"
        pde.write_report_csv(report, out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "step,t,l2_norm,range_min,range_max,decay_bound,majorant_W"
        assert len(lines) == len(report.times) + 1

    def test_summary_json(self, tmp_path):
        report = self._small_report()
        out = tmp_path / "summary.json"
        pde.write_report_summary(report, out)
        data = json.loads(out.read_text())
        assert data["schema_version"] == 1
        assert data["status"] == "completed"
        assert data["steps_completed"] == len(report.times) - 1
        assert data["coercivity_constant"] == pytest.approx(math.pi**2)


class TestValidation:
    def test_mode_count_mismatch(self):
        op = _laplacian(8)
        with pytest.raises(DomainError):
            pde.ProblemSpec(
                pair=kernels.make_pair(kernels.Dirac()),
                op=op,
                source=_zero_source(),
                u0=spatial.Field(modal=np.zeros(4)),
                grid=tstep.TimeGrid.uniform(1.0, 8),
            )

    def test_threshold_floor(self):
        op = _laplacian(8)
        with pytest.raises(DomainError):
            pde.ProblemSpec(
                pair=kernels.make_pair(kernels.Dirac()),
                op=op,
                source=_zero_source(),
                u0=_e1_field(op),
                grid=tstep.TimeGrid.uniform(1.0, 8),
                blowup_threshold=10.0,
            )
