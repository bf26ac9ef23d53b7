"""Estimation pipeline: correlators, CHSH, locality residuals, information."""

import math

import numpy as np
import pytest

from belllab.core import PI, RngStream
from belllab.estimator import (
    analytic_chsh,
    chsh_pvalue,
    chsh_pvalue_log10,
    chsh_value,
    estimate_correlator,
    lambda_independence_residual,
    mutual_information_hall,
    peres_identity_check,
    run_chsh_experiment,
    screening_residual,
)
from belllab.models import (
    DeltaMixtureModel,
    HallModel,
    LocalBaselineModel,
    PRBoxModel,
)
from belllab.qm import TSIRELSON_BOUND, qm_correlator, tsirelson_settings

TSIRELSON = tsirelson_settings()


class TestEstimateCorrelator:
    def test_pr_box_is_exact(self):
        model = PRBoxModel(TSIRELSON)
        est = estimate_correlator(model, TSIRELSON[0], TSIRELSON[2], 10_000, RngStream(0))
        assert est.value == 1.0
        assert est.standard_error == 0.0
        assert est.sample_count == 10_000

    def test_workers_do_not_change_results(self):
        model = HallModel()
        a, b = TSIRELSON[0], TSIRELSON[2]
        serial = estimate_correlator(model, a, b, 600_000, RngStream(1), workers=1)
        parallel = estimate_correlator(model, a, b, 600_000, RngStream(1), workers=4)
        assert serial == parallel

    def test_convergence_rate(self):
        # error shrinks roughly as 1/sqrt(N) toward the analytic correlator
        model = LocalBaselineModel()
        a, b = 0.0, PI / 8
        exact = model.joint_dist(a, b).correlator()
        for k, n in enumerate((10**3, 10**4, 10**5, 10**6)):
            est = estimate_correlator(model, a, b, n, RngStream(40 + k))
            assert abs(est.value - exact) < 5 * est.standard_error
            assert est.standard_error < 1.1 / math.sqrt(n)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            estimate_correlator(HallModel(), 0.0, 0.0, 0, RngStream(0))


class TestChsh:
    def test_chsh_value_combination(self):
        assert chsh_value(1, 1, 1, -1) == 4.0
        assert chsh_value(0.5, 0.5, 0.5, 0.5) == 1.0

    def test_analytic_values(self):
        assert analytic_chsh(DeltaMixtureModel(), TSIRELSON) == pytest.approx(
            TSIRELSON_BOUND, abs=1e-9
        )
        assert analytic_chsh(LocalBaselineModel(), TSIRELSON) == pytest.approx(
            TSIRELSON_BOUND / 2, abs=1e-9
        )
        assert analytic_chsh(PRBoxModel(TSIRELSON), TSIRELSON) == 4.0

    def test_experiment_report(self):
        report = run_chsh_experiment(HallModel(), TSIRELSON, 100_000, RngStream(2))
        assert len(report.correlators) == 4
        assert abs(report.s_value - TSIRELSON_BOUND) < 5 * report.s_standard_error
        assert report.s_standard_error == pytest.approx(
            math.sqrt(sum(e.standard_error**2 for e in report.correlators))
        )

    def test_experiment_reproducible(self):
        r1 = run_chsh_experiment(HallModel(), TSIRELSON, 50_000, RngStream(3))
        r2 = run_chsh_experiment(HallModel(), TSIRELSON, 50_000, RngStream(3))
        assert r1 == r2


class TestPeresIdentity:
    def test_exhaustive(self):
        values = {
            peres_identity_check(a1, a2, b1, b2)
            for a1 in (1, -1)
            for a2 in (1, -1)
            for b1 in (1, -1)
            for b2 in (1, -1)
        }
        assert values == {2, -2}

    def test_rejects_non_outcomes(self):
        with pytest.raises(ValueError):
            peres_identity_check(0, 1, 1, 1)


class TestScreening:
    def test_hall_screens(self):
        res = screening_residual(
            HallModel(), 0.0, PI / 8, 400_000, lambda_bins=64, rng=RngStream(4)
        )
        assert res.occupied_bins > 0
        # binomial fluctuation scale for the worst of ~64 bins
        assert res.value < 6 * math.sqrt(0.25 / (400_000 / (4 * 64)))

    def test_delta_mixture_screens(self):
        res = screening_residual(
            DeltaMixtureModel(), 0.0, PI / 8, 200_000, lambda_bins=64, rng=RngStream(5)
        )
        assert res.occupied_bins == 4
        assert res.value < 6 * math.sqrt(0.25 / (200_000 / 4))

    def test_pr_box_does_not_screen(self):
        res = screening_residual(
            PRBoxModel(TSIRELSON), TSIRELSON[0], TSIRELSON[2], 100_000,
            lambda_bins=64, rng=RngStream(6),
        )
        # no lambda to condition on: the raw correlation survives, |0.5 - 0.25|
        assert float(res) == pytest.approx(0.25, abs=0.01)

    def test_result_is_float_like(self):
        res = screening_residual(
            LocalBaselineModel(), 0.0, 0.0, 50_000, lambda_bins=16, rng=RngStream(7)
        )
        assert float(res) == res.value


class TestLambdaIndependence:
    def test_baseline_is_independent(self):
        res = lambda_independence_residual(
            LocalBaselineModel(), (0.0, PI / 8), (PI / 4, 7 * PI / 8)
        )
        assert res == pytest.approx(0.0, abs=1e-10)

    def test_delta_mixture_depends_on_settings(self):
        # pairs sharing one setting: half of the atom mass moves
        res = lambda_independence_residual(
            DeltaMixtureModel(), (0.0, PI / 8), (0.0, 7 * PI / 8)
        )
        assert res == pytest.approx(0.5, abs=1e-12)

    def test_hall_depends_on_settings(self):
        res = lambda_independence_residual(
            HallModel(), (0.0, PI / 8), (0.0, 3 * PI / 8)
        )
        assert res > 0.01

    def test_rejects_lambda_free_model(self):
        with pytest.raises(ValueError):
            lambda_independence_residual(
                PRBoxModel(TSIRELSON), (0.0, PI / 8), (0.0, PI / 4)
            )


class TestMutualInformation:
    def test_below_bound_with_stable_refinement(self):
        est = mutual_information_hall(lambda_grid=2048, settings_grid=64)
        assert 0.0 < est.bits < 0.07
        assert est.error_estimate < 1e-3

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            mutual_information_hall(lambda_grid=100)
        with pytest.raises(ValueError):
            mutual_information_hall(settings_grid=10)


class TestPvalueBound:
    def test_boundary_is_one(self):
        assert chsh_pvalue(2.0, 10) == 1.0
        assert chsh_pvalue(1.0, 10) == 1.0
        assert chsh_pvalue_log10(2.0, 10) == 0.0

    def test_closed_form(self):
        assert chsh_pvalue(2.5, 1000) == pytest.approx(math.exp(-31.25))

    def test_log_space_for_extreme_values(self):
        # at S=2.828, N=1e6 the bound is far below 1e-30000
        log10_p = chsh_pvalue_log10(2.828, 10**6)
        assert log10_p < -30_000
        assert chsh_pvalue(2.828, 10**6) == 0.0  # underflows, hence log space

    def test_validation(self):
        with pytest.raises(ValueError):
            chsh_pvalue(4.5, 10)
        with pytest.raises(ValueError):
            chsh_pvalue(2.5, 0)
        with pytest.raises(ValueError):
            chsh_pvalue_log10(-0.1, 10)


class TestSignalLocality:
    @pytest.mark.parametrize(
        "model",
        [DeltaMixtureModel(), HallModel(), LocalBaselineModel(), PRBoxModel(TSIRELSON)],
    )
    def test_marginals_independent_of_distant_setting(self, model):
        if isinstance(model, PRBoxModel):
            b_values = [TSIRELSON[2], TSIRELSON[3]]
            a_values = [TSIRELSON[0], TSIRELSON[1]]
        else:
            b_values = [0.0, PI / 8, PI / 3, 1.1]
            a_values = [0.0, PI / 5]
        for a in a_values:
            for b in b_values:
                d = model.joint_dist(a, b)
                assert d.marginal_1()[0] == pytest.approx(0.5, abs=1e-9)
                assert d.marginal_2()[0] == pytest.approx(0.5, abs=1e-9)
