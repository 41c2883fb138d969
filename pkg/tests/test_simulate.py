import io

import numpy as np
import pytest

from bellhop.chsh import PAIRS, ChshFamily, saturating_family
from bellhop.density import uniform_density
from bellhop.errors import ConfigInvalid, InsufficientTrials
from bellhop.intervals import Interval
from bellhop.observables import make_observable
from bellhop.simulate import (
    ExperimentConfig,
    ExperimentSummary,
    PairCounts,
    estimate,
    run_experiment,
)


def uniform_family():
    return ChshFamily(*[
        uniform_density(Interval(float(a), a + 1.0), Interval(float(b), b + 1.0))
        for a, b in PAIRS
    ])


class TestConfig:
    def test_zero_trials(self):
        with pytest.raises(ConfigInvalid):
            ExperimentConfig(family=uniform_family(), n_trials=0, master_seed=1)

    def test_bad_probabilities(self):
        with pytest.raises(ConfigInvalid):
            ExperimentConfig(
                family=uniform_family(), n_trials=10, master_seed=1,
                setting_probabilities=(0.5, 0.5, 0.5, 0.5),
            )


class TestRunExperiment:
    def test_saturating_family_is_exact(self):
        config = ExperimentConfig(
            family=saturating_family(), n_trials=100_000, master_seed=7
        )
        report = estimate(run_experiment(config))
        # density support only covers sign-definite regions: S is exactly 4
        assert report.s_value == 4.0
        assert report.s_se == 0.0

    def test_uniform_family_near_zero(self):
        config = ExperimentConfig(family=uniform_family(), n_trials=100_000,
                                  master_seed=3)
        report = estimate(run_experiment(config))
        for pair in report.pairs:
            assert abs(pair.correlator) < 4 * pair.correlator_se

    def test_no_detection_loophole(self):
        config = ExperimentConfig(family=uniform_family(), n_trials=10_001,
                                  master_seed=5, n_workers=3)
        summary = run_experiment(config)
        assert sum(c.trials for c in summary.counts) == 10_001
        for c in summary.counts:
            assert abs(c.sum_ab) <= c.trials

    def test_bit_identical_reruns(self):
        for workers in (1, 4):
            config = ExperimentConfig(family=uniform_family(), n_trials=5000,
                                      master_seed=11, n_workers=workers)
            assert run_experiment(config) == run_experiment(config)

    def test_worker_count_changes_partition_deterministically(self):
        c1 = ExperimentConfig(family=uniform_family(), n_trials=5000,
                              master_seed=11, n_workers=1)
        c2 = ExperimentConfig(family=uniform_family(), n_trials=5000,
                              master_seed=11, n_workers=2)
        assert run_experiment(c2) == run_experiment(c2)
        assert run_experiment(c1) == run_experiment(c1)

    def test_event_log_format(self):
        config = ExperimentConfig(family=uniform_family(), n_trials=50,
                                  master_seed=2)
        sink = io.StringIO()
        run_experiment(config, event_log=sink)
        lines = sink.getvalue().splitlines()
        assert lines[0] == "trial,alpha,beta,x,y,a,b"
        assert len(lines) == 51
        for k, line in enumerate(lines[1:]):
            trial, alpha, beta, x, y, a, b = line.split(",")
            assert int(trial) == k
            assert a in ("+1", "-1") and b in ("+1", "-1")
            assert float(alpha) < float(x) < float(alpha) + 1

    def test_locality(self):
        # Alice's outcome depends on (alpha, x) only: changing Bob's setting
        # cannot change it for the same x
        a0 = make_observable(0.0, "x")
        for x in (0.1, 0.5, 0.9):
            assert a0.eval(x) == a0.eval(x)

    def test_error_scaling(self):
        # |ê - exact| shrinks like 1/sqrt(n): log-log slope within -0.5 ± 0.2
        family = uniform_family()
        sizes = (2000, 20_000, 200_000)
        mean_errs = []
        for n in sizes:
            errs = []
            for seed in range(25):
                config = ExperimentConfig(family=family, n_trials=n,
                                          master_seed=1000 + seed)
                report = estimate(run_experiment(config))
                errs.append(abs(report.pairs[0].correlator))
            mean_errs.append(np.mean(errs))
        slope = np.polyfit(np.log(sizes), np.log(mean_errs), 1)[0]
        assert -0.7 < slope < -0.3


class TestEstimate:
    def _summary(self, counts):
        return ExperimentSummary(sum(c.trials for c in counts), tuple(counts))

    def test_degenerate_variance(self):
        counts = [PairCounts(4, 4, 0, 0)] * 4
        report = estimate(self._summary(counts))
        assert report.pairs[0].correlator == 1.0
        assert report.pairs[0].correlator_se == 0.0

    def test_half_and_half(self):
        counts = [PairCounts(2, 0, 0, 0)] * 4
        report = estimate(self._summary(counts))
        assert report.pairs[0].correlator == 0.0
        assert report.pairs[0].correlator_se == pytest.approx(1 / np.sqrt(2))

    def test_insufficient_trials(self):
        counts = [PairCounts(1, 1, 1, 1)] * 4
        with pytest.raises(InsufficientTrials):
            estimate(self._summary(counts))

    def test_propagated_error(self):
        counts = [PairCounts(2, 0, 0, 0)] * 4
        report = estimate(self._summary(counts))
        assert report.s_se == pytest.approx(np.sqrt(4 * 0.5))
