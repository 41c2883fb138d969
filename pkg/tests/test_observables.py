import math

import numpy as np
import pytest

from bellhop.errors import OutOfDomain
from bellhop.observables import log_curve, make_observable, thresholds


class TestMakeObservable:
    def test_alpha_zero_bands(self):
        a0 = make_observable(0.0)
        assert a0.eval(0.26) == 1.0
        assert a0.eval(0.74) == 1.0
        assert a0.eval(0.24) == -1.0
        assert a0.eval(0.76) == -1.0

    def test_alpha_one(self):
        a1 = make_observable(1.0)
        assert a1.domain.intervals[0].lo == 1.0
        assert a1.domain.intervals[-1].hi == 2.0
        assert a1.eval(1.5) == 1.0

    def test_alpha_half(self):
        ah = make_observable(0.5)
        assert ah.eval(1.0) == 1.0
        assert ah.eval(0.6) == -1.0


class TestLogCurve:
    def test_midpoint(self):
        assert log_curve(0.0, 0.5) == pytest.approx(math.log(4 / 3), abs=1e-12)

    def test_zero_at_threshold(self):
        assert log_curve(0.0, 0.25) == 0.0

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            log_curve(0.0, 1.5)


class TestThresholds:
    @pytest.mark.parametrize("alpha,want", [(0.0, (0.25, 0.75)),
                                            (1.0, (1.25, 1.75)),
                                            (0.5, (0.75, 1.25))])
    def test_values(self, alpha, want):
        assert thresholds(alpha) == want

    def test_are_excluded(self):
        a0 = make_observable(0.0)
        for t in thresholds(0.0):
            assert not a0.domain.contains(t)
            assert t in a0.breakpoints()


def test_sign_of_log_curve_matches_observable():
    rng = np.random.default_rng(0)
    for alpha in (0.0, 0.5, 1.0):
        rv = make_observable(alpha)
        t1, t2 = thresholds(alpha)
        xs = alpha + rng.random(10_000)
        xs = xs[(xs != alpha) & (xs != t1) & (xs != t2)]
        mismatches = sum(
            1 for x in xs if rv.eval(x) != math.copysign(1.0, log_curve(alpha, x))
        )
        assert mismatches == 0
