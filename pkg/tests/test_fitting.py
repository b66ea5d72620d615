import numpy as np
import pytest
from scipy import stats as sps

from jcmsim.fitting import intercept_shift, loglog_fit


def cubic_series(a=2.0, b=3.0, n=60, lo=0.15, hi=0.5):
    # the default range keeps 1-F of order 0.1, far above the rounding
    # floor of the 1-F subtraction, so exact lines survive the F round trip
    t = np.geomspace(lo, hi, n)
    one_minus = np.exp(a) * t**b
    return t, 1.0 - one_minus


class TestLoglogFit:
    def test_exact_cubic_recovered(self):
        t, f = cubic_series()
        res = loglog_fit(t, f, (0.1, 0.5))
        assert res.a == pytest.approx(2.0, abs=1e-12)
        assert res.b == pytest.approx(3.0, abs=1e-12)
        assert res.rms_residual < 1e-12
        assert res.n_excluded == 0

    def test_random_lines_recovered(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            a, b = rng.uniform(-5, 5), rng.uniform(0.5, 4)
            t, f = cubic_series(a, b)
            res = loglog_fit(t, f, (0.1, 0.5))
            assert res.a == pytest.approx(a, abs=1e-10)
            assert res.b == pytest.approx(b, abs=1e-10)

    def test_subsampling_leaves_exact_fit_unchanged(self):
        t, f = cubic_series()
        full = loglog_fit(t, f, (0.1, 0.5))
        half = loglog_fit(t[::2], f[::2], (0.1, 0.5))
        assert half.a == pytest.approx(full.a, abs=1e-10)
        assert half.b == pytest.approx(full.b, abs=1e-10)

    def test_window_restricts_points(self):
        t, f = cubic_series(n=100, lo=0.05, hi=0.5)
        res = loglog_fit(t, f, (0.1, 0.3))
        assert res.n_points == int(((t >= 0.1) & (t <= 0.3)).sum())

    def test_saturated_points_dropped_and_counted(self):
        t, f = cubic_series()
        f = f.copy()
        f[5] = 1.0          # zero residual decay: no logarithm
        f[7] = 1.0 + 1e-9   # above one from sampling noise
        res = loglog_fit(t, f, (0.1, 0.5))
        assert res.n_excluded == 2
        assert res.b == pytest.approx(3.0, abs=1e-10)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            loglog_fit([0.01, 0.02], [1.0, 1.0], (1e-3, 0.1))

    def test_bad_window_rejected(self):
        t, f = cubic_series()
        with pytest.raises(ValueError, match="window"):
            loglog_fit(t, f, (0.1, 0.01))

    def test_matches_scipy_on_noisy_data(self):
        rng = np.random.default_rng(2)
        t, f = cubic_series(n=80)
        one_minus = (1 - f) * np.exp(rng.normal(0, 0.05, size=t.size))
        f = 1 - one_minus
        res = loglog_fit(t, f, (0.1, 0.5))
        ref = sps.linregress(np.log(t), np.log(one_minus))
        assert res.a == pytest.approx(ref.intercept, rel=1e-10)
        assert res.b == pytest.approx(ref.slope, rel=1e-10)
        assert res.stderr_b == pytest.approx(ref.stderr, rel=1e-8)
        assert res.stderr_a == pytest.approx(ref.intercept_stderr, rel=1e-8)

    def test_stderr_shrinks_with_point_count(self):
        rng = np.random.default_rng(3)
        sigma = 0.05

        def noisy_fit(n):
            t = np.geomspace(0.1, 0.5, n)
            one_minus = np.exp(2.0) * t**3 * np.exp(rng.normal(0, sigma, size=n))
            return loglog_fit(t, 1 - one_minus, (0.1, 0.5))

        # average several realizations to tame fluctuation of the estimate
        r4 = np.mean([noisy_fit(400).stderr_b for _ in range(8)])
        r1 = np.mean([noisy_fit(100).stderr_b for _ in range(8)])
        assert r1 / r4 == pytest.approx(2.0, rel=0.25)

    def test_weighted_equals_unweighted_for_uniform_errors(self):
        t, f = cubic_series()
        stderr = np.full(t.size, 1e-6) * (1 - f)  # uniform relative error
        w = loglog_fit(t, f, (0.1, 0.5), stderr_F=stderr, weighted=True)
        u = loglog_fit(t, f, (0.1, 0.5))
        assert w.a == pytest.approx(u.a, abs=1e-10)
        assert w.b == pytest.approx(u.b, abs=1e-10)

    def test_weighted_requires_stderr(self):
        t, f = cubic_series()
        with pytest.raises(ValueError, match="stderr"):
            loglog_fit(t, f, (0.1, 0.5), weighted=True)


class TestInterceptShift:
    def fit_pair(self, a1, a2):
        t, f1 = cubic_series(a1)
        _, f2 = cubic_series(a2)
        window = (0.1, 0.5)
        return loglog_fit(t, f1, window), loglog_fit(t, f2, window)

    def test_shift_of_exact_lines(self):
        f1, f2 = self.fit_pair(2.0, 2.0 + 2 * np.log(5.0))
        shift, err = intercept_shift(f1, f2)
        assert shift == pytest.approx(2 * np.log(5.0), abs=1e-10)
        assert err == pytest.approx(np.hypot(f1.stderr_a, f2.stderr_a), rel=1e-12)

    def test_identical_fits_shift_zero(self):
        f1, f2 = self.fit_pair(2.0, 2.0)
        assert intercept_shift(f1, f2)[0] == pytest.approx(0.0, abs=1e-12)

    def test_window_mismatch_rejected(self):
        t, f = cubic_series()
        f1 = loglog_fit(t, f, (0.1, 0.5))
        f2 = loglog_fit(t, f, (0.2, 0.5))
        with pytest.raises(ValueError, match="window"):
            intercept_shift(f1, f2)

    def test_slope_mismatch_rejected(self):
        t, fa = cubic_series(2.0, 3.0)
        _, fb = cubic_series(2.0, 2.0)
        f1 = loglog_fit(t, fa, (0.1, 0.5))
        f2 = loglog_fit(t, fb, (0.1, 0.5))
        with pytest.raises(ValueError, match="slope"):
            intercept_shift(f1, f2)
