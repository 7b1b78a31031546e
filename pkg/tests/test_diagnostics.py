import numpy as np
import pytest
from hypothesis import given, strategies as st

from pbitsa.diagnostics import detect_oscillation, mean_spin
from pbitsa.errors import InvalidInputError
from pbitsa.ising import SpinState


def alternating(amplitude, length=200):
    return amplitude * (-1.0) ** np.arange(length)


class TestMeanSpin:
    def test_all_up(self):
        assert mean_spin(SpinState(np.ones(7))) == 1.0

    def test_balanced(self):
        assert mean_spin(SpinState(np.array([1, -1, 1, -1]))) == 0.0

    def test_mostly_down(self):
        assert mean_spin(SpinState(np.array([1, -1, -1, -1]))) == -0.5


class TestDetect:
    def test_perfect_alternation(self):
        rep = detect_oscillation(alternating(0.9))
        assert rep.detected and rep.alternation_fraction == 1.0 and rep.onset_cycle == 0

    def test_constant(self):
        rep = detect_oscillation(np.full(100, 0.3))
        assert not rep.detected and rep.alternation_fraction == 0.0 and rep.onset_cycle is None

    @pytest.mark.parametrize("A", np.round(np.arange(0.1, 1.0, 0.1), 1))
    def test_amplitude_grid(self, A):
        assert detect_oscillation(alternating(A)).detected == (A >= 0.5)

    @given(st.lists(st.floats(-1, 1), min_size=50, max_size=200))
    def test_sign_flip_invariance(self, values):
        t = np.array(values)
        assert detect_oscillation(t) == detect_oscillation(-t)

    @given(st.lists(st.floats(-1, 1), min_size=50, max_size=200))
    def test_detected_implies_thresholds(self, values):
        rep = detect_oscillation(np.array(values))
        assert 0 <= rep.alternation_fraction <= 1 and 0 <= rep.mean_amplitude <= 1
        if rep.detected:
            assert rep.alternation_fraction >= 0.9 - 1e-12 and rep.mean_amplitude >= 0.5 - 1e-12

    def test_onset(self):
        trace = np.concatenate([np.full(300, 0.1), alternating(0.95, 200)])
        rep = detect_oscillation(trace)
        assert rep.detected
        # windows are 50 cycles long; the first fully alternating window may start
        # a few cycles early because the amplitude average tolerates a little of the calm part
        assert 250 <= rep.onset_cycle <= 300
        for start in range(rep.onset_cycle, trace.size - 49):
            assert detect_oscillation(trace[start:start + 50]).detected

    def test_late_decay_not_detected(self):
        trace = np.concatenate([alternating(1.0, 300), np.full(100, 1.0)])
        assert not detect_oscillation(trace).detected

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            detect_oscillation(np.ones(20), window=50)
        with pytest.raises(InvalidInputError):
            detect_oscillation(np.ones(100), window=5)

    def test_window_option(self):
        trace = np.concatenate([np.full(100, 0.2), alternating(0.8, 20)])
        assert not detect_oscillation(trace).detected
        assert detect_oscillation(trace, window=20).detected
