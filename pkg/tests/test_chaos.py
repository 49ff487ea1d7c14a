import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncr.chaos import ChaosParams, Termination, augment, generate_trace, skew_tent_step, tracemean, tracemeans
from oracles import replay_mean, replay_trace

Q_GRID = [round(0.01 * k, 2) for k in range(1, 100)]
EPS_GRID = [round(0.01 * k, 2) for k in range(1, 46)]

stimuli = st.floats(0.0, 1.0, allow_nan=False)
q_values = st.sampled_from(Q_GRID)
eps_values = st.sampled_from(EPS_GRID)


class TestSkewTentStep:
    def test_fixed_endpoint(self):
        assert skew_tent_step(0.0, 0.499) == 0.0

    def test_peak(self):
        assert skew_tent_step(0.499, 0.499) == 1.0

    def test_left_branch(self):
        assert skew_tent_step(0.2495, 0.499) == pytest.approx(0.5, abs=1e-15)

    def test_right_branch(self):
        assert skew_tent_step(1.0, 0.499) == 0.0

    @pytest.mark.parametrize("x", [-0.1, 1.1, float("nan")])
    def test_outside_domain(self, x):
        with pytest.raises(ValueError):
            skew_tent_step(x)

    @given(x=stimuli)
    def test_maps_into_unit_interval(self, x):
        assert 0.0 <= skew_tent_step(x) <= 1.0


class TestGenerateTrace:
    def test_start_inside_neighbourhood(self):
        t = generate_trace(0.3, ChaosParams(q=0.3, eps_stim=0.01))
        assert t.values == (0.3,)
        assert t.terminated_by is Termination.NEIGHBORHOOD_HIT

    def test_one_step_hit(self):
        t = generate_trace(0.5, ChaosParams(q=0.2495, eps_stim=0.01, b=0.499))
        assert len(t.values) == 2
        assert t.values[0] == 0.2495
        assert t.values[1] == pytest.approx(0.5, abs=1e-15)
        assert t.terminated_by is Termination.NEIGHBORHOOD_HIT

    def test_matches_scalar_replay(self):
        t = generate_trace(0.9, ChaosParams(q=0.11, eps_stim=0.21))
        ref = replay_trace(0.9, 0.11, 0.21)
        assert list(t.values) == ref
        assert all(abs(v - 0.9) >= 0.21 for v in t.values[:-1])
        assert abs(t.values[-1] - 0.9) < 0.21

    def test_iteration_cap(self):
        # 0 is a fixed point of the map, so a far stimulus is never reached
        t = generate_trace(0.9, ChaosParams(q=0.5, eps_stim=0.01, b=0.5, max_iters=50))
        assert t.terminated_by is Termination.ITER_CAP
        assert len(t.values) == 51

    def test_rejects_stimulus_outside_unit_interval(self):
        with pytest.raises(ValueError):
            generate_trace(1.5, ChaosParams(q=0.3, eps_stim=0.1))

    @pytest.mark.parametrize("kw", [dict(q=0.0, eps_stim=0.1), dict(q=1.0, eps_stim=0.1), dict(q=0.3, eps_stim=0.0), dict(q=0.3, eps_stim=0.1, b=1.0), dict(q=0.3, eps_stim=0.1, max_iters=0)])
    def test_invalid_params(self, kw):
        with pytest.raises(ValueError):
            ChaosParams(**kw)

    @settings(max_examples=300, deadline=None)
    @given(s=stimuli, q=q_values, eps=eps_values)
    def test_properties_on_tuning_grid(self, s, q, eps):
        p = ChaosParams(q=q, eps_stim=eps)
        t = generate_trace(s, p)
        assert t == generate_trace(s, p)
        assert len(t.values) <= p.max_iters + 1
        assert all(0.0 <= v <= 1.0 for v in t.values)
        if t.terminated_by is Termination.NEIGHBORHOOD_HIT:
            inside = [abs(v - s) < eps for v in t.values]
            assert inside[-1] and not any(inside[:-1])
        assert list(t.values) == replay_trace(s, q, eps)


class TestTracemean:
    def test_single(self):
        assert tracemean([0.3]) == 0.3

    def test_three(self):
        assert tracemean([0.2, 0.4, 0.6]) == pytest.approx(0.4)

    def test_of_trace_object(self):
        t = generate_trace(0.9, ChaosParams(q=0.11, eps_stim=0.21))
        assert tracemean(t) == replay_mean(replay_trace(0.9, 0.11, 0.21))

    def test_empty(self):
        with pytest.raises(ValueError):
            tracemean([])

    @settings(max_examples=200, deadline=None)
    @given(s=st.lists(stimuli, min_size=1, max_size=20), q=q_values, eps=eps_values)
    def test_vectorised_equals_scalar_bit_for_bit(self, s, q, eps):
        p = ChaosParams(q=q, eps_stim=eps)
        got = tracemeans(np.array(s), p)
        want = [tracemean(generate_trace(v, p)) for v in s]
        assert got.tolist() == want
        assert np.all((got >= 0.0) & (got <= 1.0))


class TestAugment:
    def test_instant_hit(self):
        out = augment(np.array([[0.3]]), ChaosParams(q=0.3, eps_stim=0.01))
        np.testing.assert_array_equal(out, [[0.3, 0.3]])

    def test_wide_neighbourhood_gives_one_element_traces(self):
        Z = np.array([[0.1, 0.7], [0.99, 0.5], [0.01, 0.3]])
        out = augment(Z, ChaosParams(q=0.5, eps_stim=0.5))
        np.testing.assert_array_equal(out[:, 2:], 0.5)

    def test_matches_scalar_replay_per_cell(self):
        Z = np.array([[0.2], [0.8]])
        out = augment(Z, ChaosParams(q=0.11, eps_stim=0.05))
        assert out[:, 1].tolist() == [replay_mean(replay_trace(z, 0.11, 0.05)) for z in (0.2, 0.8)]

    def test_rejects_unnormalised(self):
        with pytest.raises(ValueError):
            augment(np.array([[1.2]]), ChaosParams(q=0.3, eps_stim=0.1))
        with pytest.raises(ValueError):
            augment(np.array([0.2, 0.3]), ChaosParams(q=0.3, eps_stim=0.1))

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 12), n=st.integers(1, 4), q=q_values, eps=eps_values)
    def test_shape_and_left_block(self, seed, m, n, q, eps):
        Z = np.random.default_rng(seed).uniform(size=(m, n))
        out = augment(Z, ChaosParams(q=q, eps_stim=eps))
        assert out.shape == (m, 2 * n)
        assert np.array_equal(out[:, :n], Z)
        assert np.all((out[:, n:] >= 0) & (out[:, n:] <= 1))
