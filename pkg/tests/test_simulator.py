import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

import typed_asep.simulator as sim
from oracles import kron_embedding, pair_block
from typed_asep.asep_generator import LOCAL_BASIS, AsepParams, local_generator
from typed_asep.simulator import (
    NegativeRate,
    TrajectoryConfig,
    duality_expectation_check,
    estimate_transition_matrix,
    exact_transition_matrix,
    gillespie_run,
    jump_table,
    semigroup_duality_residual,
    simulate_final_states,
)

P3 = AsepParams(Fraction(3, 2), 3)


def cfg(initial, t=1.0, seed=0, params=P3, L=None):
    return TrajectoryConfig(params, L or len(initial), t, seed, initial)


class TestTrajectories:
    @pytest.mark.parametrize("initial", [(0, 0, 0), (1, 1, 1), (2, 2), (3, 3, 3, 3)])
    def test_absorbing(self, initial):
        s = gillespie_run(cfg(initial, t=50.0))
        assert s.jumps == 0 and s.final == initial

    def test_all_ones_row_is_zero_in_embedding_oracle(self):
        loc = local_generator(P3)
        local = {(LOCAL_BASIS[i], LOCAL_BASIS[j]): v for (i, j), v in loc.entries.items()}
        emb = kron_embedding(local, 3, None)
        # lexicographic index of (1, 1, 1) in base 4
        row = 1 * 16 + 1 * 4 + 1
        assert not any(i == row for i, _ in emb)

    def test_reproducible(self):
        a = gillespie_run(cfg((3, 0, 1, 2), t=2.0, seed=99))
        b = gillespie_run(cfg((3, 0, 1, 2), t=2.0, seed=99))
        c = gillespie_run(cfg((3, 0, 1, 2), t=2.0, seed=100))
        assert a.to_json() == b.to_json() and a.to_json() != c.to_json()

    @given(st.lists(st.integers(0, 3), min_size=2, max_size=4), st.integers(0, 2 ** 32))
    @settings(max_examples=25, deadline=None)
    def test_conservation_and_single_moves(self, initial, seed):
        s = gillespie_run(cfg(tuple(initial), t=0.5, seed=seed))
        assert s.conserves_counts()
        assert all(t1 < t2 for t1, t2 in zip(s.times, s.times[1:]))
        assert all(t <= 0.5 for t in s.times)
        for a, b in zip(s.states, s.states[1:]):
            changed = [x for x in range(len(a)) if a[x] != b[x]]
            assert len(changed) == 2 and changed[1] == changed[0] + 1

    def test_empirical_pair_rate(self):
        # holding periods in (1, 0) are Exp(rate) with a single destination (0, 1)
        q = P3.q
        want, _ = pair_block(q, 3)
        s = gillespie_run(cfg((1, 0), t=4000.0, seed=5))
        time_in, exits = 0.0, 0
        for k, state in enumerate(s.states[:-1]):
            if state == (1, 0):
                time_in += s.times[k + 1] - s.times[k]
                exits += 1
        rate = exits / time_in
        assert exits > 10_000
        assert abs(rate - float(want)) < 3 * rate / math.sqrt(exits)

    def test_validation(self):
        with pytest.raises(ValueError):
            TrajectoryConfig(AsepParams("symbolic", 3), 2, 1.0, 0)
        with pytest.raises(ValueError):
            TrajectoryConfig(P3, 2, 0.0, 0)
        with pytest.raises(ValueError):
            TrajectoryConfig(P3, 2, 1.0, 0, (1, 2, 3))
        with pytest.raises(ValueError):
            TrajectoryConfig(P3, 2, 1.0, -1)

    def test_negative_rate(self, monkeypatch):
        real = sim.multi_site_generator

        def broken(params, L):
            gen = real(params, L)
            (i, j) = next(k for k, v in gen.entries.items() if k[0] != k[1] and v > 0)
            gen.entries[(i, j)] = -gen.entries[(i, j)]
            return gen

        sim._jump_table.cache_clear()
        monkeypatch.setattr(sim, "multi_site_generator", broken)
        with pytest.raises(NegativeRate):
            gillespie_run(cfg((3, 0), params=AsepParams(Fraction(5, 4), 3)))
        sim._jump_table.cache_clear()


class TestKernel:
    def test_time_zero_is_identity(self):
        e = estimate_transition_matrix(cfg((0, 0)), 0.0, 10)
        assert np.array_equal(e.empirical, np.eye(16))

    def test_exact_kernel_is_stochastic(self):
        P = exact_transition_matrix(P3, 2, 0.3)
        assert np.allclose(P.sum(axis=1), 1.0) and P.min() > -1e-12

    def test_kernel_matches_matrix_exponential(self):
        e = estimate_transition_matrix(cfg((0, 0), t=0.1, seed=42), 0.1, 100_000)
        assert e.max_error < 0.01
        table = jump_table(P3, 2)
        for k, s in enumerate(table.basis):
            if table.exit_rate[k] == 0:
                assert e.empirical[k, k] == 1.0

    def test_chunked_streams_independent_of_workers(self):
        a = simulate_final_states(P3, 2, (3, 0), 0.2, 25_000, seed=3)
        b = simulate_final_states(P3, 2, (3, 0), 0.2, 25_000, seed=3, workers=3)
        assert np.array_equal(a, b)


class TestDualityMC:
    def test_time_zero(self):
        r = duality_expectation_check(P3, 3, 5, (3, 0), (1, 2), 0.0, 100, 1)
        assert r["lhs"] == r["rhs"] and r["ok"]

    def test_empty_eta(self):
        r = duality_expectation_check(P3, 3, 5, (0, 0), (3, 1), 0.7, 2000, 1)
        assert r["lhs"] == 1.0 and r["rhs"] == 1.0 and r["ok"]

    def test_agreement(self):
        r = duality_expectation_check(P3, 3, 5, (3, 0), (1, 2), 0.5, 100_000, 7)
        assert r["ok"] and abs(r["z"]) < 4
        assert abs(r["lhs"] - r["exact"]) < 5 * r["lhs_se"]

    def test_rejects_delta(self):
        with pytest.raises(ValueError):
            duality_expectation_check(AsepParams(2, 4, 1), 3, 5, (3, 0), (1, 2), 0.5, 10, 0)

    @pytest.mark.parametrize("n,q", [(2, Fraction(1, 2)), (3, Fraction(3, 2)), (5, Fraction(2))])
    def test_semigroup(self, n, q):
        assert semigroup_duality_residual(AsepParams(q, n), 3, 5, 0.5) < 1e-10

    def test_semigroup_fails_for_positive_delta(self):
        assert semigroup_duality_residual(AsepParams(Fraction(3, 2), 4, 1), 3, 5, 0.5) > 1e-6

    def test_semigroup_oracle(self):
        # scipy-independent route: truncated Taylor series of exp(tL)
        table = jump_table(P3, 2)
        A = 0.05 * table.generator
        P, term = np.eye(16), np.eye(16)
        for k in range(1, 30):
            term = term @ A / k
            P = P + term
        assert np.allclose(P, expm(A), atol=1e-12)
