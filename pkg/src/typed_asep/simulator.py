"""Continuous-time simulation of the exclusion process.

This is the only module that uses floating point.  Trajectories are
simulated in vectorized batches; each batch of CHUNK trials draws from its
own child of a numpy SeedSequence, so results do not depend on how many
workers run the batches.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .asep_generator import AsepParams, GeneratorMatrix, conserved_counts, multi_site_generator
from .duality import DualityParams, duality_matrix

__all__ = [
    "NegativeRate",
    "TrajectoryConfig",
    "TrajectorySample",
    "JumpTable",
    "jump_table",
    "gillespie_run",
    "simulate_final_states",
    "exact_transition_matrix",
    "estimate_transition_matrix",
    "TransitionEstimate",
    "duality_expectation_check",
    "semigroup_duality_residual",
]

CHUNK = 10_000


class NegativeRate(ValueError):
    pass


@dataclass(frozen=True)
class TrajectoryConfig:
    params: AsepParams
    L: int
    t_max: float
    seed: int
    initial: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.params.symbolic:
            raise ValueError("simulation needs a numeric q")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.L < 2:
            raise ValueError("need at least two sites")
        if self.initial is not None:
            init = tuple(int(s) for s in self.initial)
            if len(init) != self.L or any(s not in (0, 1, 2, 3) for s in init):
                raise ValueError(f"initial must be {self.L} site states in 0..3")
            object.__setattr__(self, "initial", init)
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class TrajectorySample:
    times: list[float]
    states: list[tuple[int, ...]]
    t_max: float

    @property
    def final(self) -> tuple[int, ...]:
        return self.states[-1]

    @property
    def jumps(self) -> int:
        return len(self.states) - 1

    def conserves_counts(self) -> bool:
        c = conserved_counts(self.states[0])
        return all(conserved_counts(s) == c for s in self.states)

    def to_json(self) -> dict:
        return {"t_max": self.t_max, "times": self.times,
                "states": [list(s) for s in self.states], "final": list(self.final)}


@dataclass
class JumpTable:
    basis: list[tuple[int, ...]]
    generator: np.ndarray
    exit_rate: np.ndarray
    cumulative: np.ndarray  # row-normalized cumulative off-diagonal rates

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index_of(self, config) -> int:
        return self.basis.index(tuple(config))


def _float_matrix(gen: GeneratorMatrix) -> np.ndarray:
    M = np.zeros((gen.dim, gen.dim))
    for (i, j), v in gen.entries.items():
        M[i, j] = float(v)
    return M


@lru_cache(maxsize=32)
def _jump_table(q: Fraction, n: int, delta: int, L: int) -> JumpTable:
    gen = multi_site_generator(AsepParams(q, n, delta), L)
    for (i, j), v in gen.entries.items():
        if i != j and v < 0:
            raise NegativeRate(f"rate {gen.basis[i]} -> {gen.basis[j]} is {v} at q = {q}")
    M = _float_matrix(gen)
    off = M - np.diag(np.diag(M))
    exit_rate = off.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        probs = np.where(exit_rate[:, None] > 0, off / exit_rate[:, None], 0.0)
    cum = np.cumsum(probs, axis=1)
    cum[exit_rate > 0, -1] = 1.0
    return JumpTable(gen.basis, M, exit_rate, cum)


def jump_table(params: AsepParams, L: int) -> JumpTable:
    if params.symbolic:
        raise ValueError("simulation needs a numeric q")
    return _jump_table(params.q, params.n, params.delta, L)


def _advance(table: JumpTable, start: np.ndarray, t: float, rng: np.random.Generator) -> np.ndarray:
    """Final states at time t for a batch of starting indices."""
    state = start.copy()
    clock = np.zeros(len(state))
    active = table.exit_rate[state] > 0
    while active.any():
        idx = np.nonzero(active)[0]
        s = state[idx]
        clock[idx] += rng.exponential(1.0 / table.exit_rate[s])
        jumped = clock[idx] <= t
        done = idx[~jumped]
        active[done] = False
        go = idx[jumped]
        if go.size:
            u = rng.random(go.size)
            nxt = (table.cumulative[state[go]] < u[:, None]).sum(axis=1)
            state[go] = np.minimum(nxt, table.dim - 1)
            active[go] = table.exit_rate[state[go]] > 0
    return state


def gillespie_run(cfg: TrajectoryConfig) -> TrajectorySample:
    """One trajectory up to t_max, deterministic in the seed."""
    table = jump_table(cfg.params, cfg.L)
    init = cfg.initial if cfg.initial is not None else (0,) * cfg.L
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    s = table.index_of(init)
    t = 0.0
    times, states = [0.0], [table.basis[s]]
    while table.exit_rate[s] > 0:
        t += rng.exponential(1.0 / table.exit_rate[s])
        if t > cfg.t_max:
            break
        s = int(np.searchsorted(table.cumulative[s], rng.random(), side="right"))
        s = min(s, table.dim - 1)
        times.append(t)
        states.append(table.basis[s])
    return TrajectorySample(times, states, cfg.t_max)


def _chunks(trials: int):
    return [min(CHUNK, trials - k) for k in range(0, trials, CHUNK)]


def simulate_final_states(params: AsepParams, L: int, start: Sequence[int], t: float,
                          trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Basis indices of the state at time t for `trials` independent runs."""
    table = jump_table(params, L)
    s0 = table.index_of(start)
    sizes = _chunks(trials)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(k):
        rng = np.random.default_rng(seqs[k])
        return _advance(table, np.full(sizes[k], s0), t, rng)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(k) for k in range(len(sizes))]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=int)


def exact_transition_matrix(params: AsepParams, L: int, t: float) -> np.ndarray:
    return expm(t * jump_table(params, L).generator)


@dataclass
class TransitionEstimate:
    basis: list
    t: float
    trials: int
    empirical: np.ndarray
    exact: np.ndarray
    max_error: float = field(init=False)

    def __post_init__(self):
        self.max_error = float(np.max(np.abs(self.empirical - self.exact)))

    def to_json(self) -> dict:
        return {"t": self.t, "trials": self.trials, "max_error": self.max_error,
                "basis": [list(b) for b in self.basis]}


def estimate_transition_matrix(cfg: TrajectoryConfig, t: float, trials: int,
                               workers: int = 1) -> TransitionEstimate:
    """Row-wise empirical law of the state at time t, one row per start."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    table = jump_table(cfg.params, cfg.L)
    emp = np.zeros((table.dim, table.dim))
    seqs = np.random.SeedSequence(cfg.seed).generate_state(table.dim, dtype=np.uint64)
    for i, s in enumerate(table.basis):
        if t == 0:
            emp[i, i] = 1.0
            continue
        final = simulate_final_states(cfg.params, cfg.L, s, t, trials, int(seqs[i]), workers)
        emp[i] = np.bincount(final, minlength=table.dim) / trials
    return TransitionEstimate(table.basis, t, trials, emp, exact_transition_matrix(cfg.params, cfg.L, t))


def _float_duality(params: AsepParams, L: int, alpha1, alpha2, basis) -> np.ndarray:
    D = duality_matrix(DualityParams(Fraction(alpha1), Fraction(alpha2), params.q, params.n, L),
                       basis=basis)
    return _float_matrix(D)


def duality_expectation_check(params: AsepParams, alpha1, alpha2, eta0, xi0, t: float,
                              trials: int, seed: int, L: int = 2, workers: int = 1,
                              sigmas: float = 4.0) -> dict:
    """Compare Monte Carlo estimates of E[D(eta_t, xi0)] and E[D(eta0, xi_t)]."""
    if params.delta != 0:
        raise ValueError("duality holds for delta = 0")
    table = jump_table(params, L)
    D = _float_duality(params, L, alpha1, alpha2, table.basis)
    i0, j0 = table.index_of(eta0), table.index_of(xi0)
    seq_l, seq_r = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)

    def side(start, seed_, pick):
        if t == 0:
            return float(pick(np.array([table.index_of(start)]))[0]), 0.0
        final = simulate_final_states(params, L, start, t, trials, int(seed_), workers)
        vals = pick(final)
        se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        return float(vals.mean()), se

    left, se_l = side(eta0, seq_l, lambda f: D[f, j0])
    right, se_r = side(xi0, seq_r, lambda f: D[i0, f])
    combined = math.hypot(se_l, se_r)
    P = expm(t * table.generator)
    exact = float((P @ D)[i0, j0])
    ok = abs(left - right) <= sigmas * combined if combined > 0 else abs(left - right) < 1e-12
    return {
        "eta0": list(eta0), "xi0": list(xi0), "t": t, "trials": trials, "seed": seed,
        "lhs": left, "lhs_se": se_l, "rhs": right, "rhs_se": se_r,
        "combined_se": combined, "z": (left - right) / combined if combined > 0 else 0.0,
        "exact": exact, "ok": bool(ok),
    }


def semigroup_duality_residual(params: AsepParams, alpha1, alpha2, t: float, L: int = 2) -> float:
    """max |exp(tL) D - D exp(tL^T)|, relative to max |D|."""
    table = jump_table(params, L)
    D = _float_duality(params, L, alpha1, alpha2, table.basis)
    P = expm(t * table.generator)
    R = P @ D - D @ P.T
    return float(np.max(np.abs(R)) / max(1.0, np.max(np.abs(D))))
