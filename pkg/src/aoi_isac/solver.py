"""Dynamic-programming solvers for the two-age scheduling MDP.

Value iteration is the workhorse; policy iteration with exact evaluation and
exhaustive policy enumeration (tiny grids only) serve as independent
cross-checks. All grids are dense float64 arrays indexed [alpha_s, alpha_b],
policies are int arrays with 0 = sense, 1 = comm.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .model import Action, ModelParams, delta_grid, q_grids


@dataclass
class SolveReport:
    iterations: int
    final_sweep_delta: float
    suboptimality_bound: float
    converged: bool
    wall_time: float


def bellman_backup(V: np.ndarray, params: ModelParams) -> np.ndarray:
    """One synchronous backup: pointwise min of the two action-value grids.

    The input grid is read only; the result is a fresh array.
    """
    q_sense, q_comm = q_grids(V, params)
    return np.minimum(q_sense, q_comm)


def extract_policy(V: np.ndarray, params: ModelParams) -> np.ndarray:
    """Greedy policy for V: sense where Q_sense - Q_comm <= 0, comm elsewhere.

    Ties go to sense, which keeps oracle comparisons reproducible.
    """
    return (delta_grid(V, params) > 0.0).astype(np.int8)


def value_iteration(params: ModelParams, tol: float = 1e-9,
                    max_iter: int = 100_000) -> tuple[np.ndarray, np.ndarray, SolveReport]:
    """Iterate synchronous backups from V = 0 until the sup-norm sweep change
    drops to tol.

    Returns (V, greedy policy, report). On a tolerance-based exit the
    standard contraction argument bounds the remaining error by
    gamma * tol / (1 - gamma), which the report carries as
    ``suboptimality_bound`` (computed from the final sweep change). If
    max_iter is exhausted first the report has ``converged = False`` and the
    partial grids are still returned; the caller decides whether to accept
    them.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    start = time.perf_counter()
    V = np.zeros(params.grid_shape)
    sweep_delta = np.inf
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        W = bellman_backup(V, params)
        sweep_delta = float(np.max(np.abs(W - V)))
        V = W
        if sweep_delta <= tol:
            converged = True
            break

    bound = params.gamma * sweep_delta / (1.0 - params.gamma)
    report = SolveReport(
        iterations=iterations,
        final_sweep_delta=sweep_delta,
        suboptimality_bound=bound,
        converged=converged,
        wall_time=time.perf_counter() - start,
    )
    return V, extract_policy(V, params), report


def extract_thresholds(policy: np.ndarray) -> tuple[np.ndarray, bool]:
    """Per-row switching thresholds of a policy grid.

    For each base-station age alpha_b, tau[alpha_b] is the largest source
    age still played as sense (-1 when the whole row is comm, a_max when the
    whole row is sense). The returned flag is True when every row is a sense
    block followed by a comm block; any comm-to-sense flip while alpha_s
    ascends clears it, and that row's tau is still the last sense index.
    """
    policy = np.asarray(policy)
    tau = np.empty(policy.shape[1], dtype=int)
    single_crossing_ok = True
    for j in range(policy.shape[1]):
        sense_idx = np.flatnonzero(policy[:, j] == Action.SENSE)
        tau[j] = sense_idx[-1] if sense_idx.size else -1
        if sense_idx.size != tau[j] + 1:
            single_crossing_ok = False
    return tau, single_crossing_ok


def _flat_dynamics(params: ModelParams):
    """Flat-index successor tables shared by the evaluation-based solvers.

    Returns (succ_sense, succ_comm, succ_fail, g_sense, g_comm) where the
    succ arrays hold the flat index of the success successor per action (the
    fail successor is action-independent) and g_* the stage costs.
    """
    n = params.n_ages
    ids = np.arange(n * n).reshape(n, n)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ip1 = np.minimum(i + 1, params.a_max)
    jp1 = np.minimum(j + 1, params.a_max)
    succ_sense = ids[ip1, np.ones_like(jp1)].ravel()
    succ_comm = ids[jp1, jp1].ravel()
    succ_fail = ids[ip1, jp1].ravel()
    g_sense = (i + params.c_s).ravel().astype(float)
    g_comm = (i + params.c_c).ravel().astype(float)
    return succ_sense, succ_comm, succ_fail, g_sense, g_comm


def evaluate_policy(policy: np.ndarray, params: ModelParams,
                    eval_tol: float = 1e-12, method: str = "auto") -> np.ndarray:
    """Value grid of a fixed stationary policy.

    method "direct" solves the (a_max+1)^2-dimensional linear system
    (I - gamma P) V = g exactly; "iterative" runs successive approximation
    until the sup-norm update is <= eval_tol; "auto" picks direct up to
    2500 states and iterative beyond.
    """
    policy = np.asarray(policy)
    if policy.shape != params.grid_shape:
        raise ValueError(f"policy shape {policy.shape} != {params.grid_shape}")
    n_states = policy.size
    if method == "auto":
        method = "direct" if n_states <= 2500 else "iterative"

    succ_sense, succ_comm, succ_fail, g_sense, g_comm = _flat_dynamics(params)
    act = policy.ravel()
    comm = act == Action.COMM
    p = np.where(comm, params.lambda_c, params.lambda_s)
    succ = np.where(comm, succ_comm, succ_sense)
    g = np.where(comm, g_comm, g_sense)
    rows = np.arange(n_states)

    if method == "direct":
        A = np.eye(n_states)
        # success and fail successors can coincide at saturation, so accumulate
        np.add.at(A, (rows, succ), -params.gamma * p)
        np.add.at(A, (rows, succ_fail), -params.gamma * (1.0 - p))
        return np.linalg.solve(A, g).reshape(params.grid_shape)

    if method != "iterative":
        raise ValueError(f"unknown method {method!r}")
    V = np.zeros(n_states)
    while True:
        W = g + params.gamma * (p * V[succ] + (1.0 - p) * V[succ_fail])
        change = np.max(np.abs(W - V))
        V = W
        if change <= eval_tol:
            return V.reshape(params.grid_shape)


def policy_iteration(params: ModelParams, eval_tol: float = 1e-12,
                     max_sweeps: int = 1000) -> tuple[np.ndarray, np.ndarray]:
    """Alternate exact policy evaluation with greedy improvement (ties to
    sense) until the policy is stable; returns (V, policy).

    A finite MDP with a fixed tie rule must stabilise, so exceeding
    max_sweeps signals an implementation fault and raises.
    """
    policy = extract_policy(np.zeros(params.grid_shape), params)
    for _ in range(max_sweeps):
        V = evaluate_policy(policy, params, eval_tol=eval_tol)
        improved = extract_policy(V, params)
        if np.array_equal(improved, policy):
            return V, policy
        policy = improved
    raise RuntimeError(f"policy iteration did not stabilise within {max_sweeps} sweeps")


def exhaustive_policy_oracle(params: ModelParams,
                             chunk: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force ground truth for tiny grids: evaluate every stationary
    deterministic policy exactly and return the pointwise-minimal value grid
    with its argmin policy.

    Only admissible for (a_max+1)^2 <= 16 states (at most 65536 policies);
    each candidate is evaluated by a batched linear solve.
    """
    n_states = params.n_ages ** 2
    if n_states > 16:
        raise ValueError(
            f"exhaustive enumeration needs (a_max+1)^2 <= 16 states, got {n_states}")

    succ_sense, succ_comm, succ_fail, g_sense, g_comm = _flat_dynamics(params)
    rows = np.arange(n_states)
    state_bit = np.arange(n_states, dtype=np.int64)

    v_min = np.full(n_states, np.inf)
    best_sum = np.inf
    best_bits = None
    best_v = None
    total = 1 << n_states
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        bits = (idx[:, None] >> state_bit[None, :]) & 1          # (B, n_states)
        comm = bits == 1
        p = np.where(comm, params.lambda_c, params.lambda_s)
        succ = np.where(comm, succ_comm, succ_sense)
        g = np.where(comm, g_comm, g_sense)

        batch = idx.size
        A = np.tile(np.eye(n_states), (batch, 1, 1))
        b_idx = np.arange(batch)[:, None]
        A[b_idx, rows[None, :], succ] -= params.gamma * p
        A[b_idx, rows[None, :], np.broadcast_to(succ_fail, succ.shape)] -= (
            params.gamma * (1.0 - p))
        v_all = np.linalg.solve(A, g[..., None])[..., 0]         # (B, n_states)

        v_min = np.minimum(v_min, v_all.min(axis=0))
        sums = v_all.sum(axis=1)
        k = int(np.argmin(sums))
        if sums[k] < best_sum:
            best_sum = sums[k]
            best_bits = bits[k]
            best_v = v_all[k]

    # a single policy attains the pointwise minimum; a gap here is a fault
    if not np.allclose(best_v, v_min, rtol=0.0, atol=1e-9):
        raise RuntimeError("no single policy attained the pointwise minimum")
    policy = best_bits.astype(np.int8).reshape(params.grid_shape)
    return v_min.reshape(params.grid_shape), policy
