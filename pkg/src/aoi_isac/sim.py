"""Seeded Monte Carlo rollout of scheduling policies through the age dynamics.

Randomness discipline: one root seed. Trajectory i draws from the i-th
spawned child of the root SeedSequence, so changing the number of
trajectories (or running them in any order) never changes an individual
trajectory. Each child splits once more into an outcome stream and an action
stream; only randomised policies consume the action stream, so e.g. a
Bernoulli(0) policy reproduces the always-sense trajectories bit for bit.

Policies are either stationary grids (int array indexed [alpha_s, alpha_b])
or small per-slot objects for the stateful baselines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Action, ModelParams, State

_OUTCOME_STREAM, _ACTION_STREAM = 0, 1


class AlternatingPolicy:
    """Sense on even slots, comm on odd slots, regardless of state."""

    uses_action_stream = False

    def actions(self, alpha_s, alpha_b, slot, u=None):
        return np.broadcast_to(np.int8(slot % 2), np.shape(alpha_s))


class RandomCommPolicy:
    """Comm with probability p each slot (drawn from the action stream),
    sense otherwise."""

    uses_action_stream = True

    def __init__(self, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {p}")
        self.p = p

    def actions(self, alpha_s, alpha_b, slot, u):
        return (u < self.p).astype(np.int8)


@dataclass
class Trajectory:
    states: np.ndarray        # (horizon+1, 2)
    actions: np.ndarray       # (horizon,)
    outcomes: np.ndarray      # (horizon,)
    discounted_cost: float
    horizon: int


@dataclass
class SimEstimate:
    mean: float
    std_error: float
    n_trajectories: int
    horizon: int
    truncation_bias_bound: float


def baseline_policy(kind: str, params: ModelParams, p: float | None = None):
    """Named comparison policies: 'always_sense' and 'always_comm' come back
    as stationary grids, 'alternate' and 'random_bernoulli' as per-slot
    policy objects ('random_bernoulli' needs p)."""
    if kind == "always_sense":
        return np.full(params.grid_shape, Action.SENSE, dtype=np.int8)
    if kind == "always_comm":
        return np.full(params.grid_shape, Action.COMM, dtype=np.int8)
    if kind == "alternate":
        return AlternatingPolicy()
    if kind == "random_bernoulli":
        if p is None:
            raise ValueError("random_bernoulli needs the comm probability p")
        return RandomCommPolicy(p)
    raise ValueError(f"unknown baseline policy {kind!r}")


def truncation_bias_bound(params: ModelParams, horizon: int) -> float:
    """Tail bound on the cost ignored by a finite-horizon estimate of the
    infinite-horizon objective."""
    return params.gamma ** horizon * params.max_stage_cost / (1.0 - params.gamma)


def _policy_uses_action_stream(policy) -> bool:
    return bool(getattr(policy, "uses_action_stream", False))


def _trajectory_streams(child: np.random.SeedSequence, horizon: int,
                        need_action_stream: bool):
    out_ss, act_ss = child.spawn(2)
    u_out = np.random.default_rng(out_ss).random(horizon)
    u_act = np.random.default_rng(act_ss).random(horizon) if need_action_stream else None
    return u_out, u_act


def _as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def rollout(policy, params: ModelParams, s0: State, horizon: int,
            seed) -> Trajectory:
    """One trajectory of the age dynamics under a policy.

    Outcomes are Bernoulli in the chosen action's success probability, drawn
    from the stream derived from seed (an int, or a SeedSequence when the
    caller manages splitting). Identical inputs yield identical trajectories.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    a_s, a_b = s0
    if not (0 <= a_s <= params.a_max and 0 <= a_b <= params.a_max):
        raise ValueError(f"s0 {s0!r} outside the grid [0, {params.a_max}]^2")

    child = _as_seed_sequence(seed)
    u_out, u_act = _trajectory_streams(child, horizon, _policy_uses_action_stream(policy))

    grid = policy if isinstance(policy, np.ndarray) else None
    cap = params.a_max
    lam_s, lam_c = params.lambda_s, params.lambda_c
    c_s, c_c = params.c_s, params.c_c

    states = np.empty((horizon + 1, 2), dtype=int)
    actions = np.empty(horizon, dtype=np.int8)
    outcomes = np.empty(horizon, dtype=np.int8)
    states[0] = (a_s, a_b)
    cost = 0.0
    gamma_pow = 1.0
    for k in range(horizon):
        if grid is not None:
            act = int(grid[a_s, a_b])
        else:
            act = int(policy.actions(a_s, a_b, k,
                                     u_act[k] if u_act is not None else None))
        success = u_out[k] < (lam_c if act == Action.COMM else lam_s)
        cost += gamma_pow * (a_s + (c_c if act == Action.COMM else c_s))
        gamma_pow *= params.gamma

        if success and act == Action.COMM:
            nb = min(a_b + 1, cap)
            a_s, a_b = nb, nb
        elif success:
            a_s, a_b = min(a_s + 1, cap), 1
        else:
            a_s, a_b = min(a_s + 1, cap), min(a_b + 1, cap)
        actions[k] = act
        outcomes[k] = 1 if success else 0
        states[k + 1] = (a_s, a_b)

    return Trajectory(states, actions, outcomes, cost, horizon)


def _batch_costs(policy, params: ModelParams, s0: State, n: int, horizon: int,
                 root: np.random.SeedSequence) -> np.ndarray:
    """Discounted costs of n trajectories, computed in lockstep.

    Arithmetic per trajectory matches ``rollout`` operation for operation,
    so the results are bit-identical to n individual rollouts.
    """
    children = root.spawn(n)
    need_act = _policy_uses_action_stream(policy)
    u_out = np.empty((n, horizon))
    u_act = np.empty((n, horizon)) if need_act else None
    for i, child in enumerate(children):
        o, a = _trajectory_streams(child, horizon, need_act)
        u_out[i] = o
        if need_act:
            u_act[i] = a

    grid = policy if isinstance(policy, np.ndarray) else None
    cap = params.a_max
    S = np.full(n, s0[0])
    B = np.full(n, s0[1])
    cost = np.zeros(n)
    gamma_pow = 1.0
    for k in range(horizon):
        if grid is not None:
            A = grid[S, B]
        else:
            A = policy.actions(S, B, k, u_act[:, k] if need_act else None)
        comm = A == Action.COMM
        success = u_out[:, k] < np.where(comm, params.lambda_c, params.lambda_s)
        cost += gamma_pow * (S + np.where(comm, params.c_c, params.c_s))
        gamma_pow *= params.gamma

        sp1 = np.minimum(S + 1, cap)
        bp1 = np.minimum(B + 1, cap)
        comm_success = success & comm
        S = np.where(comm_success, bp1, sp1)
        B = np.where(success, np.where(comm, bp1, 1), bp1)
    return cost


def estimate_value(policy, params: ModelParams, s0: State, n: int,
                   horizon: int, seed) -> SimEstimate:
    """Mean discounted cost over n independent seeded trajectories, with its
    standard error and the horizon-truncation bias bound.

    Deterministic given (seed, n, horizon); the aggregation (numpy pairwise
    summation) is independent of any execution order.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    costs = _batch_costs(policy, params, s0, n, horizon, _as_seed_sequence(seed))
    if np.ptp(costs) == 0.0:
        std_error = 0.0  # identical samples: exactly zero spread
    else:
        std_error = float(np.std(costs, ddof=1) / math.sqrt(n))
    return SimEstimate(
        mean=float(np.mean(costs)),
        std_error=std_error,
        n_trajectories=n,
        horizon=horizon,
        truncation_bias_bound=truncation_bias_bound(params, horizon),
    )


def trajectory_csv_lines(traj: Trajectory, params: ModelParams) -> list[str]:
    """Per-slot CSV rows (k, alpha_s, alpha_b, action, outcome, stage_cost);
    the terminal state is recoverable from the last row via the dynamics."""
    lines = ["k,alpha_s,alpha_b,action,outcome,stage_cost"]
    for k in range(traj.horizon):
        a_s, a_b = traj.states[k]
        act = int(traj.actions[k])
        g = a_s + params.activation_cost(act)
        lines.append(f"{k},{a_s},{a_b},{act},{int(traj.outcomes[k])},{g:.17g}")
    return lines
