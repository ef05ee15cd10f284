"""MDP primitives for two-age sensing/communication scheduling.

The state is the pair (alpha_s, alpha_b): age of information at the source
and at the base station, on the truncated grid {0..a_max}^2. Each slot the
controller either senses (the base station refreshes on success) or
communicates (the source catches up to the base station on success); both
links are Bernoulli. Ages advance by one slot regardless of the outcome,
saturating at a_max:

    action  outcome  next state
    sense   success  (alpha_s + 1, 1)
    sense   fail     (alpha_s + 1, alpha_b + 1)
    comm    success  (alpha_b + 1, alpha_b + 1)
    comm    fail     (alpha_s + 1, alpha_b + 1)

The stage cost is alpha_s plus the activation cost of the chosen action,
and the objective is the expected discounted sum of stage costs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

State = tuple[int, int]


class Action(IntEnum):
    SENSE = 0
    COMM = 1


class Outcome(IntEnum):
    FAIL = 0
    SUCCESS = 1


@dataclass(frozen=True)
class ModelParams:
    """Scalar problem constants.

    lambda_s / lambda_c are the sensing / communication success
    probabilities, c_s / c_c the per-activation costs, gamma the discount
    factor and a_max the saturation age. gamma = 0 is admitted for
    degenerate (myopic) instances.
    """

    lambda_s: float
    lambda_c: float
    c_s: float
    c_c: float
    gamma: float
    a_max: int

    def __post_init__(self):
        if not 0.0 <= self.lambda_s <= 1.0:
            raise ValueError(f"lambda_s must be in [0, 1], got {self.lambda_s}")
        if not 0.0 <= self.lambda_c <= 1.0:
            raise ValueError(f"lambda_c must be in [0, 1], got {self.lambda_c}")
        if self.c_s < 0.0:
            raise ValueError(f"c_s must be >= 0, got {self.c_s}")
        if self.c_c < 0.0:
            raise ValueError(f"c_c must be >= 0, got {self.c_c}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")
        if int(self.a_max) != self.a_max or self.a_max < 2:
            raise ValueError(f"a_max must be an integer >= 2, got {self.a_max}")

    @property
    def lambda_ordering_ok(self) -> bool:
        """True when lambda_c >= lambda_s.

        The threshold-structure guarantees are only established under this
        ordering; construction is permitted either way, and verification
        reports surface the flag.
        """
        return self.lambda_c >= self.lambda_s

    @property
    def n_ages(self) -> int:
        return self.a_max + 1

    @property
    def grid_shape(self) -> tuple[int, int]:
        return (self.a_max + 1, self.a_max + 1)

    @property
    def max_stage_cost(self) -> float:
        return self.a_max + max(self.c_s, self.c_c)

    @property
    def value_upper_bound(self) -> float:
        """Discounted sum of the maximal stage cost; bounds any value grid."""
        return self.max_stage_cost / (1.0 - self.gamma)

    def success_prob(self, action: Action | int) -> float:
        return self.lambda_c if action == Action.COMM else self.lambda_s

    def activation_cost(self, action: Action | int) -> float:
        return self.c_c if action == Action.COMM else self.c_s


def _check_state(state: State, params: ModelParams) -> None:
    a_s, a_b = state
    if not (0 <= a_s <= params.a_max and 0 <= a_b <= params.a_max):
        raise ValueError(f"state {state!r} outside the grid [0, {params.a_max}]^2")


def transition(state: State, action: Action | int, outcome: Outcome | int,
               params: ModelParams) -> State:
    """Deterministic successor of (state, action, outcome), saturated at a_max."""
    _check_state(state, params)
    a_s, a_b = state
    if action == Action.SENSE:
        nxt_s, nxt_b = (a_s + 1, 1) if outcome == Outcome.SUCCESS else (a_s + 1, a_b + 1)
    else:
        nxt_s, nxt_b = (a_b + 1, a_b + 1) if outcome == Outcome.SUCCESS else (a_s + 1, a_b + 1)
    cap = params.a_max
    return (min(nxt_s, cap), min(nxt_b, cap))


def stage_cost(state: State, action: Action | int, params: ModelParams) -> float:
    """Per-slot cost: source age plus the activation cost of the action."""
    return state[0] + params.activation_cost(action)


def q_value(V: np.ndarray, state: State, action: Action | int,
            params: ModelParams) -> float:
    """Action value: stage cost plus the discounted two-point expectation of V."""
    V = np.asarray(V)
    p = params.success_prob(action)
    v_succ = V[transition(state, action, Outcome.SUCCESS, params)]
    v_fail = V[transition(state, action, Outcome.FAIL, params)]
    return stage_cost(state, action, params) + params.gamma * (p * v_succ + (1.0 - p) * v_fail)


def delta(V: np.ndarray, state: State, params: ModelParams) -> float:
    """Action difference Q_sense - Q_comm; sensing is preferred where it is <= 0."""
    return q_value(V, state, Action.SENSE, params) - q_value(V, state, Action.COMM, params)


def q_grids(V: np.ndarray, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Both action-value grids over the full state grid, vectorised.

    Returns (q_sense, q_comm); entries agree with ``q_value`` at every state,
    including saturated boundary states.
    """
    V = np.asarray(V, dtype=float)
    if V.shape != params.grid_shape:
        raise ValueError(f"value grid shape {V.shape} != {params.grid_shape}")
    n = params.n_ages
    up1 = np.minimum(np.arange(n) + 1, params.a_max)  # age + 1, saturated
    alpha_s = np.arange(n, dtype=float)[:, None]

    v_fail = V[np.ix_(up1, up1)]         # (alpha_s+1, alpha_b+1)
    v_sense = V[up1, 1][:, None]         # (alpha_s+1, 1)
    v_comm = V[up1, up1][None, :]        # (alpha_b+1, alpha_b+1)

    q_sense = alpha_s + params.c_s + params.gamma * (
        params.lambda_s * v_sense + (1.0 - params.lambda_s) * v_fail)
    q_comm = alpha_s + params.c_c + params.gamma * (
        params.lambda_c * v_comm + (1.0 - params.lambda_c) * v_fail)
    return q_sense, q_comm


def delta_grid(V: np.ndarray, params: ModelParams) -> np.ndarray:
    """Q_sense - Q_comm over the full grid."""
    q_sense, q_comm = q_grids(V, params)
    return q_sense - q_comm
