"""Numerical certificates for the structural properties of solved grids.

Each check is a pure function returning a StructureReport: coordinatewise
monotonicity and submodularity of a value grid, submodularity of both
action-value grids, single-crossing and antitone behaviour of the action
difference, and monotonicity of the switching curve. Inequalities are tested
up to a floating-point tolerance; they hold exactly in exact arithmetic, so
the tolerance only absorbs rounding accumulated by the solver.

Violations are collected exhaustively in row-major coordinate order, never
truncated, so counterexamples can be inspected. Checks that quantify over
the action difference or the Q grids are restricted to the unclamped
interior (both ages <= a_max - 1): saturated states mix transition rows and
the closed-form difference does not apply there. Skipped regions are always
named in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Action, ModelParams, delta_grid, q_grids
from .solver import extract_thresholds

DEFAULT_TOL = 1e-9


@dataclass
class StructureReport:
    check_name: str
    passed: bool
    violations: list = field(default_factory=list)
    tolerance: float = DEFAULT_TOL
    region: str = "full grid"
    lambda_ordering_ok: bool | None = None  # set by checks that rely on lambda_c >= lambda_s

    def to_dict(self) -> dict:
        d = {
            "check": self.check_name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "region": self.region,
            "n_violations": len(self.violations),
            "violations": [list(v) for v in self.violations],
        }
        if self.lambda_ordering_ok is not None:
            d["lambda_ordering_ok"] = self.lambda_ordering_ok
        return d


def _axis_drops(grid: np.ndarray, axis: int, tol: float, label: str) -> list:
    """Violations of nondecreasing-along-axis, as (label, i, j, magnitude)."""
    drop = -np.diff(grid, axis=axis)
    bad = np.argwhere(drop > tol)
    return [(label, int(i), int(j), float(drop[i, j])) for i, j in bad]


def check_monotone(V: np.ndarray, tol: float = DEFAULT_TOL) -> StructureReport:
    """Coordinatewise nondecreasing in both ages, over all adjacent pairs."""
    V = np.asarray(V, dtype=float)
    violations = _axis_drops(V, 0, tol, "alpha_s") + _axis_drops(V, 1, tol, "alpha_b")
    return StructureReport("monotone", not violations, violations, tol)


def _submodular_excesses(grid: np.ndarray, tol: float) -> list:
    """Positive cross-differences on 2x2 blocks, as (a, b, excess)."""
    excess = grid[1:, 1:] + grid[:-1, :-1] - grid[1:, :-1] - grid[:-1, 1:]
    bad = np.argwhere(excess > tol)
    return [(int(a), int(b), float(excess[a, b])) for a, b in bad]


def check_submodular(V: np.ndarray, tol: float = DEFAULT_TOL) -> StructureReport:
    """V(a+1,b+1) + V(a,b) <= V(a+1,b) + V(a,b+1) on every 2x2 block."""
    V = np.asarray(V, dtype=float)
    violations = _submodular_excesses(V, tol)
    return StructureReport("submodular", not violations, violations, tol)


def check_delta_monotone(V: np.ndarray, params: ModelParams,
                         tol: float = DEFAULT_TOL) -> StructureReport:
    """Action difference nondecreasing in alpha_s and nonincreasing in
    alpha_b, on the unclamped interior."""
    d = delta_grid(V, params)[: params.a_max, : params.a_max]
    violations = _axis_drops(d, 0, tol, "alpha_s")
    rise = np.diff(d, axis=1)
    bad = np.argwhere(rise > tol)
    violations += [("alpha_b", int(i), int(j), float(rise[i, j])) for i, j in bad]
    return StructureReport(
        "delta_monotone", not violations, violations, tol,
        region=f"interior alpha_s, alpha_b <= {params.a_max - 1} "
               f"(saturated row/column skipped)",
        lambda_ordering_ok=params.lambda_ordering_ok,
    )


def check_q_submodular(V: np.ndarray, params: ModelParams,
                       tol: float = DEFAULT_TOL) -> StructureReport:
    """2x2-block submodularity of both action-value grids on the unclamped
    interior. Presumes V itself passed the monotone and submodular checks."""
    q_sense, q_comm = q_grids(V, params)
    violations = [
        ("sense", a, b, mag)
        for a, b, mag in _submodular_excesses(q_sense[: params.a_max, : params.a_max], tol)
    ] + [
        ("comm", a, b, mag)
        for a, b, mag in _submodular_excesses(q_comm[: params.a_max, : params.a_max], tol)
    ]
    return StructureReport(
        "q_submodular", not violations, violations, tol,
        region=f"interior alpha_s, alpha_b <= {params.a_max - 1} "
               f"(saturated row/column skipped)",
    )


def check_threshold_monotone(tau: np.ndarray) -> StructureReport:
    """Switching curve nondecreasing in alpha_b; thresholds are integers so
    no tolerance applies."""
    tau = np.asarray(tau)
    drop = -np.diff(tau)
    bad = np.flatnonzero(drop > 0)
    violations = [(int(j), int(drop[j])) for j in bad]
    return StructureReport("threshold_monotone", not violations, violations,
                           tolerance=0.0, region="tau over alpha_b")


def check_single_crossing(policy: np.ndarray) -> StructureReport:
    """Each policy row (fixed alpha_b, alpha_s ascending) must be a sense
    block followed by a comm block; violations list every comm-to-sense flip
    as (alpha_b, alpha_s)."""
    policy = np.asarray(policy)
    violations = []
    for j in range(policy.shape[1]):
        col = policy[:, j]
        flips = np.flatnonzero((col[1:] == Action.SENSE) & (col[:-1] == Action.COMM))
        violations += [(j, int(i) + 1) for i in flips]
    return StructureReport("single_crossing", not violations, violations,
                           tolerance=0.0, region="policy rows, alpha_s ascending")


def run_all_checks(V: np.ndarray, policy: np.ndarray, params: ModelParams,
                   tol: float = DEFAULT_TOL) -> list[StructureReport]:
    """The full certificate: every structural check on a solved (V, policy)
    pair, in a fixed order."""
    tau, _ = extract_thresholds(policy)
    return [
        check_monotone(V, tol),
        check_submodular(V, tol),
        check_delta_monotone(V, params, tol),
        check_q_submodular(V, params, tol),
        check_single_crossing(policy),
        check_threshold_monotone(tau),
    ]
