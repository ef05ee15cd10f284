"""Deterministic artifact formats: CSV grids, JSON reports, ASCII maps, PGM.

Grid CSV layout: rows alpha_s = 0..a_max ascending, columns alpha_b
ascending, an index header row and column, and '#'-prefixed comment lines
carrying the resolved run configuration so every artifact is
self-describing. Reals are printed with 17 significant digits, which
round-trips float64 losslessly; rerunning a writer with identical inputs
reproduces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

CORNER = "alpha_s\\alpha_b"


def fmt_real(x: float) -> str:
    return f"{float(x):.17g}"


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def grid_csv_text(grid: np.ndarray, comments: list[str] = (),
                  integer: bool = False) -> str:
    grid = np.asarray(grid)
    n = grid.shape[0]
    if grid.shape != (n, n):
        raise ValueError(f"grid must be square, got shape {grid.shape}")
    fmt = (lambda v: str(int(v))) if integer else fmt_real
    lines = [f"# {c}" for c in comments]
    lines.append(",".join([CORNER] + [str(j) for j in range(n)]))
    for i in range(n):
        lines.append(",".join([str(i)] + [fmt(v) for v in grid[i]]))
    return "\n".join(lines) + "\n"


def write_grid_csv(path, grid: np.ndarray, comments: list[str] = (),
                   integer: bool = False) -> None:
    Path(path).write_text(grid_csv_text(grid, comments, integer))


def read_grid_csv(path, integer: bool = False) -> tuple[np.ndarray, list[str]]:
    """Parse a grid CSV back into an array plus its comment lines.

    Malformed content raises ValueError naming the offending line number.
    """
    path = Path(path)
    comments = []
    rows = []
    expected_cols = None
    row_index = 0
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        cells = line.split(",")
        if expected_cols is None:  # header row
            if cells[0] != CORNER:
                raise ValueError(f"{path}:{lineno}: expected header starting "
                                 f"with {CORNER!r}, got {cells[0]!r}")
            expected_cols = len(cells) - 1
            continue
        if len(cells) != expected_cols + 1:
            raise ValueError(f"{path}:{lineno}: expected {expected_cols + 1} "
                             f"cells, got {len(cells)}")
        if cells[0] != str(row_index):
            raise ValueError(f"{path}:{lineno}: expected row index "
                             f"{row_index}, got {cells[0]!r}")
        try:
            if integer:
                rows.append([int(c) for c in cells[1:]])
            else:
                rows.append([float(c) for c in cells[1:]])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad cell value ({exc})") from None
        row_index += 1
    if expected_cols is None:
        raise ValueError(f"{path}:1: no header row found")
    if row_index != expected_cols:
        raise ValueError(f"{path}: expected {expected_cols} data rows, got {row_index}")
    dtype = np.int64 if integer else float
    return np.array(rows, dtype=dtype), comments


def read_policy_csv(path) -> tuple[np.ndarray, list[str]]:
    """Grid CSV restricted to action codes {0, 1}."""
    grid, comments = read_grid_csv(path, integer=True)
    bad = np.argwhere((grid != 0) & (grid != 1))
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"{path}: policy cell ({i},{j}) is {grid[i, j]}, "
                         f"expected 0 (sense) or 1 (comm)")
    return grid.astype(np.int8), comments


def decision_map_text(policy: np.ndarray, comments: list[str] = ()) -> str:
    """Glyph map of a policy: 'S' for sense, 'C' for comm; rows alpha_s
    top-to-bottom, columns alpha_b left-to-right."""
    policy = np.asarray(policy)
    lines = [f"# {c}" for c in comments]
    lines.append("# rows: alpha_s = 0..%d (top to bottom); "
                 "cols: alpha_b = 0..%d (left to right)"
                 % (policy.shape[0] - 1, policy.shape[1] - 1))
    glyphs = np.where(policy == 0, "S", "C")
    lines += ["".join(row) for row in glyphs]
    return "\n".join(lines) + "\n"


def value_pgm_text(grid: np.ndarray) -> str:
    """Plain (ASCII, P2) portable graymap of a value surface, linearly
    rescaled to 0..255 for external plotting."""
    grid = np.asarray(grid, dtype=float)
    lo, hi = float(grid.min()), float(grid.max())
    if hi > lo:
        levels = np.rint((grid - lo) / (hi - lo) * 255).astype(int)
    else:
        levels = np.zeros(grid.shape, dtype=int)
    lines = ["P2", f"{grid.shape[1]} {grid.shape[0]}", "255"]
    lines += [" ".join(str(v) for v in row) for row in levels]
    return "\n".join(lines) + "\n"
