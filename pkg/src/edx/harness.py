"""Planted instances, the gap-contract trial and the scaling experiment."""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import TokenString, is_power_of_two
from .estimator import GAP_FACTOR, GapConfig, gap_ub

DEFAULT_ALPHABET = 4


@dataclass(frozen=True)
class PlantedInstance:
    x: TokenString
    y: TokenString
    edits_applied: int
    alphabet_size: int
    seed: int

    @property
    def true_distance_upper(self) -> int:
        return self.edits_applied


def gen_planted(n: int, k: int, alphabet_size: int = DEFAULT_ALPHABET, seed: int = 0
                ) -> PlantedInstance:
    """Uniform ``x`` and a copy ``y`` carrying ``k`` random single-token edits.

    Edit types are chosen so the net length change returns to zero by the
    last edit; ``y`` therefore has length ``n`` and ``d(x, y) <= k``.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if alphabet_size < 2:
        raise ValueError("alphabet_size must be at least 2")
    rng = np.random.default_rng(seed)
    x = rng.integers(0, alphabet_size, size=n, dtype=np.int32)
    y = x.tolist()
    offset = 0
    for r in range(k - 1, -1, -1):
        # after this edit, r edits remain to bring the length change back to zero
        ops = [op for op, step in (("sub", 0), ("ins", 1), ("del", -1))
               if abs(offset + step) <= r and (y or op == "ins")]
        op = ops[int(rng.integers(0, len(ops)))]
        if op == "sub":
            p = int(rng.integers(0, len(y)))
            y[p] = (y[p] + 1 + int(rng.integers(0, alphabet_size - 1))) % alphabet_size
        elif op == "ins":
            y.insert(int(rng.integers(0, len(y) + 1)), int(rng.integers(0, alphabet_size)))
            offset += 1
        else:
            del y[int(rng.integers(0, len(y)))]
            offset -= 1
    assert offset == 0 and len(y) == n
    return PlantedInstance(TokenString(x, alphabet_size), TokenString(np.array(y, np.int32),
                                                                      alphabet_size),
                           k, alphabet_size, seed)


def _trial_seed(seed: int, t: int) -> tuple[int, int]:
    state = np.random.SeedSequence([seed & (2 ** 64 - 1), t]).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


def _run_trial(args) -> dict:
    n, theta, seed, t, alphabet_size = args
    inst_seed, run_seed = _trial_seed(seed, t)
    k = int(Fraction(theta) * n / 2)
    inst = gen_planted(n, k, alphabet_size, inst_seed)
    rep = gap_ub(inst.x, inst.y, GapConfig(Fraction(theta), seed=run_seed))
    limit = GAP_FACTOR * Fraction(theta) * n
    return {"trial": t, "n": n, "theta": str(Fraction(theta)), "edits": k,
            "upper_bound": rep.upper_bound, "limit": int(limit),
            "failed": rep.upper_bound > limit, "dp_cells": rep.counters.dp_cells,
            "n_boxes": rep.n_boxes, "wall_time": rep.wall_time}


def _map(fn, items: list, workers: int | None):
    workers = workers or default_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def default_workers() -> int:
    """Worker count from ``EDX_THREADS`` (default 1)."""
    raw = os.environ.get("EDX_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"EDX_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"EDX_THREADS must be a positive integer, got {raw!r}")
    return value


def gap_contract_trial(n: int, theta, trials: int, seed: int = 0,
                       alphabet_size: int = DEFAULT_ALPHABET, records: list | None = None,
                       workers: int | None = None) -> int:
    """Count runs on planted ``theta n / 2``-edit pairs whose bound exceeds ``840 theta n``.

    Per-trial records are appended to ``records`` when a list is given.
    """
    rows = _map(_run_trial, [(n, Fraction(theta), seed, t, alphabet_size)
                             for t in range(trials)], workers)
    if records is not None:
        records.extend(rows)
    return sum(r["failed"] for r in rows)


@dataclass
class ScalingReport:
    theta: Fraction
    points: list[tuple[int, int, float]] = field(default_factory=list)
    fitted_exponent: float = float("nan")

    def to_records(self) -> list[dict]:
        out = [{"n": n, "dp_cells": c, "wall_time": t} for n, c, t in self.points]
        out.append({"theta": str(self.theta), "fitted_exponent": self.fitted_exponent})
        return out


def fit_exponent(ns: Iterable[int], values: Iterable[float]) -> float:
    """Least-squares slope of ``log(values)`` against ``log(ns)``."""
    slope, _ = np.polyfit(np.log(np.asarray(list(ns), float)),
                          np.log(np.asarray(list(values), float)), 1)
    return float(slope)


def _run_point(args) -> tuple[int, int, float]:
    n, theta, seed, alphabet_size = args
    inst_seed, run_seed = _trial_seed(seed, n)
    inst = gen_planted(n, int(Fraction(theta) * n / 2), alphabet_size, inst_seed)
    start = time.perf_counter()
    rep = gap_ub(inst.x, inst.y, GapConfig(Fraction(theta), seed=run_seed))
    return n, rep.counters.dp_cells, time.perf_counter() - start


def run_scaling_experiment(ns: list[int], theta, seed: int = 0,
                           alphabet_size: int = DEFAULT_ALPHABET,
                           workers: int | None = None) -> ScalingReport:
    """Run the gap algorithm on planted pairs of growing length and fit the cell-count exponent.

    Every instance carries ``theta n / 2`` edits so that the banded exact
    shortcut never applies.
    """
    ns = sorted(ns)
    if len(ns) < 4:
        raise ValueError("need at least 4 lengths to fit an exponent")
    for n in ns:
        if not is_power_of_two(n) or n < 2 ** 12:
            raise ValueError(f"lengths must be powers of two >= 4096, got {n}")
    points = _map(_run_point, [(n, Fraction(theta), seed, alphabet_size) for n in ns], workers)
    points.sort()
    return ScalingReport(Fraction(theta), points,
                         fit_exponent([p[0] for p in points], [p[1] for p in points]))


def emit_jsonl(records: Iterable[dict], path: str | None = None) -> None:
    """Write one JSON object per line to ``path`` (or standard output)."""
    fh = open(path, "w") if path else sys.stdout
    try:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if path:
            fh.close()
