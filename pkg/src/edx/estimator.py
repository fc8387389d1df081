"""Upper bounds on edit distance: the gap algorithm and the theta sweep."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (CertificationError, Counters, EstimateReport, NormalizedPair, OutOfRange,
                   TokenString, as_tokens, is_power_of_two, log2_exact, normalize_pair)
from .covering import audit_boxes, covering_algorithm, select_params, theta_exponent
from .exact_dp import bounded_edit_distance, edit_distance_full
from .shortcut_graph import boxes_to_shortcuts, min_cost_path

#: Inputs of at most this length are answered exactly by the full DP.
SMALL_N_CUTOFF = 2 ** 10
GAP_FACTOR = 840


def round_theta(theta) -> Fraction:
    """Round a value in ``(0, 1]`` down to a power of two."""
    t = Fraction(theta)
    if not 0 < t <= 1:
        raise OutOfRange(f"theta must lie in (0, 1], got {theta}")
    k = 0
    while Fraction(1, 2 ** k) > t:
        k += 1
    return Fraction(1, 2 ** k)


@dataclass(frozen=True)
class GapConfig:
    """Settings for one gap run. ``theta`` must be an exact power of two.

    ``audit_sample > 0`` checks that many uniformly drawn boxes against the
    exact oracle and raises :class:`~edx.core.CertificationError` on failure.
    """

    theta: Fraction
    c0: int = 12
    c1: int = 128
    seed: int = 0
    audit_sample: int = 0

    def __post_init__(self):
        object.__setattr__(self, "theta", Fraction(self.theta))
        theta_exponent(self.theta)


def _check_pair(x: TokenString, y: TokenString) -> int:
    if x.n != y.n or not is_power_of_two(x.n):
        raise ValueError("gap_ub expects a normalized pair (equal power-of-two lengths)")
    return x.n


def gap_ub(x: TokenString, y: TokenString, cfg: GapConfig, boxes_out: list | None = None
           ) -> EstimateReport:
    """Certified upper bound ``u >= d(x, y)``; ``u <= 840 theta n`` w.h.p. when ``d <= theta n``.

    Raises :class:`~edx.core.OutOfRange` if ``theta < n**(-1/5)``.  Passing a
    list as ``boxes_out`` appends the covering output to it.
    """
    n = _check_pair(x, y)
    start = time.perf_counter()
    params = select_params(n, cfg.theta, c0=cfg.c0, c1=cfg.c1, seed=cfg.seed)
    counters = Counters()
    boxes = covering_algorithm(x, y, params, counters)
    if boxes_out is not None:
        boxes_out.append(boxes)
    if cfg.audit_sample:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed & (2 ** 64 - 1), 0xA0D17]))
        bad = audit_boxes(x, y, boxes.sample(cfg.audit_sample, rng))
        if bad:
            raise CertificationError(f"{len(bad)} sampled boxes failed the audit, first {bad[0]}")
    u = min_cost_path(boxes_to_shortcuts(boxes, n))
    return EstimateReport(n=n, theta=params.theta, upper_bound=u, counters=counters,
                          wall_time=time.perf_counter() - start, seed=cfg.seed, method="gap",
                          n_boxes=len(boxes))


def sweep_seed(seed: int, j: int) -> int:
    return int(np.random.SeedSequence([seed & (2 ** 64 - 1), j]).generate_state(1, np.uint64)[0])


def theta_schedule(n: int) -> list[Fraction]:
    """``theta_j = 2**-j`` for ``j = 0 .. floor(log2(n) / 5)``."""
    return [Fraction(1, 2 ** j) for j in range(log2_exact(n) // 5 + 1)]


def exact_band_cap(n: int) -> int:
    """Smallest integer ``k`` with ``k >= n**(4/5)``."""
    k = max(0, math.floor(n ** 0.8) - 2)
    while k ** 5 < n ** 4:
        k += 1
    return k


def ed_ub(x, y, seed: int = 0, c0: int = 12, c1: int = 128) -> EstimateReport:
    """Upper bound on ``d(x, y)`` within a constant factor with high probability.

    Accepts raw inputs (str, bytes, token sequences) or a normalized pair.
    Short inputs are solved by the full DP; otherwise a banded exact solve
    capped at ``n**(4/5)`` is tried first, and if the distance exceeds the
    cap the gap algorithm is run for every scheduled ``theta`` and the
    smallest bound is returned.
    """
    start = time.perf_counter()
    if isinstance(x, TokenString) and isinstance(y, TokenString) and x.n == y.n \
            and is_power_of_two(x.n):
        xs, ys = x, y
    else:
        pair: NormalizedPair = normalize_pair(x, y, _alphabet_for(x, y))
        xs, ys = pair.x, pair.y
    n = xs.n
    # the exact routes see the unpadded strings; padding only feeds the gap runs
    raw_x, raw_y = as_tokens(x), as_tokens(y)
    counters = Counters()
    if n <= SMALL_N_CUTOFF:
        u = edit_distance_full(raw_x, raw_y)
        counters.dp_cells += raw_x.size * raw_y.size
        return EstimateReport(n=n, theta=None, upper_bound=u, counters=counters,
                              wall_time=time.perf_counter() - start, seed=seed,
                              method="exact-full")
    exact = bounded_edit_distance(raw_x, raw_y, exact_band_cap(n), counters)
    if exact is not None:
        return EstimateReport(n=n, theta=None, upper_bound=exact, counters=counters,
                              wall_time=time.perf_counter() - start, seed=seed,
                              method="exact-banded")
    best = None
    n_boxes = 0
    for j, theta in enumerate(theta_schedule(n)):
        rep = gap_ub(xs, ys, GapConfig(theta, c0=c0, c1=c1, seed=sweep_seed(seed, j)))
        counters.merge(rep.counters)
        n_boxes += rep.n_boxes
        if best is None or rep.upper_bound < best.upper_bound:
            best = rep
    return EstimateReport(n=n, theta=best.theta, upper_bound=best.upper_bound,
                          counters=counters, wall_time=time.perf_counter() - start, seed=seed,
                          method="gap-sweep", n_boxes=n_boxes)


def _alphabet_for(x, y) -> int:
    if isinstance(x, TokenString):
        return x.sentinel
    if isinstance(x, (str,)) or isinstance(y, (str,)):
        top = max((ord(c) for s in (x, y) for c in s), default=0)
        return max(256, top + 1)
    if isinstance(x, (bytes, bytearray)) and isinstance(y, (bytes, bytearray)):
        return 256
    top = max((int(np.max(np.asarray(s))) for s in (x, y) if len(s)), default=0)
    return max(256, top + 1)
