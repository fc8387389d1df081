"""Covering phase: certified boxes near the main diagonal.

The grid strip of half-width ``theta * n`` around the diagonal is split into
overlapping windows.  In each window, for ``eps = 2**-i`` with ``i`` running
down from ``ceil(log2(1/theta))`` to 0, dense-strip removal certifies many
``w1``-boxes at once through a pivot, and the strips it declares sparse are
handled by sampling a few of them and extending their good matches
diagonally to ``w2``-boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .core import (BoxSpec, CertifiedBox, Counters, CoverParams, Interval, OutOfRange,
                   ParamInfeasible, TokenString, aligned_starts, is_power_of_two, log2_exact)
from .exact_dp import batch_small_ed

SOURCE_DENSE = "D"
SOURCE_EXTENSION = "E"
_ROLE_IDS = {"dsr": 0, "sses": 1}


def theta_exponent(theta) -> int:
    """Return ``t`` with ``theta == 2**-t``; reject anything else."""
    t = Fraction(theta)
    if t <= 0 or t > 1 or t.numerator != 1 or not is_power_of_two(t.denominator):
        raise OutOfRange(f"theta={theta} is not a power of two in (0, 1]")
    return log2_exact(t.denominator)


def select_params(n: int, theta, c0: int = 12, c1: int = 128, seed: int = 0) -> CoverParams:
    """Largest powers of two ``w1, w2, d`` meeting the runtime-balancing bounds.

    ``w1 <= theta**(-2/7) n**(1/7)``, ``w2 <= theta**(1/7) n**(3/7)`` and
    ``d <= theta**(3/7) n**(2/7)``, evaluated exactly on base-2 exponents.

    >>> p = select_params(2**20, Fraction(1, 4))
    >>> p.w1, p.w2, p.d
    (8, 256, 16)
    """
    L = log2_exact(n)
    t = theta_exponent(theta)
    if 5 * t > L:
        raise OutOfRange(f"theta=2^-{t} < n^(-1/5) for n=2^{L}; use the exact bounded solver")
    a1 = math.floor((2 * t + L) / 7)
    a2 = math.floor((3 * L - t) / 7)
    ad = math.floor((2 * L - 3 * t) / 7)
    if min(a1, a2, ad) < 0:
        raise ParamInfeasible(f"no positive power of two fits the bounds for n=2^{L}, theta=2^-{t}")
    params = CoverParams(n=n, theta=Fraction(1, 2 ** t), w1=2 ** a1, w2=2 ** a2, d=2 ** ad,
                         c0=c0, c1=c1, seed=seed)
    bad = params.violations()
    if bad:
        raise ParamInfeasible(f"n=2^{L}, theta=2^-{t}, w1={params.w1}, w2={params.w2}, "
                              f"d={params.d}: " + "; ".join(bad))
    return params


@dataclass(frozen=True)
class Window:
    """One diagonal window ``I = J = [k m, (k + 8) m]`` clipped to ``[0, n]``."""

    index: int
    I: Interval
    J: Interval


def windows(n: int, theta) -> list[Window]:
    t = theta_exponent(theta)
    m = n >> (t + 2)
    if m == 0:
        raise ParamInfeasible(f"theta*n/4 < 1 for n={n}, theta={theta}")
    out = []
    for k in range(4 * 2 ** t + 1):
        lo = min(k * m, n)
        hi = min((k + 8) * m, n)
        out.append(Window(k, Interval(lo, hi, "x"), Interval(lo, hi, "y")))
    return out


def iteration_levels(theta) -> list[int]:
    """Values of ``i`` (with ``eps = 2**-i``) in the order they are run."""
    t = theta_exponent(theta)
    return list(range(t, -1, -1))


@dataclass
class SparseSet:
    """Lower endpoints of the ``w``-intervals one DSR call declared sparse."""

    w: int
    members: list[int] = field(default_factory=list)

    def intervals(self) -> list[Interval]:
        return [Interval(lo, lo + self.w) for lo in self.members]

    def __len__(self):
        return len(self.members)

    def __bool__(self):
        return bool(self.members)


@dataclass(frozen=True)
class ProductBlock:
    """All boxes ``I' x J'`` for ``I'`` in ``x_los`` and ``J'`` in ``y_los``, bound ``5 eps``."""

    x_los: np.ndarray
    y_los: np.ndarray
    w: int
    kappa_num: int
    kappa_den: int
    pivot_lo: int
    window: int
    level: int

    def __len__(self):
        return int(self.x_los.size * self.y_los.size)


_BOX_DTYPE = np.dtype([("I_lo", np.int64), ("I_hi", np.int64), ("J_lo", np.int64),
                       ("J_hi", np.int64), ("kappa_num", np.int64), ("kappa_den", np.int64),
                       ("window", np.int64), ("level", np.int64)])


class BoxSet:
    """The certified-box collection produced by :func:`covering_algorithm`.

    Dense-strip boxes are held as product blocks (one per pivot); extension
    boxes are held as rows of a structured array with exact duplicates removed.
    Iterating yields :class:`~edx.core.CertifiedBox` values.
    """

    def __init__(self, blocks: list[ProductBlock] | None = None,
                 extensions: np.ndarray | None = None):
        self.blocks = list(blocks or [])
        if extensions is None:
            extensions = np.empty(0, dtype=_BOX_DTYPE)
        self.extensions = extensions

    @property
    def n_dense(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def n_extension(self) -> int:
        return int(self.extensions.size)

    def __len__(self):
        return self.n_dense + self.n_extension

    def __iter__(self) -> Iterator[CertifiedBox]:
        for rec in self.iter_records():
            yield _record_box(rec)

    def iter_records(self) -> Iterator[tuple]:
        """Yield ``(I.lo, I.hi, J.lo, J.hi, kappa_num, kappa_den, source, window, level)``."""
        for b in self.blocks:
            for xi in b.x_los.tolist():
                for yj in b.y_los.tolist():
                    yield (xi, xi + b.w, yj, yj + b.w, b.kappa_num, b.kappa_den,
                           SOURCE_DENSE, b.window, b.level)
        for r in self.extensions.tolist():
            yield (r[0], r[1], r[2], r[3], r[4], r[5], SOURCE_EXTENSION, r[6], r[7])

    def record(self, index: int) -> tuple:
        """The ``index``-th record in iteration order, without materializing the rest."""
        if index < 0 or index >= len(self):
            raise IndexError(index)
        for b in self.blocks:
            size = len(b)
            if index < size:
                xi = int(b.x_los[index // b.y_los.size])
                yj = int(b.y_los[index % b.y_los.size])
                return (xi, xi + b.w, yj, yj + b.w, b.kappa_num, b.kappa_den,
                        SOURCE_DENSE, b.window, b.level)
            index -= size
        r = self.extensions[index].tolist()
        return (r[0], r[1], r[2], r[3], r[4], r[5], SOURCE_EXTENSION, r[6], r[7])

    def sample(self, count: int, rng: np.random.Generator) -> list[CertifiedBox]:
        """Draw ``count`` boxes uniformly (with replacement) from the collection."""
        total = len(self)
        if total == 0:
            return []
        idx = rng.integers(0, total, size=count)
        return [_record_box(self.record(int(i))) for i in idx]

    def shortcut_arrays(self):
        """Columns ``(I_lo, I_hi, J_lo, J_hi, kappa_num, kappa_den)`` of boxes with kappa < 1/2."""
        cols = [[] for _ in range(6)]
        for b in self.blocks:
            if 2 * b.kappa_num >= b.kappa_den or not len(b):
                continue
            xi = np.repeat(b.x_los, b.y_los.size)
            yj = np.tile(b.y_los, b.x_los.size)
            for c, v in zip(cols, (xi, xi + b.w, yj, yj + b.w,
                                   np.full(xi.size, b.kappa_num), np.full(xi.size, b.kappa_den))):
                c.append(v.astype(np.int64))
        e = self.extensions
        keep = 2 * e["kappa_num"] < e["kappa_den"]
        for c, name in zip(cols, ("I_lo", "I_hi", "J_lo", "J_hi", "kappa_num", "kappa_den")):
            c.append(e[name][keep])
        return tuple(np.concatenate(c) if c else np.empty(0, np.int64) for c in cols)

    def dump(self, fh) -> int:
        """Write one line per box: ``I.lo I.hi J.lo J.hi kappa_num kappa_den source window iter``."""
        count = 0
        for rec in self.iter_records():
            fh.write(" ".join(str(v) for v in rec) + "\n")
            count += 1
        return count


def _record_box(rec) -> CertifiedBox:
    return CertifiedBox(BoxSpec(Interval(rec[0], rec[1], "x"), Interval(rec[2], rec[3], "y")),
                        int(rec[4]), int(rec[5]))


def diagonal_extension(inner: BoxSpec, outerI: Interval, outerJ: Interval) -> BoxSpec:
    """Extend a square box along its main diagonal to x-interval ``outerI``.

    The extension is shifted vertically by the least amount that keeps it
    inside ``outerJ``.

    >>> diagonal_extension(BoxSpec(Interval(4, 6), Interval(5, 7, "y")),
    ...                    Interval(0, 8), Interval(0, 16, "y"))
    [0,8]x[1,9]
    """
    if not inner.is_square:
        raise ValueError("inner box must be square")
    if not (outerI.contains(inner.I) and outerJ.contains(inner.J)):
        raise ValueError("inner box must lie inside the outer strip")
    w = outerI.width
    if outerJ.width < w:
        raise ValueError(f"outer y-interval of width {outerJ.width} cannot hold width {w}")
    lo = _extension_lo(inner.J.lo, inner.I.lo, outerI.lo, outerJ.lo, outerJ.hi, w)
    return BoxSpec(outerI, Interval(int(lo), int(lo) + w, "y"))


def _extension_lo(j_lo, i_lo, outer_i_lo, outer_j_lo, outer_j_hi, w):
    lo = j_lo - (i_lo - outer_i_lo)
    return np.minimum(np.maximum(lo, outer_j_lo), outer_j_hi - w)


def _rng(params: CoverParams, window: int, level: int, role: str) -> np.random.Generator:
    ss = np.random.SeedSequence([params.seed & (2 ** 64 - 1), window, level, _ROLE_IDS[role]])
    return np.random.Generator(np.random.PCG64(ss))


def dsr(x: TokenString, y: TokenString, win: Window, w: int, d: int, delta, eps,
        rng: np.random.Generator, counters: Counters, c0: int = 12,
        level: int = 0) -> tuple[SparseSet, list[ProductBlock]]:
    """Dense-strip removal on one window.

    Strips are visited in increasing order of ``lo``.  A strip whose sampled
    match count is at most ``(c0 / 2) log n`` is declared sparse; otherwise it
    becomes a pivot and certifies ``X x Y`` at bound ``5 eps``, where ``Y``
    holds candidates within ``3 eps`` of it and ``X`` the remaining strips
    within ``2 eps`` of it.

    ``d`` is the local density threshold (the caller passes ``d / eps``).
    When the sample count is at least ``|B|`` every candidate is tested once
    and the number of sampled successes is drawn from the matching binomial
    law, which has the same distribution as testing each draw.
    """
    eps = Fraction(eps)
    log_n = log2_exact(x.n)
    xs, ys = x.tokens, y.tokens
    t_los = np.arange(win.I.lo, win.I.hi - w + 1, w, dtype=np.int64) if win.I.width >= w else \
        np.empty(0, dtype=np.int64)
    b_los = aligned_starts(win.J.lo, win.J.hi, w, Fraction(delta))
    n_b = int(b_los.size)
    n_samples = -(-c0 * n_b * log_n // d) if n_b else 0
    b1 = math.floor(eps * w)
    b2 = math.floor(2 * eps * w)
    b3 = math.floor(3 * eps * w)
    alive = np.ones(t_los.size, dtype=bool)
    sparse = SparseSet(w)
    blocks: list[ProductBlock] = []
    kappa = 5 * eps
    for idx in range(t_los.size):
        if not alive[idx]:
            continue
        i_lo = int(t_los[idx])
        counters.samples_drawn += n_samples
        if n_b == 0:
            successes = 0
        elif b1 >= w:
            successes = n_samples
        elif n_samples >= n_b:
            dist = batch_small_ed(xs, i_lo, ys, b_los, w, b1, counters)
            hits = int(np.count_nonzero(dist <= b1))
            successes = int(rng.binomial(n_samples, hits / n_b))
        else:
            draws = rng.integers(0, n_b, size=n_samples)
            uniq, cnt = np.unique(draws, return_counts=True)
            dist = batch_small_ed(xs, i_lo, ys, b_los[uniq], w, b1, counters)
            successes = int(cnt[dist <= b1].sum())
        if 2 * successes <= c0 * log_n:
            sparse.members.append(i_lo)
            alive[idx] = False
            continue
        counters.pivots_processed += 1
        if b3 >= w:
            y_sel = b_los
        else:
            y_sel = b_los[batch_small_ed(xs, i_lo, ys, b_los, w, b3, counters) <= b3]
        cand = np.flatnonzero(alive)
        if b2 >= w:
            x_idx = cand
        else:
            x_idx = cand[batch_small_ed(xs, i_lo, xs, t_los[cand], w, b2, counters) <= b2]
        alive[x_idx] = False
        block = ProductBlock(t_los[x_idx].copy(), y_sel.copy(), w, kappa.numerator,
                             kappa.denominator, i_lo, win.index, level)
        counters.boxes_emitted += len(block)
        if len(block):
            blocks.append(block)
    return sparse, blocks


def sses(x: TokenString, y: TokenString, win: Window, S: SparseSet, w1: int, w2: int, d: int,
         delta, eps, theta, rng: np.random.Generator, counters: Counters, c1: int = 128,
         level: int = 0) -> np.ndarray:
    """Sparse-strip extension sampling on one window.

    For each ``w2``-strip ``I'`` holding sparse members, ``c1 log^2 n``
    members are drawn with replacement.  Each drawn strip's matches within
    ``eps`` are extended diagonally to ``I'``; an extension whose distance
    ``p`` is within ``3 eps`` is emitted with bounds ``p/w2 + theta + 2**-k``
    for ``k = 0..log n``.  A strip drawn several times contributes the same
    boxes, so each distinct draw is evaluated once.  ``d`` is unused by the
    procedure body and kept for signature parity with :func:`dsr`.
    """
    eps = Fraction(eps)
    theta = Fraction(theta)
    n = x.n
    log_n = log2_exact(n)
    xs, ys = x.tokens, y.tokens
    members = np.asarray(sorted(S.members), dtype=np.int64)
    if members.size == 0 or win.I.width < w2:
        return np.empty(0, dtype=_BOX_DTYPE)
    b_los = aligned_starts(win.J.lo, win.J.hi, w1, Fraction(delta))
    b1 = math.floor(eps * w1)
    b3 = math.floor(3 * eps * w2)
    n_draws = c1 * log_n * log_n
    den = w2 * n
    theta_part = int(theta * n) * w2
    ks = np.arange(log_n + 1, dtype=np.int64)
    tail = theta_part + (n >> ks) * w2
    rows = []
    for outer_lo in range(win.I.lo, win.I.hi - w2 + 1, w2):
        inside = members[(members >= outer_lo) & (members + w1 <= outer_lo + w2)]
        if inside.size == 0:
            continue
        counters.samples_drawn += n_draws
        counts = rng.multinomial(n_draws, np.full(inside.size, 1.0 / inside.size))
        ext_los = []
        for i_lo in inside[counts > 0].tolist():
            dist = batch_small_ed(xs, i_lo, ys, b_los, w1, b1, counters)
            good = b_los[dist <= b1]
            if good.size:
                ext_los.append(_extension_lo(good, i_lo, outer_lo, win.J.lo, win.J.hi, w2))
        if not ext_los:
            continue
        ext = np.unique(np.concatenate(ext_los))
        counters.extensions_tested += int(ext.size)
        p = batch_small_ed(xs, outer_lo, ys, ext, w2, b3, counters)
        ok = p <= b3
        for j_lo, p_abs in zip(ext[ok].tolist(), p[ok].tolist()):
            block = np.empty(ks.size, dtype=_BOX_DTYPE)
            block["I_lo"] = outer_lo
            block["I_hi"] = outer_lo + w2
            block["J_lo"] = j_lo
            block["J_hi"] = j_lo + w2
            block["kappa_num"] = p_abs * n + tail
            block["kappa_den"] = den
            block["window"] = win.index
            block["level"] = level
            rows.append(block)
    if not rows:
        return np.empty(0, dtype=_BOX_DTYPE)
    out = np.concatenate(rows)
    counters.boxes_emitted += int(out.size)
    return out


def covering_algorithm(x: TokenString, y: TokenString, params: CoverParams,
                       counters: Counters | None = None) -> BoxSet:
    """Run dense-strip removal and extension sampling over every window and level."""
    params.validate()
    if x.n != params.n or y.n != params.n:
        raise ValueError(f"strings must have length n={params.n}")
    if counters is None:
        counters = Counters()
    theta = params.theta
    blocks: list[ProductBlock] = []
    ext_parts: list[np.ndarray] = []
    for win in windows(params.n, theta):
        if win.I.width == 0:
            continue
        for i in iteration_levels(theta):
            eps = Fraction(1, 2 ** i)
            d_local = params.d * 2 ** i
            delta = eps / 8
            S, r1 = dsr(x, y, win, params.w1, d_local, delta, eps, _rng(params, win.index, i, "dsr"),
                        counters, c0=params.c0, level=i)
            blocks.extend(r1)
            if S:
                ext_parts.append(sses(x, y, win, S, params.w1, params.w2, d_local, delta, eps,
                                      theta, _rng(params, win.index, i, "sses"), counters,
                                      c1=params.c1, level=i))
    ext = np.concatenate(ext_parts) if ext_parts else np.empty(0, dtype=_BOX_DTYPE)
    if ext.size:
        key = np.stack([ext[f] for f in ("I_lo", "I_hi", "J_lo", "J_hi", "kappa_num",
                                         "kappa_den")], axis=1)
        _, first = np.unique(key, axis=0, return_index=True)
        ext = ext[np.sort(first)]
    return BoxSet(blocks, ext)


def audit_boxes(x: TokenString, y: TokenString, boxes: Iterable[CertifiedBox]):
    """Return the boxes whose bound is below the exact distance of their substrings."""
    from .exact_dp import edit_distance_full

    bad = []
    for box in boxes:
        d = edit_distance_full(x.substring(box.box.I), y.substring(box.box.J))
        if d * box.kappa_den > box.kappa_num * box.box.I.width:
            bad.append((box, d))
    return bad
