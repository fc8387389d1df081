"""Grid geometry, string normalization and shared records.

Coordinates follow the grid-graph convention: an interval ``[lo, hi]`` of
grid points indexes the substring ``x[lo:hi]`` (the token at grid point
``lo`` itself is excluded), so its width is ``hi - lo``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np


class EdxError(Exception):
    """Base class for errors raised by this package."""


class AlphabetError(EdxError, ValueError):
    """Input tokens collide with the padding sentinel or are not integral."""


class OutOfRange(EdxError, ValueError):
    """A gap parameter lies outside the range the algorithm supports."""


class CertificationError(EdxError):
    """An emitted box failed the exact-distance audit (a soundness bug)."""


class ParamInfeasible(EdxError, ValueError):
    """Derived covering parameters violate their divisibility/size constraints."""


def is_power_of_two(v: int) -> bool:
    return v > 0 and (v & (v - 1)) == 0


def next_power_of_two(v: int) -> int:
    return 1 if v <= 1 else 1 << (v - 1).bit_length()


def log2_exact(v: int) -> int:
    if not is_power_of_two(v):
        raise ValueError(f"{v} is not a power of two")
    return v.bit_length() - 1


@dataclass(frozen=True, eq=False)
class TokenString:
    """An immutable token sequence.

    ``tokens`` is a read-only ``int32`` array.  ``sentinel`` is the padding
    token; it is never produced from user input.
    """

    tokens: np.ndarray
    sentinel: int = 256

    def __post_init__(self):
        arr = np.ascontiguousarray(self.tokens, dtype=np.int32)
        arr.setflags(write=False)
        object.__setattr__(self, "tokens", arr)

    @property
    def n(self) -> int:
        return int(self.tokens.shape[0])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, TokenString):
            return NotImplemented
        return self.sentinel == other.sentinel and np.array_equal(self.tokens, other.tokens)

    def __hash__(self):
        return hash((self.sentinel, self.tokens.tobytes()))

    def __getitem__(self, item):
        return self.tokens[item]

    def substring(self, interval: "Interval") -> np.ndarray:
        return self.tokens[interval.lo:interval.hi]


def as_tokens(seq, sentinel: int | None = None) -> np.ndarray:
    """Convert str/bytes/sequence/array input into an ``int32`` token array."""
    if isinstance(seq, TokenString):
        return seq.tokens
    if isinstance(seq, (bytes, bytearray, memoryview)):
        arr = np.frombuffer(bytes(seq), dtype=np.uint8).astype(np.int32)
    elif isinstance(seq, str):
        arr = np.fromiter((ord(c) for c in seq), dtype=np.int32, count=len(seq))
    else:
        arr = np.asarray(seq)
        if arr.size == 0:
            arr = arr.astype(np.int32)
        if arr.dtype.kind not in "iu":
            raise AlphabetError(f"tokens must be integers, got dtype {arr.dtype}")
        arr = arr.astype(np.int32, copy=False)
    if arr.ndim != 1:
        raise AlphabetError("token input must be one-dimensional")
    if sentinel is not None and arr.size and (arr == sentinel).any():
        raise AlphabetError(f"input contains the reserved sentinel token {sentinel}")
    if arr.size and arr.min() < 0:
        raise AlphabetError("tokens must be non-negative")
    return arr


@dataclass(frozen=True)
class NormalizedPair:
    x: TokenString
    y: TokenString
    original_lengths: tuple[int, int]

    @property
    def n(self) -> int:
        return self.x.n

    @property
    def padded(self) -> bool:
        return self.original_lengths != (self.n, self.n)

    @property
    def note(self) -> str:
        lx, ly = self.original_lengths
        if lx == ly == self.n:
            return "no padding"
        if lx == ly:
            return f"equal-tail padding {lx}->{self.n} (distance unchanged)"
        return (f"unequal lengths {lx}/{ly} padded to {self.n} "
                "(distance preserved up to a factor 2)")

    def __iter__(self) -> Iterator:
        yield self.x
        yield self.y
        yield self.note


def normalize_pair(x, y, alphabet_size: int = 256) -> NormalizedPair:
    """Pad ``x`` and ``y`` with a fresh sentinel to a common power-of-two length.

    Tokens must lie in ``[0, alphabet_size)``; the sentinel is ``alphabet_size``.
    Unpacks as ``(x, y, note)``.

    >>> xs, ys, note = normalize_pair(b"abc", b"abc")
    >>> xs.n, int(xs[-1])
    (4, 256)

    An already-normalized pair of :class:`TokenString` values is returned unchanged.
    """
    if (isinstance(x, TokenString) and isinstance(y, TokenString) and x.sentinel == y.sentinel
            and x.n == y.n and is_power_of_two(x.n)):
        return NormalizedPair(x, y, (x.n, y.n))
    sentinel = alphabet_size
    ax = as_tokens(x, sentinel)
    ay = as_tokens(y, sentinel)
    for arr in (ax, ay):
        if arr.size and arr.max() >= alphabet_size:
            raise AlphabetError(
                f"token {int(arr.max())} outside alphabet [0, {alphabet_size})")
    lx, ly = int(ax.size), int(ay.size)
    if (lx == 0) != (ly == 0):
        raise ValueError("both inputs must be empty or both non-empty")
    n = next_power_of_two(max(lx, ly)) if max(lx, ly) else 0
    px = np.full(n, sentinel, dtype=np.int32)
    py = np.full(n, sentinel, dtype=np.int32)
    px[:lx] = ax
    py[:ly] = ay
    return NormalizedPair(TokenString(px, sentinel), TokenString(py, sentinel), (lx, ly))


@dataclass(frozen=True, order=True)
class Interval:
    """Grid interval ``{lo, ..., hi}`` on one axis (``axis`` is ``"x"`` or ``"y"``)."""

    lo: int
    hi: int
    axis: str = "x"

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")
        if self.axis not in ("x", "y"):
            raise ValueError(f"axis must be 'x' or 'y', got {self.axis!r}")

    @property
    def width(self) -> int:
        return self.hi - self.lo

    mu = width

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __repr__(self):
        return f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class BoxSpec:
    I: Interval
    J: Interval

    @property
    def is_square(self) -> bool:
        return self.I.width == self.J.width

    def __repr__(self):
        return f"{self.I!r}x{self.J!r}"


@dataclass(frozen=True)
class CertifiedBox:
    """A box with a normalized distance bound ``kappa_num / kappa_den``."""

    box: BoxSpec
    kappa_num: int
    kappa_den: int

    def __post_init__(self):
        if self.kappa_den <= 0 or self.kappa_num < 0:
            raise ValueError("kappa must be a non-negative rational with positive denominator")

    @property
    def kappa(self) -> Fraction:
        return Fraction(self.kappa_num, self.kappa_den)

    @property
    def absolute_bound(self) -> Fraction:
        return self.kappa * self.box.I.width


def w_decomposition(interval: Interval, w: int) -> list[Interval]:
    """Split ``interval`` into consecutive width-``w`` pieces."""
    if w <= 0 or interval.width % w:
        raise ValueError(f"width {w} does not divide interval width {interval.width}")
    return [Interval(lo, lo + w, interval.axis) for lo in range(interval.lo, interval.hi, w)]


def alignment_step(w: int, delta) -> int:
    return max(1, int(Fraction(delta) * w))


def aligned_candidates(J_G: Interval, w: int, delta) -> list[Interval]:
    """Width-``w`` subintervals of ``J_G`` whose endpoints are multiples of the step.

    The step is ``max(1, floor(delta * w))``.
    """
    return [Interval(int(lo), int(lo) + w, "y") for lo in aligned_starts(J_G.lo, J_G.hi, w, delta)]


def aligned_starts(lo: int, hi: int, w: int, delta) -> np.ndarray:
    """Lower endpoints of :func:`aligned_candidates` as an array."""
    s = alignment_step(w, delta)
    first = -(-lo // s) * s
    last = hi - w
    if last < first:
        return np.empty(0, dtype=np.int64)
    return np.arange(first, last + 1, s, dtype=np.int64)


@dataclass(frozen=True)
class CoverParams:
    n: int
    theta: Fraction
    w1: int
    w2: int
    d: int
    c0: int = 12
    c1: int = 128
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "theta", Fraction(self.theta))

    @property
    def log_n(self) -> int:
        return log2_exact(self.n)

    def violations(self) -> list[str]:
        out = []
        n, t = self.n, self.theta
        if not is_power_of_two(n):
            out.append(f"n={n} is not a power of two")
        if not (0 < t <= 1) or t.numerator != 1 or not is_power_of_two(t.denominator):
            out.append(f"theta={t} is not a non-positive integral power of 2")
        for name in ("w1", "w2", "d"):
            if not is_power_of_two(getattr(self, name)):
                out.append(f"{name}={getattr(self, name)} is not a positive power of 2")
        if out:
            return out
        if self.w2 % self.w1:
            out.append(f"w1={self.w1} does not divide w2={self.w2}")
        if n % self.w2:
            out.append(f"w2={self.w2} does not divide n={n}")
        if self.w1 > t * self.w2:
            out.append(f"w1={self.w1} > theta*w2={t * self.w2}")
        if self.w2 > t * n / 4:
            out.append(f"w2={self.w2} > theta*n/4={t * n / 4}")
        if not 1 <= self.d <= t * n / self.w1:
            out.append(f"d={self.d} outside [1, theta*n/w1={t * n / self.w1}]")
        if self.c1 < 120:
            out.append(f"c1={self.c1} < 120")
        if self.c0 <= 0:
            out.append(f"c0={self.c0} must be positive")
        return out

    def validate(self) -> "CoverParams":
        bad = self.violations()
        if bad:
            raise ParamInfeasible("; ".join(bad))
        return self

    def replace(self, **changes) -> "CoverParams":
        return dataclasses.replace(self, **changes)


COUNTER_FIELDS = ("dp_cells", "boxes_emitted", "pivots_processed", "samples_drawn",
                  "extensions_tested")


@dataclass
class Counters:
    dp_cells: int = 0
    boxes_emitted: int = 0
    pivots_processed: int = 0
    samples_drawn: int = 0
    extensions_tested: int = 0

    def merge(self, other: "Counters") -> "Counters":
        for name in COUNTER_FIELDS:
            setattr(self, name, getattr(self, name) + getattr(other, name))
        return self

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class EstimateReport:
    n: int
    theta: Fraction | None
    upper_bound: int
    counters: Counters = field(default_factory=Counters)
    wall_time: float = 0.0
    seed: int | None = None
    method: str = ""
    n_boxes: int = 0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "theta": None if self.theta is None else str(self.theta),
            "upper_bound": self.upper_bound,
            "counters": self.counters.as_dict(),
            "seed": self.seed,
            "method": self.method,
            "n_boxes": self.n_boxes,
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "EstimateReport":
        theta = data.get("theta")
        return cls(
            n=data["n"],
            theta=None if theta is None else Fraction(theta),
            upper_bound=data["upper_bound"],
            counters=Counters(**data["counters"]),
            wall_time=data.get("wall_time", 0.0),
            seed=data.get("seed"),
            method=data.get("method", ""),
            n_boxes=data.get("n_boxes", 0),
        )

