"""Bounded time scales as ordered unions of closed points and intervals.

A scale is a finite union of disjoint closed segments on a bounded window.
That covers every scale used in practice (real intervals, h*Z windows,
q-geometric point sets and hybrids) while keeping the jump operators exact
O(log n) lookups.  Membership tests snap to segment endpoints within an
absolute tolerance ``EPS_MEMBER`` so that computed floats do not spuriously
fall off the scale.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field, replace

from .errors import (
    BadParam,
    BudgetTooSmall,
    DegenerateScale,
    EmptyScale,
    NotInScale,
    SpecError,
)

EPS_MEMBER = 1e-12

# point classification constants
SCATTERED = "scattered"
DENSE = "dense"
MAX = "max"
MIN = "min"


@dataclass(frozen=True)
class Segment:
    """A closed segment of the real line: an isolated point or an interval."""

    kind: str  # "point" | "interval"
    a: float
    b: float

    def __post_init__(self):
        if self.kind == "point":
            if self.a != self.b:
                raise BadParam("point segment must have a == b")
        elif self.kind == "interval":
            if not self.b > self.a:
                raise BadParam(f"interval needs b > a, got [{self.a}, {self.b}]")
        else:
            raise BadParam(f"unknown segment kind {self.kind!r}")

    @property
    def is_point(self) -> bool:
        return self.kind == "point"


def point(at: float) -> Segment:
    return Segment("point", float(at), float(at))


def interval(a: float, b: float) -> Segment:
    return Segment("interval", float(a), float(b))


@dataclass(frozen=True)
class PointClass:
    """Classification of a scale point by its right and left neighbourhoods."""

    right: str  # scattered | dense | max
    left: str  # scattered | dense | min


@dataclass(frozen=True)
class TimeScale:
    """Canonical ordered union of disjoint closed segments."""

    segments: tuple[Segment, ...]
    label: str = field(default="", compare=False)
    _starts: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _derived: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not self.segments:
            raise EmptyScale("time scale needs at least one segment")
        for s, nxt in zip(self.segments, self.segments[1:]):
            if not s.b < nxt.a:
                raise BadParam("segments must be disjoint and strictly increasing")
        object.__setattr__(self, "_starts", tuple(s.a for s in self.segments))

    # -- basic geometry ----------------------------------------------------

    @property
    def min(self) -> float:
        return self.segments[0].a

    @property
    def max(self) -> float:
        return self.segments[-1].b

    @property
    def is_discrete(self) -> bool:
        return all(s.is_point for s in self.segments)

    def locate(self, t: float):
        """Return ``(segment_index, snapped_t)`` or ``None`` if t is outside.

        Snapping moves t onto a segment endpoint when it lies within
        ``EPS_MEMBER``; interior interval points pass through unchanged.
        """
        i = bisect_right(self._starts, t) - 1
        for j in (i, i + 1):
            if 0 <= j < len(self.segments):
                s = self.segments[j]
                if s.a - EPS_MEMBER <= t <= s.b + EPS_MEMBER:
                    if abs(t - s.a) <= EPS_MEMBER:
                        return j, s.a
                    if abs(t - s.b) <= EPS_MEMBER:
                        return j, s.b
                    return j, t
        return None

    def contains(self, t: float) -> bool:
        return self.locate(t) is not None

    def require(self, t: float) -> float:
        loc = self.locate(t)
        if loc is None:
            raise NotInScale(f"t={t!r} is not in the scale {self.describe()}")
        return loc[1]

    # -- jump operators ------------------------------------------------------

    def sigma(self, t: float) -> float:
        """Forward jump: inf of scale points strictly above t (t at the max)."""
        idx, ts = self._located(t)
        seg = self.segments[idx]
        if not seg.is_point and ts < seg.b:
            return ts
        if idx + 1 < len(self.segments):
            return self.segments[idx + 1].a
        return ts

    def rho(self, t: float) -> float:
        """Backward jump: sup of scale points strictly below t (t at the min)."""
        idx, ts = self._located(t)
        seg = self.segments[idx]
        if not seg.is_point and ts > seg.a:
            return ts
        if idx > 0:
            return self.segments[idx - 1].b
        return ts

    def mu(self, t: float) -> float:
        """Graininess sigma(t) - t; zero exactly at right-dense points and max."""
        idx, ts = self._located(t)
        return self.sigma(ts) - ts

    def classify(self, t: float) -> PointClass:
        ts = self.require(t)
        if ts == self.max:
            right = MAX
        else:
            right = SCATTERED if self.sigma(ts) > ts else DENSE
        if ts == self.min:
            left = MIN
        else:
            left = SCATTERED if self.rho(ts) < ts else DENSE
        return PointClass(right, left)

    def _located(self, t: float):
        loc = self.locate(t)
        if loc is None:
            raise NotInScale(f"t={t!r} is not in the scale {self.describe()}")
        return loc

    # -- misc ----------------------------------------------------------------

    def describe(self) -> str:
        if self.label:
            return self.label
        parts = []
        for s in self.segments:
            parts.append(f"{{{s.a:g}}}" if s.is_point else f"[{s.a:g},{s.b:g}]")
        return "u".join(parts)

    def with_label(self, label: str) -> "TimeScale":
        return replace(self, label=label)


def build_timescale(segments, label: str = "") -> TimeScale:
    """Canonicalise a segment list: sort, merge overlaps and touching pieces.

    A point on the boundary of an interval is absorbed by it; touching
    intervals fuse, so the result is a genuinely disjoint closed union.
    Idempotent: rebuilding from a canonical scale returns an equal scale.
    """
    segs = list(segments)
    if not segs:
        raise EmptyScale("cannot build a time scale from no segments")
    segs.sort(key=lambda s: (s.a, s.b))
    merged: list[list[float]] = []
    for s in segs:
        if merged and s.a <= merged[-1][1] + EPS_MEMBER:
            merged[-1][1] = max(merged[-1][1], s.b)
        else:
            merged.append([s.a, s.b])
    canon = tuple(
        point(lo) if hi - lo <= EPS_MEMBER else interval(lo, hi) for lo, hi in merged
    )
    return TimeScale(canon, label=label)


def kappa_restrict(T: TimeScale, order: int) -> TimeScale:
    """Drop a left-scattered maximum, ``order`` in {1, 2} times.

    A singleton scale has no left-scattered maximum (sup-of-empty-set
    convention), so it is returned unchanged.  Results are memoised on the
    scale; this sits on several hot paths.
    """
    if order not in (1, 2):
        raise BadParam("kappa order must be 1 or 2")
    cached = T._derived.get(order)
    if cached is not None:
        return cached
    segs = T.segments
    for _ in range(order):
        last = segs[-1]
        if last.is_point and len(segs) > 1:
            segs = segs[:-1]
        if not segs:
            raise DegenerateScale("kappa restriction emptied the scale")
    out = T if segs is T.segments else TimeScale(segs, label=T.label)
    T._derived[order] = out
    return out


def sample_grid(T: TimeScale, max_points: int) -> list[float]:
    """All isolated points plus an even fill of the intervals, sorted.

    Endpoints of every segment are included, so the budget must cover every
    isolated point and two points per interval.  Leftover budget goes to
    interval interiors proportionally to their length.
    """
    isolated = [s.a for s in T.segments if s.is_point]
    intervals = [s for s in T.segments if not s.is_point]
    need = len(isolated) + 2 * len(intervals)
    if max_points < need:
        raise BudgetTooSmall(
            f"budget {max_points} below the {need} mandatory grid points"
        )
    pts = list(isolated)
    if intervals:
        leftover = max_points - need
        lengths = [s.b - s.a for s in intervals]
        total = sum(lengths)
        quota = [leftover * L / total for L in lengths]
        extra = [int(q) for q in quota]
        for _ in range(leftover - sum(extra)):
            # largest fractional remainder first
            i = max(range(len(intervals)), key=lambda k: quota[k] - extra[k])
            extra[i] += 1
            quota[i] = extra[i]
        for s, k in zip(intervals, extra):
            n = 2 + k
            step = (s.b - s.a) / (n - 1)
            pts.extend(s.a + j * step for j in range(n - 1))
            pts.append(s.b)
    pts.sort()
    return pts


# -- JSON scale specs --------------------------------------------------------


def _expand_spec_entry(entry) -> list[Segment]:
    if not isinstance(entry, dict) or "type" not in entry:
        raise SpecError(f"segment entry must be an object with a type: {entry!r}")
    kind = entry["type"]
    try:
        if kind == "point":
            return [point(float(entry["at"]))]
        if kind == "interval":
            return [interval(float(entry["a"]), float(entry["b"]))]
        if kind == "uniform":
            start = float(entry["start"])
            stop = float(entry["stop"])
            step = float(entry["step"])
            if step <= 0 or stop < start:
                raise SpecError("uniform spec needs step > 0 and stop >= start")
            n = int(math.floor((stop - start) / step + 1e-9))
            return [point(start + i * step) for i in range(n + 1)]
        if kind == "qscale":
            q = float(entry["q"])
            n = int(entry["n"])
            t0 = float(entry["t0"])
            if q <= 0 or q == 1.0 or t0 == 0.0 or n < 0:
                raise SpecError("qscale spec needs q > 0, q != 1, t0 != 0, n >= 0")
            return [point(t0 * q**i) for i in range(n + 1)]
    except KeyError as exc:
        raise SpecError(f"missing field {exc} in segment spec {entry!r}") from exc
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad value in segment spec {entry!r}: {exc}") from exc
    raise SpecError(f"unknown segment type {kind!r}")


def scale_from_spec(spec) -> TimeScale:
    """Build a scale from its JSON object form.

    Accepts ``{"segments": [...]}`` with point/interval entries and the
    ``uniform``/``qscale`` builder shorthands, either inside the segment list
    or as the top-level object itself.
    """
    if not isinstance(spec, dict):
        raise SpecError("scale spec must be a JSON object")
    if "segments" in spec:
        entries = spec["segments"]
        if not isinstance(entries, list) or not entries:
            raise SpecError("scale spec needs a nonempty 'segments' array")
    elif "type" in spec:
        entries = [spec]
    else:
        raise SpecError("scale spec needs 'segments' or a builder 'type'")
    segs: list[Segment] = []
    for entry in entries:
        segs.extend(_expand_spec_entry(entry))
    try:
        return build_timescale(segs, label=str(spec.get("label", "")))
    except BadParam as exc:
        raise SpecError(str(exc)) from exc


def scale_to_spec(T: TimeScale) -> dict:
    segs = []
    for s in T.segments:
        if s.is_point:
            segs.append({"type": "point", "at": s.a})
        else:
            segs.append({"type": "interval", "a": s.a, "b": s.b})
    out: dict = {"segments": segs}
    if T.label:
        out["label"] = T.label
    return out
