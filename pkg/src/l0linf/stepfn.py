"""Exact calculus for finitely described step functions on (0, infinity).

A function is stored as finitely many breakpoints 0 < t_1 < ... < t_m, the
value held on each interval [t_{i-1}, t_i) (with t_0 = 0), and a tail value
held on [t_m, infinity).  Evaluation is right-continuous by construction.
Every constructor normalises to a canonical form (adjacent equal values
merged, trailing run equal to the tail absorbed), so structural comparison
with a small relative tolerance is a sound notion of function equality, and
all operations here are exact interval arithmetic rather than sampling.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator

REL_TOL = 1e-12
ABS_TOL = 1e-15

INF = float("inf")


def approx(a: float, b: float) -> bool:
    """Tolerant scalar comparison used for canonical forms."""
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=ABS_TOL)


def _canonical(bps: tuple, vals: tuple, tail: float) -> tuple[tuple, tuple]:
    out_b: list[float] = []
    out_v: list[float] = []
    for b, v in zip(bps, vals):
        if out_v and approx(out_v[-1], v):
            out_b[-1] = b
        else:
            out_b.append(b)
            out_v.append(v)
    while out_v and approx(out_v[-1], tail):
        out_b.pop()
        out_v.pop()
    return tuple(out_b), tuple(out_v)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-continuous step function with finitely many pieces and a tail."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    tail: float = 0.0

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        tail = float(self.tail)
        if len(bps) != len(vals):
            raise ValueError("breakpoints and values must have equal length")
        if any(not math.isfinite(b) or b <= 0.0 for b in bps):
            raise ValueError("breakpoints must be finite and positive")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not math.isfinite(v) for v in vals) or not math.isfinite(tail):
            raise ValueError("values must be finite")
        bps, vals = _canonical(bps, vals, tail)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "tail", tail)

    # -- evaluation ------------------------------------------------------

    def at(self, t: float) -> float:
        """Right-continuous value for t >= 0; t = 0 reads the limit from the right."""
        if t < 0.0:
            raise ValueError("t must be nonnegative")
        i = bisect_right(self.breakpoints, t)
        return self.values[i] if i < len(self.values) else self.tail

    def evaluate(self, t: float) -> float:
        """Value of the interval containing t > 0 (right-continuous)."""
        if not t > 0.0:
            raise ValueError("evaluation point must be positive")
        return self.at(t)

    def intervals(self) -> Iterator[tuple[float, float, float]]:
        """Yield the finite pieces as (left, right, value)."""
        prev = 0.0
        for b, v in zip(self.breakpoints, self.values):
            yield prev, b, v
            prev = b

    # -- measure data ----------------------------------------------------

    def dist(self, s: float) -> float:
        """Lebesgue measure of {t : |f(t)| > s}; +inf when |tail| > s."""
        if s < 0.0:
            raise ValueError("level must be nonnegative")
        if abs(self.tail) > s:
            return INF
        return sum(b - a for a, b, v in self.intervals() if abs(v) > s)

    def norms(self) -> tuple[float, float]:
        """(support measure, essential sup); support is +inf for a nonzero tail."""
        if not approx(self.tail, 0.0):
            l0 = INF
        else:
            l0 = sum(b - a for a, b, v in self.intervals() if not approx(v, 0.0))
        linf = max([abs(v) for v in self.values] + [abs(self.tail)])
        return l0, linf

    def integral(self, t: float) -> float:
        """Exact running integral over (0, t]."""
        if t < 0.0:
            raise ValueError("t must be nonnegative")
        total = 0.0
        for a, b, v in self.intervals():
            if t <= a:
                return total
            total += v * (min(b, t) - a)
        last = self.breakpoints[-1] if self.breakpoints else 0.0
        if t > last:
            total += self.tail * (t - last)
        return total

    # -- transforms ------------------------------------------------------

    def dilate(self, s: float):
        """Time rescaling t -> t/s: breakpoints scaled by s, values unchanged."""
        if not (s > 0.0 and math.isfinite(s)):
            raise ValueError("dilation factor must be positive and finite")
        return type(self)(tuple(b * s for b in self.breakpoints), self.values, self.tail)

    def scale(self, c: float):
        """Pointwise multiplication by the scalar c."""
        cls = type(self)
        if isinstance(self, SingularFunction) and c < 0.0:
            cls = StepFunction
        return cls(
            self.breakpoints,
            tuple(c * v for v in self.values),
            c * self.tail,
        )

    # -- operators ---------------------------------------------------------

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return add_pointwise(self, other)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return add_pointwise(self, other.scale(-1.0))

    def __neg__(self) -> "StepFunction":
        return self.scale(-1.0)

    def __mul__(self, c: float):
        return self.scale(float(c))

    __rmul__ = __mul__

    def approx_eq(self, other: "StepFunction") -> bool:
        """Equality of canonical forms up to the module tolerance."""
        if len(self.breakpoints) != len(other.breakpoints):
            return False
        return (
            all(approx(a, b) for a, b in zip(self.breakpoints, other.breakpoints))
            and all(approx(a, b) for a, b in zip(self.values, other.values))
            and approx(self.tail, other.tail)
        )

    def is_zero(self) -> bool:
        return not self.values and approx(self.tail, 0.0)

    def __repr__(self):
        return (
            f"{type(self).__name__}(breakpoints={self.breakpoints!r}, "
            f"values={self.values!r}, tail={self.tail!r})"
        )


@dataclass(frozen=True, eq=False)
class SingularFunction(StepFunction):
    """Nonnegative nonincreasing step function (a decreasing rearrangement)."""

    def __post_init__(self):
        vals = []
        for v in self.values:
            v = float(v)
            if v < 0.0:
                if not approx(v, 0.0):
                    raise ValueError("singular values must be nonnegative")
                v = 0.0
            vals.append(v)
        tail = float(self.tail)
        if tail < 0.0:
            if not approx(tail, 0.0):
                raise ValueError("tail must be nonnegative")
            tail = 0.0
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "tail", tail)
        super().__post_init__()
        vs = self.values
        for v1, v2 in zip(vs, vs[1:]):
            if v2 > v1 and not approx(v1, v2):
                raise ValueError("values must be nonincreasing")
        if vs and self.tail > vs[-1] and not approx(self.tail, vs[-1]):
            raise ValueError("tail must not exceed the last value")

    def support_measure(self) -> float:
        """Measure of the support; requires a vanishing tail."""
        if not approx(self.tail, 0.0):
            return INF
        return self.breakpoints[-1] if self.breakpoints else 0.0


def indicator(height: float, length: float) -> StepFunction:
    """height times the indicator of (0, length)."""
    if length < 0.0:
        raise ValueError("length must be nonnegative")
    if length == 0.0 or height == 0.0:
        return StepFunction((), (), 0.0)
    return StepFunction((length,), (height,), 0.0)


def singular_indicator(height: float, length: float) -> SingularFunction:
    """Nonnegative indicator block as a singular function."""
    if height < 0.0:
        raise ValueError("height must be nonnegative")
    if length == 0.0 or height == 0.0:
        return SingularFunction((), (), 0.0)
    return SingularFunction((length,), (height,), 0.0)


def rearrange(f: StepFunction) -> SingularFunction:
    """Decreasing rearrangement of |f| (equal level-set measures).

    A nonzero tail is admitted only when its magnitude does not exceed any
    interior value; otherwise the rearrangement would push an interior level
    set past every finite breakpoint and the result has no finite description.
    """
    atail = abs(f.tail)
    pieces = [(abs(v), b - a) for a, b, v in f.intervals()]
    if pieces:
        low = min(v for v, _ in pieces)
        if atail > low and not approx(atail, low):
            raise ValueError(
                "tail magnitude exceeds an interior value; the rearrangement "
                "has no finite description"
            )
    pieces.sort(key=lambda p: -p[0])
    bps: list[float] = []
    vals: list[float] = []
    pos = 0.0
    for v, w in pieces:
        pos += w
        bps.append(pos)
        vals.append(v)
    return SingularFunction(tuple(bps), tuple(vals), atail)


def add_pointwise(f: StepFunction, g: StepFunction) -> StepFunction:
    """Pointwise sum on the refined breakpoint grid, canonicalised."""
    grid = sorted(set(f.breakpoints) | set(g.breakpoints))
    lefts = [0.0, *grid[:-1]]
    vals = tuple(f.at(p) + g.at(p) for p in lefts) if grid else ()
    return StepFunction(tuple(grid), vals, f.tail + g.tail)


def pointwise_le(f: StepFunction, g: StepFunction, tol: float = 1e-12) -> bool:
    """f <= g at every point, decided exactly on the union breakpoint grid."""
    pts = [0.0, *sorted(set(f.breakpoints) | set(g.breakpoints))]
    for t in pts:
        a, b = f.at(t), g.at(t)
        if a > b + tol * max(1.0, abs(a), abs(b)):
            return False
    return True


def submajorizes(mu_y: SingularFunction, mu_x: SingularFunction, tol: float = 1e-12) -> bool:
    """True iff every running integral of mu_x is dominated by that of mu_y.

    Both running integrals are concave and piecewise affine, so the
    inequality at the union of breakpoints together with the comparison of
    the eventual slopes (the tails) decides it everywhere.
    """
    grid = sorted(set(mu_y.breakpoints) | set(mu_x.breakpoints))
    iy = ix = 0.0
    prev = 0.0
    for b in grid:
        iy += mu_y.at(prev) * (b - prev)
        ix += mu_x.at(prev) * (b - prev)
        if ix > iy + tol * max(1.0, abs(iy)):
            return False
        prev = b
    return mu_x.tail <= mu_y.tail + tol * max(1.0, abs(mu_y.tail))


# -- serialisation ---------------------------------------------------------


def step_to_dict(f: StepFunction) -> dict:
    """Canonical JSON object for a step function."""
    return {
        "breakpoints": list(f.breakpoints),
        "values": list(f.values),
        "tail": f.tail,
    }


def step_from_dict(d: dict, singular: bool = False) -> StepFunction:
    """Parse the JSON object form; rejects unsorted breakpoints."""
    if not isinstance(d, dict):
        raise ValueError("expected a JSON object")
    try:
        bps = d["breakpoints"]
        vals = d["values"]
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r}") from None
    tail = d.get("tail", 0.0)
    if not isinstance(bps, (list, tuple)) or not isinstance(vals, (list, tuple)):
        raise ValueError("breakpoints and values must be arrays")
    cls = SingularFunction if singular else StepFunction
    return cls(tuple(float(b) for b in bps), tuple(float(v) for v in vals), float(tail))
