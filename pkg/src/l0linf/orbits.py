"""Orbit membership diagnostics and K-functional orbit norms.

``orbit_necessary_check`` tests the dilation-domination condition that every
image under a pair-bounded homomorphism of norm c must satisfy.
``pointwise_constant`` finds the least C >= 1 with mu(t; X) <= C*mu(t/C; A)
everywhere, and ``korbit_norm`` computes the exact supremum of the
K-functional ratio from the piecewise-affine curve envelopes.  The
``counterexample`` constructor produces, from two trace-commensurable
projections, a pair whose K-curves coincide while the singular value
functions separate, so the K-orbit unit ball strictly contains the orbit
unit ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .kcalc import k_at, k_curve, log_grid
from .matmodel import as_singular, diag
from .report import CheckItem, CheckReport, fmt
from .stepfn import INF

BISECT_CAP = 1e12
BISECT_ITERS = 200
DIM_CAP = 512


def orbit_necessary_check(candidate, source, c: float, tol: float = 1e-9) -> CheckReport:
    """Check mu(t; candidate) <= c * mu(t/c; source) at all profile breakpoints.

    Failure certifies that the candidate lies outside the orbit ball of
    radius c around the source.
    """
    if not c > 0.0:
        raise ValueError("c must be positive")
    my = as_singular(candidate)
    mx = as_singular(source)
    grid = [0.0, *sorted({*my.breakpoints, *(c * b for b in mx.breakpoints)})]
    worst = math.inf
    worst_t = 0.0
    for t in grid:
        margin = c * mx.at(t / c) - my.at(t)
        if margin < worst:
            worst, worst_t = margin, t
    scale = max(1.0, my.at(0.0), c * mx.at(0.0))
    item = CheckItem(
        f"domination at radius {c:g}",
        worst >= -tol * scale,
        f"worst margin {fmt(worst)} at t={fmt(worst_t)}",
    )
    return CheckReport("orbit membership necessary condition", (item,))


def _dominated_at(mx, ma, c: float) -> bool:
    grid = [0.0, *sorted({*mx.breakpoints, *(c * b for b in ma.breakpoints)})]
    return all(mx.at(t) <= c * ma.at(t / c) for t in grid)


def pointwise_constant(x, a):
    """Least C >= 1 with mu(t; x) <= C*mu(t/C; a) for all t, or None.

    C*mu(t/C; a) is nondecreasing in C, so feasibility is monotone and
    bisection converges; the returned value is feasible and within relative
    1e-9 of the infimum.  None when no C <= 1e12 works.
    """
    mx = as_singular(x)
    ma = as_singular(a)
    if mx.is_zero():
        return 1.0
    if ma.is_zero():
        return None
    if _dominated_at(mx, ma, 1.0):
        return 1.0
    hi = 2.0
    while not _dominated_at(mx, ma, hi):
        hi *= 2.0
        if hi > BISECT_CAP:
            return None
    lo = hi / 2.0
    for _ in range(BISECT_ITERS):
        if hi - lo <= 1e-9 * hi:
            break
        mid = 0.5 * (lo + hi)
        if _dominated_at(mx, ma, mid):
            hi = mid
        else:
            lo = mid
    return hi


def korbit_norm(x, a) -> float:
    """Exact supremum over u > 0 of K_u(mu(x)) / K_u(mu(a)).

    Both K-curves are concave piecewise-affine envelopes; on every segment
    between their combined knots the ratio is a Moebius function of u, hence
    monotone, so the supremum lives at a knot or at one of the two limits
    (u -> 0+ compares the leading slopes, u -> infinity the plateaus or
    tails).  Returns +inf when a limit diverges.
    """
    mx = as_singular(x)
    ma = as_singular(a)
    if ma.is_zero():
        raise ValueError("the reference element must be nonzero")
    if mx.is_zero():
        return 0.0
    cx = k_curve(mx)
    ca = k_curve(ma)
    best = 0.0
    for u in sorted({*cx.knots, *ca.knots}):
        best = max(best, cx.at(u) / ca.at(u))
    # u -> 0+: K behaves like u times the leading value
    best = max(best, mx.at(0.0) / ma.at(0.0))
    # u -> infinity: plateau (support measure) or linear growth (tail)
    if ma.tail > 0.0:
        limit = mx.tail / ma.tail if mx.tail > 0.0 else 0.0
    elif mx.tail > 0.0:
        limit = INF
    else:
        limit = mx.support_measure() / ma.support_measure()
    return max(best, limit)


# -- the unit-ball separation example ---------------------------------------


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(str(v))
    raise TypeError(f"cannot interpret {type(v).__name__} as an exact rational")


def _fraction_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(
        math.gcd(a.numerator * b.denominator, b.numerator * a.denominator),
        a.denominator * b.denominator,
    )


@dataclass(frozen=True)
class CounterexampleSpec:
    """Two orthogonal projections with trace values tau1, tau2 and levels k1, k2.

    Requires k1 > k2 > tau2*k1/(tau1+tau2); tau1 and tau2 must be
    commensurable rationals so that a common trace weight exists (an explicit
    weight may be supplied and must divide both).
    """

    tau1: Fraction
    tau2: Fraction
    k1: float
    k2: float
    weight: Fraction | None = None

    def __post_init__(self):
        t1 = _as_fraction(self.tau1)
        t2 = _as_fraction(self.tau2)
        object.__setattr__(self, "tau1", t1)
        object.__setattr__(self, "tau2", t2)
        object.__setattr__(self, "k1", float(self.k1))
        object.__setattr__(self, "k2", float(self.k2))
        if not (t1 > 0 and t2 > 0):
            raise ValueError("trace values must be positive")
        if not (self.k1 > 0.0 and self.k2 > 0.0):
            raise ValueError("levels must be positive")
        lower = float(t2) * self.k1 / float(t1 + t2)
        if not (self.k1 > self.k2 > lower):
            raise ValueError(
                f"levels must satisfy k1 > k2 > tau2*k1/(tau1+tau2) = {lower:g}"
            )
        w = self.weight
        if w is not None:
            w = _as_fraction(w)
            if w <= 0 or (t1 / w).denominator != 1 or (t2 / w).denominator != 1:
                raise ValueError("weight must be positive and divide both trace values")
            object.__setattr__(self, "weight", w)

    def realisation(self) -> tuple[Fraction, int, int]:
        """(trace weight, multiplicity of the k1 block, multiplicity of the k2 block)."""
        w = self.weight if self.weight is not None else _fraction_gcd(self.tau1, self.tau2)
        n1 = int(self.tau1 / w)
        n2 = int(self.tau2 / w)
        if n1 + n2 > DIM_CAP:
            raise ValueError(
                f"realisation needs dimension {n1 + n2} > {DIM_CAP}; "
                "choose a coarser weight or simpler trace values"
            )
        return w, n1, n2


def counterexample(spec: CounterexampleSpec, grid_points: int = 100):
    """Matrix pair whose K-curves coincide while the profiles separate.

    Returns (A, X, report).  A carries the two levels k1, k2 on orthogonal
    projections; X carries k1 on their sum.  The report certifies that both
    K-curves equal min(u*k1, tau1+tau2) on a log grid and at the envelope
    knots, that the profiles separate on [tau1, tau1+tau2), that the radius-1
    orbit condition fails, and that the K-orbit norm is exactly one.
    """
    w, n1, n2 = spec.realisation()
    wf = float(w)
    k1, k2 = spec.k1, spec.k2
    t1 = float(spec.tau1)
    t12 = float(spec.tau1 + spec.tau2)
    a = diag([k1] * n1 + [k2] * n2, wf)
    x = diag([k1] * (n1 + n2), wf)
    mua = as_singular(a)
    mux = as_singular(x)

    cx = k_curve(mux)
    ca = k_curve(mua)
    us = sorted(set(log_grid(1e-3, 1e3, grid_points)) | set(cx.knots) | set(ca.knots))
    worst_gap = 0.0
    worst_form = 0.0
    for u in us:
        kx = k_at(mux, u)
        kav = k_at(mua, u)
        worst_gap = max(worst_gap, abs(kx - kav))
        closed_x = min(u * k1, t12)
        closed_a = min(u * k1, t1 + u * k2, t12)
        worst_form = max(worst_form, abs(kx - closed_x), abs(kav - closed_a))
    scale = max(1.0, t12)
    coincide = CheckItem(
        "K-curves coincide and match the closed forms",
        worst_gap <= 1e-12 * scale and worst_form <= 1e-12 * scale,
        f"sup |K(A)-K(X)| = {fmt(worst_gap)}, closed-form gap {fmt(worst_form)}",
    )

    # anchor the separation window at the computed profile breakpoints: the
    # level drop sits at the accumulated float position, not at float(tau1)
    lo, hi = mua.breakpoints[0], mua.breakpoints[1]
    mids = [lo + (hi - lo) * frac for frac in (0.0, 0.25, 0.5, 0.75, 0.999)]
    sep = min(mux.at(t) - mua.at(t) for t in mids)
    separation = CheckItem(
        "profiles separate on [tau1, tau1+tau2)",
        sep > 0.0,
        f"mu(X) - mu(A) >= {fmt(sep)} there",
    )

    onc = orbit_necessary_check(x, a, 1.0)
    outside = CheckItem(
        "radius-1 orbit condition fails",
        not onc.ok,
        onc.items[0].detail,
    )

    ko = korbit_norm(x, a)
    inside = CheckItem(
        "K-orbit norm is one",
        abs(ko - 1.0) <= 1e-12,
        f"korbit_norm = {fmt(ko)}",
    )

    report = CheckReport(
        "K-orbit vs orbit unit-ball separation",
        (coincide, separation, outside, inside),
    )
    return a, x, report
