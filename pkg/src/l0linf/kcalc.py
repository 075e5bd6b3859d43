"""Exact K- and M-functionals for the (finite-support, bounded) couple.

For a nonincreasing right-continuous step function mu, the functional
K_u = inf_{t>0} [t + u*mu(t)] is attained on a finite candidate set: the left
endpoint of each interval (including the t -> 0+ limit, which contributes
u*mu(0+)) plus the beyond-support point (which contributes the support
measure when the tail vanishes).  The dual form inf_{s>0} [s*u + d(s)] over
the value levels of mu is computed independently; the two must agree to
1e-12, which is asserted on every evaluation.

M_t = inf_s max{s, t*mu(s)} is handled the same way: on each interval the
maximum of the two monotone branches is minimised either at the crossing
s = t*mu(s) or at the left endpoint, so per-interval closed forms decide the
infimum exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .stepfn import INF, SingularFunction, StepFunction

AGREE_TOL = 1e-12
DECOMP_TOL = 1e-9


def candidate_points(mu: SingularFunction) -> list[tuple[float, float]]:
    """Candidate pairs (t_j, mu(t_j)) whose affine envelope equals u -> K_u."""
    cands = []
    prev = 0.0
    for b, v in zip(mu.breakpoints, mu.values):
        cands.append((prev, v))
        prev = b
    cands.append((prev, mu.tail))
    return cands


def k_at_via_distribution(mu: SingularFunction, u: float) -> float:
    """K_u as inf over levels s of [s*u + measure{mu > s}]."""
    if not u > 0.0:
        raise ValueError("u must be positive")
    best = INF
    for s in {0.0, mu.tail, *mu.values}:
        d = mu.dist(s)
        if d == INF:
            continue
        best = min(best, u * s + d)
    return best


def k_at(mu: SingularFunction, u: float) -> float:
    """Exact K-functional value at u > 0."""
    if not u > 0.0:
        raise ValueError("u must be positive")
    primal = min(t + u * v for t, v in candidate_points(mu))
    dual = k_at_via_distribution(mu, u)
    if abs(primal - dual) > AGREE_TOL * max(1.0, abs(primal), abs(dual)):
        raise ArithmeticError(
            f"candidate and distribution forms disagree: {primal!r} vs {dual!r}"
        )
    return primal


def m_at(mu: SingularFunction, t: float) -> float:
    """Exact value of inf_s max{s, t*mu(s)} at t > 0.

    On [s_{i-1}, s_i) with constant value v the infimum of max{s, t*v} equals
    max(s_{i-1}, t*v): the crossing point when it lies inside the interval,
    an endpoint otherwise.
    """
    if not t > 0.0:
        raise ValueError("t must be positive")
    best = INF
    prev = 0.0
    for b, v in zip(mu.breakpoints, mu.values):
        best = min(best, max(prev, t * v))
        prev = b
    return min(best, max(prev, t * mu.tail))


@dataclass(frozen=True)
class KCurve:
    """Piecewise-affine representation of u -> K_u.

    ``candidates`` are all (intercept t_j, slope mu_j) pairs; ``pieces`` is
    the pruned lower envelope with strictly decreasing slopes, active in
    order as u grows, and ``knots`` the u values where the active piece
    changes (len(knots) == len(pieces) - 1).
    """

    candidates: tuple[tuple[float, float], ...]
    pieces: tuple[tuple[float, float], ...]
    knots: tuple[float, ...]

    def at(self, u: float) -> float:
        if not u > 0.0:
            raise ValueError("u must be positive")
        return min(t + m * u for t, m in self.candidates)


def k_curve(mu: SingularFunction) -> KCurve:
    """Build the exact envelope of u -> K_u with explicit piece boundaries."""
    cands = candidate_points(mu)
    by_slope: dict[float, float] = {}
    for t, m in cands:
        by_slope[m] = min(by_slope.get(m, INF), t)
    # Slope-descending scan; a steeper line whose intercept is not smaller
    # than a flatter one is never the minimum for u > 0.
    lines: list[tuple[float, float]] = []  # (slope, intercept)
    for m in sorted(by_slope, reverse=True):
        c = by_slope[m]
        while lines and lines[-1][1] >= c:
            lines.pop()
        lines.append((m, c))
    env = [lines[0]]
    knots: list[float] = []
    for m, c in lines[1:]:
        while True:
            m0, c0 = env[-1]
            cross = (c - c0) / (m0 - m)
            if knots and cross <= knots[-1]:
                env.pop()
                knots.pop()
            else:
                break
        env.append((m, c))
        knots.append(cross)
    pieces = tuple((c, m) for m, c in env)
    return KCurve(tuple(cands), pieces, tuple(knots))


def optimal_decomposition(obj, u: float):
    """Optimal splitting g + h of the input with cost |g|_0 + u*|h|_inf = K_u.

    Step-function inputs are cut at the optimal level: g keeps the input
    where |f| exceeds the level, h keeps the rest.  Matrix inputs delegate to
    the spectral-cut search and return matrix witnesses.
    """
    if not u > 0.0:
        raise ValueError("u must be positive")
    from .matmodel import TraceMatrix, k_direct

    if isinstance(obj, TraceMatrix):
        value, (g, h) = k_direct(obj, u)
        return g, h, value

    f: StepFunction = obj
    best_cost = INF
    best_level = 0.0
    for s in {0.0, abs(f.tail), *(abs(v) for v in f.values)}:
        d = f.dist(s)
        if d == INF:
            continue
        cost = u * s + d
        if cost < best_cost:
            best_cost, best_level = cost, s
    g = StepFunction(
        f.breakpoints,
        tuple(v if abs(v) > best_level else 0.0 for v in f.values),
        f.tail if abs(f.tail) > best_level else 0.0,
    )
    h = f - g
    value = g.norms()[0] + u * h.norms()[1]
    if abs(value - best_cost) > DECOMP_TOL * max(1.0, best_cost):
        raise ArithmeticError(
            f"decomposition cost {value!r} misses the functional value {best_cost!r}"
        )
    return g, h, value


# -- curve emission ----------------------------------------------------------


def format_sig(x: float) -> str:
    """17-significant-digit decimal rendering used for all emitted numbers."""
    return format(float(x), ".17g")


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    """Log-spaced grid with n >= 2 points from lo to hi."""
    if not (lo > 0.0 and hi > lo):
        raise ValueError("need 0 < lo < hi")
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    ratio = hi / lo
    return [lo * ratio ** (i / (n - 1)) for i in range(n)]


def curve_csv(pairs, header: tuple[str, str]) -> str:
    """Two-column CSV with deterministic float rendering."""
    lines = [",".join(header)]
    lines.extend(f"{format_sig(x)},{format_sig(y)}" for x, y in pairs)
    return "\n".join(lines) + "\n"


def k_curve_csv(mu: SingularFunction, us) -> str:
    return curve_csv(((u, k_at(mu, u)) for u in us), ("u", "K_u"))


def m_curve_csv(mu: SingularFunction, ts) -> str:
    return curve_csv(((t, m_at(mu, t)) for t in ts), ("t", "M_t"))
