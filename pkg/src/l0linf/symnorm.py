"""Rearrangement-invariant functionals with declared quasi-triangle constants.

A ``DeltaNorm`` packages an evaluation map on singular functions together
with a declared triangle constant; the constant is never inferred from the
evaluation map.  Built-ins: the Lp scales (the p-th power integral for
p < 1, the usual norm for p >= 1), the operator norm, the support measure,
their maximum, and the unit K-functional.  The support measure and the
finite-rank maximum are group norms: their value ignores nonzero scaling,
so continuity of scalar multiplication is not claimed for them and the
axiom check records that axiom as not applicable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

from .kcalc import k_at
from .matmodel import as_singular
from .report import CheckItem, CheckReport, fmt
from .stepfn import SingularFunction, approx, pointwise_le, singular_indicator

SLACK = 1e-12


class NormDomainError(ValueError):
    """Evaluation requested outside the domain of the functional."""


@dataclass(frozen=True)
class DeltaNorm:
    name: str
    triangle_constant: float
    fn: Callable[[SingularFunction], float]
    scalar_continuous: bool = True

    def __post_init__(self):
        # constants below one are constructible on purpose: the axioms check
        # is the mechanism that exposes a wrongly declared constant
        if not (self.triangle_constant > 0.0 and math.isfinite(self.triangle_constant)):
            raise ValueError("triangle constant must be positive and finite")

    def __call__(self, mu: SingularFunction) -> float:
        return self.fn(mu)


def e_eval(norm: DeltaNorm, x) -> float:
    """Evaluate the functional on the rearrangement of a matrix or function."""
    return norm(as_singular(x))


def _require_finite_support(mu: SingularFunction, name: str):
    if not approx(mu.tail, 0.0):
        raise NormDomainError(f"{name} is undefined for inputs with a nonzero tail")


def lp_norm(p: float) -> DeltaNorm:
    if not (p > 0.0 and math.isfinite(p)):
        raise ValueError("p must be positive and finite")
    name = f"Lp:{p:g}"

    def ev(mu: SingularFunction) -> float:
        _require_finite_support(mu, name)
        total = sum((b - a) * v**p for a, b, v in mu.intervals())
        return total if p < 1.0 else total ** (1.0 / p)

    return DeltaNorm(name, 1.0, ev)


def l0_norm() -> DeltaNorm:
    def ev(mu: SingularFunction) -> float:
        _require_finite_support(mu, "L0")
        return mu.norms()[0]

    return DeltaNorm("L0", 1.0, ev, scalar_continuous=False)


def linf_norm() -> DeltaNorm:
    return DeltaNorm("Linf", 1.0, lambda mu: mu.norms()[1])


def f_norm() -> DeltaNorm:
    def ev(mu: SingularFunction) -> float:
        _require_finite_support(mu, "F")
        l0, linf = mu.norms()
        return max(l0, linf)

    return DeltaNorm("F", 1.0, ev, scalar_continuous=False)


def s_norm() -> DeltaNorm:
    return DeltaNorm("S", 1.0, lambda mu: k_at(mu, 1.0) if not mu.is_zero() else 0.0)


_FIXED = {
    "L0": l0_norm,
    "Linf": linf_norm,
    "F": f_norm,
    "S": s_norm,
    "L1": lambda: lp_norm(1.0),
}


def get_norm(key: str) -> DeltaNorm:
    """Look up a built-in by key: 'L0', 'Linf', 'F', 'S', 'L1' or 'Lp:<p>'."""
    if key in _FIXED:
        return _FIXED[key]()
    m = re.fullmatch(r"Lp:([0-9.eE+-]+)", key)
    if m:
        return lp_norm(float(m.group(1)))
    raise ValueError(f"unknown norm key {key!r}")


def builtin_norms() -> tuple[DeltaNorm, ...]:
    return (
        l0_norm(),
        linf_norm(),
        f_norm(),
        s_norm(),
        lp_norm(0.5),
        lp_norm(1.0),
        lp_norm(2.0),
    )


def delta_axioms_check(norm: DeltaNorm, samples) -> CheckReport:
    """Check the four delta-norm axioms on the given samples.

    Needs at least two samples.  Axiom three (vanishing under scaling) is
    evaluated on the grid alpha = 2^-j, j <= 40, and requires the value to
    drop below 1e-6 of its starting point; for declared group norms it is
    recorded as not applicable.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("need at least two samples")

    zero = SingularFunction((), (), 0.0)
    worst_pos = None
    definite_ok = norm(zero) == 0.0
    for i, x in enumerate(samples):
        v = norm(x)
        if v < 0.0 or (not x.is_zero() and v <= 0.0):
            definite_ok = False
            worst_pos = (i, v)
    item1 = CheckItem(
        "definiteness",
        definite_ok,
        "" if worst_pos is None else f"sample {worst_pos[0]} -> {fmt(worst_pos[1])}",
    )

    worst2 = math.inf
    witness2 = ""
    ok2 = True
    for i, x in enumerate(samples):
        base = norm(x)
        for alpha in (1.0, 0.9, 0.5, 0.25, 0.1, 0.01, 0.0):
            scaled = norm(x.scale(alpha))
            margin = base - scaled
            if margin < worst2:
                worst2, witness2 = margin, f"sample {i}, alpha={alpha:g}"
            if scaled > base * (1.0 + SLACK) + SLACK:
                ok2 = False
    item2 = CheckItem(
        "contractive scaling",
        ok2,
        f"worst margin {fmt(worst2)} ({witness2})" if witness2 else "",
    )

    if not norm.scalar_continuous:
        item3 = CheckItem(
            "vanishing under scaling",
            True,
            "not applicable (group norm)",
        )
    else:
        ok3 = True
        deepest = 0
        witness3 = ""
        for i, x in enumerate(samples):
            base = norm(x)
            if base == 0.0:
                continue
            reached = None
            for j in range(1, 41):
                if norm(x.scale(2.0**-j)) <= 1e-6 * base:
                    reached = j
                    break
            if reached is None:
                ok3 = False
                witness3 = f"sample {i} never fell below 1e-6 of its start"
                break
            deepest = max(deepest, reached)
        item3 = CheckItem(
            "vanishing under scaling",
            ok3,
            witness3 if witness3 else f"deepest grid level needed: {deepest}",
        )

    c = norm.triangle_constant
    half = len(samples) // 2
    pairs = list(zip(samples, samples[1:]))
    pairs += [(samples[i], samples[-1 - i]) for i in range(half)]
    ok4 = True
    worst_ratio = 0.0
    witness4 = ""
    for idx, (x, y) in enumerate(pairs):
        lhs = e_eval(norm, x + y)
        rhs = c * (norm(x) + norm(y))
        if rhs > 0.0:
            ratio = lhs / rhs
            if ratio > worst_ratio:
                worst_ratio, witness4 = ratio, f"pair {idx}"
        if lhs > rhs * (1.0 + SLACK) + SLACK:
            ok4 = False
    item4 = CheckItem(
        "quasi-triangle with declared constant",
        ok4,
        f"worst lhs/rhs {fmt(worst_ratio)} ({witness4})" if witness4 else "",
    )

    return CheckReport(f"delta-norm axioms for {norm.name}", (item1, item2, item3, item4))


def embedding_check(norm: DeltaNorm, x) -> CheckReport:
    """Certify the finite-rank unit-ball embedding bound for the functional.

    With eps = max(support measure, sup) <= 1, the rearrangement is dominated
    by the block eps on (0, eps), hence by the block eps on (0, 1), and the
    functional values must follow that chain.
    """
    mu = as_singular(x)
    if not approx(mu.tail, 0.0):
        raise NormDomainError("input must have finite support")
    l0, linf = mu.norms()
    eps = max(l0, linf)
    if eps > 1.0 + SLACK:
        raise ValueError("input must lie in the finite-rank unit ball")
    cap_eps = singular_indicator(eps, eps)
    cap_one = singular_indicator(eps, 1.0)
    dominated = pointwise_le(mu, cap_eps)
    v = norm(mu)
    v_eps = norm(cap_eps)
    v_one = norm(cap_one)
    items = (
        CheckItem(
            "rearrangement under the eps block",
            dominated,
            f"eps={fmt(eps)}",
        ),
        CheckItem(
            "value under the eps block",
            v <= v_eps * (1.0 + SLACK) + SLACK,
            f"{fmt(v)} <= {fmt(v_eps)}",
        ),
        CheckItem(
            "eps block under the unit block",
            v_eps <= v_one * (1.0 + SLACK) + SLACK,
            f"{fmt(v_eps)} <= {fmt(v_one)}",
        ),
    )
    return CheckReport(f"embedding bound for {norm.name}", items)


def dilation_check(norm: DeltaNorm, mu: SingularFunction, k: int) -> CheckReport:
    """Certify the dyadic dilation bound with the declared triangle constant."""
    if k < 0 or k != int(k):
        raise ValueError("k must be a nonnegative integer")
    lhs = norm(mu.dilate(2.0**k))
    rhs = (2.0 * norm.triangle_constant) ** k * norm(mu)
    item = CheckItem(
        f"dilation by 2^{k}",
        lhs <= rhs * (1.0 + SLACK) + SLACK,
        f"{fmt(lhs)} <= {fmt(rhs)}",
    )
    return CheckReport(f"dilation bound for {norm.name}", (item,))
