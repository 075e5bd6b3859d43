"""Sums of two-sided multiplication terms with certified pair bounds.

A homomorphism is a finite list of terms (A_i, B_i) acting as
Z -> sum_i A_i Z B_i.  The rank bound per term certifies the finite-rank
side: each A_i Z B_i has rank at most rank(Z), so the term count bounds the
support inflation.  The operator-norm side is certified additively, or by
the largest single term when the terms are tagged (and verified) to have
pairwise orthogonal left ranges and right row spaces, in which case the sum
acts blockwise.  The homomorphism itself is never materialised as an
n^2 x n^2 matrix; bounds are certified from the structure.
"""

from __future__ import annotations

import math

import numpy as np
from dataclasses import dataclass

from .matmodel import TraceMatrix, matrix_from_dict, matrix_to_dict, mu_of
from .report import CheckItem, CheckReport, fmt
from .symnorm import DeltaNorm, e_eval

ORTHO_TOL = 1e-9
SLACK = 1e-12


class OrthogonalityError(ValueError):
    """The orthogonality tag is set but the terms overlap."""


@dataclass(frozen=True, eq=False)
class PairHom:
    """Finite sum of terms Z -> A_i Z B_i on a fixed matrix model."""

    terms: tuple[tuple[TraceMatrix, TraceMatrix], ...]
    orthogonal: bool = False

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a homomorphism needs at least one term")
        a0, _ = self.terms[0]
        for a, b in self.terms:
            if a.n != a0.n or b.n != a0.n or a.weight != a0.weight or b.weight != a0.weight:
                raise ValueError("all terms must share dimension and weight")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def n(self) -> int:
        return self.terms[0][0].n

    @property
    def weight(self) -> float:
        return self.terms[0][0].weight

    def apply(self, z: TraceMatrix) -> TraceMatrix:
        if z.n != self.n or z.weight != self.weight:
            raise ValueError("operand does not match the homomorphism model")
        acc = np.zeros((self.n, self.n), dtype=np.complex128)
        for a, b in self.terms:
            if _is_zero(a) or _is_zero(b):
                continue
            acc += a.entries @ z.entries @ b.entries
        return TraceMatrix(acc, self.weight)


def _is_zero(m: TraceMatrix) -> bool:
    return not np.any(m.entries)


def _verify_orthogonal(t: PairHom, tol: float = ORTHO_TOL):
    """Left ranges and right row spaces must be pairwise orthogonal.

    Identically zero terms (a transfer with a large constant carries many)
    are orthogonal to everything and skipped.
    """
    live = [i for i, (a, b) in enumerate(t.terms) if not (_is_zero(a) and _is_zero(b))]
    for pos, i in enumerate(live):
        ai, bi = t.terms[i]
        for j in live[pos + 1 :]:
            aj, bj = t.terms[j]
            bound_a = tol * ai.opnorm() * aj.opnorm() + 1e-15
            if float(np.linalg.norm(ai.entries.conj().T @ aj.entries, 2)) > bound_a:
                raise OrthogonalityError(f"left factors {i} and {j} have overlapping ranges")
            bound_b = tol * bi.opnorm() * bj.opnorm() + 1e-15
            if float(np.linalg.norm(bi.entries @ bj.entries.conj().T, 2)) > bound_b:
                raise OrthogonalityError(f"right factors {i} and {j} have overlapping row spaces")


def certified_bounds(t: PairHom) -> tuple[float, float]:
    """(finite-rank bound, operator-norm bound) valid for every operand.

    The rank bound is the term count.  The norm bound is the sum of the term
    norms, or their maximum once the orthogonality tag has been verified.
    """
    m0 = float(len(t.terms))
    prods = [
        0.0 if _is_zero(a) or _is_zero(b) else a.opnorm() * b.opnorm()
        for a, b in t.terms
    ]
    if t.orthogonal:
        _verify_orthogonal(t)
        m1 = max(prods)
    else:
        m1 = float(sum(prods))
    return m0, m1


def interpolation_check(t: PairHom, x: TraceMatrix, tol: float = 1e-9) -> CheckReport:
    """Certify mu(M0*s; TX) <= M1*mu(s; X) on the union breakpoint grid."""
    tx = t.apply(x)
    mt = mu_of(tx)
    mx = mu_of(x)
    m0, m1 = certified_bounds(t)
    grid = sorted({0.0} | {b / m0 for b in mt.breakpoints} | set(mx.breakpoints))
    worst = math.inf
    worst_t = 0.0
    for s in grid:
        margin = m1 * mx.at(s) - mt.at(m0 * s)
        if margin < worst:
            worst, worst_t = margin, s
    scale = max(1.0, m1 * mx.at(0.0))
    item = CheckItem(
        "singular value interpolation bound",
        worst >= -tol * scale,
        f"worst margin {fmt(worst)} at t={fmt(worst_t)} (M0={fmt(m0)}, M1={fmt(m1)})",
    )
    return CheckReport("interpolation inequality", (item,))


def enorm_bound_check(t: PairHom, x: TraceMatrix, norm: DeltaNorm, tol: float = SLACK) -> CheckReport:
    """Certify the functional bound transported through the pair bounds.

    With k minimal such that 2^k covers the rank bound, the value on TX is
    dominated by (2C)^k * sum_{i=1..floor(M1)+1} C^i times the value on X,
    where C is the declared triangle constant.
    """
    m0, m1 = certified_bounds(t)
    k = 0
    while 2**k < m0:
        k += 1
    c = norm.triangle_constant
    factor = (2.0 * c) ** k * sum(c**i for i in range(1, int(math.floor(m1)) + 2))
    lhs = e_eval(norm, t.apply(x))
    rhs = factor * e_eval(norm, x)
    item = CheckItem(
        f"functional bound for {norm.name}",
        lhs <= rhs * (1.0 + tol) + tol,
        f"{fmt(lhs)} <= {fmt(rhs)} (k={k}, factor={fmt(factor)})",
    )
    return CheckReport("transported functional bound", (item,))


# -- serialisation -----------------------------------------------------------


def hom_to_dict(t: PairHom) -> dict:
    return {
        "terms": [{"A": matrix_to_dict(a), "B": matrix_to_dict(b)} for a, b in t.terms],
        "orthogonal": t.orthogonal,
    }


def hom_from_dict(d: dict) -> PairHom:
    if not isinstance(d, dict) or "terms" not in d:
        raise ValueError("expected an object with a 'terms' array")
    terms = []
    for i, td in enumerate(d["terms"]):
        if not isinstance(td, dict) or "A" not in td or "B" not in td:
            raise ValueError(f"term {i} must have 'A' and 'B' matrices")
        terms.append((matrix_from_dict(td["A"]), matrix_from_dict(td["B"])))
    return PairHom(tuple(terms), bool(d.get("orthogonal", False)))
