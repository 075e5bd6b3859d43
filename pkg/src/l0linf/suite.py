"""Deterministic verification battery aggregating every module's invariants.

Each check draws from its own seeded generator stream, so the rendered
report is byte-identical for a fixed (seed, package version, numpy
version).  The command line front end exposes this as ``verify-suite``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import __version__
from .homs import PairHom, certified_bounds, enorm_bound_check, interpolation_check
from .kcalc import k_at, k_at_via_distribution, k_curve, log_grid, m_at
from .matmodel import (
    TraceMatrix,
    allclose,
    dist_op,
    k_direct,
    mu_of,
    spectral_projection,
    trace_norms,
)
from .orbits import (
    CounterexampleSpec,
    counterexample,
    korbit_norm,
    orbit_necessary_check,
    pointwise_constant,
)
from .report import fmt
from .stepfn import (
    SingularFunction,
    StepFunction,
    add_pointwise,
    pointwise_le,
    rearrange,
    submajorizes,
)
from .symnorm import builtin_norms, delta_axioms_check, dilation_check, e_eval, embedding_check
from .transfer import build, plan, verify


# -- seeded generators -------------------------------------------------------


def _random_step(rng, max_pieces: int = 6, signed: bool = True) -> StepFunction:
    m = int(rng.integers(1, max_pieces + 1))
    widths = rng.uniform(0.1, 1.5, m)
    bps = np.cumsum(widths)
    lo = -3.0 if signed else 0.0
    vals = rng.uniform(lo, 3.0, m)
    vals[rng.random(m) < 0.15] = 0.0
    return StepFunction(tuple(map(float, bps)), tuple(map(float, vals)), 0.0)


def _random_singular(rng, max_pieces: int = 6, top: float = 3.0) -> SingularFunction:
    m = int(rng.integers(1, max_pieces + 1))
    widths = rng.uniform(0.1, 1.5, m)
    bps = np.cumsum(widths)
    vals = np.sort(rng.uniform(0.05, top, m))[::-1]
    return SingularFunction(tuple(map(float, bps)), tuple(map(float, vals)), 0.0)


def _truncated(mu: SingularFunction, keep: int) -> SingularFunction:
    keep = max(1, min(keep, len(mu.values)))
    return SingularFunction(mu.breakpoints[:keep], mu.values[:keep], 0.0)


def _random_matrix(rng, n: int | None = None, weight: float | None = None) -> TraceMatrix:
    if n is None:
        n = int(rng.integers(2, 9))
    if weight is None:
        weight = float(rng.choice([0.25, 0.5, 1.0, 2.0]))
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if rng.random() < 0.3:
        r = int(rng.integers(1, n + 1))
        u, s, vh = np.linalg.svd(z)
        z = (u[:, :r] * s[:r]) @ vh[:r, :]
    return TraceMatrix(z, weight)


def _random_unitary(rng, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_hom(rng, n: int, weight: float) -> PairHom:
    terms = []
    for _ in range(int(rng.integers(1, 4))):
        scale = float(rng.uniform(0.2, 1.5))
        a = scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
        b = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
        terms.append((TraceMatrix(a, weight), TraceMatrix(b, weight)))
    return PairHom(tuple(terms))


def _random_orthogonal_hom(rng, n: int, weight: float) -> PairHom:
    k = int(rng.integers(2, min(4, n) + 1))
    u = _random_unitary(rng, n)
    v = _random_unitary(rng, n)
    groups = np.array_split(rng.permutation(n), k)
    terms = []
    for g in groups:
        mask = np.zeros(n)
        mask[g] = 1.0
        scale = float(rng.uniform(0.3, 2.0))
        terms.append(
            (
                TraceMatrix(scale * (np.diag(mask) @ v), weight),
                TraceMatrix(u @ np.diag(mask), weight),
            )
        )
    return PairHom(tuple(terms), orthogonal=True)


def _transfer_pair(rng):
    """Random operands with a planted integer pointwise constant and margin."""
    n = int(rng.integers(4, 11))
    weight = float(rng.choice([0.5, 1.0]))
    c_true = int(rng.choice([1, 2, 3]))
    rank_a = int(rng.integers(2, n + 1))
    sig_a = np.sort(rng.uniform(0.5, 3.0, rank_a))[::-1]
    rank_x = int(rng.integers(1, min(n, c_true * rank_a) + 1))
    theta = float(rng.uniform(0.3, 0.95))
    sig_x = np.array([theta * c_true * sig_a[i // c_true] for i in range(rank_x)])
    a = TraceMatrix(
        (_random_unitary(rng, n)[:, :rank_a] * sig_a) @ _random_unitary(rng, n)[:rank_a, :],
        weight,
    )
    x = TraceMatrix(
        (_random_unitary(rng, n)[:, :rank_x] * sig_x) @ _random_unitary(rng, n)[:rank_x, :],
        weight,
    )
    return a, x


# -- step function checks -----------------------------------------------------


def _check_rearrange_distribution(rng):
    worst = 0.0
    for _ in range(60):
        f = _random_step(rng)
        mu = rearrange(f)
        levels = sorted({abs(v) for v in f.values} | {0.0})
        grid = levels + [0.5 * (a + b) for a, b in zip(levels, levels[1:])]
        grid.append((levels[-1] + 1.0) if levels else 1.0)
        for s in grid:
            worst = max(worst, abs(f.dist(s) - mu.dist(s)))
        if worst > 1e-9:
            return False, f"distribution mismatch {fmt(worst)}"
    return True, f"worst |d_f - d_mu| = {fmt(worst)}"


def _check_rearrange_inverts_distribution(rng):
    worst = 0.0
    for _ in range(60):
        f = _random_step(rng)
        mu = rearrange(f)
        levels = sorted({abs(v) for v in f.values} | {0.0})
        last = mu.breakpoints[-1] if mu.breakpoints else 1.0
        for t in np.linspace(1e-6, last * 1.2, 13):
            oracle = min((s for s in levels if f.dist(s) <= t), default=0.0)
            worst = max(worst, abs(mu.at(float(t)) - oracle))
        if worst > 1e-9:
            return False, f"level-inversion mismatch {fmt(worst)}"
    return True, f"worst |mu(t) - inf level| = {fmt(worst)}"


def _check_rearrange_idempotent(rng):
    for _ in range(60):
        mu = _random_singular(rng)
        if not rearrange(mu).approx_eq(mu):
            return False, "rearrangement moved an already sorted profile"
    return True, "60 profiles fixed"


def _check_sum_dilation_bound(rng):
    for _ in range(60):
        f, g = _random_step(rng), _random_step(rng)
        lhs = rearrange(f + g)
        rhs = add_pointwise(rearrange(f), rearrange(g)).dilate(2.0)
        if not pointwise_le(lhs, rhs):
            return False, "rearranged sum escaped the dilated bound"
    return True, "60 pairs dominated"


def _check_support_subadditive(rng):
    worst = -np.inf
    for _ in range(60):
        f, g = _random_step(rng), _random_step(rng)
        margin = f.norms()[0] + g.norms()[0] - (f + g).norms()[0]
        worst = max(worst, -margin)
        if margin < -1e-12:
            return False, f"support grew by {fmt(-margin)}"
    return True, f"worst excess {fmt(max(worst, 0.0))}"


# -- matrix model checks -------------------------------------------------------


def _profiles_match(f, g, tol: float = 1e-12) -> bool:
    # two-sided pointwise comparison: tolerant to decomposition dust that a
    # structural canonical-form comparison would count as an extra piece
    return pointwise_le(f, g, tol) and pointwise_le(g, f, tol)


def _check_unitary_invariance(rng):
    for _ in range(40):
        x = _random_matrix(rng)
        u = TraceMatrix(_random_unitary(rng, x.n), x.weight)
        v = TraceMatrix(_random_unitary(rng, x.n), x.weight)
        if not _profiles_match(mu_of(u @ x @ v), mu_of(x)):
            return False, "profile moved under unitaries"
    return True, "40 conjugations invariant"


def _check_adjoint_and_scaling(rng):
    for _ in range(40):
        x = _random_matrix(rng)
        if not _profiles_match(mu_of(x.adjoint()), mu_of(x)):
            return False, "adjoint changed the profile"
        c = complex(rng.standard_normal(), rng.standard_normal())
        if not _profiles_match(mu_of(c * x), mu_of(x).scale(abs(c))):
            return False, "scaling failed |c|-homogeneity"
    return True, "40 matrices consistent"


def _check_spectral_cut_matches_functional(rng):
    worst = 0.0
    us = log_grid(1e-3, 1e3, 20)
    for _ in range(200):
        x = _random_matrix(rng, n=int(rng.integers(2, 13)))
        mu = mu_of(x)
        for u in us:
            direct, (g, h) = k_direct(x, u)
            val = k_at(mu, u)
            rel = abs(direct - val) / max(1.0, abs(val))
            worst = max(worst, rel)
            if rel > 1e-9:
                return False, f"relative gap {fmt(rel)} at u={fmt(u)}"
            if not allclose(g + h, x, 1e-9):
                return False, "witness does not sum to the input"
    return True, f"200 matrices x 20 u-values, worst relative gap {fmt(worst)}"


def _check_projection_trace_matches_distribution(rng):
    for _ in range(40):
        x = _random_matrix(rng)
        top = trace_norms(x)[1]
        for s in [0.0, 0.25 * top, 0.5 * top, 0.9 * top, top]:
            p = spectral_projection(x, s)
            tv = p.trace_value().real
            if abs(tv - dist_op(x, s)) > 1e-9 * max(1.0, tv):
                return False, f"trace {fmt(tv)} vs distribution {fmt(dist_op(x, s))}"
    return True, "200 projections matched"


def _check_sum_submajorization(rng):
    for _ in range(40):
        x = _random_matrix(rng)
        y = _random_matrix(rng, n=x.n, weight=x.weight)
        lhs = mu_of(x + y)
        combined = add_pointwise(mu_of(x), mu_of(y))
        if not pointwise_le(lhs, combined.dilate(2.0), tol=1e-9):
            return False, "matrix sum escaped the dilated bound"
        if not submajorizes(rearrange(combined), lhs, tol=1e-9):
            return False, "matrix sum escaped submajorization by the profile sum"
    return True, "40 sums dominated pointwise after dilation and by running integrals"


# -- functional calculus checks -------------------------------------------------


def _check_functional_forms_agree(rng):
    worst = 0.0
    us = log_grid(1e-3, 1e3, 20)
    for _ in range(500):
        mu = _random_singular(rng)
        for u in us:
            a = k_at(mu, u)
            b = k_at_via_distribution(mu, u)
            gap = abs(a - b) / max(1.0, abs(a))
            worst = max(worst, gap)
            if gap > 1e-12:
                return False, f"forms differ by {fmt(gap)} at u={fmt(u)}"
    return True, f"500 profiles x 20 u-values, worst relative gap {fmt(worst)}"


def _check_unit_functional_subadditive(rng):
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(2, 8))
        w = float(rng.choice([0.5, 1.0]))
        x = _random_matrix(rng, n=n, weight=w)
        y = _random_matrix(rng, n=n, weight=w)
        lhs = k_at(mu_of(x + y), 1.0)
        rhs = k_at(mu_of(x), 1.0) + k_at(mu_of(y), 1.0)
        excess = (lhs - rhs) / max(1.0, rhs)
        worst = max(worst, excess)
        if excess > 1e-12:
            return False, f"triangle excess {fmt(excess)}"
    return True, f"500 pairs, worst relative excess {fmt(worst)}"


def _check_min_max_sandwich(rng):
    ts = log_grid(1e-3, 1e3, 20)
    for _ in range(500):
        mu = _random_singular(rng)
        for t in ts:
            m = m_at(mu, t)
            k = k_at(mu, t)
            if not (m <= k * (1 + 1e-12) + 1e-15 and k <= 2 * m * (1 + 1e-12) + 1e-15):
                return False, f"sandwich broken at t={fmt(t)}: M={fmt(m)}, K={fmt(k)}"
    witness = SingularFunction((1.0, 2.0), (2.0, 1.0), 0.0)
    k1, m1 = k_at(witness, 1.0), m_at(witness, 1.0)
    if k1 != 2.0 * m1:
        return False, f"tightness witness gave K={fmt(k1)}, M={fmt(m1)}"
    return True, f"500 profiles x 20 t-values; witness K=2M={fmt(k1)}"


def _check_unit_functional_distribution_bound(rng):
    for _ in range(200):
        mu = _random_singular(rng)
        k1 = k_at(mu, 1.0)
        levels = sorted({0.0, *mu.values})
        grid = levels + [0.5 * (a + b) for a, b in zip(levels, levels[1:])]
        for eps in grid:
            if k1 > eps + mu.dist(eps) + 1e-12:
                return False, f"bound broken at eps={fmt(eps)}"
    return True, "200 profiles bounded"


def _check_monotone_in_profile(rng):
    us = log_grid(1e-2, 1e2, 10)
    for _ in range(200):
        mu2 = _random_singular(rng)
        mu1 = _truncated(mu2.scale(float(rng.uniform(0.2, 1.0))), int(rng.integers(1, 7)))
        for u in us:
            if k_at(mu1, u) > k_at(mu2, u) * (1 + 1e-12) + 1e-15:
                return False, f"monotonicity broken at u={fmt(u)}"
    return True, "200 dominated profiles ordered"


def _check_curve_envelope(rng):
    for _ in range(200):
        mu = _random_singular(rng)
        curve = k_curve(mu)
        slopes = [m for _, m in curve.pieces]
        if any(s2 >= s1 for s1, s2 in zip(slopes, slopes[1:])):
            return False, "piece slopes not strictly decreasing"
    for _ in range(200):
        mu = _random_singular(rng)
        curve = k_curve(mu)
        for u in log_grid(1e-4, 1e4, 25) + list(curve.knots):
            if u <= 0:
                continue
            if abs(curve.at(u) - k_at(mu, u)) > 1e-12 * max(1.0, k_at(mu, u)):
                return False, f"envelope value off at u={fmt(u)}"
    return True, "400 curves consistent with pointwise evaluation"


# -- symmetric functional checks -------------------------------------------------


def _check_builtin_axioms(rng):
    samples = [_random_singular(rng) for _ in range(500)]
    for norm in builtin_norms():
        rep = delta_axioms_check(norm, samples)
        if not rep.ok:
            return False, f"{norm.name} failed: {rep.items}"
    return True, f"{len(builtin_norms())} built-ins on 500 samples"


def _check_rearrangement_invariance(rng):
    for _ in range(100):
        f = _random_step(rng)
        mu = rearrange(f)
        for norm in builtin_norms():
            if e_eval(norm, f) != e_eval(norm, mu):
                return False, f"{norm.name} saw the arrangement"
    return True, "100 functions x all built-ins"


def _check_norm_monotonicity(rng):
    for _ in range(100):
        mu2 = _random_singular(rng)
        mu1 = _truncated(mu2.scale(float(rng.uniform(0.2, 1.0))), int(rng.integers(1, 7)))
        for norm in builtin_norms():
            a, b = norm(mu1), norm(mu2)
            if a > b * (1 + 1e-12) + 1e-15:
                return False, f"{norm.name} not monotone: {fmt(a)} > {fmt(b)}"
    return True, "100 dominated pairs ordered under all built-ins"


def _check_embedding_and_dilation(rng):
    for _ in range(30):
        n = int(rng.integers(2, 7))
        x = _random_matrix(rng, n=n, weight=1.0 / n)
        top = trace_norms(x)[1]
        if top > 1.0:
            x = (1.0 / top) * x
        for norm in builtin_norms():
            if not embedding_check(norm, x).ok:
                return False, f"embedding failed for {norm.name}"
    for _ in range(30):
        mu = _random_singular(rng)
        k = int(rng.integers(0, 4))
        for norm in builtin_norms():
            if not dilation_check(norm, mu, k).ok:
                return False, f"dilation failed for {norm.name} at k={k}"
    return True, "30 embeddings and 30 dilations for all built-ins"


# -- homomorphism checks ----------------------------------------------------------


def _check_sampled_hom_bounds(rng):
    t = _random_hom(rng, 6, 1.0)
    m0, m1 = certified_bounds(t)
    worst = np.inf
    for _ in range(100):
        z = _random_matrix(rng, n=6, weight=1.0)
        l0z, linfz = trace_norms(z)
        l0t, linft = trace_norms(t.apply(z))
        if l0t > m0 * l0z + 1e-9 or linft > m1 * linfz * (1 + 1e-9):
            return False, "a sampled operand escaped the certified bounds"
        worst = min(worst, m1 * linfz - linft)
    return True, f"100 operands inside certified bounds; worst norm margin {fmt(worst)}"


def _check_interpolation_inequality(rng):
    for i in range(100):
        n = int(rng.integers(3, 8))
        w = float(rng.choice([0.5, 1.0]))
        t = _random_orthogonal_hom(rng, n, w) if i % 3 == 0 else _random_hom(rng, n, w)
        x = _random_matrix(rng, n=n, weight=w)
        if not interpolation_check(t, x).ok:
            return False, f"interpolation inequality failed on pair {i}"
        for norm in builtin_norms():
            if not enorm_bound_check(t, x, norm).ok:
                return False, f"functional bound failed for {norm.name} on pair {i}"
    return True, "100 pairs x (profile bound + all built-in functional bounds)"


def _check_hom_laws(rng):
    for _ in range(50):
        n = int(rng.integers(2, 7))
        t = _random_hom(rng, n, 1.0)
        z1 = _random_matrix(rng, n=n, weight=1.0)
        z2 = _random_matrix(rng, n=n, weight=1.0)
        if not allclose(t.apply(z1 + z2), t.apply(z1) + t.apply(z2), 1e-12):
            return False, "additivity failed"
        if not allclose(t.apply(-z1), -t.apply(z1), 1e-12):
            return False, "odd symmetry failed"
    return True, "50 homomorphisms additive and odd"


# -- orbit checks -------------------------------------------------------------------


def _check_korbit_roundtrip(rng):
    for _ in range(100):
        ma = _random_singular(rng)
        c = float(rng.choice([1.0, 1.5, 2.0, 4.0]))
        theta = float(rng.uniform(0.2, 1.0))
        mx = _truncated(ma.dilate(c).scale(c * theta), int(rng.integers(1, 7)))
        ko = korbit_norm(mx, ma)
        if ko > c * (1 + 1e-12):
            return False, f"K-orbit norm {fmt(ko)} exceeded planted constant {fmt(c)}"
        pc = pointwise_constant(mx, ma)
        if pc is None or pc > 3 * ko * (1 + 1e-9):
            return False, f"pointwise constant {pc} escaped three times {fmt(ko)}"
    return True, "100 planted pairs round-tripped"


def _check_ratio_reciprocity(rng):
    for _ in range(100):
        mx, ma = _random_singular(rng), _random_singular(rng)
        prod = korbit_norm(mx, ma) * korbit_norm(ma, mx)
        if prod < 1.0 - 1e-12:
            return False, f"reciprocity product {fmt(prod)}"
    return True, "100 pairs with product >= 1"


def _check_scale_equivariance(rng):
    for _ in range(50):
        x = _random_matrix(rng)
        a = _random_matrix(rng, n=x.n, weight=x.weight)
        if trace_norms(a)[1] == 0.0:
            continue
        c = complex(rng.standard_normal(), rng.standard_normal())
        lhs = korbit_norm(c * x, a)
        rhs = korbit_norm(mu_of(x).scale(abs(c)), mu_of(a))
        if abs(lhs - rhs) > 1e-9 * max(1.0, rhs):
            return False, f"scaling mismatch {fmt(lhs)} vs {fmt(rhs)}"
    return True, "50 scalings consistent on curves"


def _sampled_ratio_sup(cx, ca, points: int = 10**4) -> float:
    """Pure sampling maximiser: global log grid plus local zoom at the argmax."""
    us = log_grid(1e-6, 1e6, points)
    vals = [cx.at(u) / ca.at(u) for u in us]
    best_i = int(np.argmax(vals))
    best = vals[best_i]
    lo = us[max(best_i - 1, 0)]
    hi = us[min(best_i + 1, len(us) - 1)]
    for _ in range(8):
        local = log_grid(lo, hi, 64)
        lvals = [cx.at(u) / ca.at(u) for u in local]
        i = int(np.argmax(lvals))
        best = max(best, lvals[i])
        lo = local[max(i - 1, 0)]
        hi = local[min(i + 1, len(local) - 1)]
    return best


def _check_korbit_grid_oracle(rng):
    for _ in range(6):
        mx, ma = _random_singular(rng), _random_singular(rng)
        exact = korbit_norm(mx, ma)
        grid_sup = _sampled_ratio_sup(k_curve(mx), k_curve(ma))
        if not (grid_sup <= exact * (1 + 1e-12) and exact <= grid_sup * (1 + 1e-6)):
            return False, f"grid {fmt(grid_sup)} vs exact {fmt(exact)}"
    return True, "6 pairs, 10^4-point sampled supremum within relative 1e-6"


def _check_unit_ball_separation(rng):
    a, x, rep = counterexample(CounterexampleSpec(1, 1, 1.0, 0.6))
    if not rep.ok:
        return False, "; ".join(item.label for item in rep.items if not item.passed)
    ko = korbit_norm(x, a)
    onc = orbit_necessary_check(x, a, 1.0)
    if ko != 1.0 or onc.ok:
        return False, f"korbit={fmt(ko)}, orbit condition ok={onc.ok}"
    return True, "K-curves coincide, profiles separate, orbit condition fails"


# -- transfer check -------------------------------------------------------------------


def _check_transfer_pipeline(rng):
    for i in range(50):
        a, x = _transfer_pair(rng)
        p = plan(a, x)
        t = build(p, a, x)
        rep = verify(t, a, x, p, samples=100, seed=int(rng.integers(0, 2**31)))
        if not rep.ok:
            bad = "; ".join(item.label for item in rep.items if not item.passed)
            return False, f"pair {i} (C={p.c}): {bad}"
    return True, "50 random pairs planned, built and verified"


CHECKS = (
    ("stepfn.rearrangement_preserves_distribution", _check_rearrange_distribution),
    ("stepfn.rearrangement_inverts_distribution", _check_rearrange_inverts_distribution),
    ("stepfn.rearrangement_idempotent", _check_rearrange_idempotent),
    ("stepfn.sum_rearrangement_dilation_bound", _check_sum_dilation_bound),
    ("stepfn.support_subadditive", _check_support_subadditive),
    ("matmodel.unitary_invariance", _check_unitary_invariance),
    ("matmodel.adjoint_and_scaling", _check_adjoint_and_scaling),
    ("matmodel.spectral_cut_matches_functional", _check_spectral_cut_matches_functional),
    ("matmodel.projection_trace_matches_distribution", _check_projection_trace_matches_distribution),
    ("matmodel.sum_submajorization_bound", _check_sum_submajorization),
    ("kcalc.functional_forms_agree", _check_functional_forms_agree),
    ("kcalc.unit_functional_subadditive", _check_unit_functional_subadditive),
    ("kcalc.min_max_sandwich", _check_min_max_sandwich),
    ("kcalc.unit_functional_distribution_bound", _check_unit_functional_distribution_bound),
    ("kcalc.monotone_in_profile", _check_monotone_in_profile),
    ("kcalc.curve_envelope_matches_pointwise", _check_curve_envelope),
    ("symnorm.builtin_axioms", _check_builtin_axioms),
    ("symnorm.rearrangement_invariance", _check_rearrangement_invariance),
    ("symnorm.monotonicity", _check_norm_monotonicity),
    ("symnorm.embedding_and_dilation", _check_embedding_and_dilation),
    ("homs.sampled_bounds", _check_sampled_hom_bounds),
    ("homs.interpolation_inequality", _check_interpolation_inequality),
    ("homs.additive_and_odd", _check_hom_laws),
    ("orbits.korbit_vs_pointwise_roundtrip", _check_korbit_roundtrip),
    ("orbits.ratio_reciprocity", _check_ratio_reciprocity),
    ("orbits.scale_equivariance", _check_scale_equivariance),
    ("orbits.supremum_matches_grid", _check_korbit_grid_oracle),
    ("orbits.unit_ball_separation", _check_unit_ball_separation),
    ("transfer.pipeline", _check_transfer_pipeline),
)


@dataclass(frozen=True)
class SuiteResult:
    text: str
    ok: bool


def run_suite(seed: int, only: str | None = None) -> SuiteResult:
    """Run the battery and render the deterministic report."""
    lines = [
        f"l0linf verify-suite seed={seed}",
        f"versions: l0linf {__version__}, numpy {np.__version__}",
    ]
    selected = [(n, f) for n, f in CHECKS if only is None or n.startswith(only)]
    if not selected:
        raise ValueError(f"no checks match the prefix {only!r}")
    npass = 0
    for idx, (name, fn) in enumerate(selected, start=1):
        rng = np.random.default_rng([int(seed), idx])
        ok, detail = fn(rng)
        npass += ok
        lines.append(f"CHECK {idx:02d} {'PASS' if ok else 'FAIL'} {name}: {detail}")
    all_ok = npass == len(selected)
    lines.append(f"SUMMARY {'PASS' if all_ok else 'FAIL'} {npass}/{len(selected)}")
    return SuiteResult("\n".join(lines) + "\n", all_ok)
