"""Shared generators and independent oracles for the test suite.

The oracles deliberately avoid the code paths they check: rearrangements are
validated against fine-grid sampling and sorting, distribution values against
grid counting, the functionals against dense minimisation, and running
integrals against the cumulative-sum functional (the classical K-functional
of the integrable/bounded couple, used here only as a test oracle).
"""

from __future__ import annotations

import numpy as np

from l0linf import SingularFunction, StepFunction, TraceMatrix, PairHom


# -- oracles -----------------------------------------------------------------


def sampled_sorted_profile(f: StepFunction, step: float, t_max: float):
    """|f| sampled at midpoints of a uniform grid, sorted descending."""
    mids = np.arange(step / 2.0, t_max, step)
    vals = np.array([abs(f.at(float(t))) for t in mids])
    return np.sort(vals)[::-1], mids


def grid_count_dist(f: StepFunction, s: float, step: float, t_max: float) -> float:
    """Grid-counting approximation of measure{|f| > s} on (0, t_max)."""
    mids = np.arange(step / 2.0, t_max, step)
    return step * sum(1 for t in mids if abs(f.at(float(t))) > s)


def k_oracle_dense(mu: SingularFunction, u: float, n: int = 20001) -> float:
    """Dense minimisation of t + u*mu(t); an upper envelope of the true value."""
    t_max = (mu.breakpoints[-1] if mu.breakpoints else 1.0) * 1.5 + u * mu.at(0.0)
    ts = np.linspace(1e-9, t_max, n)
    return min(float(t) + u * mu.at(float(t)) for t in ts)


def m_oracle_dense(mu: SingularFunction, t: float, n: int = 20001) -> float:
    """Dense minimisation of max(s, t*mu(s))."""
    s_max = max((mu.breakpoints[-1] if mu.breakpoints else 1.0), t * mu.at(0.0)) * 1.5
    ss = np.linspace(1e-9, s_max, n)
    return min(max(float(s), t * mu.at(float(s))) for s in ss)


def running_integral_oracle(mu: SingularFunction, t: float, n: int = 40000) -> float:
    """Riemann-sum running integral; the integrable/bounded coupling functional."""
    if t == 0.0:
        return 0.0
    ts = np.linspace(0.0, t, n + 1)
    mids = (ts[:-1] + ts[1:]) / 2.0
    return float(sum(mu.at(float(s)) for s in mids) * (t / n))


def materialised_superoperator(t: PairHom) -> np.ndarray:
    """Dense n^2 x n^2 matrix of the term sum, for cross-checking small models."""
    if t.n > 6:
        raise ValueError("materialisation oracle is restricted to n <= 6")
    return sum(np.kron(a.entries, b.entries.T) for a, b in t.terms)


# -- generators ----------------------------------------------------------------


def random_step(rng, max_pieces: int = 6, signed: bool = True, tail: float = 0.0) -> StepFunction:
    m = int(rng.integers(1, max_pieces + 1))
    bps = np.cumsum(rng.uniform(0.1, 1.5, m))
    lo = -3.0 if signed else 0.0
    vals = rng.uniform(lo, 3.0, m)
    vals[rng.random(m) < 0.15] = 0.0
    return StepFunction(tuple(map(float, bps)), tuple(map(float, vals)), tail)


def random_singular(rng, max_pieces: int = 6, top: float = 3.0) -> SingularFunction:
    m = int(rng.integers(1, max_pieces + 1))
    bps = np.cumsum(rng.uniform(0.1, 1.5, m))
    vals = np.sort(rng.uniform(0.05, top, m))[::-1]
    return SingularFunction(tuple(map(float, bps)), tuple(map(float, vals)), 0.0)


def random_matrix(rng, n: int | None = None, weight: float | None = None) -> TraceMatrix:
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


def random_unitary(rng, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hom(rng, n: int, weight: float, max_terms: int = 3) -> PairHom:
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        scale = float(rng.uniform(0.2, 1.5))
        a = scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
        b = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
        terms.append((TraceMatrix(a, weight), TraceMatrix(b, weight)))
    return PairHom(tuple(terms))


def random_orthogonal_hom(rng, n: int, weight: float) -> PairHom:
    k = int(rng.integers(2, min(4, n) + 1))
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
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


def transfer_pair(rng):
    """Operands with a planted integer pointwise constant and strict margin."""
    n = int(rng.integers(4, 11))
    weight = float(rng.choice([0.5, 1.0]))
    c_true = int(rng.choice([1, 2, 3]))
    rank_a = int(rng.integers(2, n + 1))
    sig_a = np.sort(rng.uniform(0.5, 3.0, rank_a))[::-1]
    rank_x = int(rng.integers(1, min(n, c_true * rank_a) + 1))
    theta = float(rng.uniform(0.3, 0.95))
    sig_x = np.array([theta * c_true * sig_a[i // c_true] for i in range(rank_x)])
    a = TraceMatrix(
        (random_unitary(rng, n)[:, :rank_a] * sig_a) @ random_unitary(rng, n)[:rank_a, :],
        weight,
    )
    x = TraceMatrix(
        (random_unitary(rng, n)[:, :rank_x] * sig_x) @ random_unitary(rng, n)[:rank_x, :],
        weight,
    )
    return a, x
