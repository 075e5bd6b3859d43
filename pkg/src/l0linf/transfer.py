"""Constructive transfer of one matrix onto another with certified pair bounds.

Given A and X on the same model with mu(t; X) <= C*mu(t/C; A), the plan
chooses the least integer C for which the strict gap

    2C*mu(t/(2C); A) - mu(t; X) >= delta > 0

holds at every profile breakpoint below the support of X, then rounds |A|
down to an integer grid of step eps <= delta/(4C) (also kept below the
smallest positive singular value so no needed level collapses to zero).
The rounded spectrum splits into value bands; each band is relocated onto
2C equal-rank slots along the singular profile of X through partial
isometries built from the descending singular frames (deterministic order,
ties kept stable).  Two bounded multipliers finish the job: one flattens
|A| onto the rounded profile, the other stretches the relocated profile
onto |X| and stays below 2C thanks to the gap above.  The assembled map

    Z -> sum_j (U_X D_corr U_j* D_round U_A*) Z U_j

is a homomorphism with 2C orthogonally-tagged terms that carries A exactly
onto X and is bounded by 2C on both sides of the pair.

Everything lives on the trace grid: interval bookkeeping is integer
arithmetic in units of the weight, so every rank-matching condition is an
exact integer identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .homs import OrthogonalityError, PairHom, certified_bounds
from .matmodel import TraceMatrix, mu_of, polar, spectral, trace_norms
from .orbits import pointwise_constant
from .report import CheckItem, CheckReport, fmt

C_CAP = 10**6


class PlanInfeasibleError(ValueError):
    """No admissible integer constant exists for the requested transfer."""


@dataclass(frozen=True)
class Band:
    """Slots [start, stop) of the profile of |A| sharing one rounded value."""

    index: int      # rounded value = index * eps
    start: int      # first slot, in units of the trace weight
    stop: int       # one past the last slot

    @property
    def count(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class IsometryBlock:
    """One partial isometry piece: band slots onto a slot range of X."""

    band: int       # position into the plan's band tuple
    j: int          # which of the 2C copies
    a_start: int    # first source slot on the profile of |A|
    x_start: int    # first destination slot on the profile of |X|
    length: int     # number of slots actually mapped (truncation applied)


@dataclass(frozen=True, eq=False)
class TransferPlan:
    """All data needed to assemble and audit the transfer homomorphism."""

    c: int
    eps: float
    delta: float
    pointwise: float
    weight: float
    dim: int
    rank_a: int
    rank_x: int
    bands: tuple[Band, ...]
    blocks: tuple[IsometryBlock, ...]
    rounding_multiplier: TraceMatrix    # flattens |A| onto the rounded profile
    correction_multiplier: TraceMatrix  # stretches the relocated profile onto |X|
    rounded_abs: TraceMatrix            # rounded positive part of A
    spread_abs: TraceMatrix             # band-relocated positive operator on the frame of X
    phase_a: TraceMatrix                # polar partial isometry of A
    phase_x: TraceMatrix                # polar partial isometry of X
    frame_a: np.ndarray                 # right singular frame of A (descending)
    frame_x: np.ndarray                 # right singular frame of X (descending)
    sigma_a: np.ndarray
    sigma_x: np.ndarray

    def shifted_intervals(self) -> list[tuple[float, float]]:
        """Destination intervals in real units, truncation applied."""
        w = self.weight
        return [(w * b.x_start, w * (b.x_start + b.length)) for b in self.blocks]


def _first_positive(margin, start: int, cap: int):
    """Least integer c in [start, cap] with margin(c) > 0; margin is monotone."""
    probe = min(start + 64, cap)
    for c in range(start, probe + 1):
        if margin(c) > 0.0:
            return c
    lo, step = probe, 64
    while lo < cap:
        hi = min(cap, lo + step)
        step *= 2
        if margin(hi) > 0.0:
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if margin(mid) > 0.0:
                    hi = mid
                else:
                    lo = mid
            return hi
        lo = hi
    return None


def plan(a: TraceMatrix, x: TraceMatrix) -> TransferPlan:
    """Choose the constant, the rounding step, the bands and the slot maps."""
    if a.n != x.n or a.weight != x.weight:
        raise ValueError("operands must share dimension and trace weight")
    sda = spectral(a)
    sdx = spectral(x)
    ra, rx = sda.rank(), sdx.rank()
    if ra == 0 or rx == 0:
        raise ValueError("both operands must be nonzero")
    sig_a = np.asarray(sda.sigma[:ra], dtype=float)
    sig_x = np.asarray(sdx.sigma[:rx], dtype=float)

    pw = pointwise_constant(mu_of(x), mu_of(a))
    if pw is None:
        raise PlanInfeasibleError("the profiles admit no finite pointwise constant")
    start = max(1, math.ceil(pw - 1e-9))
    if start > C_CAP:
        raise PlanInfeasibleError(
            f"pointwise constant {pw:g} exceeds the search cap {C_CAP}"
        )

    def margin(cc: int) -> float:
        two_c = 2 * cc
        mu_a_at = [sig_a[i // two_c] if i // two_c < ra else 0.0 for i in range(rx)]
        gap = min(two_c * v - s for v, s in zip(mu_a_at, sig_x))
        k_sup = rx // two_c
        support_term = cc * (sig_a[k_sup] if k_sup < ra else 0.0)
        return min(gap, support_term)

    c = _first_positive(margin, start, C_CAP)
    if c is None:
        two_c = 2 * C_CAP
        gaps = [
            two_c * (sig_a[i // two_c] if i // two_c < ra else 0.0) - sig_x[i]
            for i in range(rx)
        ]
        worst = int(np.argmin(gaps))
        raise PlanInfeasibleError(
            f"no integer constant up to {C_CAP} achieves a positive gap; "
            f"worst breakpoint t={fmt(worst * a.weight)} with gap {fmt(gaps[worst])}"
        )
    delta = margin(c)
    # 2C*eps <= delta/2 keeps the gap strict after rounding; the unit cap
    # keeps eps strictly below 1/(2C), and the last cap stops any positive
    # level from rounding to zero.  Finer eps is free: the band count never
    # exceeds the number of distinct singular values.
    eps = min(min(delta, 1.0) / (4 * c), float(sig_a[-1]))

    band_idx = [int(math.floor(s / eps)) for s in sig_a]
    bands: list[Band] = []
    pos = 0
    while pos < ra:
        stop = pos
        while stop < ra and band_idx[stop] == band_idx[pos]:
            stop += 1
        bands.append(Band(band_idx[pos], pos, stop))
        pos = stop

    blocks: list[IsometryBlock] = []
    for bpos, band in enumerate(bands):
        for j in range(2 * c):
            x0 = 2 * c * band.start + j * band.count
            if x0 >= rx:
                continue
            blocks.append(IsometryBlock(bpos, j, band.start, x0, min(band.count, rx - x0)))

    covered = sorted((b.x_start, b.x_start + b.length) for b in blocks)
    cursor = 0
    for lo, hi in covered:
        if lo != cursor:
            raise PlanInfeasibleError("internal slot accounting failed to tile the support")
        cursor = hi
    if cursor != rx:
        raise PlanInfeasibleError("internal slot accounting failed to tile the support")

    spread_vals = np.zeros(rx)
    for b in blocks:
        spread_vals[b.x_start : b.x_start + b.length] = bands[b.band].index * eps
    if np.any(spread_vals[:-1] < spread_vals[1:] - 1e-15):
        raise PlanInfeasibleError("relocated profile failed to be nonincreasing")
    if np.any(2 * c * spread_vals <= sig_x):
        raise PlanInfeasibleError("the strict gap failed after rounding")

    n = a.n
    va = np.array(sda.right)
    vx = np.array(sdx.right)

    def corner(frame, vals_head):
        vals = np.zeros(n)
        vals[: len(vals_head)] = vals_head
        m = (frame * vals) @ frame.conj().T
        return TraceMatrix((m + m.conj().T) / 2.0, a.weight)

    rounded_vals = np.array(band_idx, dtype=float) * eps
    rounding = corner(va, rounded_vals / sig_a)
    rounded_abs = corner(va, rounded_vals)
    spread_abs = corner(vx, spread_vals)
    correction = corner(vx, sig_x / spread_vals)
    phase_a, _ = polar(a)
    phase_x, _ = polar(x)

    return TransferPlan(
        c=c,
        eps=eps,
        delta=delta,
        pointwise=float(pw),
        weight=a.weight,
        dim=n,
        rank_a=ra,
        rank_x=rx,
        bands=tuple(bands),
        blocks=tuple(blocks),
        rounding_multiplier=rounding,
        correction_multiplier=correction,
        rounded_abs=rounded_abs,
        spread_abs=spread_abs,
        phase_a=phase_a,
        phase_x=phase_x,
        frame_a=va,
        frame_x=vx,
        sigma_a=np.array(sda.sigma),
        sigma_x=np.array(sdx.sigma),
    )


def isometry(p: TransferPlan, j: int) -> np.ndarray:
    """The j-th partial isometry, mapping X-frame slots onto A-frame slots."""
    u = np.zeros((p.dim, p.dim), dtype=np.complex128)
    for b in p.blocks:
        if b.j != j:
            continue
        src = p.frame_a[:, b.a_start : b.a_start + b.length]
        dst = p.frame_x[:, b.x_start : b.x_start + b.length]
        u += src @ dst.conj().T
    return u


def build(p: TransferPlan, a: TraceMatrix, x: TraceMatrix) -> PairHom:
    """Assemble the 2C orthogonally-tagged terms of the transfer homomorphism."""
    if a.n != p.dim or x.n != p.dim or a.weight != p.weight or x.weight != p.weight:
        raise ValueError("operands do not match the plan")
    if not (
        np.allclose(spectral(a).sigma, p.sigma_a, atol=1e-12 * max(1.0, p.sigma_a[0]))
        and np.allclose(spectral(x).sigma, p.sigma_x, atol=1e-12 * max(1.0, p.sigma_x[0]))
    ):
        raise ValueError("operands do not match the plan")
    left = p.phase_x.entries @ p.correction_multiplier.entries
    right = p.rounding_multiplier.entries @ p.phase_a.entries.conj().T
    live = {b.j for b in p.blocks}
    zero = TraceMatrix(np.zeros((p.dim, p.dim)), p.weight)
    terms = []
    for j in range(2 * p.c):
        # copies whose destination slots all fall past the support contribute
        # zero terms; one shared zero matrix keeps large constants cheap
        if j not in live:
            terms.append((zero, zero))
            continue
        u_j = isometry(p, j)
        terms.append(
            (TraceMatrix(left @ u_j.conj().T @ right, p.weight), TraceMatrix(u_j, p.weight))
        )
    return PairHom(tuple(terms), orthogonal=True)


def _opgap(m: np.ndarray, target: np.ndarray) -> float:
    return float(np.linalg.norm(m - target, 2))


def verify(
    t: PairHom,
    a: TraceMatrix,
    x: TraceMatrix,
    p: TransferPlan,
    samples: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
) -> CheckReport:
    """Audit the assembled homomorphism; failures become report entries."""
    items = []
    scale_x = max(x.opnorm(), 1e-300)

    gap = (t.apply(a) - x).opnorm()
    items.append(
        CheckItem(
            "transfer reproduces the target",
            gap <= tol * scale_x,
            f"|T(A) - X| = {fmt(gap)} (tolerance {fmt(tol * scale_x)})",
        )
    )

    try:
        m0, m1 = certified_bounds(t)
        items.append(
            CheckItem(
                "certified bounds within 2C",
                m0 <= 2 * p.c and m1 <= 2 * p.c * (1.0 + 1e-9),
                f"M0={fmt(m0)}, M1={fmt(m1)}, 2C={2 * p.c}",
            )
        )
    except OrthogonalityError as exc:
        m0, m1 = float(len(t.terms)), math.inf
        items.append(CheckItem("certified bounds within 2C", False, str(exc)))

    rng = np.random.default_rng(seed)
    worst_rank = worst_norm = math.inf
    ok_rank = ok_norm = True
    for _ in range(samples):
        z = rng.standard_normal((p.dim, p.dim)) + 1j * rng.standard_normal((p.dim, p.dim))
        r = int(rng.integers(1, p.dim + 1))
        if r < p.dim:
            u, s, vh = np.linalg.svd(z)
            z = (u[:, :r] * s[:r]) @ vh[:r, :]
        zm = TraceMatrix(z, p.weight)
        tz = t.apply(zm)
        l0z, linfz = trace_norms(zm)
        l0t, linft = trace_norms(tz)
        mr = m0 * l0z - l0t
        mn = m1 * linfz - linft
        worst_rank = min(worst_rank, mr)
        worst_norm = min(worst_norm, mn)
        ok_rank = ok_rank and mr >= -tol * max(1.0, m0 * l0z)
        ok_norm = ok_norm and mn >= -tol * max(1.0, m1 * linfz)
    items.append(
        CheckItem(
            f"sampled rank bound on {samples} operands",
            ok_rank,
            f"worst margin {fmt(worst_rank)}",
        )
    )
    items.append(
        CheckItem(
            f"sampled norm bound on {samples} operands",
            ok_norm,
            f"worst margin {fmt(worst_norm)}",
        )
    )

    _, abs_a = polar(a)
    _, abs_x = polar(x)
    two_c = 2 * p.c

    g1 = _opgap(p.rounding_multiplier.entries @ abs_a.entries, p.rounded_abs.entries)
    items.append(
        CheckItem(
            "rounding multiplier flattens |A| onto the rounded profile",
            g1 <= tol * max(1.0, a.opnorm()),
            f"gap {fmt(g1)}",
        )
    )

    live = sorted({b.j for b in p.blocks})
    acc = np.zeros((p.dim, p.dim), dtype=np.complex128)
    for j in live:
        u_j = isometry(p, j)
        acc += u_j.conj().T @ p.rounded_abs.entries @ u_j
    g2 = _opgap(acc, p.spread_abs.entries)
    items.append(
        CheckItem(
            "relocated bands assemble the spread operator",
            g2 <= tol * max(1.0, a.opnorm()),
            f"gap {fmt(g2)}",
        )
    )

    g3 = _opgap(p.correction_multiplier.entries @ p.spread_abs.entries, abs_x.entries)
    items.append(
        CheckItem(
            "correction multiplier restores |X|",
            g3 <= tol * scale_x,
            f"gap {fmt(g3)}",
        )
    )

    g4 = _opgap(p.phase_x.entries @ abs_x.entries, x.entries)
    items.append(
        CheckItem(
            "polar part restores X",
            g4 <= tol * scale_x,
            f"gap {fmt(g4)}",
        )
    )

    mu_spread = mu_of(p.spread_abs)
    mu_round = mu_of(p.rounded_abs)
    w = p.weight
    reloc_gap = max(
        (abs(mu_spread.at(i * w) - mu_round.at(i * w / two_c)) for i in range(p.rank_x)),
        default=0.0,
    )
    items.append(
        CheckItem(
            "relocation dilates the rounded profile by 2C",
            reloc_gap <= tol * max(1.0, a.opnorm()),
            f"worst gap {fmt(reloc_gap)} over the support of X",
        )
    )

    mu_a = mu_of(a)
    losses = [mu_a.at(i * w) - mu_round.at(i * w) for i in range(p.rank_a)]
    round_ok = all(-tol <= loss < p.eps + tol for loss in losses)
    items.append(
        CheckItem(
            "rounding loss stays inside one grid step",
            round_ok,
            f"loss range [{fmt(min(losses))}, {fmt(max(losses))}), eps={fmt(p.eps)}",
        )
    )

    iso_defect = 0.0
    for j in live:
        u_j = isometry(p, j)
        q = u_j.conj().T @ u_j
        iso_defect = max(iso_defect, _opgap(q @ q, q), _opgap(q.conj().T, q))
    items.append(
        CheckItem(
            "slot maps are partial isometries",
            iso_defect <= tol,
            f"worst projection defect {fmt(iso_defect)}",
        )
    )

    return CheckReport("transfer verification", tuple(items))


# -- serialisation -----------------------------------------------------------


def plan_to_dict(p: TransferPlan) -> dict:
    from .matmodel import matrix_to_dict

    w = p.weight
    return {
        "C": p.c,
        "eps": p.eps,
        "delta": p.delta,
        "pointwise_constant": p.pointwise,
        "weight": w,
        "dim": p.dim,
        "rank_a": p.rank_a,
        "rank_x": p.rank_x,
        "bands": [
            {"value": b.index * p.eps, "start": b.start * w, "stop": b.stop * w}
            for b in p.bands
        ],
        "shifted_intervals": [
            {"band": blk.band, "j": blk.j, "start": blk.x_start * w,
             "stop": (blk.x_start + blk.length) * w}
            for blk in p.blocks
        ],
        "rounding_multiplier": matrix_to_dict(p.rounding_multiplier),
        "correction_multiplier": matrix_to_dict(p.correction_multiplier),
    }
