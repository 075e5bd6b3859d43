import numpy as np
import pytest

from l0linf import (
    PairHom,
    PlanInfeasibleError,
    TraceMatrix,
    build,
    certified_bounds,
    diag,
    mu_of,
    plan,
    plan_to_dict,
    pointwise_constant,
    verify,
)
from l0linf.matmodel import allclose, polar
from l0linf.transfer import isometry
from helpers import random_unitary, transfer_pair


def _diag_example():
    a = diag([4.0, 2.0, 0.0, 0.0])
    x = diag([4.0, 4.0, 2.0, 2.0])
    return a, x


# -- planning -----------------------------------------------------------------


def test_identity_transfer_on_projection():
    p3 = diag([1.0, 1.0, 1.0, 0.0])
    pl = plan(p3, p3)
    assert pl.c == 1
    # gap 2*mu(t/2) - mu(t) = 2 - 1 = 1 on the support
    assert pl.delta == 1.0
    t = build(pl, p3, p3)
    assert allclose(t.apply(p3), p3, 1e-9)


def test_diag_example_constants():
    a, x = _diag_example()
    pl = plan(a, x)
    assert pl.c == 2
    assert pl.pointwise == pytest.approx(2.0, rel=1e-9)
    # breakpoint evaluation: the gap bottoms out at the support term 2*mu(2;A)
    assert pl.delta == pytest.approx(4.0)
    assert pl.eps == pytest.approx(0.125)
    assert 2 * pl.c * pl.eps < pl.delta
    assert pl.eps < 1.0 / (2 * pl.c)
    assert pl.rank_a == 2 and pl.rank_x == 4


def test_plan_requires_shared_model_and_nonzero():
    a, x = _diag_example()
    with pytest.raises(ValueError):
        plan(a, diag([1.0] * 3))
    with pytest.raises(ValueError):
        plan(a, diag([4.0, 4.0, 2.0, 2.0], weight=0.5))
    with pytest.raises(ValueError):
        plan(diag([0.0] * 4), x)


def test_plan_unreachable_support_errors():
    # the target support is too long for any constant within the cap
    a = diag([1e14, 0.0, 0.0, 0.0])
    x = diag([1e-14] * 4)
    with pytest.raises(PlanInfeasibleError):
        plan(x, a)  # needs C ~ 1e28 for the levels
    bad_a = diag([1e-14, 0.0, 0.0, 0.0])
    bad_x = diag([1e14, 0.0, 0.0, 0.0])
    with pytest.raises(PlanInfeasibleError):
        plan(bad_a, bad_x)


def test_plan_intervals_are_grid_aligned():
    a, x = _diag_example()
    pl = plan(a, x)
    for band in pl.bands:
        assert band.stop > band.start >= 0
    slots = sorted((b.x_start, b.x_start + b.length) for b in pl.blocks)
    cursor = 0
    for lo, hi in slots:
        assert lo == cursor
        cursor = hi
    assert cursor == pl.rank_x
    for lo, hi in pl.shifted_intervals():
        assert hi <= pl.rank_x * pl.weight + 1e-12


# -- building ------------------------------------------------------------------


def test_build_reproduces_target_diag_example():
    a, x = _diag_example()
    pl = plan(a, x)
    t = build(pl, a, x)
    assert len(t.terms) == 2 * pl.c
    assert t.orthogonal
    assert allclose(t.apply(a), x, 1e-9)


def test_build_handles_nontrivial_polar_parts():
    rng = np.random.default_rng(3)
    n = 6
    sig_a = np.array([3.0, 2.0, 1.5, 0.0, 0.0, 0.0])
    sig_x = np.array([2.5, 2.5, 1.2, 1.2, 0.9, 0.9])
    a = TraceMatrix((random_unitary(rng, n) * sig_a) @ random_unitary(rng, n), 1.0)
    x = TraceMatrix((random_unitary(rng, n) * sig_x) @ random_unitary(rng, n), 1.0)
    pl = plan(a, x)
    t = build(pl, a, x)
    gap = (t.apply(a) - x).opnorm()
    assert gap <= 1e-9 * x.opnorm()


def test_build_rejects_mismatched_operands():
    a, x = _diag_example()
    pl = plan(a, x)
    with pytest.raises(ValueError):
        build(pl, x, a)


# -- verification ----------------------------------------------------------------


def test_verify_identity_transfer():
    p2 = diag([1.0, 1.0, 0.0])
    pl = plan(p2, p2)
    t = build(pl, p2, p2)
    rep = verify(t, p2, p2, pl, samples=20)
    assert rep.ok, str(rep)
    assert pl.c == 1


def test_verify_diag_example_full_report():
    a, x = _diag_example()
    pl = plan(a, x)
    t = build(pl, a, x)
    rep = verify(t, a, x, pl, samples=50)
    assert rep.ok, str(rep)
    labels = [item.label for item in rep.items]
    assert "transfer reproduces the target" in labels
    assert "rounding multiplier flattens |A| onto the rounded profile" in labels
    assert "relocated bands assemble the spread operator" in labels
    assert "correction multiplier restores |X|" in labels
    assert "polar part restores X" in labels


def test_proof_factorisations_hold_exactly():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a, x = transfer_pair(rng)
        pl = plan(a, x)
        t = build(pl, a, x)
        _, abs_a = polar(a)
        _, abs_x = polar(x)
        scale = max(1.0, a.opnorm(), x.opnorm())
        g1 = np.linalg.norm(
            pl.rounding_multiplier.entries @ abs_a.entries - pl.rounded_abs.entries, 2
        )
        acc = sum(
            isometry(pl, j).conj().T @ pl.rounded_abs.entries @ isometry(pl, j)
            for j in range(2 * pl.c)
        )
        g2 = np.linalg.norm(acc - pl.spread_abs.entries, 2)
        g3 = np.linalg.norm(
            pl.correction_multiplier.entries @ pl.spread_abs.entries - abs_x.entries, 2
        )
        g4 = np.linalg.norm(pl.phase_x.entries @ abs_x.entries - x.entries, 2)
        assert max(g1, g2, g3, g4) <= 1e-9 * scale


def test_relocated_profile_is_dilated_rounded_profile():
    rng = np.random.default_rng(7)
    for _ in range(10):
        a, x = transfer_pair(rng)
        pl = plan(a, x)
        mu_spread = mu_of(pl.spread_abs)
        mu_round = mu_of(pl.rounded_abs)
        w = pl.weight
        for i in range(pl.rank_x):
            assert abs(mu_spread.at(i * w) - mu_round.at(i * w / (2 * pl.c))) <= 1e-9


def test_rounding_loss_below_grid_step():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a, x = transfer_pair(rng)
        pl = plan(a, x)
        mu_a = mu_of(a)
        mu_round = mu_of(pl.rounded_abs)
        for i in range(pl.rank_a):
            loss = mu_a.at(i * pl.weight) - mu_round.at(i * pl.weight)
            assert -1e-12 <= loss < pl.eps + 1e-12


def test_multiplier_norm_bounds():
    rng = np.random.default_rng(13)
    for _ in range(10):
        a, x = transfer_pair(rng)
        pl = plan(a, x)
        assert pl.rounding_multiplier.opnorm() <= 1.0 + 1e-9
        assert pl.correction_multiplier.opnorm() <= 2 * pl.c * (1 + 1e-9)


def test_isometries_have_orthogonal_slots():
    a, x = _diag_example()
    pl = plan(a, x)
    for j in range(2 * pl.c):
        u = isometry(pl, j)
        q = u.conj().T @ u
        assert np.linalg.norm(q @ q - q, 2) <= 1e-9
        for j2 in range(j + 1, 2 * pl.c):
            assert np.linalg.norm(u @ isometry(pl, j2).conj().T, 2) <= 1e-9


def test_certified_bounds_within_two_c():
    rng = np.random.default_rng(17)
    for _ in range(10):
        a, x = transfer_pair(rng)
        pl = plan(a, x)
        t = build(pl, a, x)
        m0, m1 = certified_bounds(t)
        assert m0 <= 2 * pl.c
        assert m1 <= 2 * pl.c * (1 + 1e-9)


def test_corrupted_slot_map_fails_reconstruction():
    a, x = _diag_example()
    pl = plan(a, x)
    t = build(pl, a, x)
    # displace one destination slot of the first copy by one position
    bad_u = np.zeros((pl.dim, pl.dim), dtype=np.complex128)
    for b in pl.blocks:
        if b.j != 0:
            continue
        shift = 1
        src = pl.frame_a[:, b.a_start : b.a_start + b.length]
        lo = (b.x_start + shift) % pl.rank_x
        dst = pl.frame_x[:, lo : lo + b.length]
        if dst.shape[1] < b.length:
            dst = pl.frame_x[:, : b.length]
        bad_u += src @ dst.conj().T
    terms = list(t.terms)
    a0, _ = terms[0]
    terms[0] = (a0, TraceMatrix(bad_u, pl.weight))
    corrupted = PairHom(tuple(terms), orthogonal=False)
    rep = verify(corrupted, a, x, pl, samples=5)
    assert not rep.ok
    first = [item for item in rep.items if item.label == "transfer reproduces the target"][0]
    assert not first.passed


def test_plan_serialisation_shape():
    a, x = _diag_example()
    pl = plan(a, x)
    d = plan_to_dict(pl)
    assert d["C"] == 2 and d["rank_x"] == 4
    assert all(band["stop"] > band["start"] for band in d["bands"])
    assert "rounding_multiplier" in d and "correction_multiplier" in d


def test_pointwise_constant_reported_alongside_plan():
    a, x = _diag_example()
    pl = plan(a, x)
    pc = pointwise_constant(mu_of(x), mu_of(a))
    assert pl.pointwise == pytest.approx(pc)
    assert pl.c >= pc - 1e-9
