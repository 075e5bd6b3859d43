"""Acceptance criteria, one test per criterion, each printing a summary line.

Every tolerance is pinned here exactly as stated; the random populations are
seeded so the runs are reproducible.
"""

import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np

from l0linf import (
    CounterexampleSpec,
    SingularFunction,
    builtin_norms,
    build,
    certified_bounds,
    counterexample,
    enorm_bound_check,
    interpolation_check,
    k_at,
    k_at_via_distribution,
    k_direct,
    korbit_norm,
    log_grid,
    m_at,
    mu_of,
    orbit_necessary_check,
    plan,
    pointwise_constant,
    rearrange,
    verify,
)
from l0linf.matmodel import polar
from l0linf.transfer import isometry
from helpers import (
    random_hom,
    random_matrix,
    random_orthogonal_hom,
    random_singular,
    random_step,
    transfer_pair,
)


@contextmanager
def _criterion(number, description):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} FAIL: {description}")
        raise
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE {number} PASS: {description} ({elapsed:.3f}s)")


def test_criterion_1_counterexample_reproduction():
    with _criterion(1, "unit-ball separation pair reproduces its closed forms"):
        start = time.perf_counter()
        a, x, rep = counterexample(CounterexampleSpec(1, 1, 1.0, 0.6))
        assert rep.ok, str(rep)
        mua, mux = mu_of(a), mu_of(x)
        for t in log_grid(1e-3, 1e3, 100):
            assert abs(k_at(mua, t) - min(t, 2.0)) <= 1e-12 * max(1.0, min(t, 2.0))
            assert abs(k_at(mux, t) - min(t, 2.0)) <= 1e-12 * max(1.0, min(t, 2.0))
        for t in (1.0, 1.5, 1.999):
            assert mua.at(t) == 0.6 and mux.at(t) == 1.0
        assert not orbit_necessary_check(x, a, 1.0).ok
        assert korbit_norm(x, a) == 1.0
        assert time.perf_counter() - start < 1.0


def test_criterion_2_spectral_cut_equals_profile_functional():
    with _criterion(2, "matrix functional equals the profile functional to 1e-9"):
        start = time.perf_counter()
        rng = np.random.default_rng(2002)
        us = log_grid(1e-3, 1e3, 20)
        for _ in range(200):
            x = random_matrix(rng, n=int(rng.integers(2, 13)))
            mu = mu_of(x)
            for u in us:
                direct, _ = k_direct(x, u)
                val = k_at(mu, u)
                assert abs(direct - val) <= 1e-9 * max(1.0, abs(val))
        assert time.perf_counter() - start < 10.0


def test_criterion_3_two_infimum_forms_agree():
    with _criterion(3, "candidate and distribution forms agree to 1e-12"):
        rng = np.random.default_rng(2003)
        us = log_grid(1e-3, 1e3, 20)
        for _ in range(500):
            f = random_step(rng)
            mu = rearrange(f)
            for u in us:
                a = k_at(mu, u)
                b = k_at_via_distribution(mu, u)
                assert abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))
                # the distribution form may also be read off the unsorted function
                levels = {0.0, *(abs(v) for v in f.values)}
                c = min(u * s + f.dist(s) for s in levels if f.dist(s) < float("inf"))
                assert abs(a - c) <= 1e-12 * max(1.0, abs(a), abs(c))


def test_criterion_4_min_max_sandwich_and_tightness():
    with _criterion(4, "M <= K <= 2M with an exact factor-two witness"):
        rng = np.random.default_rng(2004)
        ts = log_grid(1e-3, 1e3, 20)
        for _ in range(500):
            mu = rearrange(random_step(rng))
            for t in ts:
                m = m_at(mu, t)
                k = k_at(mu, t)
                assert m <= k * (1 + 1e-12) + 1e-15
                assert k <= 2.0 * m * (1 + 1e-12) + 1e-15
        witness = SingularFunction((1.0, 2.0), (2.0, 1.0))
        assert k_at(witness, 1.0) == 2.0 * m_at(witness, 1.0)


def test_criterion_5_korbit_pointwise_roundtrip():
    with _criterion(5, "planted constants round-trip through the K-orbit norm"):
        rng = np.random.default_rng(2005)
        for _ in range(100):
            ma = random_singular(rng)
            c = float(rng.choice([1.0, 1.5, 2.0, 4.0]))
            theta = float(rng.uniform(0.2, 1.0))
            mx = ma.dilate(c).scale(c * theta)
            keep = int(rng.integers(1, len(mx.values) + 1))
            mx = SingularFunction(mx.breakpoints[:keep], mx.values[:keep])
            ko = korbit_norm(mx, ma)
            assert ko <= c * (1 + 1e-12)
            pc = pointwise_constant(mx, ma)
            assert pc is not None and pc <= 3.0 * ko * (1 + 1e-9)


def test_criterion_6_interpolation_with_certified_bounds():
    with _criterion(6, "certified pair bounds dominate every profile and functional"):
        rng = np.random.default_rng(2006)
        norms = builtin_norms()
        for i in range(100):
            n = int(rng.integers(3, 8))
            w = float(rng.choice([0.5, 1.0]))
            t = random_orthogonal_hom(rng, n, w) if i % 3 == 0 else random_hom(rng, n, w)
            x = random_matrix(rng, n=n, weight=w)
            assert interpolation_check(t, x).ok
            for norm in norms:
                assert enorm_bound_check(t, x, norm).ok


def test_criterion_7_transfer_pipeline():
    with _criterion(7, "transfer plans build, reproduce and stay inside 2C"):
        start = time.perf_counter()
        rng = np.random.default_rng(2007)
        for _ in range(50):
            a, x = transfer_pair(rng)
            p = plan(a, x)
            t = build(p, a, x)
            gap = (t.apply(a) - x).opnorm()
            assert gap <= 1e-9 * x.opnorm()
            m0, m1 = certified_bounds(t)
            assert m0 <= 2 * p.c and m1 <= 2 * p.c * (1 + 1e-9)
            _, abs_a = polar(a)
            _, abs_x = polar(x)
            scale = max(1.0, a.opnorm(), x.opnorm())
            g1 = np.linalg.norm(
                p.rounding_multiplier.entries @ abs_a.entries - p.rounded_abs.entries, 2
            )
            acc = sum(
                isometry(p, j).conj().T @ p.rounded_abs.entries @ isometry(p, j)
                for j in range(2 * p.c)
            )
            g2 = np.linalg.norm(acc - p.spread_abs.entries, 2)
            g3 = np.linalg.norm(
                p.correction_multiplier.entries @ p.spread_abs.entries - abs_x.entries, 2
            )
            g4 = np.linalg.norm(p.phase_x.entries @ abs_x.entries - x.entries, 2)
            assert max(g1, g2, g3, g4) <= 1e-9 * scale
            rep = verify(t, a, x, p, samples=100, seed=int(rng.integers(0, 2**31)))
            assert rep.ok, str(rep)
        assert time.perf_counter() - start < 30.0


def test_criterion_8_unit_functional_triangle_constant_one():
    with _criterion(8, "unit functional is subadditive with constant one"):
        rng = np.random.default_rng(2008)
        for _ in range(500):
            n = int(rng.integers(2, 8))
            w = float(rng.choice([0.5, 1.0]))
            x = random_matrix(rng, n=n, weight=w)
            y = random_matrix(rng, n=n, weight=w)
            lhs = k_at(mu_of(x + y), 1.0)
            rhs = k_at(mu_of(x), 1.0) + k_at(mu_of(y), 1.0)
            assert lhs <= rhs * (1 + 1e-12) + 1e-15


def test_criterion_9_verify_suite_deterministic(tmp_path):
    with _criterion(9, "verify-suite is byte-identical for a fixed seed"):
        reports = []
        for name in ("r1.txt", "r2.txt"):
            out = tmp_path / name
            proc = subprocess.run(
                [sys.executable, "-m", "l0linf", "verify-suite", "--seed", "42",
                 "--out", str(out)],
                capture_output=True,
                text=True,
                timeout=600,
            )
            assert proc.returncode == 0, proc.stdout + proc.stderr
            reports.append(out.read_bytes())
        assert reports[0] == reports[1]
        assert b"SUMMARY PASS" in reports[0]
