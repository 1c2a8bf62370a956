"""Tower-level almost-flatness certification.

Oracle key: [DERIVED] Heisenberg closed form sup|K^t| = 3t/4 pins the h3
schedule near 4·eps/3; assemble_metric is checked against its defining
congruence (lift basis diagonalizes to blockdiag(base, t·s)); [TRIVIAL]
abelian towers are already flat.
"""

import numpy as np
import pytest

from nilflat import catalog
from nilflat.certify import (CertificateReport, assemble_metric,
                             certificate_summary, certify_almost_flat)
from nilflat.errors import BudgetNotMet, DimensionMismatch
from nilflat.metric import LeftInvariantMetric
from nilflat.tower import NilLattice, peel_tower

TILTED3 = np.array([[1.0, 0.0, 0.3],
                    [0.0, 1.0, 0.0],
                    [0.3, 0.0, 1.0]])


def tower_of(algebra):
    return peel_tower(NilLattice(algebra=algebra))


def identity_seed(n):
    return LeftInvariantMetric.identity(n)


# [DERIVED] congruence property: in the lift basis W the assembled metric is
# blockdiag(base, t·s); positive definite for positive-definite inputs.
def test_assemble_metric_congruence():
    rng = np.random.default_rng(8)
    for k in (2, 3, 5):
        m = rng.uniform(-1, 1, size=(k, k))
        seed = m @ m.T + k * np.eye(k)
        base = np.linalg.cholesky(rng.uniform(-1, 1, size=(k - 1, k - 1)) / 4
                                  + np.eye(k - 1) * 2)
        base = base @ base.T
        t = 0.37
        out = assemble_metric(seed, base, t)
        s = seed[k - 1, k - 1]
        w = np.eye(k)
        w[k - 1, :k - 1] = -seed[k - 1, :k - 1] / s
        expected_block = np.zeros((k, k))
        expected_block[:k - 1, :k - 1] = base
        expected_block[k - 1, k - 1] = t * s
        assert np.max(np.abs(w.T @ out @ w - expected_block)) <= 1e-12
        assert np.max(np.abs(out - out.T)) <= 1e-12
        np.linalg.cholesky(out)


# [TRIVIAL] one-dimensional assembly and shape validation.
def test_assemble_metric_edges():
    out = assemble_metric(np.array([[4.0]]), np.zeros((0, 0)), 0.25)
    assert out.shape == (1, 1) and out[0, 0] == 1.0
    with pytest.raises(DimensionMismatch):
        assemble_metric(np.eye(3), np.eye(3), 0.5)


# [TRIVIAL] abelian towers: no curved level, everything stays at t = 1.
def test_certify_z3():
    report = certify_almost_flat(tower_of(catalog.abelian(3)),
                                 identity_seed(3), 1e-6)
    assert report.ts == (1.0, 1.0, 1.0)
    assert report.rounds == (0, 0, 0)
    assert report.curved_levels == ()
    assert report.sup_abs_K == 0.0
    assert report.diam_bound == pytest.approx(1.5, abs=1e-12)
    assert report.level_dims == (3, 2, 1)
    assert np.array_equal(report.metric_matrix, np.eye(3))


# [TRIVIAL] abelian tower with a non-identity seed metric stays flat.
def test_certify_abelian_spd_seed():
    seed = LeftInvariantMetric(matrix=np.array([[2.0, 0.5], [0.5, 1.0]]))
    report = certify_almost_flat(tower_of(catalog.abelian(2)), seed, 1e-9)
    assert report.ts == (1.0, 1.0)
    assert report.sup_abs_K == 0.0


# [TRIVIAL] the point tower is vacuously certified.
def test_certify_point():
    report = certify_almost_flat(tower_of(catalog.point()),
                                 identity_seed(0), 1.0)
    assert report.ts == ()
    assert report.sup_abs_K == 0.0 and report.diam_bound == 0.0


# [DERIVED] h3: sup|K^t| = 3t/4, so the accepted top t is within 10% of
# 4·eps/3; only the top level is curved.
def test_certify_h3():
    eps = 0.01
    report = certify_almost_flat(tower_of(catalog.heisenberg3()),
                                 identity_seed(3), eps)
    target = 4.0 * eps / 3.0
    assert abs(report.ts[0] - target) <= 0.1 * target
    assert report.ts[1:] == (1.0, 1.0)
    assert report.curved_levels == (3,)
    assert report.sup_abs_K <= eps
    assert report.sup_abs_K == pytest.approx(0.75 * report.ts[0], abs=1e-9)
    assert np.allclose(report.metric_matrix,
                       np.diag([1.0, 1.0, report.ts[0]]), atol=1e-12)
    assert report.diam_bound == pytest.approx(
        1.0 + 0.5 * np.sqrt(report.ts[0]), abs=1e-12)


# [DERIVED] h3 with a tilted seed metric still certifies (the lift basis
# absorbs the seed off-diagonal).
def test_certify_h3_tilted_seed():
    eps = 0.01
    report = certify_almost_flat(tower_of(catalog.heisenberg3()),
                                 LeftInvariantMetric(matrix=TILTED3), eps)
    assert report.sup_abs_K <= eps
    assert 0.0 < report.ts[0] < 1.0
    assert np.isfinite(report.diam_bound)


# [DERIVED] n4: two curved levels split the budget and both land under it.
def test_certify_n4():
    eps = 1e-3
    report = certify_almost_flat(tower_of(catalog.n4()), identity_seed(4), eps)
    assert report.curved_levels == (4, 3)
    assert report.sup_abs_K <= eps
    assert report.level_dims == (4, 3, 2, 1)
    t4, t3 = report.ts[0], report.ts[1]
    assert 0.0 < t4 < t3 < 1.0
    assert report.ts[2:] == (1.0, 1.0)
    assert np.isfinite(report.diam_bound)


# [DERIVED] h5: single curved level at the top.
def test_certify_h5():
    eps = 1e-2
    report = certify_almost_flat(tower_of(catalog.heisenberg5()),
                                 identity_seed(5), eps)
    assert report.curved_levels == (5,)
    assert report.sup_abs_K <= eps
    assert report.ts[1:] == (1.0,) * 4


# [TRIVIAL] refinement cap: zero rounds cannot accept any curved level.
def test_budget_not_met():
    with pytest.raises(BudgetNotMet):
        certify_almost_flat(tower_of(catalog.heisenberg3()),
                            identity_seed(3), 0.01, max_rounds=0)


# [TRIVIAL] argument validation.
def test_certify_argument_errors():
    tower = tower_of(catalog.heisenberg3())
    with pytest.raises(ValueError):
        certify_almost_flat(tower, identity_seed(3), 0.0)
    with pytest.raises(ValueError):
        certify_almost_flat(tower, identity_seed(3), 0.01, n_samples=0)
    with pytest.raises(DimensionMismatch):
        certify_almost_flat(tower, identity_seed(4), 0.01)


# [DERIVED] determinism: identical arguments give identical reports.
def test_certify_determinism():
    a = certify_almost_flat(tower_of(catalog.n4()), identity_seed(4), 1e-3,
                            seed=5, n_samples=512)
    b = certify_almost_flat(tower_of(catalog.n4()), identity_seed(4), 1e-3,
                            seed=5, n_samples=512)
    assert a.ts == b.ts
    assert a.sup_abs_K == b.sup_abs_K
    assert a.diam_bound == b.diam_bound
    assert np.array_equal(a.metric_matrix, b.metric_matrix)


# [TRIVIAL] summary fields are JSON-ready and complete.
def test_certificate_summary():
    report = certify_almost_flat(tower_of(catalog.heisenberg3()),
                                 identity_seed(3), 0.01, n_samples=512)
    summary = certificate_summary(report)
    assert set(summary) == {"eps", "seed", "sample_count", "ts", "level_dims",
                            "curved_levels", "rounds", "fiber_lengths",
                            "sup_abs_K", "diam_bound"}
    assert summary["ts"][0] == report.ts[0]
    assert isinstance(summary["ts"], list)
