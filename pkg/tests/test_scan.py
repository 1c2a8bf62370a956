"""Plane sampling, curvature-decomposition identities, and the decay scan.

Oracle key: [DERIVED] Heisenberg closed forms (sup|K^t| = 3t/4 for G = I,
vertical planes K^t = t/4), the independently computed two-sided identity
checks, and hand-evaluated diameter formulas; [TRIVIAL] abelian cases.
Identity defects are checked at 1e-9 (they come out near 1e-15), the plane
normalizations at 1e-12.
"""

import numpy as np
import pytest

from nilflat import catalog
from nilflat.errors import BoundViolated, DimensionMismatch
from nilflat.metric import LeftInvariantMetric, sectional_from_tensor
from nilflat.scan import (DecayReport, PlaneSample, SubmersionContext,
                          decomposition_check, diameter_bound, lemma_scan,
                          report_csv, report_summary, sample_plane,
                          spawn_generator, sup_abs_sectional)
from nilflat.submersion import build_split

H3 = catalog.heisenberg3()
N4 = catalog.n4()

TILTED3 = np.array([[1.0, 0.0, 0.3],
                    [0.0, 1.0, 0.0],
                    [0.3, 0.0, 1.0]])


def geometry(algebra, matrix=None):
    n = algebra.dim
    metric = (LeftInvariantMetric.identity(n) if matrix is None
              else LeftInvariantMetric(matrix=matrix))
    z = np.zeros(n)
    z[n - 1] = 1.0
    return metric, build_split(metric, z)


# [DERIVED] unit-disk normalization of every sample: x horizontal g^t-unit,
# c g^t-unit and g^t-orthogonal to x, and g(y,y) + t·g(u,u) = 1.
@pytest.mark.parametrize("t", [1.0, 0.1, 1e-4])
def test_plane_sample_invariants(t):
    n = 4
    gen = spawn_generator(3, 41)
    g_t = np.diag([1.0, 1.0, 1.0, t])
    for _ in range(50):
        s = sample_plane(gen, n, t)
        assert s.x[n - 1] == 0.0
        assert abs(s.x @ g_t @ s.x - 1.0) <= 1e-12
        assert abs(s.c @ g_t @ s.c - 1.0) <= 1e-12
        assert abs(s.x @ g_t @ s.c) <= 1e-12
        assert np.max(np.abs(s.c - (s.y + s.u))) == 0.0
        assert s.y[n - 1] == 0.0
        assert np.max(np.abs(s.u[:n - 1])) == 0.0
        assert abs(s.y @ s.y + t * (s.u @ s.u) - 1.0) <= 1e-12


# [DERIVED] the four decomposition identities on random planes; identity and
# non-diagonal metrics.
@pytest.mark.parametrize("algebra,matrix", [
    (H3, None), (H3, TILTED3), (N4, None),
], ids=["h3-identity", "h3-tilted", "n4-identity"])
@pytest.mark.parametrize("t", [1.0, 0.1, 0.01, 1e-4])
def test_decomposition_identities(algebra, matrix, t):
    metric, split = geometry(algebra, matrix)
    ctx = SubmersionContext(algebra, metric, split)
    gen = spawn_generator(5, 17)
    worst = 0.0
    for _ in range(100):
        sample = sample_plane(gen, algebra.dim, t)
        worst = max(worst, decomposition_check(algebra, metric, split, t,
                                               sample, context=ctx))
    assert worst <= 1e-9


# [TRIVIAL] abelian: every identity term is exactly zero.
def test_decomposition_abelian_exact():
    z3 = catalog.abelian(3)
    metric, split = geometry(z3)
    ctx = SubmersionContext(z3, metric, split)
    gen = spawn_generator(1, 2)
    for t in (1.0, 0.01):
        sample = sample_plane(gen, 3, t)
        assert decomposition_check(z3, metric, split, t, sample,
                                   context=ctx) == 0.0


# [DERIVED] vertical-plane law: for Y = 0 the sectional curvature is exactly
# the t²·g(A_XU, A_XU) term; h3 closed form gives K^t = t/4.
@pytest.mark.parametrize("t", [1.0, 0.01, 1e-4])
def test_vertical_plane_law(t):
    metric, split = geometry(H3)
    ctx = SubmersionContext(H3, metric, split)
    x = np.array([1.0, 0.0, 0.0])
    u = np.array([0.0, 0.0, 1.0 / np.sqrt(t)])
    sample = PlaneSample(x=x, c=u.copy(), y=np.zeros(3), u=u, t=t)
    assert decomposition_check(H3, metric, split, t, sample, context=ctx) <= 1e-10

    a_xu = np.einsum("fep,f,e->p", ctx.tensors.a, x, u, optimize=False)
    predicted = t * t * float(a_xu @ a_xu)
    gt, r_ambient = ctx.ambient_at(t)
    direct = sectional_from_tensor(r_ambient, gt, split.from_frame(x),
                                   split.from_frame(u))
    assert abs(direct - predicted) <= 1e-10
    assert abs(direct - 0.25 * t) <= 1e-10


# [DERIVED] polished sup over h3 planes finds the closed-form maximum 3/4.
def test_sup_abs_sectional_h3():
    metric, split = geometry(H3)
    ctx = SubmersionContext(H3, metric, split)
    r1 = ctx.frame_curvature(1.0)
    sup, index = sup_abs_sectional(r1, np.eye(3), 2, spawn_generator(0, 9), 500)
    assert sup == pytest.approx(0.75, abs=1e-12)
    assert 0 <= index < 500


# [DERIVED] h3 scan: sup|K^t| = 3t/4 at every t, flat base, unit exponent.
def test_lemma_scan_h3():
    metric, split = geometry(H3)
    grid = np.geomspace(1.0, 1e-6, 7)
    report = lemma_scan(H3, metric, split, grid, n_samples=2000, seed=0)
    assert report.base_sup_K == 0.0
    for t, sup, bound, diam in zip(report.t_grid, report.sup_abs_K,
                                   report.bounds, report.diam_bound):
        assert sup == pytest.approx(0.75 * t, abs=1e-9)
        assert sup <= bound
        assert diam == pytest.approx(0.5 * np.sqrt(t), abs=1e-12)
    assert report.exponent_fit == pytest.approx(1.0, abs=0.02)
    assert report.sample_count == 2000 and report.seed == 0


# [TRIVIAL] abelian scan: all zero, no decay to fit.
def test_lemma_scan_z3():
    z3 = catalog.abelian(3)
    metric, split = geometry(z3)
    report = lemma_scan(z3, metric, split, np.geomspace(1.0, 1e-6, 7),
                        n_samples=500, seed=0)
    assert report.base_sup_K == 0.0
    assert all(s == 0.0 for s in report.sup_abs_K)
    assert report.exponent_fit is None


# [DERIVED] n4 scan: base sup is the h3 maximum 3/4; excess decays with
# exponent >= 0.9.
def test_lemma_scan_n4():
    metric, split = geometry(N4)
    report = lemma_scan(N4, metric, split, np.geomspace(1e-1, 1e-5, 5),
                        n_samples=2000, seed=0)
    assert report.base_sup_K == pytest.approx(0.75, abs=1e-9)
    assert report.exponent_fit is not None and report.exponent_fit >= 0.9
    for sup, bound in zip(report.sup_abs_K, report.bounds):
        assert sup <= bound


# [TRIVIAL] grid validation.
def test_lemma_scan_grid_errors():
    metric, split = geometry(H3)
    with pytest.raises(ValueError):
        lemma_scan(H3, metric, split, [], 10, 0)
    with pytest.raises(ValueError):
        lemma_scan(H3, metric, split, [0.1, 1.0], 10, 0)
    with pytest.raises(ValueError):
        lemma_scan(H3, metric, split, [1.0, -0.1], 10, 0)
    with pytest.raises(ValueError):
        lemma_scan(H3, metric, split, [1.0], 0, 0)


# [DERIVED] outside the C-constant's validity domain (t <= 1) the asserted
# bound can fail; the violation is reported with the witnessing data.
def test_bound_violated_outside_domain():
    metric, split = geometry(H3)
    with pytest.raises(BoundViolated) as info:
        lemma_scan(H3, metric, split, [100.0], n_samples=500, seed=0)
    err = info.value
    assert err.t == 100.0
    assert err.value > err.bound
    assert err.sample_index >= 0


# [DERIVED] diameter formula: half fiber length at t = 1; three unit fibers
# at t = 1e-4 give 0.015; the bound converges to the base value as t -> 0.
def test_diameter_bound_values():
    assert diameter_bound([1.0], [1.0]) == pytest.approx(0.5, abs=1e-15)
    assert diameter_bound([1.0, 1.0, 1.0], [1e-4] * 3) == pytest.approx(0.015, abs=1e-15)
    base = 2.25
    assert diameter_bound([1.0, 1.0], [1e-30, 1e-30], base=base) == pytest.approx(base, abs=1e-12)
    with pytest.raises(DimensionMismatch):
        diameter_bound([1.0, 1.0], [0.1])
    with pytest.raises(ValueError):
        diameter_bound([1.0], [0.0])


# [DERIVED] reports: CSV shape/columns and summary fields.
def test_report_serialization():
    metric, split = geometry(H3)
    report = lemma_scan(H3, metric, split, np.geomspace(1.0, 0.01, 3),
                        n_samples=200, seed=7)
    csv_text = report_csv(report)
    lines = csv_text.splitlines()
    assert lines[0] == "t,sup_abs_K,base_sup_K,bound,diam_bound"
    assert len(lines) == 4
    assert csv_text.endswith("\n")
    first = lines[1].split(",")
    assert float(first[0]) == 1.0
    assert float(first[1]) == pytest.approx(0.75, abs=1e-9)
    summary = report_summary(report)
    assert set(summary) == {"C", "exponent_fit", "sample_count", "seed"}
    assert summary["seed"] == 7 and summary["sample_count"] == 200


# [DERIVED] determinism: identical seeds give identical reports, stream
# separation keeps different seeds independent.
def test_scan_determinism():
    metric, split = geometry(N4)
    grid = np.geomspace(1.0, 1e-3, 4)
    a = lemma_scan(N4, metric, split, grid, n_samples=300, seed=42)
    b = lemma_scan(N4, metric, split, grid, n_samples=300, seed=42)
    assert a.sup_abs_K == b.sup_abs_K
    assert a.base_sup_K == b.base_sup_K
    assert a.C == b.C
    assert a.exponent_fit == b.exponent_fit
    assert report_csv(a) == report_csv(b)
