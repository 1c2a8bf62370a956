"""Left-invariant metrics: Koszul connection, curvature, sectional curvature.

Everything is evaluated at the identity in a left-invariant frame, where the
geometry of a left-invariant metric is encoded by the structure constants
C[i,j,k] ([e_i, e_j] = Σ_k C[i,j,k] e_k) and the Gram matrix G:

    Koszul   2⟨∇_X Y, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩
    R(X,Y)Z  = ∇_{[X,Y]}Z − ∇_X ∇_Y Z + ∇_Y ∇_X Z
    K(v,w)   = ⟨R(v,w)v, w⟩ / (|v|²|w|² − ⟨v,w⟩²)

The curvature sign convention is fixed so the Heisenberg metric G = I has
K(e1,e2) = −3/4 and K(e1,e3) = +1/4.

All dense algebra uses np.einsum with optimize=False: contractions stay in
numpy's own deterministic loops, so results are byte-identical regardless of
BLAS threading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import NilAlgebra
from .errors import DegeneratePlane, DimensionMismatch, NotPositiveDefinite

TOL_IDENTITY = 1e-12   # connection/curvature identities
TOL_ORACLE = 1e-9      # agreement with independent oracles
TOL_INVARIANCE = 1e-10 # basis-invariance checks
TOL_GRAM = 1e-14       # degenerate-plane rejection threshold


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class LeftInvariantMetric:
    """Symmetric positive-definite Gram matrix on the algebra basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"metric must be square, got shape {m.shape}")
        if m.size and not np.allclose(m, m.T, atol=TOL_IDENTITY, rtol=0.0):
            raise NotPositiveDefinite("metric matrix is not symmetric")
        sym = 0.5 * (m + m.T)
        if m.size:
            try:
                np.linalg.cholesky(sym)
            except np.linalg.LinAlgError:
                raise NotPositiveDefinite("metric matrix is not positive definite")
        object.__setattr__(self, "matrix", _as_readonly(sym))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def identity(n: int) -> "LeftInvariantMetric":
        return LeftInvariantMetric(matrix=np.eye(n))


def structure_array(algebra: NilAlgebra) -> np.ndarray:
    """Full antisymmetric structure tensor C[i,j,k] as float64."""
    n = algebra.dim
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            entry = algebra.structure[i][j]
            for k in range(n):
                v = float(entry[k])
                c[i, j, k] = v
                c[j, i, k] = -v
    return c


def connection_from_structure(c: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Koszul connection Γ[i,j,k] (∇_{e_i} e_j = Σ_k Γ[i,j,k] e_k)."""
    # B[i,j,l] = ⟨[e_i,e_j], e_l⟩
    b = np.einsum("ijk,kl->ijl", c, g, optimize=False)
    # 2⟨∇_i j, e_l⟩ = B[i,j,l] − B[j,l,i] + B[l,i,j]
    rhs = b - np.transpose(b, (2, 0, 1)) + np.transpose(b, (1, 2, 0))
    return 0.5 * np.einsum("ijl,lk->ijk", rhs, np.linalg.inv(g), optimize=False)


def curvature_from_structure(c: np.ndarray, g: np.ndarray,
                             gamma: Optional[np.ndarray] = None) -> np.ndarray:
    """Curvature R4[i,j,k,l] = ⟨R(e_i,e_j)e_k, e_l⟩ (convention above)."""
    if gamma is None:
        gamma = connection_from_structure(c, g)
    # ∇_{[e_i,e_j]} e_k
    term_bracket = np.einsum("ijp,pkm->ijkm", c, gamma, optimize=False)
    # ∇_{e_i} ∇_{e_j} e_k
    term_second = np.einsum("jkp,ipm->ijkm", gamma, gamma, optimize=False)
    rm = term_bracket - term_second + np.transpose(term_second, (1, 0, 2, 3))
    return np.einsum("ijkm,ml->ijkl", rm, g, optimize=False)


def connection_coeffs(algebra: NilAlgebra, metric: LeftInvariantMetric) -> np.ndarray:
    if metric.dim != algebra.dim:
        raise DimensionMismatch(
            f"metric dim {metric.dim} does not match algebra dim {algebra.dim}")
    return connection_from_structure(structure_array(algebra), metric.matrix)


def curvature_tensor(algebra: NilAlgebra, metric: LeftInvariantMetric) -> np.ndarray:
    if metric.dim != algebra.dim:
        raise DimensionMismatch(
            f"metric dim {metric.dim} does not match algebra dim {algebra.dim}")
    return curvature_from_structure(structure_array(algebra), metric.matrix)


def sectional_from_tensor(r4: np.ndarray, g: np.ndarray,
                          v: np.ndarray, w: np.ndarray) -> float:
    """K of span(v, w) given a precomputed curvature tensor."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    gv, gw = g @ v, g @ w
    gram = (v @ gv) * (w @ gw) - (v @ gw) ** 2
    if gram < TOL_GRAM:
        raise DegeneratePlane(f"plane Gram determinant {gram:.3e} below tolerance")
    num = np.einsum("ijkl,i,j,k,l->", r4, v, w, v, w, optimize=False)
    return float(num / gram)


def sectional_curvature(algebra: NilAlgebra, metric: LeftInvariantMetric,
                        v: Sequence[float], w: Sequence[float]) -> float:
    """K(span(v,w)) = ⟨R(v,w)v,w⟩ / (|v|²|w|² − ⟨v,w⟩²)."""
    r4 = curvature_tensor(algebra, metric)
    return sectional_from_tensor(r4, metric.matrix,
                                 np.asarray(v, dtype=np.float64),
                                 np.asarray(w, dtype=np.float64))
