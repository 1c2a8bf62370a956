"""Riemannian submersion data for a central circle direction.

Collapsing a central direction z of a nilpotent algebra defines a Riemannian
submersion onto the quotient algebra.  This module builds:

  * SubmersionSplit — a G-orthonormal frame adapted to the splitting
    (horizontal vectors first, the normalized vertical direction last);
  * the canonical variation G^t, which rescales the vertical direction by t
    while keeping the horizontal distribution and base metric fixed;
  * the O'Neill invariants A, T and the covariant derivative DA of A,
    expressed in the split frame.

Because z is central and the metric is left-invariant, the fibers are totally
geodesic (T ≡ 0); the checks here verify that numerically rather than assume
it.  All tensors live in split-frame coordinates, where the base metric is the
identity and G^t is diag(1, …, 1, t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .algebra import NilAlgebra
from .errors import DimensionMismatch, NotPositiveDefinite
from .metric import (
    TOL_GRAM,
    LeftInvariantMetric,
    connection_from_structure,
    curvature_from_structure,
    structure_array,
)


@dataclass(frozen=True, eq=False)
class SubmersionSplit:
    """G-orthonormal frame adapted to a central direction z.

    ``frame`` has the frame vectors as columns: columns 0..m-1 span the
    horizontal distribution (the G-orthogonal complement of z) and column m
    is z normalized to unit G-length.  By construction frameᵀ G frame = I.
    """

    z: np.ndarray
    frame: np.ndarray
    metric: LeftInvariantMetric

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    @property
    def horizontal_dim(self) -> int:
        return self.dim - 1

    def to_frame(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of an ambient vector in the split frame."""
        return np.linalg.solve(self.frame, np.asarray(v, dtype=np.float64))

    def from_frame(self, v: np.ndarray) -> np.ndarray:
        return self.frame @ np.asarray(v, dtype=np.float64)


def build_split(metric: LeftInvariantMetric, z: Sequence[float]) -> SubmersionSplit:
    """G-orthonormalized frame with the unit vertical direction last.

    The horizontal frame comes from G-Gram-Schmidt applied to the standard
    basis vectors with their vertical components projected out; the basis
    vector most parallel to z is dropped.  The procedure is deterministic.
    """
    g = metric.matrix
    n = metric.dim
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (n,):
        raise DimensionMismatch(f"z has shape {z.shape}, expected ({n},)")
    znorm2 = float(z @ g @ z)
    if znorm2 <= TOL_GRAM:
        raise NotPositiveDefinite("central direction has vanishing length")
    u = z / np.sqrt(znorm2)

    columns = []
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        v = v - (v @ g @ u) * u
        for h in columns:
            v = v - (v @ g @ h) * h
        norm2 = float(v @ g @ v)
        if norm2 > 1e-10:
            columns.append(v / np.sqrt(norm2))
    if len(columns) != n - 1:
        raise DimensionMismatch(
            f"failed to build horizontal frame: got {len(columns)} of {n - 1}")
    frame = np.stack(columns + [u], axis=1)
    return SubmersionSplit(z=np.array(z), frame=frame, metric=metric)


@dataclass(frozen=True, eq=False)
class CanonicalVariation:
    """Metric G^t: vertical direction rescaled by t, horizontal part fixed."""

    base: LeftInvariantMetric
    split: SubmersionSplit
    t: float
    metric: LeftInvariantMetric

    @property
    def matrix(self) -> np.ndarray:
        return self.metric.matrix


def canonical_variation(metric: LeftInvariantMetric, z: Sequence[float],
                        t: float) -> CanonicalVariation:
    """G^t = G + (t−1)·(Gz)(Gz)ᵀ/⟨z,z⟩; requires t > 0."""
    if t <= 0.0:
        raise ValueError(f"canonical variation requires t > 0, got {t}")
    split = build_split(metric, z)
    g = metric.matrix
    zv = split.z
    gz = g @ zv
    gt = g + (t - 1.0) * np.outer(gz, gz) / float(zv @ gz)
    return CanonicalVariation(base=metric, split=split, t=t,
                              metric=LeftInvariantMetric(matrix=gt))


def frame_structure(algebra: NilAlgebra, split: SubmersionSplit) -> np.ndarray:
    """Structure constants of the bracket in split-frame coordinates."""
    c = structure_array(algebra)
    f = split.frame
    f_inv = np.linalg.inv(f)
    # [F_a, F_b] = Σ C[i,j,k] F_ia F_jb e_k; e_k has frame coordinates
    # F⁻¹[:, k], so the component index contracts F⁻¹[c, k].
    return np.einsum("ia,jb,ijk,ck->abc", f, f, c, f_inv, optimize=False)


def frame_metric(matrix: np.ndarray, split: SubmersionSplit) -> np.ndarray:
    """Gram matrix of an ambient metric in split-frame coordinates."""
    f = split.frame
    return f.T @ matrix @ f


@dataclass(frozen=True, eq=False)
class OneillTensors:
    """O'Neill invariants in split-frame coordinates.

    ``a`` and ``t_tensor`` are (n,n,n): a[x, e, :] are the frame components
    of A_X E (first slot of A restricted to horizontal directions, of T to
    vertical ones).  ``da`` is (n,n,n,n): da[e, x, y, :] = (D_E A)_X Y, the
    covariant derivative of A as a (1,2)-tensor for the same metric.
    """

    split: SubmersionSplit
    t: float
    a: np.ndarray
    t_tensor: np.ndarray
    da: np.ndarray


def _projectors(n: int):
    ph = np.eye(n)
    ph[n - 1, n - 1] = 0.0
    pv = np.zeros((n, n))
    pv[n - 1, n - 1] = 1.0
    return ph, pv


def oneill_tensors(algebra: NilAlgebra, metric_matrix: Union[np.ndarray, LeftInvariantMetric],
                   split: SubmersionSplit, t: float = 1.0) -> OneillTensors:
    """A, T and DA of the submersion for the given ambient metric.

    ``metric_matrix`` is the ambient Gram matrix (e.g. G or G^t); tensors are
    returned in the split frame of G.  Slots of A and T follow O'Neill:

        A_X E = H ∇_{HX} (VE) + V ∇_{HX} (HE)
        T_U E = H ∇_{VU} (VE) + V ∇_{VU} (HE)
    """
    if isinstance(metric_matrix, LeftInvariantMetric):
        metric_matrix = metric_matrix.matrix
    n = algebra.dim
    if metric_matrix.shape != (n, n):
        raise DimensionMismatch(
            f"metric shape {metric_matrix.shape} does not match algebra dim {n}")
    c_hat = frame_structure(algebra, split)
    g_hat = frame_metric(metric_matrix, split)
    gamma = connection_from_structure(c_hat, g_hat)
    ph, pv = _projectors(n)

    a = np.zeros((n, n, n))
    t_tensor = np.zeros((n, n, n))
    for first in range(n):
        for second in range(n):
            nab = gamma[first, second, :]
            h_part = nab @ ph
            v_part = nab @ pv
            if first < n - 1:  # horizontal first slot → A
                if second < n - 1:
                    a[first, second, :] = v_part
                else:
                    a[first, second, :] = h_part
            else:              # vertical first slot → T
                if second < n - 1:
                    t_tensor[first, second, :] = v_part
                else:
                    t_tensor[first, second, :] = h_part

    # (D_E A)_X Y = ∇_E (A_X Y) − A_{∇_E X} Y − A_X (∇_E Y), with the frame
    # fields left-invariant so ∇_E applied to a constant-component field is
    # contraction with Γ.
    da = (np.einsum("xym,epm->exyp", a, gamma, optimize=False)
          - np.einsum("exm,myp->exyp", gamma, a, optimize=False)
          - np.einsum("eym,xmp->exyp", gamma, a, optimize=False))
    return OneillTensors(split=split, t=t, a=a, t_tensor=t_tensor, da=da)


def base_geometry(algebra: NilAlgebra, split: SubmersionSplit):
    """Quotient structure constants and curvature in the horizontal frame.

    The horizontal frame pushes forward to an orthonormal frame of the base,
    so the base metric is the identity and the base bracket is the horizontal
    block of the frame structure constants.
    """
    m = split.horizontal_dim
    c_hat = frame_structure(algebra, split)
    c_base = c_hat[:m, :m, :m].copy()
    g_base = np.eye(m)
    r_base = curvature_from_structure(c_base, g_base)
    return c_base, g_base, r_base
