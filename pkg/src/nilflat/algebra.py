"""Rational nilpotent Lie algebras given by structure constants.

A `NilAlgebra` stores the brackets [e_i, e_j] for i < j on a fixed basis
e_1, ..., e_n; antisymmetry supplies the rest. All arithmetic is exact
(`fractions.Fraction`), so identities are tested as equalities.

Construction validates only shape (dimensions, index ranges). Mathematical
invariants — Jacobi, adaptedness, nilpotency class — are checked by the
report-valued `check_*` functions and enforced wholesale by
`validate_algebra`; this keeps deliberately broken algebras constructible
as negative controls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Tuple, Union

from .errors import (
    BasisNotAdapted,
    DimensionMismatch,
    JacobiViolated,
    NotNilpotent,
    ValidationReport,
)
from .intlinalg import rational_nullspace, rational_row_basis

VecQ = Tuple[Fraction, ...]
RationalLike = Union[int, Fraction, str]


def vec(values: Iterable[RationalLike]) -> VecQ:
    return tuple(Fraction(v) for v in values)


def vec_zero(n: int) -> VecQ:
    return (Fraction(0),) * n


def vec_add(x: VecQ, y: VecQ) -> VecQ:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: VecQ, y: VecQ) -> VecQ:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: RationalLike, x: VecQ) -> VecQ:
    c = Fraction(c)
    return tuple(c * a for a in x)


def basis_vec(n: int, k: int) -> VecQ:
    """Standard basis vector e_{k+1} (0-based index k) in dimension n."""
    return tuple(Fraction(1) if i == k else Fraction(0) for i in range(n))


def is_zero(x: VecQ) -> bool:
    return all(v == 0 for v in x)


@dataclass(frozen=True)
class NilAlgebra:
    """Nilpotent Lie algebra over Q with a distinguished (ordered) basis.

    `structure[i][j]` holds [e_{i+1}, e_{j+1}] as a VecQ for 0 <= i < j < dim;
    entries with i >= j are zero placeholders and never read directly.
    `declared_class` is the claimed nilpotency class (0 only for dim 0).
    """

    dim: int
    declared_class: int
    structure: Tuple[Tuple[VecQ, ...], ...]

    def __post_init__(self):
        if self.dim < 0:
            raise DimensionMismatch(f"dim must be nonnegative, got {self.dim}")
        if self.dim == 0:
            if self.declared_class != 0:
                raise DimensionMismatch("the point algebra has class 0")
        elif self.declared_class < 1:
            raise DimensionMismatch(
                f"declared_class must be positive for dim {self.dim}")
        if len(self.structure) != self.dim:
            raise DimensionMismatch("structure table has wrong row count")
        for row in self.structure:
            if len(row) != self.dim:
                raise DimensionMismatch("structure table has wrong column count")
            for entry in row:
                if len(entry) != self.dim:
                    raise DimensionMismatch("structure entry has wrong length")

    @staticmethod
    def from_brackets(dim: int,
                      declared_class: int,
                      brackets: Mapping[Tuple[int, int], Mapping[int, RationalLike]],
                      ) -> "NilAlgebra":
        """Build from 1-based sparse data: {(i, j): {k: coefficient}} for i < j."""
        table: List[List[VecQ]] = [[vec_zero(dim) for _ in range(dim)] for _ in range(dim)]
        for (i, j), terms in brackets.items():
            if not (1 <= i < j <= dim):
                raise DimensionMismatch(
                    f"bracket index ({i},{j}) out of range for dim {dim}; need 1 <= i < j <= n")
            entry = [Fraction(0)] * dim
            for k, coeff in terms.items():
                if not (1 <= k <= dim):
                    raise DimensionMismatch(f"component index {k} out of range for dim {dim}")
                entry[k - 1] += Fraction(coeff)
            table[i - 1][j - 1] = tuple(entry)
        return NilAlgebra(dim=dim, declared_class=declared_class,
                          structure=tuple(tuple(row) for row in table))

    def basis_bracket(self, i: int, j: int) -> VecQ:
        """[e_{i+1}, e_{j+1}] for 0-based i, j, via stored data and antisymmetry."""
        if i == j:
            return vec_zero(self.dim)
        if i < j:
            return self.structure[i][j]
        return vec_scale(-1, self.structure[j][i])

    def bracket(self, x: VecQ, y: VecQ) -> VecQ:
        """Bilinear extension [x, y]."""
        n = self.dim
        if len(x) != n or len(y) != n:
            raise DimensionMismatch(
                f"bracket arguments must have length {n}, got {len(x)} and {len(y)}")
        out = [Fraction(0)] * n
        for i in range(n):
            if x[i] == 0 and y[i] == 0:
                continue
            for j in range(i + 1, n):
                c = x[i] * y[j] - x[j] * y[i]
                if c == 0:
                    continue
                entry = self.structure[i][j]
                for k in range(n):
                    if entry[k]:
                        out[k] += c * entry[k]
        return tuple(out)


def check_jacobi(algebra: NilAlgebra) -> ValidationReport:
    """Jacobi identity on all basis triples; first violation reported.

    Convention: J(x,y,z) = [x,[y,z]] + [y,[z,x]] + [z,[x,y]].
    """
    n = algebra.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ei, ej, ek = basis_vec(n, i), basis_vec(n, j), basis_vec(n, k)
                defect = vec_add(
                    vec_add(algebra.bracket(ei, algebra.bracket(ej, ek)),
                            algebra.bracket(ej, algebra.bracket(ek, ei))),
                    algebra.bracket(ek, algebra.bracket(ei, ej)))
                if not is_zero(defect):
                    return ValidationReport(
                        ok=False, check="jacobi",
                        message=(f"Jacobi fails on (e{i + 1},e{j + 1},e{k + 1})"),
                        witness=(i + 1, j + 1, k + 1), defect=defect)
    return ValidationReport(ok=True, check="jacobi")


def check_adapted(algebra: NilAlgebra) -> ValidationReport:
    """Adaptedness of the basis: span(e_k,...,e_n) is an ideal for every k.

    Equivalent on pairs: [e_i, e_j] lies in span(e_j,...,e_n) for all i < j.
    """
    n = algebra.dim
    for i in range(n):
        for j in range(i + 1, n):
            entry = algebra.structure[i][j]
            for m in range(j):
                if entry[m] != 0:
                    return ValidationReport(
                        ok=False, check="adapted",
                        message=(f"[e{i + 1},e{j + 1}] has a nonzero e{m + 1} component, "
                                 f"so span(e{j + 1},...,e{n}) is not an ideal"),
                        witness=(i + 1, j + 1), defect=entry)
    return ValidationReport(ok=True, check="adapted")


def lower_central_series(algebra: NilAlgebra) -> Tuple[List[List[VecQ]], int]:
    """Chain g = g_1 ⊇ [g, g_1] ⊇ [g, g_2] ⊇ ... ⊇ 0 and the nilpotency class.

    Returns (chain, class) where chain[k] is an echelon basis of g_{k+1} and
    class = len(chain) - 1. Raises NotNilpotent if the chain stabilizes at a
    nonzero subspace.
    """
    n = algebra.dim
    if n == 0:
        return [[]], 0
    chain: List[List[VecQ]] = [[basis_vec(n, i) for i in range(n)]]
    while True:
        current = chain[-1]
        if not current:
            break
        products = []
        for i in range(n):
            ei = basis_vec(n, i)
            for v in current:
                w = algebra.bracket(ei, v)
                if not is_zero(w):
                    products.append(list(w))
        nxt = [tuple(row) for row in rational_row_basis(products, n)]
        if len(nxt) >= len(current):
            raise NotNilpotent(
                f"lower central series stabilizes at dimension {len(current)}")
        chain.append(nxt)
    return chain, len(chain) - 1


def check_class(algebra: NilAlgebra) -> ValidationReport:
    """Nilpotency plus agreement of the computed class with declared_class."""
    try:
        _, cls = lower_central_series(algebra)
    except NotNilpotent as exc:
        return ValidationReport(ok=False, check="class", message=str(exc))
    if cls != algebra.declared_class:
        return ValidationReport(
            ok=False, check="class",
            message=f"computed class {cls} differs from declared {algebra.declared_class}")
    return ValidationReport(ok=True, check="class")


def algebra_center(algebra: NilAlgebra) -> List[VecQ]:
    """Echelon basis of {x : [x, e_j] = 0 for all j} over Q."""
    n = algebra.dim
    if n == 0:
        return []
    rows = []
    for j in range(n):
        # component m of [x, e_j] = sum_i x_i [e_i, e_j]_m
        cols = [algebra.basis_bracket(i, j) for i in range(n)]
        for m in range(n):
            row = [cols[i][m] for i in range(n)]
            if any(v != 0 for v in row):
                rows.append(row)
    if not rows:
        return [basis_vec(n, i) for i in range(n)]
    return [tuple(v) for v in rational_nullspace(rows, n)]


def validate_algebra(algebra: NilAlgebra) -> None:
    """Raise on the first failed mathematical invariant (shape already holds).

    Order: Jacobi, then nilpotency/class (so so(3)-type input is reported as
    NotNilpotent rather than merely non-adapted), then adaptedness.
    """
    report = check_jacobi(algebra)
    if not report:
        raise JacobiViolated(report.message, witness=report.witness, defect=report.defect)
    report = check_class(algebra)
    if not report:
        raise NotNilpotent(report.message)
    report = check_adapted(algebra)
    if not report:
        raise BasisNotAdapted(report.message)
