"""Circle-bundle towers: peel a nilmanifold one central circle at a time,
rebuild total spaces from extension cocycles, and compare Euler classes.

Peeling: the adapted basis puts a primitive central vector at position n
(always e_n — see `pick_primitive_central`), the base is the quotient by
span(e_n) with the induced basis, and the extension class is the left-
invariant 2-form ω(x, y) = e_n-component of [x, y]. Extending by a skew,
closed, integral 2-form inverts the step on the nose, so tower round-trips
are exact structure-constant equalities.

Euler-class comparison is integral cocycle cohomology: ω1 and ω2 agree up to
coboundary iff δλ = ω1 − ω2 has an integer solution λ, where
δλ(x, y) = −λ([x, y]); this is an integer linear system solved by Smith
normal form, with an explicit λ witness or an obstruction certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import List, Mapping, Optional, Sequence, Tuple

from .algebra import (
    NilAlgebra,
    VecQ,
    algebra_center,
    basis_vec,
    lower_central_series,
    validate_algebra,
    vec_zero,
)
from .errors import (
    DimensionMismatch,
    NotClosed,
    NotIntegral,
    NotSkew,
    ValidationReport,
)
from .intlinalg import (
    clear_denominators,
    reduce_mod_lattice,
    saturate_lattice,
    solve_integer,
)


@dataclass(frozen=True)
class NilLattice:
    """A nilmanifold N/Γ: validated algebra + the integer-point lattice model.

    Validation at construction: `validate_algebra` (Jacobi, nilpotency class,
    adapted basis) plus integer structure constants. Integer constants are
    what keep every peel/extension/cocycle computation exactly integral; for
    class <= 2 they are moreover equivalent to the full closure certificate
    `coords.lattice_closed`. At class >= 3 the integer second-kind points are
    not literally closed under collection (BCH denominators appear), and the
    lattice is understood as the group generated by the basis one-parameter
    subgroups' integer points; no operation here multiplies deep group words,
    so all outputs stay exact.
    """

    algebra: NilAlgebra

    def __post_init__(self):
        validate_algebra(self.algebra)
        n = self.algebra.dim
        for i in range(n):
            for j in range(i + 1, n):
                for coeff in self.algebra.structure[i][j]:
                    if coeff.denominator != 1:
                        raise NotIntegral(
                            f"structure constant {coeff} of [e{i + 1},e{j + 1}] is not an "
                            "integer; the basis Z-span is not a lattice model")

    @property
    def dim(self) -> int:
        return self.algebra.dim


@dataclass(frozen=True)
class PeelChoice:
    """The chosen primitive central lattice vector z (R = span(z))."""

    z: Tuple[int, ...]


@dataclass(frozen=True)
class CentralCocycle:
    """Skew 2-form over the base basis; the extension/Euler class of a step."""

    omega: Tuple[Tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.omega)

    @staticmethod
    def from_entries(dim: int,
                     entries: Mapping[Tuple[int, int], object] = (),
                     ) -> "CentralCocycle":
        """Build from 1-based upper-triangular entries {(i, j): ω(e_i, e_j)}."""
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for (i, j), value in dict(entries).items():
            if not (1 <= i <= dim and 1 <= j <= dim and i != j):
                raise DimensionMismatch(
                    f"cocycle index ({i},{j}) out of range for dim {dim}")
            v = Fraction(value)
            m[i - 1][j - 1] += v
            m[j - 1][i - 1] -= v
        return CentralCocycle(omega=tuple(tuple(row) for row in m))

    def value(self, x: VecQ, y: VecQ) -> Fraction:
        """Bilinear evaluation ω(x, y)."""
        n = self.dim
        if len(x) != n or len(y) != n:
            raise DimensionMismatch(f"cocycle arguments must have length {n}")
        total = Fraction(0)
        for i in range(n):
            if x[i] == 0:
                continue
            row = self.omega[i]
            for j in range(n):
                if y[j] != 0 and row[j] != 0:
                    total += x[i] * row[j] * y[j]
        return total

    def upper_entries(self) -> List[Tuple[int, int, Fraction]]:
        """Nonzero entries (i, j, ω(e_i,e_j)) with 1-based i < j, sorted."""
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.omega[i][j] != 0:
                    out.append((i + 1, j + 1, self.omega[i][j]))
        return out


def check_skew(cocycle: CentralCocycle) -> ValidationReport:
    n = cocycle.dim
    for i in range(n):
        for j in range(n):
            if cocycle.omega[i][j] != -cocycle.omega[j][i]:
                return ValidationReport(
                    ok=False, check="skew",
                    message=f"omega(e{i + 1},e{j + 1}) != -omega(e{j + 1},e{i + 1})",
                    witness=(i + 1, j + 1))
    return ValidationReport(ok=True, check="skew")


def check_closed(algebra: NilAlgebra, cocycle: CentralCocycle) -> ValidationReport:
    """Chevalley–Eilenberg cocycle condition on all basis triples.

    The cyclic sum S(x,y,z) = ω([x,y],z) + ω([y,z],x) + ω([z,x],y) is
    alternating, so a violating triple is found as an unordered set; the
    reported orientation is the lexicographically first permutation whose
    leading term ω([x,y],z) is nonzero, which pins the defect on a single
    visible structure constant.
    """
    n = algebra.dim
    if cocycle.dim != n:
        raise DimensionMismatch(
            f"cocycle dim {cocycle.dim} does not match algebra dim {n}")

    def cyc(p: Tuple[int, int, int]) -> Fraction:
        x, y, z = (basis_vec(n, q) for q in p)
        return (cocycle.value(algebra.bracket(x, y), z)
                + cocycle.value(algebra.bracket(y, z), x)
                + cocycle.value(algebra.bracket(z, x), y))

    def leading(p: Tuple[int, int, int]) -> Fraction:
        x, y, z = (basis_vec(n, q) for q in p)
        return cocycle.value(algebra.bracket(x, y), z)

    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                s = cyc((a, b, c))
                if s == 0:
                    continue
                for p in permutations((a, b, c)):
                    if leading(p) != 0:
                        return ValidationReport(
                            ok=False, check="closed",
                            message=("cocycle condition fails on "
                                     f"(e{p[0] + 1},e{p[1] + 1},e{p[2] + 1})"),
                            witness=(p[0] + 1, p[1] + 1, p[2] + 1),
                            defect=cyc(p))
                # unreachable: a nonzero alternating sum has a nonzero term
    return ValidationReport(ok=True, check="closed")


def check_integral(cocycle: CentralCocycle) -> ValidationReport:
    """All entries must be integers for the extension lattice to stay a model."""
    for i in range(cocycle.dim):
        for j in range(i + 1, cocycle.dim):
            if cocycle.omega[i][j].denominator != 1:
                return ValidationReport(
                    ok=False, check="integral",
                    message=(f"omega(e{i + 1},e{j + 1}) = {cocycle.omega[i][j]} "
                             "is not an integer"),
                    witness=(i + 1, j + 1), defect=cocycle.omega[i][j])
    return ValidationReport(ok=True, check="integral")


@dataclass(frozen=True)
class TowerStep:
    """One circle-bundle step: total space, base, central direction, class."""

    total: NilLattice
    base: NilLattice
    choice: PeelChoice
    cocycle: CentralCocycle


@dataclass(frozen=True)
class BundleTower:
    """Peeling of a lattice down to the point, top-down (largest first)."""

    steps: Tuple[TowerStep, ...]


def group_center(lattice: NilLattice) -> List[Tuple[int, ...]]:
    """HNF basis of (center of the algebra) ∩ (integer lattice), primitive rows."""
    n = lattice.dim
    center = algebra_center(lattice.algebra)
    if not center:
        return []
    int_rows = [clear_denominators(v) for v in center]
    return [tuple(row) for row in saturate_lattice(int_rows, n)]


def pick_primitive_central(lattice: NilLattice) -> PeelChoice:
    """Deterministic central choice: last Hermite-basis vector of the center.

    For a validated adapted nilpotent algebra e_n is always central and the
    Hermite basis of the saturated center therefore always ends in exactly
    e_n, so the choice is e_n; `peel_step` asserts this.
    """
    if lattice.dim < 1:
        raise DimensionMismatch("the point has no central circle to peel")
    basis = group_center(lattice)
    return PeelChoice(z=basis[-1])


def _algebra_with_computed_class(dim: int, structure: List[List[VecQ]]) -> NilAlgebra:
    if dim == 0:
        return NilAlgebra(dim=0, declared_class=0, structure=())
    trial = NilAlgebra(dim=dim, declared_class=1,
                       structure=tuple(tuple(row) for row in structure))
    _, cls = lower_central_series(trial)
    return NilAlgebra(dim=dim, declared_class=cls, structure=trial.structure)


def peel_step(lattice: NilLattice) -> TowerStep:
    """Quotient by the canonical central circle; emit base + Euler cocycle."""
    n = lattice.dim
    choice = pick_primitive_central(lattice)
    assert choice.z == tuple(0 if i < n - 1 else 1 for i in range(n)), \
        "adapted nilpotent bases always peel at e_n"
    m = n - 1
    base_structure = [[lattice.algebra.structure[i][j][:m] for j in range(m)]
                      for i in range(m)]
    base = NilLattice(algebra=_algebra_with_computed_class(m, base_structure))
    entries = {}
    for i in range(m):
        for j in range(i + 1, m):
            top = lattice.algebra.structure[i][j][m]
            if top != 0:
                entries[(i + 1, j + 1)] = top
    cocycle = CentralCocycle.from_entries(m, entries)
    return TowerStep(total=lattice, base=base, choice=choice, cocycle=cocycle)


def peel_tower(lattice: NilLattice) -> BundleTower:
    """Iterate peel_step down to the point; exactly dim steps."""
    steps = []
    current = lattice
    while current.dim > 0:
        step = peel_step(current)
        steps.append(step)
        current = step.base
    return BundleTower(steps=tuple(steps))


def extend_by_cocycle(base: NilLattice, cocycle: CentralCocycle) -> NilLattice:
    """Central extension: new central e_{n+1}, brackets gain ω(e_i,e_j)·e_{n+1}.

    Validates the cocycle (skew, closed, integral) before building; the
    result peels back to (base, cocycle) on the nose.
    """
    n = base.dim
    if cocycle.dim != n:
        raise DimensionMismatch(
            f"cocycle dim {cocycle.dim} does not match base dim {n}")
    _require_valid_cocycle(base, cocycle)
    dim = n + 1
    structure = [[vec_zero(dim) for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        for j in range(i + 1, n):
            structure[i][j] = base.algebra.structure[i][j] + (cocycle.omega[i][j],)
    return NilLattice(algebra=_algebra_with_computed_class(dim, structure))


@dataclass(frozen=True)
class CohomologyVerdict:
    """Outcome of the Euler-class comparison.

    On success `sign` records which branch solved: +1 for δλ = ω1 − ω2,
    -1 for δλ = ω1 + ω2 (the up-to-sign branch); `witness` is the integral
    1-cochain λ in basis-dual coordinates, canonically reduced modulo the
    kernel lattice. On failure `obstruction` is a divisibility or
    inconsistency certificate from the Smith-normal-form solve.
    """

    cohomologous: bool
    sign: Optional[int] = None
    witness: Optional[Tuple[int, ...]] = None
    obstruction: Optional[str] = None


def _coboundary_system(base: NilLattice) -> Tuple[List[List[int]], List[Tuple[int, int]]]:
    """Rows of the integer system λ ↦ (−λ([e_i,e_j]))_{i<j}, plus pair index."""
    n = base.dim
    rows, pairs = [], []
    for i in range(n):
        for j in range(i + 1, n):
            entry = base.algebra.structure[i][j]
            rows.append([-int(entry[k]) for k in range(n)])
            pairs.append((i + 1, j + 1))
    return rows, pairs


def _require_valid_cocycle(base: NilLattice, w: CentralCocycle) -> None:
    report = check_skew(w)
    if not report:
        raise NotSkew(report.message)
    report = check_closed(base.algebra, w)
    if not report:
        raise NotClosed(report.message, witness=report.witness, defect=report.defect)
    report = check_integral(w)
    if not report:
        raise NotIntegral(report.message)


def cocycles_cohomologous(base: NilLattice, w1: CentralCocycle, w2: CentralCocycle,
                          up_to_sign: bool = False) -> CohomologyVerdict:
    """Decide δλ = w1 − w2 over the integers (optionally also w1 + w2)."""
    n = base.dim
    if w1.dim != n or w2.dim != n:
        raise DimensionMismatch("cocycle dims do not match the base")
    _require_valid_cocycle(base, w1)
    _require_valid_cocycle(base, w2)
    rows, pairs = _coboundary_system(base)

    def attempt(target_sign: int) -> CohomologyVerdict:
        # target_sign=+1 solves δλ = w1 − w2; target_sign=−1 solves δλ = w1 + w2
        b = [int(w1.omega[i - 1][j - 1] - target_sign * w2.omega[i - 1][j - 1])
             for (i, j) in pairs]
        x, obstruction, kernel = solve_integer(rows, b)
        if x is None:
            return CohomologyVerdict(cohomologous=False, obstruction=obstruction)
        x = reduce_mod_lattice(x, kernel)
        for row, rhs in zip(rows, b):
            assert sum(r * v for r, v in zip(row, x)) == rhs
        return CohomologyVerdict(cohomologous=True, sign=target_sign,
                                 witness=tuple(x))

    first = attempt(1)
    if first.cohomologous or not up_to_sign:
        return first
    second = attempt(-1)
    if second.cohomologous:
        return second
    return CohomologyVerdict(
        cohomologous=False,
        obstruction=f"+: {first.obstruction}; -: {second.obstruction}")


def extension_cocycle_value(base: NilLattice, cocycle: CentralCocycle,
                            g: Sequence[int], h: Sequence[int]) -> Fraction:
    """Group-level section-defect 2-cocycle, exposed for documentation.

    g and h are integer second-kind words on the base. Using the section
    s(a_1..a_n) = exp(a_1 e_1)···exp(a_n e_n)·exp(0·z) into the extension,
    returns the central exponent of s(g)s(h)s(g·h)^{-1}. Its antisymmetrised
    part recovers the left-invariant class ω on generators.
    """
    from .bch import bch_inverse, bch_product
    from .coords import MalcevWord, first_to_second, second_to_first

    total = extend_by_cocycle(base, cocycle)
    algebra = total.algebra
    n = base.dim

    def lift(word: Sequence[int]) -> VecQ:
        exps = tuple(Fraction(int(a)) for a in word) + (Fraction(0),)
        return second_to_first(algebra, MalcevWord(exps))

    prod = bch_product(algebra, lift(g), lift(h))
    word = first_to_second(algebra, prod)
    gh_base = word.exponents[:n]
    defect = bch_product(algebra, prod, bch_inverse(lift(gh_base)))
    assert all(v == 0 for v in defect[:n])
    return defect[n]
