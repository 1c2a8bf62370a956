"""Standard test-bench algebras.

All constructors return `NilAlgebra` values on adapted bases with integer
structure constants (except the deliberately broken negative controls, which
exist to exercise the validators).
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import NilAlgebra


def point() -> NilAlgebra:
    """The zero-dimensional algebra (base of every tower)."""
    return NilAlgebra.from_brackets(0, 0, {})


def abelian(n: int) -> NilAlgebra:
    """R^n with all brackets zero (lattice Z^n); class 1."""
    if n == 0:
        return point()
    return NilAlgebra.from_brackets(n, 1, {})


def heisenberg3() -> NilAlgebra:
    """h3: [e1,e2] = e3; the integer Heisenberg lattice; class 2."""
    return NilAlgebra.from_brackets(3, 2, {(1, 2): {3: 1}})


def heisenberg5() -> NilAlgebra:
    """h5: [e1,e2] = e5, [e3,e4] = e5; class 2."""
    return NilAlgebra.from_brackets(5, 2, {(1, 2): {5: 1}, (3, 4): {5: 1}})


def filiform(n: int) -> NilAlgebra:
    """L_n: [e1,e_k] = e_{k+1} for 2 <= k < n; maximal class n-1.

    filiform(4) is the standard n4 ([e1,e2]=e3, [e1,e3]=e4).
    """
    if n < 3:
        raise ValueError("filiform algebras need dimension >= 3")
    brackets = {(1, k): {k + 1: 1} for k in range(2, n)}
    return NilAlgebra.from_brackets(n, n - 1, brackets)


def n4() -> NilAlgebra:
    """The 4-dimensional filiform algebra; class 3."""
    return filiform(4)


def h3_times_z() -> NilAlgebra:
    """h3 x Z: Heisenberg with an extra central direction e4; class 2."""
    return NilAlgebra.from_brackets(4, 2, {(1, 2): {3: 1}})


def so3_like() -> NilAlgebra:
    """Negative control: so(3) structure constants — not nilpotent.

    Constructible (shape-valid) but rejected by lower_central_series.
    """
    return NilAlgebra.from_brackets(
        3, 2, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {2: -1}})


def jacobi_violator() -> NilAlgebra:
    """Negative control: [e1,e2] = e3, [e1,e3] = e1 breaks Jacobi at (e1,e2,e3)."""
    return NilAlgebra.from_brackets(3, 2, {(1, 2): {3: 1}, (1, 3): {1: 1}})


def heisenberg3_scaled() -> NilAlgebra:
    """Negative control for lattice closure: [e1,e2] = e3/2.

    Valid nilpotent algebra, but the integer second-kind points fail to be a
    group (the product e2·e1 picks up a half-integral e3 exponent).
    """
    return NilAlgebra.from_brackets(3, 2, {(1, 2): {3: Fraction(1, 2)}})
