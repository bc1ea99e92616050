"""Degree vectors, graded brackets, and the graded Jacobi defect.

Operators carry degrees in (Z_2)^k.  The bracket of homogeneous operators is

    [[X, Y]] = X Y - (-1)^(deg X . deg Y) Y X

a commutator when the mod-2 dot product is even and an anticommutator when it
is odd.  The sign-weighted cyclic Jacobi sum

    (-1)^(x.z) [[X, [[Y, Z]]]] + (-1)^(y.x) [[Y, [[Z, X]]]]
                               + (-1)^(z.y) [[Z, [[X, Y]]]]

vanishes identically for associative matrices whatever the degree assignment,
so its numerical defect measures rounding and truncation only; detecting a
wrong generator requires checking bracket closure against the structure
constants as well (see the verification suites).
"""

from __future__ import annotations

from dataclasses import dataclass

from .numerics import BandMatrix


class GradingError(ValueError):
    """Degree bookkeeping failure (length mismatch, missing degree)."""


@dataclass(frozen=True, slots=True)
class DegreeVector:
    """An element of (Z_2)^k."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits:
            raise GradingError("degree vector must have at least one component")
        if any(bit not in (0, 1) for bit in self.bits):
            raise GradingError(f"degree components must be 0 or 1, got {self.bits}")

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __repr__(self) -> str:
        return f"({', '.join(str(b) for b in self.bits)})"


def degree(*bits: int) -> DegreeVector:
    """Convenience constructor: degree(1, 0) == DegreeVector((1, 0))."""
    return DegreeVector(tuple(bits))


def degree_add(a: DegreeVector, b: DegreeVector) -> DegreeVector:
    """Componentwise sum mod 2 (the degree of a product)."""
    if len(a) != len(b):
        raise GradingError(f"degree lengths differ: {len(a)} vs {len(b)}")
    return DegreeVector(tuple((x + y) % 2 for x, y in zip(a.bits, b.bits)))


def degree_dot(a: DegreeVector, b: DegreeVector) -> int:
    """Dot product mod 2."""
    if len(a) != len(b):
        raise GradingError(f"degree lengths differ: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a.bits, b.bits)) % 2


def graded_sign(a: DegreeVector, b: DegreeVector) -> int:
    """(-1)^(a.b): +1 for commuting pairs, -1 for anticommuting pairs."""
    return -1 if degree_dot(a, b) else 1


@dataclass(frozen=True)
class GradedOperator:
    """A matrix with an optional homogeneous degree and a display label."""

    matrix: BandMatrix
    degree: DegreeVector | None
    label: str

    def require_degree(self) -> DegreeVector:
        if self.degree is None:
            raise GradingError(f"operator {self.label!r} has no degree assigned")
        return self.degree


def graded_bracket(x: GradedOperator, y: GradedOperator) -> GradedOperator:
    """[[X, Y]] = XY - (-1)^(x.y) YX, of degree x + y."""
    dx, dy = x.require_degree(), y.require_degree()
    sign = graded_sign(dx, dy)
    xy = x.matrix @ y.matrix
    yx = y.matrix @ x.matrix
    result = xy - yx if sign == 1 else xy + yx
    return GradedOperator(result, degree_add(dx, dy), f"[[{x.label},{y.label}]]")


def check_antisymmetry(x: GradedOperator, y: GradedOperator) -> float:
    """Max |entry| of [[X,Y]] + (-1)^(x.y) [[Y,X]]; exactly 0.0 in floats.

    The two brackets reuse the identical products XY and YX, so the residual
    cancels bitwise on every column; no guard band applies.
    """
    sign = graded_sign(x.require_degree(), y.require_degree())
    forward = graded_bracket(x, y).matrix
    backward = graded_bracket(y, x).matrix
    total = forward + backward if sign == 1 else forward - backward
    return total.max_abs()


def jacobi_defect(
    x: GradedOperator, y: GradedOperator, z: GradedOperator, guard_band: int = 3
) -> tuple[float, float]:
    """(residual, scale) of the sign-weighted cyclic Jacobi sum.

    Nested brackets of band-1 generators reach band 3, so the top guard_band
    columns (default 3) are excluded.  The scale is the largest entry of the
    three cyclic terms on the compared columns.
    """
    dim = x.matrix.dim
    if guard_band < 0 or guard_band >= dim:
        raise GradingError(f"guard band {guard_band} invalid for dim {dim}")
    dx, dy, dz = x.require_degree(), y.require_degree(), z.require_degree()
    terms = [
        (graded_sign(dx, dz), graded_bracket(x, graded_bracket(y, z)).matrix),
        (graded_sign(dy, dx), graded_bracket(y, graded_bracket(z, x)).matrix),
        (graded_sign(dz, dy), graded_bracket(z, graded_bracket(x, y)).matrix),
    ]
    cols = range(dim - guard_band)
    total = None
    scale = 0.0
    for sign, matrix in terms:
        scale = max(scale, matrix.max_abs(cols))
        signed = matrix if sign == 1 else -matrix
        total = signed if total is None else total + signed
    assert total is not None
    return total.max_abs(cols), scale
