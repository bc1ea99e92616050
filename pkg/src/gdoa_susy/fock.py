"""Truncated Fock-space representations of deformed boson algebras.

A deformed oscillator is specified by a structure function F with F(0) = 0 and
F(n) > 0, the defining products being a+ a = F(N) and a a+ = F(N + 1).  On the
truncated space spanned by |0>, ..., |D-1> the ladder matrices are

    a[n-1, n] = sqrt(F(n))      1 <= n <= D-1
    a+[n+1, n] = sqrt(F(n+1))   0 <= n <= D-2

with the raising action out of the top state |D-1> cut off.  Consequently
a+ a = diag(F(0), ..., F(D-1)) holds on every column, while a a+ matches
diag(F(1), ..., F(D)) only away from the top column, whose computed value is 0
against a true value of F(D).  Relation checks therefore compare on a guard
band of columns [0, D-1-g].

The parity (Klein) operator T = (-1)^N and the projectors P0, P1 onto even and
odd levels are exact diagonals in either backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exprlang import (
    Expr,
    eval_expr,
    has_sqrt,
    parse_expr,
    validate_structure_function,
)
from .numerics import (
    Backend,
    BandMatrix,
    ExactScalar,
    MatrixComparison,
    TolerancePolicy,
    approx_equal_matrix,
    DEFAULT_POLICY,
)


class ValidationError(ValueError):
    """A spec or structure function fails its domain constraints."""


_BRACKET_SOURCE = "n + (kappa/2)*(1 - parity(n))"


@dataclass(frozen=True)
class OscillatorSpec:
    """A deformed oscillator: structure function F, weight function f.

    ``kappa`` is set only for the reflection-deformed oscillator family,
    whose structure function is F(n) = n for even n and n + kappa for odd n
    (positive-definite for kappa > -1).  The weight f rescales the
    parity-restricted charges; it defaults to the constant 1.
    """

    structure: Expr
    params: Mapping[str, Fraction]
    weight: Expr
    kappa: Fraction | None
    structure_src: str
    weight_src: str

    @classmethod
    def calogero_vasiliev(cls, kappa: Fraction | int | str) -> "OscillatorSpec":
        """Reflection-deformed oscillator with [a, a+] = 1 + kappa * T."""
        from .numerics import parse_rational

        value = parse_rational(kappa) if isinstance(kappa, str) else Fraction(kappa)
        return cls(
            structure=parse_expr(_BRACKET_SOURCE),
            params={"kappa": value},
            weight=parse_expr("1"),
            kappa=value,
            structure_src="bracket(n)",
            weight_src="1",
        )

    @classmethod
    def gdoa(
        cls,
        structure: str | Expr,
        params: Mapping[str, Fraction] | None = None,
        weight: str | Expr = "1",
    ) -> "OscillatorSpec":
        """General deformed oscillator with arbitrary F and weight f."""
        structure_expr = parse_expr(structure) if isinstance(structure, str) else structure
        weight_expr = parse_expr(weight) if isinstance(weight, str) else weight
        return cls(
            structure=structure_expr,
            params=dict(params or {}),
            weight=weight_expr,
            kappa=None,
            structure_src=structure if isinstance(structure, str) else "<expr>",
            weight_src=weight if isinstance(weight, str) else "<expr>",
        )

    @property
    def is_calogero_vasiliev(self) -> bool:
        return self.kappa is not None

    @property
    def weight_is_exact(self) -> bool:
        return not has_sqrt(self.weight)

    def describe(self) -> str:
        if self.is_calogero_vasiliev:
            return f"calogero_vasiliev(kappa={self.kappa})"
        pieces = [f"F={self.structure_src}", f"f={self.weight_src}"]
        for name in sorted(self.params):
            pieces.append(f"{name}={self.params[name]}")
        return f"gdoa({', '.join(pieces)})"


def bracket_kappa(n: int, kappa: Fraction | int) -> Fraction:
    """Deformed integer: n for even n, n + kappa for odd n."""
    kappa = Fraction(kappa)
    return Fraction(n) if n % 2 == 0 else Fraction(n) + kappa


def structure_values(spec: OscillatorSpec, dim: int) -> tuple[Fraction, ...]:
    """Exact F(0..dim); raises ValidationError if F(0) != 0 or any F(n) <= 0."""
    if has_sqrt(spec.structure):
        raise ValidationError("structure function must be exactly evaluable (no sqrt)")
    report = validate_structure_function(spec.structure, spec.params, dim)
    if not report.ok:
        details = "; ".join(
            f"F({v.n}) = {v.value} violates {v.constraint}" for v in report.violations[:4]
        )
        raise ValidationError(f"invalid structure function: {details}")
    return report.values


def weight_values(
    spec: OscillatorSpec, dim: int, backend: Backend = Backend.EXACT
) -> dict[int, Fraction | float]:
    """f(1..dim); f(0) is never needed because it only multiplies F(0) = 0."""
    return {
        n: eval_expr(spec.weight, n, spec.params, backend) for n in range(1, dim + 1)
    }


@dataclass(frozen=True)
class FockRep:
    """Matrices of one deformed oscillator on the truncated Fock space."""

    spec: OscillatorSpec
    dim: int
    backend: Backend
    F_values: tuple[Fraction, ...]  # F(0..dim), exact
    number: BandMatrix
    a: BandMatrix
    a_dag: BandMatrix
    parity: BandMatrix
    even_projector: BandMatrix
    odd_projector: BandMatrix


def _sqrt_entry(value: Fraction, backend: Backend):
    if backend is Backend.EXACT:
        return ExactScalar.sqrt_of(value)
    return complex(math.sqrt(float(value)))


def build_fock_rep(
    spec: OscillatorSpec, dim: int, backend: Backend = Backend.FLOAT
) -> FockRep:
    """Build the ladder, number, parity, and projector matrices on dimension dim."""
    if dim < 2:
        raise ValidationError("dim must be >= 2")
    values = structure_values(spec, dim)
    roots = {n: _sqrt_entry(values[n], backend) for n in range(1, dim)}
    a = BandMatrix(dim, backend, {(n - 1, n): roots[n] for n in range(1, dim)})
    a_dag = BandMatrix(dim, backend, {(n + 1, n): roots[n + 1] for n in range(dim - 1)})
    number = BandMatrix.diagonal([Fraction(n) for n in range(dim)], backend)
    parity = BandMatrix.diagonal([Fraction(1 - 2 * (n % 2)) for n in range(dim)], backend)
    p_even = BandMatrix.diagonal([Fraction(1 - n % 2) for n in range(dim)], backend)
    p_odd = BandMatrix.diagonal([Fraction(n % 2) for n in range(dim)], backend)
    return FockRep(spec, dim, backend, values, number, a, a_dag, parity, p_even, p_odd)


@dataclass(frozen=True)
class GuardBandReport:
    """Comparison restricted to columns [0, dim-1-g]."""

    guard_band: int
    cols: range
    comparison: MatrixComparison

    @property
    def passed(self) -> bool:
        return self.comparison.passed

    @property
    def residual(self) -> float:
        return self.comparison.residual


def guard_band_equal(
    a: BandMatrix,
    b: BandMatrix,
    guard_band: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> GuardBandReport:
    """Compare two matrices ignoring the top guard_band source columns."""
    if guard_band < 0:
        raise ValidationError("guard band must be nonnegative")
    if guard_band >= a.dim:
        raise ValidationError(f"guard band {guard_band} leaves no columns in dim {a.dim}")
    cols = range(a.dim - guard_band)
    return GuardBandReport(guard_band, cols, approx_equal_matrix(a, b, policy, cols))
