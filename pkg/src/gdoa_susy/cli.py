"""Command line interface: verify, spectrum, reduce, jacobi.

Configuration is a strict JSON file (unknown keys are rejected) with flag
overrides for dimension, parity label, tolerances, and output format.

Exit codes: 0 all requested checks passed; 1 at least one relation failed;
2 configuration or validation error; 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exprlang import ExprError
from .fock import OscillatorSpec, ValidationError
from .grading import GradingError
from .numerics import Backend, NumericsError, TolerancePolicy, parse_rational
from .realizations import (
    RealizationSet,
    ReductionReport,
    SpectrumTable,
    cv_realization,
    gdoa_realization,
    hermitian_charges,
    pair_partner,
    pair_index,
    reduction_check,
    spectrum_H,
)
from .verify import (
    VerificationReport,
    merge_reports,
    run_all_suites,
    run_jacobi_suite,
)


class ConfigError(ValueError):
    """The configuration file violates the schema or its domain constraints."""


_OUTPUTS = ("text", "json", "csv")
_BACKENDS = ("float", "exact-where-possible")


@dataclass(frozen=True)
class Config:
    """Validated run configuration."""

    spec: OscillatorSpec
    mus: tuple[int, ...]
    dim: int
    use_exact: bool
    policy: TolerancePolicy
    output: str


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _rational_field(value: object, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{where} must be a rational string or integer")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except NumericsError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where} must be a rational string or integer")


def _build_spec(algebra: object, weight_src: str) -> OscillatorSpec:
    if not isinstance(algebra, dict):
        raise ConfigError("'algebra' must be an object")
    kind = algebra.get("type")
    if kind == "calogero_vasiliev":
        _require_keys(algebra, {"type", "kappa"}, "'algebra'")
        if "kappa" not in algebra:
            raise ConfigError("'algebra' of type calogero_vasiliev requires 'kappa'")
        if weight_src.strip() != "1":
            raise ConfigError(
                "'f' must be \"1\" for calogero_vasiliev; use the gdoa type "
                "with F=\"bracket(n)\" for weighted charges"
            )
        kappa = _rational_field(algebra["kappa"], "'algebra.kappa'")
        return OscillatorSpec.calogero_vasiliev(kappa)
    if kind == "gdoa":
        _require_keys(algebra, {"type", "F", "params"}, "'algebra'")
        source = algebra.get("F")
        if not isinstance(source, str):
            raise ConfigError("'algebra.F' must be an expression string")
        params_raw = algebra.get("params", {})
        if not isinstance(params_raw, dict):
            raise ConfigError("'algebra.params' must be an object")
        params = {
            name: _rational_field(value, f"'algebra.params.{name}'")
            for name, value in params_raw.items()
        }
        try:
            return OscillatorSpec.gdoa(source, params, weight_src)
        except ExprError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError("'algebra.type' must be 'calogero_vasiliev' or 'gdoa'")


def _parse_config(raw: object, overrides: argparse.Namespace | None) -> Config:
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be an object")
    _require_keys(
        raw,
        {"algebra", "f", "mu", "dim", "backend", "tolerance", "output"},
        "configuration",
    )
    if "algebra" not in raw:
        raise ConfigError("configuration requires 'algebra'")

    weight_src = raw.get("f", "1")
    if not isinstance(weight_src, str):
        raise ConfigError("'f' must be an expression string")

    mu_value = raw.get("mu", "both")
    dim = raw.get("dim", 64)
    backend = raw.get("backend", "exact-where-possible")
    tolerance = raw.get("tolerance", {})
    output = raw.get("output", "text")

    if overrides is not None:
        if getattr(overrides, "dim", None) is not None:
            dim = overrides.dim
        if getattr(overrides, "mu", None) is not None:
            mu_value = overrides.mu if overrides.mu == "both" else int(overrides.mu)
        if getattr(overrides, "output", None) is not None:
            output = overrides.output
        if not isinstance(tolerance, dict):
            raise ConfigError("'tolerance' must be an object")
        tolerance = dict(tolerance)
        if getattr(overrides, "tolerance_abs", None) is not None:
            tolerance["absolute"] = overrides.tolerance_abs
        if getattr(overrides, "tolerance_rel", None) is not None:
            tolerance["relative"] = overrides.tolerance_rel

    if mu_value == "both":
        mus: tuple[int, ...] = (0, 1)
    elif isinstance(mu_value, bool):
        raise ConfigError("'mu' must be 0, 1, or \"both\"")
    elif isinstance(mu_value, int) and mu_value in (0, 1):
        mus = (mu_value,)
    else:
        raise ConfigError("'mu' must be 0, 1, or \"both\"")

    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2 or dim % 2:
        raise ConfigError("'dim' must be an even integer >= 2")

    if backend not in _BACKENDS:
        raise ConfigError(f"'backend' must be one of {_BACKENDS}")

    if not isinstance(tolerance, dict):
        raise ConfigError("'tolerance' must be an object")
    _require_keys(tolerance, {"absolute", "relative"}, "'tolerance'")
    absolute = tolerance.get("absolute", 1e-12)
    relative = tolerance.get("relative", 1e-10)
    for name, value in (("absolute", absolute), ("relative", relative)):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
            raise ConfigError(f"'tolerance.{name}' must be a nonnegative number")

    if output not in _OUTPUTS:
        raise ConfigError(f"'output' must be one of {_OUTPUTS}")

    spec = _build_spec(raw["algebra"], weight_src)
    try:
        from .fock import structure_values

        structure_values(spec, dim)  # rejects F(0) != 0 and F(n) <= 0 up front
    except (ValidationError, ExprError) as exc:
        raise ConfigError(str(exc)) from exc

    return Config(
        spec=spec,
        mus=mus,
        dim=dim,
        use_exact=(backend == "exact-where-possible"),
        policy=TolerancePolicy(float(absolute), float(relative)),
        output=output,
    )


def load_config(path: str, overrides: argparse.Namespace | None = None) -> Config:
    """Read, validate, and normalize a configuration file."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    return _parse_config(raw, overrides)


def build_realization(config: Config, mu: int) -> RealizationSet:
    """Materialize the configured realization on the float backend."""
    if config.spec.is_calogero_vasiliev:
        assert config.spec.kappa is not None
        return cv_realization(config.spec.kappa, mu, config.dim, Backend.FLOAT)
    return gdoa_realization(config.spec, mu, config.dim, Backend.FLOAT)


# -- output helpers ---------------------------------------------------------


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _verify_text(reports: Sequence[VerificationReport]) -> str:
    lines: list[str] = []
    for report in reports:
        lines.append(
            f"spec: {report.spec}  mu={report.mu}  dim={report.dim}  backend={report.backend}"
        )
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append(
                f"  {status} {check.name}  [{check.exactness.value} g={check.guard_band}]"
                f"  residual={check.residual:.3e}"
            )
        overall = "PASS" if report.passed else "FAIL"
        lines.append(
            f"  => {overall} ({len(report.checks)} checks, {report.elapsed_ms:.1f} ms)"
        )
    return "\n".join(lines)


def _verify_csv(reports: Sequence[VerificationReport]) -> str:
    lines = ["mu,name,paper_ref,guard_band,exactness,residual,pass"]
    for report in reports:
        for check in report.checks:
            relation = check.relation.replace('"', "'")
            lines.append(
                f'{report.mu},{check.name},"{relation}",{check.guard_band},'
                f"{check.exactness.value},{check.residual!r},{str(check.passed).lower()}"
            )
    return "\n".join(lines)


def _emit_reports(reports: Sequence[VerificationReport], output: str) -> None:
    if output == "json":
        _emit(json.dumps([r.to_dict() for r in reports], indent=2))
    elif output == "csv":
        _emit(_verify_csv(reports))
    else:
        _emit(_verify_text(reports))


def _spectrum_rows(table: SpectrumTable) -> list[dict]:
    rows = []
    present = {row.n for row in table.rows}
    for row in table.rows:
        partner = pair_partner(table.mu, row.n)
        if partner is None or partner not in present:
            pair = None
        else:
            pair = f"p{pair_index(table.mu, row.n)}"
        rows.append(
            {"n": row.n, "E": str(row.energy), "Z": str(row.central), "pair": pair}
        )
    return rows


def _spectrum_text(table: SpectrumTable) -> str:
    lines = [
        f"spec: {table.spec.describe()}  mu={table.mu}  n_max={table.n_max}"
        f"  verdict: {table.verdict}",
        "  n     E           Z           pair",
    ]
    for row in _spectrum_rows(table):
        pair = row["pair"] or "-"
        lines.append(f"  {row['n']:<5d} {row['E']:<11s} {row['Z']:<11s} {pair}")
    return "\n".join(lines)


def _spectrum_csv(table: SpectrumTable) -> str:
    lines = ["n,E,Z,pair,verdict"]
    for row in _spectrum_rows(table):
        pair = row["pair"] or "-"
        lines.append(f"{row['n']},{row['E']},{row['Z']},{pair},{table.verdict}")
    return "\n".join(lines)


def _spectrum_json(tables: Sequence[SpectrumTable], dim: int) -> str:
    payload = [
        {
            "spec": table.spec.describe(),
            "mu": table.mu,
            "dim": dim,
            "n_max": table.n_max,
            "verdict": table.verdict,
            "rows": _spectrum_rows(table),
        }
        for table in tables
    ]
    return json.dumps(payload, indent=2)


def _reduce_text(report: ReductionReport) -> str:
    lines = [f"reduction check: kappa={report.kappa}  dim={report.dim}"]
    for entry in report.entries:
        status = "PASS" if entry.exact else "FAIL"
        lines.append(
            f"  {status} mu={entry.mu} {entry.operator}  residual={entry.residual:.3e}"
            f"  exact={entry.exact}"
        )
    lines.append(f"  => {'PASS' if report.ok else 'FAIL'}")
    return "\n".join(lines)


def _reduce_json(report: ReductionReport) -> str:
    return json.dumps(
        {
            "kappa": str(report.kappa),
            "dim": report.dim,
            "entries": [
                {
                    "mu": entry.mu,
                    "operator": entry.operator,
                    "residual": entry.residual,
                    "exact": entry.exact,
                }
                for entry in report.entries
            ],
            "pass": report.ok,
        },
        indent=2,
    )


def _reduce_csv(report: ReductionReport) -> str:
    lines = ["mu,operator,residual,exact"]
    for entry in report.entries:
        lines.append(
            f"{entry.mu},{entry.operator},{entry.residual!r},{str(entry.exact).lower()}"
        )
    return "\n".join(lines)


# -- commands ---------------------------------------------------------------


def cmd_verify(config: Config) -> int:
    reports = []
    for mu in config.mus:
        r = build_realization(config, mu)
        reports.append(run_all_suites(r, config.policy, config.use_exact))
    _emit_reports(reports, config.output)
    return 0 if all(r.passed for r in reports) else 1


def cmd_spectrum(config: Config, n_max: int | None) -> int:
    if n_max is None:
        n_max = config.dim - 2
    if n_max < 0 or n_max > config.dim - 2:
        raise ConfigError(f"n_max must lie in [0, dim-2] = [0, {config.dim - 2}]")
    try:
        tables = [spectrum_H(config.spec, mu, n_max) for mu in config.mus]
    except (ValidationError, ExprError) as exc:
        raise ConfigError(str(exc)) from exc
    if config.output == "json":
        _emit(_spectrum_json(tables, config.dim))
    elif config.output == "csv":
        _emit("\n\n".join(_spectrum_csv(t) for t in tables))
    else:
        _emit("\n\n".join(_spectrum_text(t) for t in tables))
    return 0


def cmd_reduce(kappa: Fraction, dim: int, output: str) -> int:
    report = reduction_check(kappa, dim)
    if output == "json":
        _emit(_reduce_json(report))
    elif output == "csv":
        _emit(_reduce_csv(report))
    else:
        _emit(_reduce_text(report))
    return 0 if report.ok else 1


def cmd_jacobi(config: Config) -> int:
    reports = []
    for mu in config.mus:
        r = build_realization(config, mu)
        h = hermitian_charges(r)
        reports.append(merge_reports([run_jacobi_suite(h, config.policy)], ("jacobi",)))
    _emit_reports(reports, config.output)
    return 0 if all(r.passed for r in reports) else 1


# -- entry point ------------------------------------------------------------


def _add_common_flags(parser: argparse.ArgumentParser, config_required: bool = True) -> None:
    parser.add_argument("--config", required=config_required, help="path to a JSON configuration")
    parser.add_argument("--dim", type=int, default=None, help="override the dimension")
    parser.add_argument(
        "--mu", choices=("0", "1", "both"), default=None, help="override the parity label"
    )
    parser.add_argument(
        "--tolerance-abs", type=float, default=None, help="override the absolute tolerance"
    )
    parser.add_argument(
        "--tolerance-rel", type=float, default=None, help="override the relative tolerance"
    )
    parser.add_argument(
        "--output", choices=_OUTPUTS, default=None, help="override the output format"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdoa-susy",
        description="Verify color-superalgebra realizations of deformed oscillators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run all relation suites")
    _add_common_flags(verify)

    spectrum = sub.add_parser("spectrum", help="print the closed-form spectrum table")
    _add_common_flags(spectrum)
    spectrum.add_argument("--nmax", type=int, default=None, help="highest level to print")

    reduce_p = sub.add_parser(
        "reduce", help="check the weighted family against the reflection oscillator"
    )
    _add_common_flags(reduce_p, config_required=False)
    reduce_p.add_argument("--kappa", default=None, help="deformation parameter (rational)")

    jacobi = sub.add_parser("jacobi", help="run only the graded Jacobi suite")
    _add_common_flags(jacobi)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "reduce":
            dim = args.dim if args.dim is not None else 64
            output = args.output or "text"
            if args.kappa is not None:
                kappa = parse_rational(args.kappa)
            elif args.config is not None:
                config = load_config(args.config, args)
                if not config.spec.is_calogero_vasiliev:
                    raise ConfigError(
                        "reduce requires a calogero_vasiliev config or --kappa"
                    )
                assert config.spec.kappa is not None
                kappa = config.spec.kappa
                dim = config.dim
                output = args.output or config.output
            else:
                raise ConfigError("reduce requires --kappa or --config")
            if dim < 2 or dim % 2:
                raise ConfigError("'dim' must be an even integer >= 2")
            return cmd_reduce(kappa, dim, output)
        config = load_config(args.config, args)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "spectrum":
            return cmd_spectrum(config, args.nmax)
        if args.command == "jacobi":
            return cmd_jacobi(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ValidationError, ExprError, NumericsError, GradingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
