"""Command-line interface.

Subcommands: expect (one setting, full report), sweep (grid to CSV/JSON),
figure (named preset datasets), verify (dual-route self-checks).

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 orthogonal selection, 4 inadequate truncation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import (
    ConfigError,
    OrthogonalSelectionError,
    TruncationError,
    VnmeasError,
)
from .modes import parse_mode
from .presets import generate_figure, list_figures
from .settings import MeasurementSetting, SweepGrid
from .sweeps import emit, evaluate_point
from .verify import run_verification

__all__ = ["main", "build_parser"]


def _parse_weak_value(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"weak value must be 're,im' (or a bare real part), got {text!r}")


def _parse_axis(text: str) -> tuple[float, ...]:
    """Scalar, comma list, or inclusive range 'start:stop:step'."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"non-numeric range bound in {text!r}") from None
        if step <= 0:
            raise ConfigError(f"range step must be positive, got {step}")
        if stop < start:
            raise ConfigError(f"empty range {text!r}")
        count = int((stop - start) / step + 1.0 + 1e-9)
        return tuple(start + i * step for i in range(count))
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"non-numeric axis value in {text!r}") from None


def _parse_modes(values: list[str]) -> tuple:
    specs: list[str] = []
    for value in values:
        # allow comma-separated lists only between complete mode specs
        for chunk in value.split(";"):
            if chunk.strip():
                specs.append(chunk.strip())
    return tuple(parse_mode(spec) for spec in specs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vnmeas",
        description="Post-selected von Neumann measurement with structured pointer modes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_selection_args(p: argparse.ArgumentParser, repeatable_wv: bool) -> None:
        p.add_argument(
            "--weak-value",
            action="append",
            metavar="RE,IM",
            help="weak value as 're,im'" + ("; repeat for several" if repeatable_wv else ""),
        )
        p.add_argument("--theta", help="pre-selection polar angle(s), radians")
        p.add_argument("--phi", help="pre-selection azimuth(s), radians (default 0)")

    def add_common_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--class", dest="op_class", required=True,
                       choices=("involutory", "projector"), help="algebraic class of the observable")
        p.add_argument("--sigma", type=float, default=1.0, help="beam width (default 1)")
        p.add_argument("--ps-convention", choices=("paper", "exact"), default="paper",
                       help="probability entering the SNR (default paper)")
        p.add_argument("--n", dest="n_measurements", type=int, default=1,
                       help="number of repetitions in the SNR (default 1)")
        p.add_argument("--output", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="serialization format")

    p_expect = sub.add_parser("expect", help="evaluate one setting and print the full report")
    p_expect.add_argument("--mode", required=True, help="pointer mode, hg:n[,m] or lg:p,l")
    add_common_args(p_expect)
    add_selection_args(p_expect, repeatable_wv=False)
    p_expect.add_argument("--s", required=True, type=float, help="dimensionless coupling")
    p_expect.add_argument("--dim-x", type=int, help="override the longitudinal truncation")

    p_sweep = sub.add_parser("sweep", help="evaluate a grid and emit the delimited dataset")
    p_sweep.add_argument("--mode", required=True, action="append",
                         help="pointer mode spec; repeat (or separate with ';') for several")
    add_common_args(p_sweep)
    add_selection_args(p_sweep, repeatable_wv=True)
    p_sweep.add_argument("--s", required=True, help="coupling axis: scalar, list, or start:stop:step")
    p_sweep.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    p_figure = sub.add_parser("figure", help="generate a named preset dataset (CSV per panel)")
    p_figure.add_argument("name", choices=list_figures(), help="preset name")
    p_figure.add_argument("--out-dir", default=".", help="directory for the panel CSVs")
    p_figure.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p_figure.add_argument("--ps-convention", choices=("paper", "exact"), default="paper")

    p_verify = sub.add_parser("verify", help="run the dual-route self-verification")
    p_verify.add_argument("--quick", action="store_true", help="reduced grid, finishes in seconds")
    p_verify.add_argument("--canary", action="store_true",
                          help="run the deliberately broken check; must fail")
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--tolerance", type=float, default=1e-8,
                          help="dual-route residual tolerance (default 1e-8)")
    p_verify.add_argument("--output", help="write the JSON report here")

    return parser


def _selection_setting(args, mode, s: float) -> MeasurementSetting:
    has_wv = bool(args.weak_value)
    has_theta = args.theta is not None
    if has_wv == has_theta:
        raise ConfigError("specify exactly one of --weak-value and --theta")
    if has_wv:
        if len(args.weak_value) != 1:
            raise ConfigError("expect takes a single --weak-value")
        if args.phi is not None:
            raise ConfigError("--phi only combines with --theta")
        return MeasurementSetting.from_weak_value(
            mode, args.op_class, _parse_weak_value(args.weak_value[0]), s, args.sigma
        )
    theta = float(args.theta)
    phi = float(args.phi) if args.phi is not None else 0.0
    return MeasurementSetting.from_selection(mode, args.op_class, theta, phi, s, args.sigma)


def _run_expect(args) -> int:
    mode = parse_mode(args.mode)
    if args.s < 0:
        raise ConfigError(f"coupling must be non-negative, got {args.s}")
    setting = _selection_setting(args, mode, args.s)
    record = evaluate_point(
        setting, args.n_measurements, args.ps_convention, dim_x=args.dim_x
    )
    metadata = {
        "command": "expect",
        "mode": record.mode,
        "class": record.op_class,
        "ps_convention": args.ps_convention,
        "n_measurements": args.n_measurements,
        "generator": "vnmeas",
    }
    if args.format:
        emit([record], args.format, args.output, metadata)
        return 0
    lines = [
        f"mode        {record.mode}",
        f"class       {record.op_class}",
        f"s           {record.s!r}",
        f"sigma       {setting.sigma!r}",
        f"weak_value  {record.weak_value.real!r},{record.weak_value.imag!r}",
        f"theta       {record.theta!r}",
        f"phi         {record.phi!r}",
        f"x_mean      {record.x_mean!r}",
        f"y_mean      {record.y_mean!r}",
        f"px_mean     {record.px_mean!r}",
        f"x_var       {record.x_var!r}",
        f"y_var       {record.y_var!r}",
        f"px_var      {record.px_var!r}",
        f"norm_coef   {record.norm_coef!r}",
        f"ps_paper    {record.ps_paper!r}",
        f"ps_exact    {record.ps_exact!r}",
        f"snr_x       {record.snr_x!r}",
        f"snr_y       {record.snr_y!r}",
        f"residual_x  {record.x_resid:.3e}",
        f"residual_y  {record.y_resid:.3e}",
        f"residual_px {record.px_resid:.3e}",
        f"residual_nc {record.norm_resid:.3e}",
    ]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _run_sweep(args) -> int:
    modes = _parse_modes(args.mode)
    s_values = _parse_axis(args.s)
    has_wv = bool(args.weak_value)
    has_theta = args.theta is not None
    if has_wv == has_theta:
        raise ConfigError("specify exactly one of --weak-value and --theta")
    metadata = {
        "command": "sweep",
        "class": args.op_class,
        "modes": ";".join(m.label() for m in modes),
        "s_axis": args.s,
        "sigma": repr(args.sigma),
        "ps_convention": args.ps_convention,
        "n_measurements": args.n_measurements,
        "generator": "vnmeas",
    }
    if has_wv:
        if args.phi is not None:
            raise ConfigError("--phi only combines with --theta")
        weak_values = tuple(_parse_weak_value(t) for t in args.weak_value)
        grid = SweepGrid(
            s_values=s_values, modes=modes, op_class=args.op_class,
            weak_values=weak_values, sigma=args.sigma,
        )
        metadata["weak_values"] = ";".join(f"{w.real},{w.imag}" for w in weak_values)
    else:
        theta_values = _parse_axis(args.theta)
        phi_values = _parse_axis(args.phi) if args.phi is not None else (0.0,)
        grid = SweepGrid(
            s_values=s_values, modes=modes, op_class=args.op_class,
            theta_values=theta_values, phi_values=phi_values, sigma=args.sigma,
        )
        metadata["theta_axis"] = args.theta
        metadata["phi_axis"] = args.phi if args.phi is not None else "0"
    from .sweeps import run_settings

    records = run_settings(list(grid.points()), args.n_measurements, args.ps_convention, args.jobs)
    emit(records, args.format or "csv", args.output, metadata)
    return 0


def _run_figure(args) -> int:
    paths = generate_figure(args.name, args.out_dir, args.jobs, args.ps_convention)
    for path in paths:
        print(path)
    return 0


def _run_verify(args) -> int:
    report = run_verification(
        quick=args.quick, canary=args.canary, jobs=args.jobs, tolerance=args.tolerance
    )
    for check in report["checks"]:
        status = "pass" if check["ok"] else "FAIL"
        print(
            f"{status}  {check['name']}: worst {check['worst']:.3g} x tolerance "
            f"({check['tolerance']:g}) over {check['points']} points"
            + (f"  [{check['detail']}]" if check["detail"] and not check["ok"] else "")
        )
    print("OK" if report["ok"] else "FAIL")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return 0 if report["ok"] else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "expect":
            return _run_expect(args)
        if args.command == "sweep":
            return _run_sweep(args)
        if args.command == "figure":
            return _run_figure(args)
        return _run_verify(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OrthogonalSelectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except VnmeasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
