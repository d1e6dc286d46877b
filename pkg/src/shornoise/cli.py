"""Command-line interface.

Subcommands mirror the library surface:

* ``figure``    -- compute a stock figure dataset; writes CSV + JSON next to
  each other and, with --svg, a rendered chart.
* ``shor``      -- Monte Carlo success probability for one (N, y) instance
  under an error model.
* ``threshold`` -- success curve over an error-magnitude grid with the
  estimated threshold.
* ``selftest``  -- run the built-in invariant suite.

A flat ``key = value`` config file (``--config``) can supply any long option;
explicit command-line flags win.  Exit codes: 0 success, 2 invalid arguments,
3 I/O failure, 4 degenerate instance (a shared factor of y and N, which is
printed since it already factors N).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import LuckyFactorError
from .experiments import (
    DEFAULT_SUCCESS_TARGET,
    FigureSpec,
    emit_dataset,
    emit_svg,
    emit_threshold,
    run_figure,
    threshold_sweep,
)
from .gates import ErrorMode, ErrorModel
from .selftest import run_selftest
from .shor import ShorInstance, success_probability

_MODE_CHOICES = [m.value for m in ErrorMode]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shornoise",
        description="Quantum period finding under imperfect gate operations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("figure", help="compute a stock figure dataset")
    p_fig.add_argument("figure", type=int, choices=(1, 2, 3, 4))
    p_fig.add_argument("--q", type=int, default=128, help="register size (power of two)")
    p_fig.add_argument("--r", type=int, default=4, help="period of the input state")
    p_fig.add_argument("--l", type=int, default=0, help="offset of the input state")
    p_fig.add_argument("--seed", type=int, default=0)
    p_fig.add_argument("--trials", type=int, default=1, help="draws per random subfigure")
    p_fig.add_argument(
        "--gate-level", action="store_true",
        help="simulate the gate circuit instead of the per-index error model",
    )
    p_fig.add_argument("--out", type=Path, default=None, help="CSV path (default figureN.csv)")
    p_fig.add_argument("--svg", action="store_true", help="also render an SVG chart")
    p_fig.add_argument("--config", type=Path, default=None)
    p_fig.set_defaults(handler=_cmd_figure)

    p_shor = sub.add_parser("shor", help="Monte Carlo success probability for one instance")
    p_shor.add_argument("--n", type=int, required=True, help="number to factor")
    p_shor.add_argument("--y", type=int, required=True, help="base, coprime to n")
    p_shor.add_argument("--mode", choices=_MODE_CHOICES, default="none")
    p_shor.add_argument("--delta0", type=float, default=0.0)
    p_shor.add_argument("--smax", type=float, default=0.0)
    p_shor.add_argument("--sigma0", type=float, default=0.0)
    p_shor.add_argument("--trials", type=int, default=1000)
    p_shor.add_argument("--seed", type=int, default=0)
    p_shor.add_argument("--config", type=Path, default=None)
    p_shor.set_defaults(handler=_cmd_shor)

    p_thr = sub.add_parser("threshold", help="success curve over an error-magnitude grid")
    p_thr.add_argument("--n", type=int, required=True)
    p_thr.add_argument("--y", type=int, required=True)
    p_thr.add_argument("--mode", choices=_MODE_CHOICES, default="em1")
    p_thr.add_argument(
        "--grid", type=str, default="0.001:0.1:7",
        help="a:b:steps (geometric when a > 0) or comma-separated magnitudes",
    )
    p_thr.add_argument("--trials", type=int, default=1000)
    p_thr.add_argument("--target", type=float, default=DEFAULT_SUCCESS_TARGET)
    p_thr.add_argument("--seed", type=int, default=0)
    p_thr.add_argument(
        "--delta0", type=float, default=0.0,
        help="fixed systematic part for the combined (em3*) modes",
    )
    p_thr.add_argument("--out", type=Path, default=None, help="write the curve as CSV + JSON")
    p_thr.add_argument("--config", type=Path, default=None)
    p_thr.set_defaults(handler=_cmd_threshold)

    p_self = sub.add_parser("selftest", help="run the built-in invariant suite")
    p_self.add_argument("--config", type=Path, default=None)
    p_self.set_defaults(handler=lambda args: run_selftest())

    return parser


def _read_config(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


_TRUE_STRINGS = {"1", "true", "yes", "on"}
_FALSE_STRINGS = {"0", "false", "no", "off"}


def _coerce_config_value(action: argparse.Action, raw: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        low = raw.lower()
        if low in _TRUE_STRINGS:
            return True
        if low in _FALSE_STRINGS:
            return False
        raise ValueError(f"config key {action.dest!r} expects a boolean, got {raw!r}")
    converter = action.type or str
    value = converter(raw)
    if action.choices is not None and value not in action.choices:
        raise ValueError(f"config key {action.dest!r}: {value!r} not in {action.choices}")
    return value


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser, argv: list[str]):
    """Fill option values from the config file where the flag was not given."""
    if getattr(args, "config", None) is None:
        return
    values = _read_config(args.config)
    subparser = _find_subparser(parser, args.command)
    actions = {a.dest: a for a in subparser._actions if a.option_strings}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None or key == "config":
            raise ValueError(f"unknown config key {key!r} for command {args.command!r}")
        flag_given = any(
            token == f"--{key}" or token == f"--{key.replace('_', '-')}"
            or token.startswith(f"--{key}=") or token.startswith(f"--{key.replace('_', '-')}=")
            for token in argv
        )
        if not flag_given:
            setattr(args, key, _coerce_config_value(action, raw))


def _find_subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise RuntimeError("parser has no subcommands")


def _parse_grid(text: str) -> list[float]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec {text!r} must be a:b:steps")
        a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
        if steps < 1:
            raise ValueError("grid steps must be >= 1")
        if steps == 1:
            return [a]
        if a > 0 and b > a:
            return [float(g) for g in np.geomspace(a, b, steps)]
        return [float(g) for g in np.linspace(a, b, steps)]
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_figure(args) -> int:
    spec = FigureSpec(
        figure=args.figure,
        q=args.q,
        r=args.r,
        l=args.l,
        seed=args.seed,
        trials=args.trials,
        gate_level=args.gate_level,
    )
    dataset = run_figure(spec)
    out = args.out or Path(f"figure{args.figure}.csv")
    csv_path = emit_dataset(dataset, "csv", out)
    json_path = emit_dataset(dataset, "json", out.with_suffix(".json"))
    written = [csv_path, json_path]
    if args.svg:
        written.append(emit_svg(dataset, out.with_suffix(".svg")))
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_shor(args) -> int:
    instance = ShorInstance.create(args.n, args.y)
    model = ErrorModel.from_config(args.mode, args.delta0, args.smax, args.sigma0, args.seed)
    est = success_probability(instance, model, args.trials, args.seed)
    print(f"N={instance.N} y={instance.y} order={instance.r} q={instance.q} (L={instance.L})")
    print(f"mode={model.mode.value} delta0={model.delta0:g} s_max={model.s_max:g} "
          f"sigma0={model.sigma0:g} seed={args.seed}")
    print(f"success {est.successes}/{est.trials} = {est.probability:.4f} "
          f"(95% CI [{est.ci_low:.4f}, {est.ci_high:.4f}])")
    return 0


def _cmd_threshold(args) -> int:
    instance = ShorInstance.create(args.n, args.y)
    grid = _parse_grid(args.grid)
    report = threshold_sweep(
        instance,
        ErrorMode.from_string(args.mode),
        grid,
        trials=args.trials,
        target=args.target,
        seed=args.seed,
        delta0=args.delta0,
    )
    for g, est in zip(report.grid, report.estimates):
        print(f"magnitude {g:.6g}: success {est.probability:.4f} "
              f"[{est.ci_low:.4f}, {est.ci_high:.4f}]")
    if report.threshold is None:
        print(f"threshold: none (no magnitude reaches target {report.target:g})")
    else:
        print(f"threshold: {report.threshold:.6g} (target {report.target:g})")
    if args.out is not None:
        print(f"wrote {emit_threshold(report, 'csv', args.out)}")
        print(f"wrote {emit_threshold(report, 'json', args.out.with_suffix('.json'))}")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own errors; keep the code
        return int(exc.code or 0)
    try:
        _apply_config(args, parser, argv)
        return args.handler(args)
    except LuckyFactorError as exc:
        print(f"degenerate instance: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
