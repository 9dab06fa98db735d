"""Command-line interface: persistence, optimize, verify.

Exit codes: 0 ok, 1 verification mismatch, 2 usage error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .complexes import (
    GridField,
    lower_star_1d,
    lower_star_3d,
    read_raw_field,
    read_signal,
    write_raw_field,
    write_signal,
)
from .errors import CritoptError, NumericalError
from .losses import MatchMode
from .optimize import (
    LossSpec,
    Method,
    OptimizerConfig,
    OptimizerKind,
    Strategy,
    run,
)
from .oracle import verify_random_cases
from .reduction import diagram_to_csv, read_pairs

__all__ = ["main"]


def _parse_shape(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"shape must be X,Y,Z, got {text!r}")
    return tuple(int(p) for p in parts)  # type: ignore[return-value]


def _parse_dims(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(","))


def _parse_eps(text: str) -> float:
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


def _atomic_write(path: Path, writer) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".")
    os.close(fd)
    try:
        writer(Path(tmp))
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _load_input(path: str, shape: tuple[int, int, int] | None):
    if shape is not None:
        return read_raw_field(path, shape)
    return read_signal(path)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critopt",
        description="Topological optimization of scalar fields via critical sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_pers = sub.add_parser(
        "persistence", help="compute a persistence diagram and write it as CSV"
    )
    p_pers.add_argument("input", help="raw f32 volume (with --shape) or 1D text signal")
    p_pers.add_argument("--shape", type=_parse_shape, default=None, metavar="X,Y,Z")
    p_pers.add_argument("--dims", type=_parse_dims, default=None, metavar="0,1,...")
    p_pers.add_argument("-o", "--out", default=None, help="output CSV (default stdout)")

    p_opt = sub.add_parser("optimize", help="run the optimization loop")
    p_opt.add_argument("input")
    p_opt.add_argument("--shape", type=_parse_shape, default=None, metavar="X,Y,Z")
    p_opt.add_argument("--loss", choices=["simplify", "quadrant"], default="simplify")
    p_opt.add_argument("--eps", type=_parse_eps, default=math.inf)
    p_opt.add_argument("--threshold", type=float, default=0.0, help="quadrant corner")
    p_opt.add_argument(
        "--mode",
        choices=[m.value for m in MatchMode],
        default=MatchMode.MIDPOINT.value,
    )
    p_opt.add_argument(
        "--method", choices=[m.value for m in Method], default=Method.CRITICAL.value
    )
    p_opt.add_argument(
        "--strategy", choices=[s.value for s in Strategy], default=Strategy.MAX.value
    )
    p_opt.add_argument(
        "--optimizer",
        choices=[o.value for o in OptimizerKind],
        default=OptimizerKind.SGD.value,
    )
    p_opt.add_argument("--lr", type=float, default=0.2)
    p_opt.add_argument("--momentum", type=float, default=0.0)
    p_opt.add_argument("--beta1", type=float, default=0.9)
    p_opt.add_argument("--beta2", type=float, default=0.99)
    p_opt.add_argument("--steps", type=int, default=50)
    p_opt.add_argument("--dims", type=_parse_dims, default=(0,))
    p_opt.add_argument("--seed", type=int, default=0, help="fixes any randomness")
    p_opt.add_argument("--out-dir", required=True)

    p_ver = sub.add_parser(
        "verify", help="randomized cross-check of critical sets against the oracle"
    )
    p_ver.add_argument("--cases", type=int, default=100, help="cases per move kind")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--max-simplices", type=int, default=40)
    p_ver.add_argument(
        "--report", default="verify_failure.json", help="reproducer path on mismatch"
    )
    return parser


def _cmd_persistence(args) -> int:
    data = _load_input(args.input, args.shape)
    filt = lower_star_3d(data) if isinstance(data, GridField) else lower_star_1d(data)
    pairs = read_pairs(filt, dims=args.dims)
    csv = diagram_to_csv(pairs)
    if args.out:
        _atomic_write(Path(args.out), lambda p: p.write_text(csv))
    else:
        sys.stdout.write(csv)
    return 0


def _cmd_optimize(args) -> int:
    np.random.seed(args.seed)
    data = _load_input(args.input, args.shape)
    cfg = OptimizerConfig(
        method=Method(args.method),
        strategy=Strategy(args.strategy),
        optimizer=OptimizerKind(args.optimizer),
        learning_rate=args.lr,
        momentum=args.momentum,
        beta1=args.beta1,
        beta2=args.beta2,
        steps=args.steps,
        loss=LossSpec(
            kind=args.loss,
            eps=args.eps,
            threshold=args.threshold,
            mode=MatchMode(args.mode),
        ),
        dims=args.dims,
    )
    log = run(data, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _atomic_write(out / "loss.csv", lambda p: p.write_text(log.loss_csv()))
    _atomic_write(out / "vineyard.csv", lambda p: p.write_text(log.vineyard_csv()))
    stem = Path(args.input).stem
    if isinstance(data, GridField):
        _atomic_write(
            out / f"{stem}_final.raw", lambda p: write_raw_field(p, log.final_values)
        )
    else:
        _atomic_write(
            out / f"{stem}_final.txt", lambda p: write_signal(p, log.final_values)
        )
    return 0


def _cmd_verify(args) -> int:
    mismatch = verify_random_cases(args.cases, args.seed, args.max_simplices)
    if mismatch is None:
        print(f"ok: {args.cases} cases per move kind, no mismatches")
        return 0
    report = Path(args.report)
    report.write_text(json.dumps(mismatch.to_json(), indent=2) + "\n")
    print(f"mismatch found ({mismatch.case}); reproducer written to {report}")
    return 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "persistence":
            return _cmd_persistence(args)
        if args.command == "optimize":
            return _cmd_optimize(args)
        return _cmd_verify(args)
    except NumericalError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3
    except (CritoptError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
