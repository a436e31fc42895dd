"""``doubling-lab`` command line entry point.

Exit codes: 0 success, 1 gate failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import DoublingLabError, InvalidArgument
from .experiments import REGISTRY, ExperimentConfig, run


def _int_list(text: str) -> tuple:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n-list expects comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("--n-list is empty")
    return vals


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", help="output file (default: stdout)")
    shared.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--n-list", type=_int_list, default=())
    shared.add_argument("--gap", action="append", default=[],
                        help='GAP as "base;d1:L1,d2:L2"; repeatable')
    shared.add_argument("--set-file", help="integer set file, one value per line")
    shared.add_argument("--k", type=float, default=3.0, help="doubling threshold K")
    shared.add_argument("--delta", type=float, default=1.0)
    shared.add_argument("--eps", type=float, default=None, help="explicit pipeline epsilon")
    shared.add_argument("--sample", type=int, default=10_000)

    parser = argparse.ArgumentParser(prog="doubling-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "multtable": "density of the n x n multiplication table",
        "energy-decay": "E+(B.B)/n^6 for B = [1..n]",
        "search": "heuristic search for large small-doubling subsets of B.B",
        "pipeline": "run the small-doubling refinement pipeline on B = [1..n]",
        "tension": "restricted omega tension between P1 x P2 and P3",
        "omega-stats": "restricted omega statistics over a GAP",
        "energy": "additive and multiplicative energy of a set",
        "sumset": "sumset and product-set sizes of a set",
    }
    for name in REGISTRY:
        sub.add_parser(name, parents=[shared], help=helps[name])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = ExperimentConfig(
            name=args.command, n_list=args.n_list, k=args.k, delta=args.delta, eps=args.eps,
            sample=args.sample, seed=args.seed, fmt=args.fmt, out=args.out,
            gaps=tuple(args.gap), set_file=args.set_file,
        )
        report = run(cfg)
        text = report.render(cfg.fmt)
    except InvalidArgument as exc:
        print(f"doubling-lab: error: {exc}", file=sys.stderr)
        return 2
    except DoublingLabError as exc:
        print(f"doubling-lab: failed: {exc}", file=sys.stderr)
        return 1
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report.gate is False:
        print(f"doubling-lab: gate failed: {report.gate_description}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
