"""Command-line entry point: ``subrip <experiment> [flags]``.

Exit status is 0 on completion and 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (DEFAULT_FORMAT, KINDS, ConfigError, ExperimentConfig, load_config_file,
                          random_sparse_l1, run)
from .rip import BudgetExceeded

_HELP = {
    "rip-exact": "exact restricted isometry constants by support enumeration",
    "rip-scaling": "empirical minimal row count q* per (N, k, eps)",
    "maurey-verify": "end-to-end Maurey sampling / decomposition checks (JSON bundle)",
    "tail-probe": "Monte-Carlo failure rates of the Chernoff-Hoeffding bounds",
    "recovery-phase": "IHT / OMP success-rate grid over (k, q)",
}


def _ints(s: str) -> list[int]:
    return [int(v) for v in s.split(",") if v]


def _floats(s: str) -> list[float]:
    return [float(v) for v in s.split(",") if v]


def _setting(s: str) -> tuple[str, object]:
    key, sep, val = s.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {s!r}")
    try:
        return key, json.loads(val)
    except json.JSONDecodeError:
        return key, val


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON config file; flags override its fields")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], help="output format")
    p.add_argument("--threads", type=int, help="worker threads for trial-level parallelism")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subrip",
        description="Audit and stress-test subsampled-unitary measurement matrices.")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=_HELP[kind], description=_HELP[kind])
        _common(p)
        p.add_argument("--n", type=_ints, help="comma-separated grid of N")
        p.add_argument("--k", type=_ints, help="comma-separated grid of k")
        p.add_argument("--q", type=_ints, help="comma-separated grid of q")
        p.add_argument("--eps", type=_floats, help="comma-separated grid of eps")
        p.add_argument("--eta", type=_floats, help="comma-separated grid of eta")
        p.add_argument("--trials", type=int, help="trials (resamples) per grid point")
        p.add_argument("--unitary", choices=["dft", "hadamard", "dense"])
        p.add_argument("--dense-path", dest="dense_path", metavar="PATH",
                       help="explicit unitary in the row-per-line 're+imj' text format")
        p.add_argument("--set", dest="settings", type=_setting, action="append", default=[],
                       metavar="KEY=VALUE", help="override any config field (VALUE parsed as JSON)")
        if kind == "rip-exact":
            p.add_argument("--timing", action="store_true", default=None,
                           help="add per-row wall-clock timing (output no longer byte-stable)")

    p = sub.add_parser("g-histogram", help="per-level histograms of |g^(i)| as CSV",
                       description="Sample one x and Q, build a family and dump |g^(i)| histograms.")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--q", type=int, default=1024)
    p.add_argument("--eps", type=float, default=0.125)
    p.add_argument("--eta", type=float, default=0.125)
    p.add_argument("--variant", choices=["simple", "improved"], default="improved")
    p.add_argument("--sparsity", type=int, default=4)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--c-f", dest="c_f", type=float, default=8.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _histogram(args) -> int:
    from .linalg import make_unitary
    from .maurey import NetParams, build_family_for, g_histograms
    from .sampling import make_rng, sample_rows

    try:
        params = NetParams(args.eps, args.eta, args.variant, args.c_f)
        m = make_unitary("dft", args.n)
    except ValueError as e:
        print(f"subrip: config error: {e}", file=sys.stderr)
        return 2
    rng = make_rng(args.seed, 1)
    x = random_sparse_l1(args.n, args.sparsity, rng)
    family, _ = build_family_for(m, x, sample_rows(args.n, args.q, args.seed), params, rng)
    lines = ["level,bin_lo,bin_hi,count"]
    lines += [f"{r['level']},{r['bin_lo']!r},{r['bin_hi']!r},{r['count']}"
              for r in g_histograms(family, args.bins)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "g-histogram":
        return _histogram(args)
    try:
        layers = [load_config_file(args.config)] if args.config else []
        flags = {k: getattr(args, k) for k in
                 ("seed", "out", "format", "threads", "n", "k", "q", "eps", "eta", "trials",
                  "unitary", "dense_path")}
        flags["timing"] = getattr(args, "timing", None)
        layers.append(flags)
        layers.append(dict(args.settings))
        cfg = ExperimentConfig.build(args.command, *layers)
        result = run(cfg)
    except (ConfigError, BudgetExceeded) as e:
        print(f"subrip: config error: {e}", file=sys.stderr)
        return 2
    fmt = cfg.format or DEFAULT_FORMAT.get(cfg.kind, "csv")
    _emit(result.render(fmt), cfg.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
