"""Command-line front end.

Exit codes: 0 success, 2 bad configuration or usage, 3 data problems,
4 training or attribution failures.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .audit import AuditConfig, run_audit
from .data import DEFAULT_MISSING_TOKENS
from .exceptions import ConfigError, DataError, ExplanationError, TrainingError


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="align-audit",
        description="Check whether a binary classifier's feature importances "
                    "agree with the data's own group-difference effect sizes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="audit one CSV dataset")
    run.add_argument("--data", required=True, help="path to a CSV file with a header row")
    run.add_argument("--target", required=True, help="name of the binary outcome column")
    run.add_argument("--features",
                     help="comma-separated feature columns (default: all but the target)")
    run.add_argument("--model", choices=["tree", "mlp", "both"], default="both",
                     help="which models to train (default both)")
    run.add_argument("--test-fraction", type=float, default=0.2,
                     help="held-out fraction of rows (default 0.2)")
    run.add_argument("--seed", type=int, default=42,
                     help="seed for splitting, training, and attribution (default 42)")
    run.add_argument("--smd-scope", choices=["full", "train"], default="full",
                     help="compute effect sizes on all rows or the training split")
    run.add_argument("--out", default="audit_out",
                     help="directory for reports and figures (default audit_out)")
    run.add_argument("--missing-token", action="append", default=None,
                     metavar="TOKEN",
                     help="cell value treated as missing; repeatable "
                          f"(default {list(DEFAULT_MISSING_TOKENS)})")
    run.add_argument("--shap-background", type=int, default=100,
                     help="background sample size for attribution (default 100)")
    run.add_argument("--shap-coalitions", type=int, default=2048,
                     help="coalition budget per explained row (default 2048)")
    run.add_argument("--shap-seed", type=int, default=None,
                     help="separate seed for attribution (default: --seed)")
    return parser


def _config_from_args(args):
    features = None
    if args.features is not None:
        features = tuple(f.strip() for f in args.features.split(",") if f.strip())
        if not features:
            raise ConfigError("--features was given but names no columns")
    tokens = (DEFAULT_MISSING_TOKENS if args.missing_token is None
              else tuple(args.missing_token))
    return AuditConfig(
        data_path=args.data,
        target=args.target,
        features=features,
        model=args.model,
        test_fraction=args.test_fraction,
        seed=args.seed,
        smd_scope=args.smd_scope,
        out_dir=args.out,
        background_size=args.shap_background,
        n_coalitions=args.shap_coalitions,
        shap_seed=args.shap_seed,
        missing_tokens=tokens,
    )


def _print_summary(result, out=None):
    # resolve the stream late so callers that swap sys.stdout are honored
    out = sys.stdout if out is None else out
    report = result.report
    cfg = report.config
    print(f"dataset: {report.dataset} "
          f"({cfg['n_rows']} rows, {len(cfg['encoded_features'])} features, "
          f"{cfg['n_train']} train / {cfg['n_test']} test)", file=out)
    for method in ("tree", "mlp"):
        if method in report.accuracies:
            print(f"{method} test accuracy: {report.accuracies[method]:.3f}", file=out)
    for key in ("smd_tree", "smd_shap"):
        if key in report.rho:
            rho = report.rho[key]
            shown = "undefined" if rho is None else f"{rho:+.3f}"
            print(f"spearman {key.replace('_', ' vs ')}: {shown} "
                  f"({report.strength[key]})", file=out)
    top = report.rankings["smd"].top(1)[0]
    print(f"largest effect size: {top}", file=out)
    for path in result.paths:
        print(f"wrote {path}", file=out)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        result = run_audit(_config_from_args(args))
    except ConfigError as exc:
        print(f"align-audit: configuration error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"align-audit: data error: {exc}", file=sys.stderr)
        return 3
    except (TrainingError, ExplanationError) as exc:
        print(f"align-audit: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"align-audit: cannot read data: {exc}", file=sys.stderr)
        return 3
    _print_summary(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
