# scripts/ablation.py
"""
Sweep tracking configuration variants over synthetic scenarios.

Example:
    python scripts/ablation.py --spec data/scenarios/crossing.json --seeds 0 1 2 3 --out results/ablation.csv
"""
import argparse
import sys

from bootstrap import add_src_to_path, setup_logging

add_src_to_path()

from vos_tracking.commands import cmd_ablation
from vos_tracking.validation.ablation import ABLATION_VARIANTS


def parse_args():
    p = argparse.ArgumentParser(description="Mean J and purity per configuration variant on synthetic scenarios.")
    p.add_argument("--spec", required=True, nargs="+", help="One or more scenario JSON files.")
    p.add_argument("--out", required=True, help="Summary CSV, one row per variant.")
    p.add_argument("--seeds", type=int, nargs="+", default=None, help="Re-seed every scenario with each of these seeds.")
    p.add_argument(
        "--variants",
        nargs="+",
        default=None,
        choices=list(ABLATION_VARIANTS),
        help="Variants to run (default: all).",
    )
    p.add_argument("--config", default=None, help="Base YAML config the variants override.")
    p.add_argument("--per-run", default=None, help="Optional CSV with one row per (variant, scenario).")
    return p.parse_args()


def main():
    args = parse_args()
    setup_logging()
    sys.exit(
        cmd_ablation(
            args.spec,
            args.out,
            seeds=args.seeds,
            variants=args.variants,
            config_path=args.config,
            per_run_path=args.per_run,
        )
    )


if __name__ == "__main__":
    main()
