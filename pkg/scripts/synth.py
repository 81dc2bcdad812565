# scripts/synth.py
"""
Generate a synthetic scenario: proposals.json, flows/ and ground_truth.json.

Example:
    python scripts/synth.py --spec data/scenarios/occlusion.json --out data/synth/occlusion
"""
import argparse
import sys

from bootstrap import add_src_to_path, setup_logging

add_src_to_path()

from vos_tracking.commands import cmd_synth


def parse_args():
    p = argparse.ArgumentParser(description="Write a seeded synthetic tracking scenario.")
    p.add_argument("--spec", required=True, help="Scenario JSON.")
    p.add_argument("--out", required=True, help="Output directory.")
    return p.parse_args()


def main():
    args = parse_args()
    setup_logging()
    sys.exit(cmd_synth(args.spec, args.out))


if __name__ == "__main__":
    main()
