# scripts/evaluate.py
import argparse
import sys

from bootstrap import add_src_to_path, setup_logging

add_src_to_path()

from vos_tracking.commands import cmd_eval


def parse_args():
    p = argparse.ArgumentParser(description="Mean region J of predicted tracks against ground truth.")
    p.add_argument("--pred", required=True, help="Predicted track JSON.")
    p.add_argument("--gt", required=True, help="Ground-truth track JSON.")
    p.add_argument("--report", default=None, help="Optional JSON report path.")
    return p.parse_args()


def main():
    args = parse_args()
    setup_logging()
    sys.exit(cmd_eval(args.pred, args.gt, args.report))


if __name__ == "__main__":
    main()
