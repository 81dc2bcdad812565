# scripts/track.py
"""
Track objects through a video from mask proposals and optical flow.

Example:
    python scripts/track.py --proposals data/seq/proposals.json --flows data/seq/flows \
        --config config.yaml --out outputs/seq_tracks.json --debug-dir outputs/seq_debug
"""
import argparse
import sys

from bootstrap import add_src_to_path, setup_logging

add_src_to_path()

from vos_tracking.commands import cmd_track


def parse_args():
    p = argparse.ArgumentParser(description="Run the proposal -> tracklet -> track pipeline.")
    p.add_argument("--proposals", required=True, help="Proposal JSON file.")
    p.add_argument("--flows", required=True, help="Directory of NNNNNN.flo files (frame t -> t+1).")
    p.add_argument("--config", default=None, help="YAML config (defaults used when omitted).")
    p.add_argument("--out", required=True, help="Output track JSON.")
    p.add_argument("--debug-dir", default=None, help="Optional directory for intermediate dumps.")
    p.add_argument("-v", "--verbose", action="store_true", help="Log per-iteration details.")
    return p.parse_args()


def main():
    args = parse_args()
    setup_logging(args.verbose)
    sys.exit(cmd_track(args.proposals, args.flows, args.config, args.out, args.debug_dir))


if __name__ == "__main__":
    main()
