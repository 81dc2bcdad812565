# scripts/render.py
import argparse
import sys

from bootstrap import add_src_to_path, setup_logging

add_src_to_path()

from vos_tracking.commands import cmd_render


def parse_args():
    p = argparse.ArgumentParser(description="Render a track JSON as one label PGM per frame.")
    p.add_argument("--tracks", required=True, help="Track JSON (pipeline output or ground truth).")
    p.add_argument("--out", required=True, help="Output directory for NNNNNN.pgm files.")
    return p.parse_args()


def main():
    args = parse_args()
    setup_logging()
    sys.exit(cmd_render(args.tracks, args.out))


if __name__ == "__main__":
    main()
