"""Export the bundled fixture inputs for command-line walkthroughs.

Usage: python -m ecoqa.fixtures --export DIR
"""

import argparse
import sys

from ecoqa.fixtures import export_raw_inputs


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m ecoqa.fixtures")
    parser.add_argument("--export", metavar="DIR", required=True,
                        help="directory to copy the bundled raw inputs into")
    args = parser.parse_args(argv)
    exported = export_raw_inputs(args.export)
    for name, path in exported.items():
        print(f"{name}\t{path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
