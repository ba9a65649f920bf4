#!/usr/bin/env python3
"""Sweep the standing corpus grid and print the aggregate report.

Arguments are forwarded to the corpus subcommand, so the usual flags work:

    python3 scripts/run_corpus.py --random-seeds 10 --format csv
    python3 scripts/run_corpus.py example44 3 1 --no-timings
"""

import sys

from genuslab.cli import main

if __name__ == "__main__":
    sys.exit(main(["corpus"] + sys.argv[1:]))
