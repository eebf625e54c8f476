#!/usr/bin/env python3
"""Run every invariant suite; nonzero exit on the first failure."""

import sys

from lightcone.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["check"] + (sys.argv[1:] or ["all"])))
