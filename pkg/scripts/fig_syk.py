#!/usr/bin/env python3
"""Ensemble growth-rate ratio vs interaction order q.

Writes out/fig_syk.csv: for even q the bound's exponent over the large-q
reference rate, approaching 1 from below as q grows.
"""

import pathlib
import sys

from lightcone.cli import main

if __name__ == "__main__":
    out = pathlib.Path("out")
    out.mkdir(exist_ok=True)
    argv = ["figures", "syk", "--out", str(out / "fig_syk.csv")] + sys.argv[1:]
    raise SystemExit(main(argv))
