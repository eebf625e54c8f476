#!/usr/bin/env python3
"""Chain bound comparison: path sum vs matrix exponential vs velocity envelope.

Writes out/fig_lr.csv (wide format: t, thm3, cor6, lr_alpha) for a 41-site
chain at separation 12.  Rerunning with the same arguments is bit-identical.
"""

import pathlib
import sys

from lightcone.cli import main

if __name__ == "__main__":
    out = pathlib.Path("out")
    out.mkdir(exist_ok=True)
    argv = ["figures", "lr", "--out", str(out / "fig_lr.csv")] + sys.argv[1:]
    raise SystemExit(main(argv))
