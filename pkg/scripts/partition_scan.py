#!/usr/bin/env python3
"""Scan the perimeter/log-slope argmin partitions over a range of dimensions.

For each n the script tabulates which round-cylinder section count minimizes
the perimeter density and which minimizes the logarithmic growth rate, lists
the refined crossing abscissas, and reports the measure windows where the two
argmins disagree.  Writes one CSV per dimension plus a JSON summary.
"""

import argparse
import csv
import json
from pathlib import Path

import numpy as np

from gausscvx import cylinder as cyl


def scan(n: int, grid_size: int):
    a = np.linspace(0.005, 0.995, grid_size)
    table = cyl.partition(n, grid=a)
    mis = np.asarray(table.mismatch)
    windows = []
    if mis.any():
        idx = np.flatnonzero(mis)
        splits = np.flatnonzero(np.diff(idx) > 1)
        for chunk in np.split(idx, splits + 1):
            windows.append((float(a[chunk[0]]), float(a[chunk[-1]])))
    return table, windows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--grid", type=int, default=999)
    ap.add_argument("--out-dir", default="artifacts/partition")
    args = ap.parse_args(argv)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {}
    for n in range(2, args.max_n + 1):
        table, windows = scan(n, args.grid)
        rows = zip(table.a, table.s_argmin, table.phi_argmin, table.mismatch)
        csv_path = out_dir / f"partition_n{n}.csv"
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "s_argmin", "phi_argmin", "mismatch"])
            for a, sk, pk, m in rows:
                w.writerow([f"{a:.6f}", int(sk), int(pk), int(m)])
        summary[n] = {
            "crossings_s": [list(c) for c in table.crossings_s],
            "crossings_phi": [list(c) for c in table.crossings_phi],
            "mismatch_windows": windows,
            "mismatch_count": int(np.sum(table.mismatch)),
            "grid_size": args.grid,
            "csv": str(csv_path),
        }
        print(f"n={n}: {len(windows)} mismatch window(s) "
              + ", ".join(f"({lo:.4f}, {hi:.4f})" for lo, hi in windows))
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2))
    print(f"wrote {out_dir / 'summary.json'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
