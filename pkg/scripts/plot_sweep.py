"""Plot tau_qsl against gamma0 (log axis) from a sweep CSV, one curve per r.

Usage: python scripts/plot_sweep.py sweeps/sweep_lambda1.csv [--out sweep_lambda1.png]
Needs matplotlib (``pip install .[plot]``).
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from fidqsl.sweep import read_csv  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--out")
    ap.add_argument("--column", default="tau_qsl")
    args = ap.parse_args()
    rows = read_csv(Path(args.csv).read_text())
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for r in sorted({row["r"] for row in rows}):
        sel = [row for row in rows if row["r"] == r and row.get(args.column) is not None]
        ax.plot([s["gamma0"] for s in sel], [s[args.column] for s in sel], label=f"r={r:g}")
    ax.set_xscale("log")
    ax.set_xlabel("gamma0")
    ax.set_ylabel(args.column)
    ax.legend()
    fig.tight_layout()
    out = args.out or str(Path(args.csv).with_suffix(".png"))
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
