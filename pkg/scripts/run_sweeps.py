"""Run the two shipped coupling-strength sweeps and summarise their shape.

Usage: python scripts/run_sweeps.py [--outdir DIR] [--threads N]

Writes sweep_lambda1.csv and sweep_lambda20.csv into DIR (default: ./sweeps) and prints,
for each r, tau_qsl at the smallest, middle and largest gamma0.
"""
import argparse
import time
from pathlib import Path

from fidqsl.sweep import SweepConfig, read_csv, rows_to_csv, run_sweep

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="sweeps")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in ("sweep_lambda1", "sweep_lambda20"):
        cfg = SweepConfig.load(ROOT / "configs" / f"{name}.json")
        start = time.perf_counter()
        text = rows_to_csv(run_sweep(cfg, threads=args.threads))
        path = outdir / f"{name}.csv"
        path.write_text(text)
        print(f"{name}: lambda={cfg.lam}, {len(cfg.gamma0_grid)} gamma0 x {len(cfg.r_values)} r "
              f"in {time.perf_counter() - start:.1f}s -> {path}")
        rows = read_csv(text)
        for r in cfg.r_values:
            sel = [row for row in rows if row["r"] == r]
            picks = (sel[0], sel[len(sel) // 2], sel[-1])
            print(f"  r={r}: " + "  ".join(f"g0={p['gamma0']:.3g}: {p['tau_qsl']:.4f}"
                                           for p in picks))


if __name__ == "__main__":
    main()
