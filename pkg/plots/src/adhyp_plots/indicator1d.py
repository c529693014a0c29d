"""ln(Ebar) per cell for the adaption-constant tuning workflow, with a
horizontal marker at ln(C)."""

from __future__ import annotations

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .fieldfile import load_field_file

_FLOOR = 1e-300


def plot_indicator_1d(path, C=None, out="indicator.png", dpi=150):
    """Scatter ln(Ebar) against x; C defaults to the file header value."""
    data = load_field_file(path)
    x = data.col("x")
    ebar = data.col("Ebar")
    y = np.log(np.maximum(ebar, _FLOOR))
    if C is None and "C" in data.header:
        C = float(data.header["C"])

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(x, y, ".", ms=3)
    if C is not None:
        ax.axhline(np.log(C), color="crimson", lw=1.2, label=f"ln(C), C={C:g}")
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("x")
    ax.set_ylabel("ln(Ebar)")
    finite = y[ebar > _FLOOR]
    if finite.size:
        lo = finite.min()
        hi = max(finite.max(), np.log(C) if C else finite.max())
        pad = 0.05 * (hi - lo or 1.0)
        ax.set_ylim(lo - pad, hi + pad)
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("input", help="field or indicator file with an Ebar column")
    ap.add_argument("--C", type=float, default=None)
    ap.add_argument("--out", default="indicator.png")
    args = ap.parse_args(argv)
    print(plot_indicator_1d(args.input, C=args.C, out=args.out))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
