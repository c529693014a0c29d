"""Density pseudocolor maps for 2-D runs; two inputs render side by side."""

from __future__ import annotations

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .fieldfile import load_field_file


def plot_pseudocolor_2d(paths, out="density.png", cmap="viridis", dpi=150):
    """Render one panel per input file and return the written path."""
    if isinstance(paths, str):
        paths = [paths]
    files = [load_field_file(p) for p in paths]
    fig, axes = plt.subplots(1, len(files), figsize=(5.2 * len(files), 4.6),
                             squeeze=False)
    for ax, data in zip(axes[0], files):
        rho = data.grid_2d("rho")
        extent = (
            data.header_float("x_min"), data.header_float("x_max"),
            data.header_float("y_min"), data.header_float("y_max"),
        )
        im = ax.imshow(rho, origin="lower", extent=extent, cmap=cmap,
                       interpolation="nearest", aspect="equal")
        fig.colorbar(im, ax=ax, shrink=0.85)
        label = data.header.get("scheme", "")
        ax.set_title(f"{data.header.get('problem', '')} {label} t={data.header.get('t', '?')}")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", action="append", required=True,
                    help="2-D field file; give twice for a side-by-side pair")
    ap.add_argument("--out", default="density.png")
    ap.add_argument("--cmap", default="viridis")
    args = ap.parse_args(argv)
    print(plot_pseudocolor_2d(args.input, out=args.out, cmap=args.cmap))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
