"""Density overlay for 1-D runs: markers per solution, line for the reference,
optional zoom panel."""

from __future__ import annotations

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .fieldfile import load_field_file

_MARKERS = ("o", "s", "^", "d", "v")


def plot_overlay_1d(solutions, reference=None, zoom=None, out="overlay.png",
                    labels=None, dpi=150):
    """Render the overlay and return the written path.

    `solutions` is a list of field-file paths; `zoom` an optional (lo, hi)
    x-window shown in a second panel.
    """
    sols = [load_field_file(p) for p in solutions]
    ref = load_field_file(reference) if reference else None
    if labels is None:
        labels = [s.header.get("scheme", f"run {i}") for i, s in enumerate(sols)]

    npanels = 2 if zoom else 1
    fig, axes = plt.subplots(1, npanels, figsize=(6 * npanels, 4.5), squeeze=False)
    panels = [(axes[0][0], None)]
    if zoom:
        panels.append((axes[0][1], tuple(zoom)))
    for ax, window in panels:
        if ref is not None:
            ax.plot(ref.col("x"), ref.col("rho"), "-", color="0.3", lw=1.0,
                    label="reference")
        for i, sol in enumerate(sols):
            ax.plot(sol.col("x"), sol.col("rho"), _MARKERS[i % len(_MARKERS)],
                    ms=2.5, mfc="none", label=labels[i])
        if window:
            ax.set_xlim(*window)
            lo, hi = window
            x = sols[0].col("x")
            sel = (x >= lo) & (x <= hi)
            if sel.any():
                vals = [s.col("rho")[sel] for s in sols]
                ymin = min(v.min() for v in vals)
                ymax = max(v.max() for v in vals)
                pad = 0.1 * (ymax - ymin or 1.0)
                ax.set_ylim(ymin - pad, ymax + pad)
        ax.set_xlabel("x")
        ax.set_ylabel("density")
        ax.legend(loc="best", fontsize=8)
    t = sols[0].header.get("t", "?")
    fig.suptitle(f"{sols[0].header.get('problem', '')} density at t={t}")
    fig.tight_layout()
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--solution", action="append", required=True,
                    help="field file; repeat for several runs")
    ap.add_argument("--reference", default=None)
    ap.add_argument("--zoom", nargs=2, type=float, default=None, metavar=("LO", "HI"))
    ap.add_argument("--out", default="overlay.png")
    ap.add_argument("--label", action="append", default=None)
    args = ap.parse_args(argv)
    path = plot_overlay_1d(args.solution, reference=args.reference, zoom=args.zoom,
                           out=args.out, labels=args.label)
    print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
