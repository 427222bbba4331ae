"""Plot-data export: CSV of the homeomorphism graph and set rectangles,
plus an optional rendered figure.

Everything here is intentionally lossy (decimal floats); certificates
and all other I/O stay exact.
"""
from __future__ import annotations

import csv
import os
import tempfile
from fractions import Fraction
from typing import Optional

from .homeo import PLHomeo
from .intervals import IntervalUnion


def plot_rows(phi: PLHomeo, cover: Optional[IntervalUnion] = None,
              image: Optional[IntervalUnion] = None, refine: int = 64):
    """Rows (x, y, kind) for the CSV: the graph of phi sampled at its
    breakpoints plus a uniform refinement, and one row per component of
    the cover / image rectangles (x=lo, y=hi)."""
    xs = set(x for x, _ in phi.points)
    xs.update(Fraction(i, refine) for i in range(refine + 1))
    rows = [(float(x), float(phi(x)), "homeo") for x in sorted(xs)]
    if cover is not None:
        rows.extend((float(iv.lo), float(iv.hi), "cover") for iv in cover.components)
    if image is not None:
        rows.extend((float(iv.lo), float(iv.hi), "image") for iv in image.components)
    return rows


def write_plot_csv(rows, path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "kind"])
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_figure(phi: PLHomeo, cover: Optional[IntervalUnion],
                  image: Optional[IntervalUnion], path: str,
                  refine: int = 64) -> None:
    """Render the homeomorphism with the cover (x axis) and its image
    (y axis) marked as shaded bands."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    xs = sorted(set(x for x, _ in phi.points)
                | {Fraction(i, refine) for i in range(refine + 1)})
    ax.plot([float(x) for x in xs], [float(phi(x)) for x in xs],
            color="tab:blue", lw=1.5, label="homeomorphism")
    if cover is not None:
        for iv in cover.components:
            ax.axvspan(float(iv.lo), float(iv.hi), color="tab:orange", alpha=0.25,
                       lw=0)
        ax.plot([], [], color="tab:orange", lw=6, alpha=0.4, label="cover")
    if image is not None:
        for iv in image.components:
            ax.axhspan(float(iv.lo), float(iv.hi), color="tab:green", alpha=0.25,
                       lw=0)
        ax.plot([], [], color="tab:green", lw=6, alpha=0.4, label="image")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
