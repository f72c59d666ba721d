"""Figure rendering for the CLI's report paths.

Figures are written next to the delimited outputs and never shown; the Agg
backend keeps this usable on headless machines.  The delimited files remain
the canonical artifacts, so everything here is presentation only.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


def figure_path(out_path):
    """PNG sibling of a delimited output file."""
    out_path = str(out_path)
    stem = out_path.rsplit(".", 1)[0] if "." in out_path.rsplit("/", 1)[-1] else out_path
    return stem + ".png"


def plot_curves(path, x, series, xlabel, ylabel, title=None):
    """Render named curves over a shared x axis to ``path``."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=130)
    for name, y in series.items():
        ax.plot(x, y, linewidth=1.4, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False, fontsize=9)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_stem(path, positions, weights, xlabel, ylabel, title=None):
    """Render a discrete distribution as a stem plot to ``path``."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=130)
    markerline, stemlines, baseline = ax.stem(positions, weights)
    plt.setp(markerline, markersize=4)
    plt.setp(stemlines, linewidth=1.2)
    plt.setp(baseline, linewidth=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
