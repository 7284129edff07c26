"""Matplotlib overview figures written next to the CSV summaries."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed metadata and hash salt keep repeated renders byte-identical
_SAVE_KW = {"dpi": 100, "metadata": {"Software": None}}
plt.rcParams["svg.hashsalt"] = "mmpersist"
plt.rcParams["path.simplify"] = False

_COLORS = {0: "#1f77b4", 1: "#d62728"}


def _scatter(ax, pd, dim, color, label, marker="o"):
    pts = pd.in_dim(dim)
    xs = [b for b, d in pts]
    ys = [1.05 if math.isinf(d) else d for b, d in pts]
    ax.scatter(xs, ys, s=18, c=color, marker=marker, alpha=0.75, label=label, linewidths=0)


def pipeline_figure(path, results, compared=None, distances=None, dim: int = 1) -> None:
    """One diagram panel per threshold, plus a distance panel when comparing."""
    n = len(results) + (1 if distances else 0)
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.4), squeeze=False)
    axes = axes[0]
    for k, (t, pd) in enumerate(results):
        ax = axes[k]
        ax.plot([0, 1.05], [0, 1.05], color="#888888", lw=0.8, ls="--")
        _scatter(ax, pd, dim, _COLORS[1], "image")
        if compared is not None:
            _scatter(ax, compared[k][1], dim, "#2ca02c", "compared", marker="x")
        ax.set_xlim(-0.03, 1.08)
        ax.set_ylim(-0.03, 1.08)
        ax.set_title(f"t = {t}", fontsize=10)
        ax.set_xlabel("birth")
        if k == 0:
            ax.set_ylabel("death")
            if compared is not None:
                ax.legend(fontsize=8, loc="lower right")
    if distances:
        ax = axes[-1]
        ts = [str(t) for t, _ in distances]
        ds = [d for _, d in distances]
        ax.bar(ts, ds, color="#4c72b0")
        mean = sum(ds) / len(ds)
        ax.axhline(mean, color="#d62728", lw=1, ls=":")
        ax.set_title(f"bottleneck (mean {mean:.4f})", fontsize=10)
        ax.set_xlabel("threshold")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def holes_figure(path, image, pd, hist) -> None:
    """Input image, the 1st diagram and its death histogram side by side."""
    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.5))
    axes[0].imshow(image.pixels, cmap="gray", vmin=0, vmax=1, interpolation="nearest")
    axes[0].set_axis_off()
    axes[0].set_title("input", fontsize=10)
    pts = pd.in_dim(1)
    top = max([d for b, d in pts if not math.isinf(d)] + [1])
    axes[1].plot([0, top], [0, top], color="#888888", lw=0.8, ls="--")
    _scatter(axes[1], pd, 1, _COLORS[1], "H1")
    axes[1].set_xlabel("birth")
    axes[1].set_ylabel("death")
    axes[1].set_title("PD_1", fontsize=10)
    edges = [e for e, _ in hist.bins]
    counts = [c for _, c in hist.bins]
    axes[2].bar(edges, counts, width=hist.bin_width * 0.9, align="edge", color="#4c72b0")
    axes[2].set_xlabel("death value")
    axes[2].set_title("death histogram", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
