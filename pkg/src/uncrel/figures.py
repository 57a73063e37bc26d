"""Matplotlib rendering of sweep and overlay figures to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .spin import RHS_FULL, RHS_HALF


def render_sweep_figures(rows, bounds_path, ratios_path) -> None:
    """Render the bound comparison and the normalized-ratio comparison."""
    phi = [row.phi for row in rows]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(phi, [row.lhs14 for row in rows], color="red",
            label="inaccuracy x fluctuation")
    ax.plot(phi, [row.lhs15 for row in rows], color="blue",
            label="rms-combined product")
    ax.axhline(RHS_FULL, color="black", linestyle="--", linewidth=1, label="bound")
    ax.set_xlabel("detuning angle (rad)")
    ax.set_ylabel("product value")
    ax.set_title("Measurement products against the commutator bound")
    ax.legend(loc="upper left")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(bounds_path, dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(phi, [row.ratio14 for row in rows], color="red",
            label="inaccuracy x fluctuation (normalized)")
    ax.plot(phi, [row.ratio16 for row in rows], color="green",
            label="error-disturbance sum (normalized)")
    ax.axhline(RHS_HALF, color="black", linestyle="--", linewidth=1, label="bound")
    ax.set_xlabel("detuning angle (rad)")
    ax.set_ylabel("value / lower bound")
    ax.set_title("Bound-normalized comparison")
    ax.legend(loc="upper left")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(ratios_path, dpi=150)
    plt.close(fig)


def render_overlay_figure(rows, overlay_rows, path) -> None:
    """Curves with ingested data points drawn on top, one panel per quantity."""
    from .spin import reference_value

    quantities = sorted({row.quantity_id for row in overlay_rows})
    if not quantities:
        quantities = ["eps"]
    fig, axes = plt.subplots(
        len(quantities), 1, figsize=(7, 3.0 * len(quantities)), squeeze=False
    )
    phi = [row.phi for row in rows]
    for ax, quantity in zip(axes[:, 0], quantities):
        ax.plot(phi, [reference_value(quantity, p) for p in phi],
                color="gray", label="curve")
        points = [row for row in overlay_rows if row.quantity_id == quantity]
        ax.scatter([p.phi for p in points], [p.value for p in points],
                   color="red", s=18, zorder=3, label="data")
        ax.set_ylabel(quantity)
        ax.grid(alpha=0.3)
        ax.legend(loc="best", fontsize=8)
    axes[-1, 0].set_xlabel("detuning angle (rad)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
