"""Shared matplotlib setup: headless backend, deterministic output."""

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "qflow-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def save(fig, path: str) -> None:
    """Write the figure without embedded timestamps."""
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path, dpi=150)
    plt.close(fig)
