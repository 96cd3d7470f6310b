"""Trajectory ensembles: raw q(tau) and the inferred q_m(tau) = q/G."""

import numpy as np

from .reader import load_columns


def _render_paths(input_csv: str, output_image: str, column: str,
                  title: str) -> None:
    from ._mpl import plt, save

    data = load_columns(input_csv, ["tau", "traj_id", column])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for tid in np.unique(data["traj_id"]):
        sel = data["traj_id"] == tid
        order = np.argsort(data["tau"][sel])
        ax.plot(data["tau"][sel][order], data[column][sel][order], lw=0.8)
    ax.set_xlabel("tau")
    ax.set_ylabel(column)
    ax.set_title(title)
    save(fig, output_image)


def render(input_csv: str, output_image: str) -> None:
    _render_paths(input_csv, output_image, "q", "Amplified quadrature trajectories")


def render_measured(input_csv: str, output_image: str) -> None:
    _render_paths(input_csv, output_image, "q_m",
                  "Measured-eigenvalue trajectories")
