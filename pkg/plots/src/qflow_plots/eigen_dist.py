"""Density surface P(q_m, tau), vertical scale clipped at 100."""

import numpy as np

from .reader import load_columns

DENSITY_CLIP = 100.0


def render(input_csv: str, output_image: str) -> None:
    from ._mpl import plt, save

    data = load_columns(input_csv, ["tau", "q_m", "density"])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if data["tau"].size:
        taus = np.unique(data["tau"])
        qms = np.unique(data["q_m"])
        dens = np.full((len(taus), len(qms)), np.nan)
        ti = np.searchsorted(taus, data["tau"])
        qi = np.searchsorted(qms, data["q_m"])
        dens[ti, qi] = np.minimum(data["density"], DENSITY_CLIP)
        mesh = ax.pcolormesh(qms, taus, dens, shading="nearest",
                             vmin=0.0, vmax=min(DENSITY_CLIP, np.nanmax(dens)))
        fig.colorbar(mesh, ax=ax, label=f"P(q_m) (clipped at {DENSITY_CLIP:g})")
    ax.set_xlabel("q_m")
    ax.set_ylabel("tau")
    ax.set_title("Measured-eigenvalue density")
    save(fig, output_image)
