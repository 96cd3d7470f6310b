"""Two-peak spin-measurement density P(sigma_m), one curve per gain."""

import numpy as np

from .reader import load_columns


def render(input_csv: str, output_image: str) -> None:
    from ._mpl import plt, save

    data = load_columns(input_csv, ["G", "sigma_m", "density"])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for gain in np.unique(data["G"]):
        sel = data["G"] == gain
        order = np.argsort(data["sigma_m"][sel])
        ax.plot(data["sigma_m"][sel][order], data["density"][sel][order],
                label=f"G = {gain:g}")
    ax.set_xlabel("sigma_m")
    ax.set_ylabel("P(sigma_m)")
    ax.set_title("Spin measurement density")
    if data["G"].size:
        ax.legend()
    save(fig, output_image)
