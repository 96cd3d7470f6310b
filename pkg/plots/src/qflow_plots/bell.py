"""Bell correlation B(G): analytic curve, Monte Carlo error bars, B = 2 line."""

import numpy as np

from .reader import load_columns


def render(input_csv: str, output_image: str) -> None:
    from ._mpl import plt, save

    data = load_columns(input_csv, ["G", "B_analytic", "B_mc", "stderr"])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    order = np.argsort(data["G"])
    g = data["G"][order]
    ax.plot(g, data["B_analytic"][order], "-", label="analytic")
    mc = data["B_mc"][order]
    se = data["stderr"][order]
    have_mc = ~np.isnan(mc)
    if have_mc.any():
        ax.errorbar(g[have_mc], mc[have_mc], yerr=se[have_mc], fmt="o",
                    ms=3, capsize=2, label="Monte Carlo")
    ax.axhline(2.0, color="k", ls="--", lw=0.8, label="B = 2")
    ax.set_xlabel("G")
    ax.set_ylabel("B")
    ax.set_title("Bell correlation vs meter gain")
    ax.legend()
    save(fig, output_image)
