"""Matplotlib figures for blow-up reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402


def blowup_figure(report, path) -> None:
    """Two panels: minimal norm of each partial sum against the line ``s``, and the
    per-stage forced difference norm against ``m_{s+1}/m_s``."""
    stages = report.stages
    s_vals = [st.s for st in stages if st.outcome.optimal]
    norms = [st.outcome.value for st in stages if st.outcome.optimal]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(s_vals, norms, "o-", color="k", label=r"min $\max_k\|\varphi_k\|$ for $F_s$")
    ax1.plot(s_vals, s_vals, "--", color="0.5", label="$s$")
    ax1.set_xlabel("stage $s$")
    ax1.set_yscale("symlog", linthresh=1.0)
    ax1.legend(frameon=False, fontsize=8)
    ax1.set_title(f"n = {report.n}: {report.verdict}", fontsize=9)

    certified = [st for st in stages if st.diff_norm is not None]
    if certified:
        xs = [st.s for st in certified]
        ratios = [stages[st.s + 1].m / st.m for st in certified]
        diffs = [st.diff_norm for st in certified]
        ax2.plot(xs, diffs, "o-", color="k", label=r"$\max_k\|\varphi_k-\varphi^s_k\|$")
        ax2.plot(xs, ratios, "s--", color="0.5", label=r"$m_{s+1}/m_s$")
        ax2.set_yscale("log")
        ax2.legend(frameon=False, fontsize=8)
    else:
        ax2.text(0.5, 0.5, "no certificates", ha="center", va="center", transform=ax2.transAxes)
    ax2.set_xlabel("stage $s$")

    for ax in (ax1, ax2):
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
