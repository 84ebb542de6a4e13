"""Render the report's figures to PNG files next to the delimited output."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import stats

DPI = 150


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def render_report_figures(series, report, out_dir) -> list:
    """Write one PNG per stylized fact; returns the paths written.

    Statistics already present in the report (ACF arrays, histogram) are
    plotted as-is; the fit curves are recomputed from the series with the
    same defaults the report used.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    values = stats._values(series)
    written = []

    fig, ax = plt.subplots(figsize=(7, 2.8))
    ax.plot(values, lw=0.5)
    ax.set_xlabel("sample")
    ax.set_ylabel(report.label or "value")
    ax.set_title("analyzed series")
    ax.grid(alpha=0.3)
    written.append(_save(fig, out_dir / "series.png"))

    if report.pdf is not None:
        pdf = report.pdf
        centers = 0.5 * (pdf.bin_edges[:-1] + pdf.bin_edges[1:])
        grid = np.linspace(pdf.bin_edges[0], pdf.bin_edges[-1], 400)
        gauss = np.exp(-0.5 * ((grid - pdf.mean) / pdf.std) ** 2) / (
            pdf.std * math.sqrt(2.0 * math.pi)
        )
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.semilogy(centers, np.where(pdf.density > 0, pdf.density, np.nan), "o", ms=3,
                    label="standardized |returns|")
        ax.semilogy(grid, gauss, "--", label="matched Gaussian")
        ax.set_xlabel("standardized absolute return")
        ax.set_ylabel("density")
        ax.set_title("heavy tails")
        ax.legend(fontsize=8)
        ax.grid(alpha=0.3)
        written.append(_save(fig, out_dir / "pdf_tails.png"))

    if report.acf_return is not None and report.acf_abs_return is not None:
        lags = np.arange(report.acf_return.size)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(lags[1:], report.acf_return[1:], lw=0.8, label="returns")
        ax.plot(lags[1:], report.acf_abs_return[1:], lw=0.8, label="absolute returns")
        ax.axhline(0.0, color="gray", lw=0.5)
        ax.set_xlabel("lag (samples)")
        ax.set_ylabel("autocorrelation")
        ax.set_title("volatility clustering")
        ax.legend(fontsize=8)
        ax.grid(alpha=0.3)
        written.append(_save(fig, out_dir / "acf.png"))

    try:
        peak = stats.peak_scaling_exponent(values)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.loglog(peak.x, peak.y, "o", ms=4, label="P(R=0)")
        ax.loglog(peak.x, np.exp(peak.intercept) * peak.x**peak.slope, "--",
                  label=f"slope {peak.slope:.2f} (R$^2$={peak.r_squared:.3f})")
        ax.set_xlabel("k (sampling steps)")
        ax.set_ylabel("density peak")
        ax.set_title("peak scaling")
        ax.legend(fontsize=8)
        ax.grid(alpha=0.3, which="both")
        written.append(_save(fig, out_dir / "peak_scaling.png"))
    except Exception:
        pass

    try:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for q in stats.DEFAULT_MULTIFRACTAL_QS:
            fit = stats.multifractal_slope(values, q)
            ax.loglog(fit.x, fit.y, lw=0.9, label=f"q={q:g} (slope {fit.slope:.2f})")
        ax.set_xlabel("k (sampling steps)")
        ax.set_ylabel(r"$\langle|R^k|^q\rangle / \langle|R^k|\rangle^q$")
        ax.set_title("multifractal moment ratios")
        ax.legend(fontsize=8)
        ax.grid(alpha=0.3, which="both")
        written.append(_save(fig, out_dir / "multifractal.png"))
    except Exception:
        plt.close("all")

    try:
        dfa = stats.dfa_hurst(np.abs(stats.returns(values, 1).values))
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.loglog(dfa.x, dfa.y, "o", ms=4, label="F(n)")
        ax.loglog(dfa.x, np.exp(dfa.intercept) * dfa.x**dfa.slope, "--",
                  label=f"H = {dfa.slope:.2f} (R$^2$={dfa.r_squared:.3f})")
        ax.set_xlabel("window size n")
        ax.set_ylabel("fluctuation F(n)")
        ax.set_title("DFA of absolute returns")
        ax.legend(fontsize=8)
        ax.grid(alpha=0.3, which="both")
        written.append(_save(fig, out_dir / "dfa.png"))
    except Exception:
        plt.close("all")

    return written
