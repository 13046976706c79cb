"""
Figure output for sweep results.

Figures are written as SVG through an explicit :class:`~matplotlib.figure.Figure`
(no pyplot state), with a fixed hash salt and no date stamp so that an
identical result renders to an identical file.
"""

from __future__ import annotations

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

__all__ = ["AXIS_LABELS", "STYLE", "emit_plot"]

AXIS_LABELS = {
    "snr": "SNR (dB)",
    "snapshots": "Number of snapshots",
    "n_dft": "Number of DFT bins",
}
_Y_LABELS = {
    "sinr": "Output SINR (dB)",
    "deviation": "Deviation from optimal SINR (dB)",
}
_DISPLAY = {
    "rec_dft": "REC-DFT",
    "rec_dft_raw": "REC-DFT (no lag window)",
    "smi": "SMI",
    "capon_rec": "REC-Capon",
    "optimal": "Optimal",
}
_MARKERS = {"rec_dft": "o", "rec_dft_raw": "v", "smi": "s", "capon_rec": "^", "optimal": ""}

golden_mean = (5 ** 0.5 - 1.0) / 2.0
fig_width = 5.0

STYLE = {
    "figure.figsize": (fig_width, fig_width * golden_mean * 1.2),
    "font.size": 9,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "axes.grid": True,
    "grid.alpha": 0.4,
    "svg.hashsalt": "recdft",
    "svg.fonttype": "path",
}


def emit_plot(result, path, mode: str = "sinr") -> None:
    """
    Plot one series per beamformer against the sweep axis.

    ``mode="deviation"`` plots the mean deviation from the optimum and skips
    the optimal beamformer itself.
    """
    if mode not in _Y_LABELS:
        raise ValueError(f"mode must be 'sinr' or 'deviation', got {mode!r}")
    stat = "mean_sinr_db" if mode == "sinr" else "mean_dev_db"
    with matplotlib.rc_context(STYLE):
        fig = Figure()
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(111)
        x = [float(v) for v in result.axis_values]
        for method in sorted(result.methods):
            if mode == "deviation" and method == "optimal":
                continue
            ax.plot(x, result.series(method, stat), marker=_MARKERS.get(method, "."),
                    label=_DISPLAY.get(method, method), gid=f"series_{method}")
        ax.set_xlabel(AXIS_LABELS.get(result.axis, result.axis))
        ax.set_ylabel(_Y_LABELS[mode])
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
