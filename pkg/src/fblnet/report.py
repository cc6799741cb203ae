"""CSV emission and figure rendering for analytic, simulation and sweep rows.

One fixed column set covers all three row kinds; cells that do not apply stay
empty.  Floats are written with repr so identical invocations produce
identical bytes.
"""

from __future__ import annotations

import csv
import os

CSV_COLUMNS = (
    "status",
    "regime",
    "variant",
    "j",
    "terminals",
    "frame_symbols",
    "payload_bits",
    "gamma_bar_db",
    "eps_star",
    "axis",
    "axis_value",
    "p",
    "per_packet",
    "per_avg",
    "frames",
    "seed",
    "ci_halfwidth",
    "note",
)

_AXIS_LABELS = {
    "eps_star": "target decoding error",
    "payload_bits": "payload size (bits)",
    "snr_db": "average SNR (dB)",
    "terminals": "terminals N",
    "bandwidth_hz": "bandwidth (Hz)",
    "alpha_symbols": "reference-signal symbols per link",
    "beta_bits": "CSI report bits per link",
}

_LOG_AXES = {"eps_star", "payload_bits", "bandwidth_hz"}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows, fp) -> None:
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row.get(col, "")) for col in CSV_COLUMNS])


def render_sweep_figure(rows, axis: str, out_dir: str) -> str:
    """PER-vs-axis figure for a sweep, one line per (variant, regime) curve.

    Written next to the delimited output so a sweep leaves both the data and
    its picture behind.  Returns the figure path.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update(
        {
            "font.size": 9,
            "axes.grid": True,
            "grid.alpha": 0.3,
            "grid.linestyle": "--",
            "lines.linewidth": 1.2,
            "lines.markersize": 3.5,
            "figure.figsize": (4.6, 3.4),
            "savefig.dpi": 200,
            "savefig.bbox": "tight",
        }
    )

    curves: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for row in rows:
        if row.get("status") != "ok":
            continue
        key = (row["variant"], row["regime"])
        curves.setdefault(key, []).append((row["axis_value"], row["per_avg"]))

    fig, ax = plt.subplots()
    for (variant, regime), pts in sorted(curves.items()):
        pts.sort()
        xs = [p[0] for p in pts]
        ys = [max(p[1], 1e-300) for p in pts]
        style = "-" if regime == "fbl" else "--"
        ax.plot(xs, ys, style, marker="o", label=f"{variant} ({regime})")
    ax.set_xlabel(_AXIS_LABELS.get(axis, axis))
    ax.set_ylabel("average PER")
    ax.set_yscale("log")
    if axis in _LOG_AXES:
        ax.set_xscale("log")
    ax.legend(fontsize=7)

    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"sweep_{axis}.png")
    fig.savefig(path)
    plt.close(fig)
    return path
