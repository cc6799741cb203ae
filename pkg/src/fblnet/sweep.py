"""Parameter sweeps over the analytic pipeline.

A sweep evaluates the cartesian product of axis values, variants and regimes
in a deterministic order.  Points whose configuration is infeasible (say the
CSI overhead eats the whole frame) are reported as rows, not skipped, because
several interesting sweeps deliberately cross the feasibility boundary.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import Regime, SystemConfig, Variant
from .per import evaluate, result_row

AXES = (
    "eps_star",
    "payload_bits",
    "snr_db",
    "terminals",
    "bandwidth_hz",
    "alpha_symbols",
    "beta_bits",
)

CONVEXITY_SLACK = -1e-12


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]
    variants: tuple[Variant, ...]
    regimes: tuple[Regime, ...]

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r} (choose from {AXES})")
        if not self.values:
            raise ValueError("sweep needs at least one axis value")
        if not self.variants or not self.regimes:
            raise ValueError("sweep needs at least one variant and one regime")
        if self.axis == "eps_star":
            bad = [v for v in self.values if not 0.0 < v < 0.5]
            if bad:
                raise ValueError(f"eps_star values outside (0, 0.5): {bad}")
        if self.axis == "terminals" and any(v < 1 for v in self.values):
            raise ValueError("terminal counts must be >= 1")
        if any(not np.isfinite(v) for v in self.values):
            raise ValueError("axis values must be finite")


def parse_values(text: str) -> tuple[float, ...]:
    """Axis values: either a comma list or log:start:stop:count / lin:...:count."""
    text = text.strip()
    head = text.split(":", 1)[0].lower()
    if head in ("log", "lin", "linear"):
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError("ranges look like log:start:stop:count")
        start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
        if count < 1:
            raise ValueError("range count must be >= 1")
        if head == "log":
            if start <= 0 or stop <= 0:
                raise ValueError("log ranges need positive endpoints")
            vals = np.logspace(np.log10(start), np.log10(stop), count)
        else:
            vals = np.linspace(start, stop, count)
        return tuple(float(v) for v in vals)
    return tuple(float(v) for v in text.split(","))


def apply_axis(config: SystemConfig, axis: str, value: float) -> SystemConfig:
    """One sweep point: the axis value replaces the matching config entry."""
    if axis == "eps_star":
        return replace(config, eps_star=float(value))
    if axis == "payload_bits":
        return replace(config, base_payload_bits=float(value))
    if axis == "snr_db":
        return replace(config, snr_db=float(value), snr=None)
    if axis == "terminals":
        # a stored SNR matrix no longer fits once N changes
        return replace(config, terminals=int(value), snr=None)
    if axis == "bandwidth_hz":
        return replace(config, bandwidth_hz=float(value))
    if axis == "alpha_symbols":
        return replace(config, alpha_symbols=float(value))
    if axis == "beta_bits":
        return replace(config, beta_bits=float(value))
    raise ValueError(f"unknown sweep axis {axis!r}")


def _evaluate_point(base, spec, value, variant, regime, exact_two_hop):
    try:
        config = apply_axis(replace(base, variant=variant), spec.axis, value)
        row = result_row(config, regime, evaluate(config, regime, exact_two_hop))
    except (ValueError, NotImplementedError) as exc:
        row = {
            "status": "infeasible",
            "regime": regime.value,
            "variant": variant.value,
            "j": base.j,
            "terminals": int(value) if spec.axis == "terminals" else base.terminals,
            "note": str(exc),
        }
    row["axis"] = spec.axis
    row["axis_value"] = float(value)
    return row


def second_differences(x, y) -> np.ndarray:
    """Central second-difference estimates of d2y/dx2 on a nonuniform grid."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s_left = (y[1:-1] - y[:-2]) / (x[1:-1] - x[:-2])
    s_right = (y[2:] - y[1:-1]) / (x[2:] - x[1:-1])
    return 2.0 * (s_right - s_left) / (x[2:] - x[:-2])


def _workers() -> int:
    raw = os.environ.get("FBLNET_WORKERS", "")
    if raw.strip():
        return max(1, int(raw))
    return min(4, os.cpu_count() or 1)


def run_sweep(
    base: SystemConfig,
    spec: SweepSpec,
    check_convexity: bool = False,
    exact_two_hop: bool = False,
) -> list[dict]:
    """All sweep rows, in input order, plus optional convexity verdict rows."""
    points = [
        (value, variant, regime)
        for value in spec.values
        for variant in spec.variants
        for regime in spec.regimes
    ]
    workers = _workers()
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(
                    lambda p: _evaluate_point(base, spec, *p, exact_two_hop), points
                )
            )
    else:
        rows = [_evaluate_point(base, spec, *p, exact_two_hop) for p in points]

    if check_convexity and spec.axis == "eps_star":
        rows.extend(_convexity_verdicts(rows, spec))
    return rows


def _convexity_verdicts(rows: list[dict], spec: SweepSpec) -> list[dict]:
    """Minimum second difference of per_avg in eps_star, per FBL curve."""
    verdicts = []
    for variant in spec.variants:
        curve = [
            r
            for r in rows
            if r["status"] == "ok"
            and r["variant"] == variant.value
            and r["regime"] == Regime.FBL.value
        ]
        if len(curve) < 3:
            continue
        curve.sort(key=lambda r: r["axis_value"])
        d2 = second_differences(
            [r["axis_value"] for r in curve], [r["per_avg"] for r in curve]
        )
        worst = float(d2.min())
        verdicts.append(
            {
                "status": "convexity_pass" if worst >= CONVEXITY_SLACK else "convexity_fail",
                "regime": Regime.FBL.value,
                "variant": variant.value,
                "axis": spec.axis,
                "note": f"min_second_difference={worst!r}",
            }
        )
    return verdicts
