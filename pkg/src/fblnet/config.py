"""Scenario configuration: frame geometry, CSI-acquisition overheads, topology.

The reference parameterization (5 MHz over a 1 ms cycle, 5 terminals, 15 dB,
alpha = S/100 reference symbols, beta = 8 CSI bits per link) ships as the
default; a YAML key-value file and/or CLI flags override individual entries.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
import yaml


class Variant(str, enum.Enum):
    DIRECT = "direct"
    BEST_ANTENNA = "bestantenna"
    BEST_RELAY = "bestrelay"
    BEST_RELAY_MAX = "bestrelaymax"


class Regime(str, enum.Enum):
    FBL = "fbl"
    IBL = "ibl"


_VARIANT_ALIASES = {
    "direct": Variant.DIRECT,
    "bestantenna": Variant.BEST_ANTENNA,
    "best-antenna": Variant.BEST_ANTENNA,
    "best_antenna": Variant.BEST_ANTENNA,
    "bestrelay": Variant.BEST_RELAY,
    "best-relay": Variant.BEST_RELAY,
    "best_relay": Variant.BEST_RELAY,
    "bestrelaymax": Variant.BEST_RELAY_MAX,
    "best-relay-max": Variant.BEST_RELAY_MAX,
    "best_relay_max": Variant.BEST_RELAY_MAX,
    "maxrelay": Variant.BEST_RELAY_MAX,
}


def parse_variant(name: str) -> Variant:
    try:
        return _VARIANT_ALIASES[str(name).strip().lower()]
    except KeyError:
        raise ValueError(f"unknown variant {name!r}") from None


def parse_regime(name: str) -> Regime:
    try:
        return Regime(str(name).strip().lower())
    except ValueError:
        raise ValueError(f"unknown regime {name!r} (expected fbl or ibl)") from None


@dataclass(frozen=True)
class TopologySnr:
    """Average linear SNRs of every link; index 0 is the access point.

    ap_terminal[i-1] holds the AP<->terminal-i average SNR; terminal_terminal
    is the symmetric terminal-to-terminal matrix (links are reciprocal, so the
    matrix must match its transpose; the diagonal is unused).
    """

    ap_terminal: np.ndarray
    terminal_terminal: np.ndarray
    homogeneous: bool = False

    def __post_init__(self):
        ap = np.asarray(self.ap_terminal, dtype=float)
        tt = np.asarray(self.terminal_terminal, dtype=float)
        n = len(ap)
        if tt.shape != (n, n):
            raise ValueError("terminal matrix shape does not match terminal count")
        if not np.allclose(tt, tt.T, rtol=1e-12, atol=0.0):
            raise ValueError("links are reciprocal; SNR matrix must be symmetric")
        off_diag = tt[~np.eye(n, dtype=bool)] if n > 1 else np.array([1.0])
        if np.any(ap <= 0) or np.any(off_diag <= 0):
            raise ValueError("average SNRs must be positive")
        ap.setflags(write=False)
        tt.setflags(write=False)
        object.__setattr__(self, "ap_terminal", ap)
        object.__setattr__(self, "terminal_terminal", tt)

    @classmethod
    def homogeneous_snr(cls, gamma_bar: float, terminals: int) -> "TopologySnr":
        ap = np.full(terminals, gamma_bar)
        tt = np.full((terminals, terminals), gamma_bar)
        return cls(ap, tt, homogeneous=True)


@dataclass(frozen=True)
class SystemConfig:
    """One fully parameterized scenario.

    base_payload_bits is the application payload before the variant-dependent
    CSI report bits are added; frame_symbols is fixed by bandwidth * cycle.
    """

    bandwidth_hz: float = 5e6
    cycle_s: float = 1e-3
    terminals: int = 5
    base_payload_bits: float = 128.0
    alpha_symbols: float = 50.0
    beta_bits: float = 8.0
    eps_star: float | None = 1e-7
    variant: Variant = Variant.DIRECT
    j: int = 1
    snr: TopologySnr | None = None
    snr_db: float = 15.0

    def __post_init__(self):
        if self.terminals < 1:
            raise ValueError("need at least one terminal")
        if self.base_payload_bits <= 0:
            raise ValueError("payload must be positive")
        if self.alpha_symbols < 0 or self.beta_bits < 0:
            raise ValueError("overheads cannot be negative")
        if self.j < 1 and self.variant is not Variant.DIRECT:
            raise ValueError("cooperative variants need j >= 1")
        if self.eps_star is not None and not 0.0 <= self.eps_star < 0.5:
            raise ValueError("target decoding error must lie in [0, 0.5)")
        if self.frame_symbols < 1:
            raise ValueError("frame holds no symbols")

    @property
    def frame_symbols(self) -> int:
        return int(round(self.bandwidth_hz * self.cycle_s))

    @property
    def gamma_bar(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    def topology(self) -> TopologySnr:
        if self.snr is not None:
            return self.snr
        return TopologySnr.homogeneous_snr(self.gamma_bar, self.terminals)

    def require_eps_star(self) -> float:
        """The FBL pipeline needs a usable target; zero only makes sense for IBL."""
        if self.eps_star is None or not 0.0 < self.eps_star < 0.5:
            raise ValueError("FBL evaluation needs eps_star in (0, 0.5)")
        return self.eps_star


def payload_bits(config: SystemConfig) -> float:
    """Packet size after adding the per-variant CSI report bits.

    Direct and best-antenna packets carry N*beta report bits; best-relay
    packets carry (N-1)/2 * beta, the per-packet share of reporting every
    terminal-to-terminal link once.
    """
    n = config.terminals
    if config.variant in (Variant.DIRECT, Variant.BEST_ANTENNA):
        return config.base_payload_bits + n * config.beta_bits
    return config.base_payload_bits + (n - 1) / 2.0 * config.beta_bits


def effective_budget(config: SystemConfig) -> int:
    """Symbols left for payloads after N*alpha reference symbols, once per frame."""
    s = config.frame_symbols
    overhead = config.terminals * config.alpha_symbols
    if overhead >= s:
        raise ValueError(
            f"CSI overhead {overhead:g} symbols exceeds the {s}-symbol frame"
        )
    return int(math.floor(s - overhead))


_CONFIG_KEYS = (
    "bandwidth_hz",
    "cycle_s",
    "terminals",
    "payload_bits",
    "alpha_symbols",
    "beta_bits",
    "eps_star",
    "variant",
    "j",
    "snr_db",
    "snr_matrix_db",
    "regime",
)


def config_from_mapping(raw: dict) -> tuple[SystemConfig, Regime | None]:
    """Build a config from file keys; unknown keys are rejected by name."""
    for key in raw:
        if key not in _CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}")
    kwargs = {}
    for src, dst in (
        ("bandwidth_hz", "bandwidth_hz"),
        ("cycle_s", "cycle_s"),
        ("terminals", "terminals"),
        ("payload_bits", "base_payload_bits"),
        ("alpha_symbols", "alpha_symbols"),
        ("beta_bits", "beta_bits"),
        ("eps_star", "eps_star"),
        ("j", "j"),
    ):
        if src in raw and raw[src] is not None:
            value = raw[src]
            if isinstance(value, str):
                # YAML 1.1 reads "5.0e6" (no sign) as a string; be liberal
                try:
                    value = float(value)
                except ValueError:
                    raise ValueError(f"config key {src!r} must be a number") from None
            if not isinstance(value, (int, float)):
                raise ValueError(f"config key {src!r} must be a number")
            kwargs[dst] = int(value) if dst in ("terminals", "j") else float(value)
    if raw.get("variant") is not None:
        kwargs["variant"] = parse_variant(raw["variant"])
    if raw.get("snr_matrix_db") is not None:
        matrix = np.asarray(raw["snr_matrix_db"], dtype=float)
        n = int(kwargs.get("terminals", SystemConfig.terminals))
        if matrix.shape != (n + 1, n + 1):
            raise ValueError(
                f"snr_matrix_db must be ({n + 1}x{n + 1}) including the AP row"
            )
        lin = 10.0 ** (matrix / 10.0)
        kwargs["snr"] = TopologySnr(lin[0, 1:], lin[1:, 1:])
    elif raw.get("snr_db") is not None:
        kwargs["snr_db"] = float(raw["snr_db"])
    regime = parse_regime(raw["regime"]) if raw.get("regime") is not None else None
    return SystemConfig(**kwargs), regime


def load_config(path: str) -> tuple[SystemConfig, Regime | None]:
    with open(path, "r", encoding="utf-8") as fp:
        raw = yaml.safe_load(fp)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must hold a key-value mapping")
    return config_from_mapping(raw)


def with_overrides(config: SystemConfig, **overrides) -> SystemConfig:
    """Apply CLI-style overrides; None values mean 'keep the config value'."""
    clean = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "variant" and not isinstance(value, Variant):
            value = parse_variant(value)
        if key == "snr_db":
            clean["snr"] = None
        clean[key] = value
    return replace(config, **clean) if clean else config
