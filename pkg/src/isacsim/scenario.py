"""Physical scenario: geometry, COST-Hata path loss, noise floors, and the
power-split simplex.  Turns the deployment layout into the linear-scale
channel gains and powers every other module consumes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError

__all__ = [
    "Geometry",
    "ScenarioConfig",
    "PowerSplit",
    "LinkBudget",
    "cost_hata_path_loss",
    "build_link_budget",
    "dbm_to_watts",
    "watts_to_dbm",
    "default_scenario",
    "load_config",
    "save_config",
]


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0:
        raise DomainError("watts_to_dbm requires p_w > 0")
    return 10.0 * math.log10(p_w) + 30.0


@dataclass(frozen=True)
class Geometry:
    """Node layout in meters.  Horizontal distances plus antenna heights;
    the communication user and the target default to ground level."""

    d_bc: float = 100.0   # BS -> user, horizontal
    d_bt: float = 100.0   # BS -> target, horizontal
    d_st: float = 100.0   # sensing receiver -> target, horizontal
    h_bs: float = 10.0
    h_sr: float = 10.0
    h_cu: float = 0.0
    h_tg: float = 0.0

    def __post_init__(self):
        if min(self.d_bc, self.d_bt, self.d_st) <= 0:
            raise DomainError("all horizontal distances must be > 0")
        if min(self.h_bs, self.h_sr, self.h_cu, self.h_tg) < 0:
            raise DomainError("antenna heights must be >= 0")


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one deployment: geometry, carrier, noise floors,
    symbol count and transmit power."""

    geometry: Geometry = field(default_factory=Geometry)
    f_mhz: float = 2000.0
    sigma_c2_dbm: float = -115.0   # noise power at the user
    sigma_s2_dbm: float = -175.0   # sensitivity at the sensing receiver
    t_symbols: int = 50
    p_total_dbm: float = 10.0
    comm_fading: str = "unit_gain"  # "unit_gain" | "rayleigh"
    seed: int = 0

    def __post_init__(self):
        if self.t_symbols < 1:
            raise DomainError("t_symbols must be >= 1")
        if not (150.0 <= self.f_mhz <= 2000.0):
            raise DomainError("f_mhz outside COST-Hata validity [150, 2000]")
        if not (math.isfinite(self.sigma_c2_dbm) and math.isfinite(self.sigma_s2_dbm)):
            raise DomainError("noise powers must be finite")
        if self.comm_fading not in ("unit_gain", "rayleigh"):
            raise DomainError(f"unknown comm_fading {self.comm_fading!r}")


@dataclass(frozen=True)
class PowerSplit:
    """Point (rho_s, rho_c) on the power simplex, stored as rho_c alone so
    rho_s + rho_c = 1 holds without floating drift."""

    rho_c: float

    def __post_init__(self):
        if not (0.0 <= self.rho_c <= 1.0):
            raise DomainError("rho_c must lie in [0, 1]")

    @property
    def rho_s(self) -> float:
        return 1.0 - self.rho_c


@dataclass(frozen=True)
class LinkBudget:
    """Linear-scale channel power gains and powers in watts."""

    g_c: float          # |h_c|^2, BS -> user
    g_s: float          # |h_s|^2, composite BS -> target -> sensing receiver
    sigma_c2_w: float
    sigma_s2_w: float
    p_total_w: float

    def __post_init__(self):
        for name in ("g_c", "g_s", "sigma_c2_w", "sigma_s2_w", "p_total_w"):
            if getattr(self, name) <= 0:
                raise DomainError(f"LinkBudget.{name} must be > 0")


def cost_hata_path_loss(h_t: float, h_r: float, d: float, f_mhz: float) -> float:
    """COST-Hata path loss in dB, d in meters and f in MHz:

        PL = (44.9 - 6.55 log10 h_t) log10 d - (1.1 log10 f - 0.7) h_r
             + 5.83 log10 h_t + 35.46 log10 f - 89.2
    """
    if h_t <= 0:
        raise DomainError("cost_hata_path_loss requires transmit height > 0")
    if h_r < 0:
        raise DomainError("cost_hata_path_loss requires receive height >= 0")
    if d <= 0 or f_mhz <= 0:
        raise DomainError("cost_hata_path_loss requires d > 0 and f_mhz > 0")
    return ((44.9 - 6.55 * math.log10(h_t)) * math.log10(d)
            - (1.1 * math.log10(f_mhz) - 0.7) * h_r
            + 5.83 * math.log10(h_t)
            + 35.46 * math.log10(f_mhz)
            - 89.2)


def _slant(horizontal: float, h1: float, h2: float) -> float:
    return math.hypot(horizontal, h1 - h2)


def build_link_budget(cfg: ScenarioConfig) -> LinkBudget:
    """Resolve a scenario into linear gains and watt-scale powers.

    Slant ranges come from the horizontal distances and height offsets.
    The composite sensing gain multiplies the two hop losses; each hop is
    evaluated with the elevated node (BS or SR) as the transmit antenna and
    the target as a zero-height relay, since the loss model needs h_t > 0.
    Rayleigh fading multiplies the communication gain by a unit-mean
    exponential draw seeded from the config.
    """
    g = cfg.geometry
    pl_bc = cost_hata_path_loss(g.h_bs, g.h_cu, _slant(g.d_bc, g.h_bs, g.h_cu), cfg.f_mhz)
    pl_bt = cost_hata_path_loss(g.h_bs, g.h_tg, _slant(g.d_bt, g.h_bs, g.h_tg), cfg.f_mhz)
    pl_ts = cost_hata_path_loss(g.h_sr, g.h_tg, _slant(g.d_st, g.h_sr, g.h_tg), cfg.f_mhz)

    fading = 1.0
    if cfg.comm_fading == "rayleigh":
        rng = np.random.default_rng(cfg.seed)
        fading = float(rng.exponential(1.0))

    return LinkBudget(
        g_c=10.0 ** (-pl_bc / 10.0) * fading,
        g_s=10.0 ** (-(pl_bt + pl_ts) / 10.0),
        sigma_c2_w=dbm_to_watts(cfg.sigma_c2_dbm),
        sigma_s2_w=dbm_to_watts(cfg.sigma_s2_dbm),
        p_total_w=dbm_to_watts(cfg.p_total_dbm),
    )


def default_scenario(**overrides) -> ScenarioConfig:
    """Reference deployment: 100 m legs, 10 m masts, 2 GHz carrier,
    -115 dBm user noise, -175 dBm receiver sensitivity."""
    return replace(ScenarioConfig(), **overrides) if overrides else ScenarioConfig()


# Flat key=value serialization ------------------------------------------------

_GEOMETRY_KEYS = ("d_bc_m", "d_bt_m", "d_st_m", "h_bs_m", "h_sr_m", "h_cu_m", "h_tg_m")
_SCALAR_KEYS = ("f_mhz", "sigma_c2_dbm", "sigma_s2_dbm", "t_symbols",
                "p_total_dbm", "comm_fading", "seed")


def save_config(cfg: ScenarioConfig, path) -> None:
    """Write a ScenarioConfig as flat ``key = value`` lines."""
    g = cfg.geometry
    lines = [
        f"d_bc_m = {g.d_bc!r}",
        f"d_bt_m = {g.d_bt!r}",
        f"d_st_m = {g.d_st!r}",
        f"h_bs_m = {g.h_bs!r}",
        f"h_sr_m = {g.h_sr!r}",
        f"h_cu_m = {g.h_cu!r}",
        f"h_tg_m = {g.h_tg!r}",
        f"f_mhz = {cfg.f_mhz!r}",
        f"sigma_c2_dbm = {cfg.sigma_c2_dbm!r}",
        f"sigma_s2_dbm = {cfg.sigma_s2_dbm!r}",
        f"t_symbols = {cfg.t_symbols}",
        f"p_total_dbm = {cfg.p_total_dbm!r}",
        f"comm_fading = {cfg.comm_fading}",
        f"seed = {cfg.seed}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_config(path) -> ScenarioConfig:
    """Read a flat ``key = value`` config file written by :func:`save_config`.

    Unknown keys raise; missing keys fall back to the defaults."""
    raw: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in _GEOMETRY_KEYS + _SCALAR_KEYS:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            raw[key] = val

    geo_defaults = Geometry()
    geometry = Geometry(
        d_bc=float(raw.get("d_bc_m", geo_defaults.d_bc)),
        d_bt=float(raw.get("d_bt_m", geo_defaults.d_bt)),
        d_st=float(raw.get("d_st_m", geo_defaults.d_st)),
        h_bs=float(raw.get("h_bs_m", geo_defaults.h_bs)),
        h_sr=float(raw.get("h_sr_m", geo_defaults.h_sr)),
        h_cu=float(raw.get("h_cu_m", geo_defaults.h_cu)),
        h_tg=float(raw.get("h_tg_m", geo_defaults.h_tg)),
    )
    defaults = ScenarioConfig()
    return ScenarioConfig(
        geometry=geometry,
        f_mhz=float(raw.get("f_mhz", defaults.f_mhz)),
        sigma_c2_dbm=float(raw.get("sigma_c2_dbm", defaults.sigma_c2_dbm)),
        sigma_s2_dbm=float(raw.get("sigma_s2_dbm", defaults.sigma_s2_dbm)),
        t_symbols=int(raw.get("t_symbols", defaults.t_symbols)),
        p_total_dbm=float(raw.get("p_total_dbm", defaults.p_total_dbm)),
        comm_fading=raw.get("comm_fading", defaults.comm_fading),
        seed=int(raw.get("seed", defaults.seed)),
    )
