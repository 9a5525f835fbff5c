"""Physical constants and constellation configuration.

All internal units are radians, seconds, and kilometers. Degrees appear only
in JSON documents and CLI flags.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    earth_radius_km: float = 6371.0
    sidereal_day_s: float = 86164.0905
    light_speed_km_s: float = 299792.458
    atmosphere_margin_km: float = 0.0


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class ConstellationConfig:
    """An F-Rosette_k defined by (N, m, k) plus altitude and elevation limits."""

    n: int
    m: int
    k: int
    altitude_km: float
    inclination_rad: float
    min_elevation_rad: float = 0.0
    consts: PhysicalConstants = field(default=DEFAULT_CONSTANTS)

    def __post_init__(self):
        if self.n < 3:
            raise ConfigError(f"n must be >= 3, got {self.n}")
        if not (0 <= self.m <= self.n - 1):
            raise ConfigError(f"m must be in [0, n-1], got m={self.m} for n={self.n}")
        if self.k < 0:
            raise ConfigError(f"k must be >= 0, got {self.k}")
        if self.altitude_km <= 0:
            raise ConfigError(f"altitude_km must be positive, got {self.altitude_km}")
        if not (0.0 < self.inclination_rad < math.pi):
            raise ConfigError(
                f"inclination_rad must be in (0, pi), got {self.inclination_rad}"
            )
        if not (0.0 <= self.min_elevation_rad < math.pi / 2):
            raise ConfigError(
                f"min_elevation_rad must be in [0, pi/2), got {self.min_elevation_rad}"
            )

    @property
    def rho(self) -> int:
        """Ground-track repeat count N - m (orbit periods per sidereal day)."""
        return self.n - self.m

    @property
    def period_s(self) -> float:
        return self.consts.sidereal_day_s / self.rho

    @property
    def omega_earth_rad_s(self) -> float:
        return TWO_PI / self.consts.sidereal_day_s

    @property
    def n_sats(self) -> int:
        return self.n ** (self.k + 1)

    @property
    def orbit_radius_km(self) -> float:
        return self.consts.earth_radius_km + self.altitude_km

    def with_altitude(self, altitude_km: float) -> "ConstellationConfig":
        return replace(self, altitude_km=altitude_km)


def config_from_dict(doc: dict) -> ConstellationConfig:
    """Build a config from a JSON-style document (angles in degrees)."""
    try:
        n = int(doc["n"])
        m = int(doc["m"])
        k = int(doc["k"])
        altitude_km = float(doc["altitude_km"])
        inclination_rad = math.radians(float(doc["inclination_deg"]))
        min_elevation_rad = math.radians(float(doc.get("min_elevation_deg", 0.0)))
    except KeyError as exc:
        raise ConfigError(f"missing config field: {exc.args[0]}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None
    consts = DEFAULT_CONSTANTS
    overrides = doc.get("constants")
    if overrides:
        known = {f for f in PhysicalConstants.__dataclass_fields__}
        bad = set(overrides) - known
        if bad:
            raise ConfigError(f"unknown constants override(s): {sorted(bad)}")
        consts = replace(consts, **{key: float(val) for key, val in overrides.items()})
    return ConstellationConfig(
        n=n,
        m=m,
        k=k,
        altitude_km=altitude_km,
        inclination_rad=inclination_rad,
        min_elevation_rad=min_elevation_rad,
        consts=consts,
    )


def config_to_dict(cfg: ConstellationConfig) -> dict:
    doc = {
        "n": cfg.n,
        "m": cfg.m,
        "k": cfg.k,
        "altitude_km": cfg.altitude_km,
        "inclination_deg": math.degrees(cfg.inclination_rad),
        "min_elevation_deg": math.degrees(cfg.min_elevation_rad),
    }
    if cfg.consts != DEFAULT_CONSTANTS:
        doc["constants"] = {
            "earth_radius_km": cfg.consts.earth_radius_km,
            "sidereal_day_s": cfg.consts.sidereal_day_s,
            "light_speed_km_s": cfg.consts.light_speed_km_s,
            "atmosphere_margin_km": cfg.consts.atmosphere_margin_km,
        }
    return doc


def load_config(path: str) -> ConstellationConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
