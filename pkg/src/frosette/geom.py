"""Spherical and orbital geometry primitives.

Circular Keplerian orbits around a spherical earth. The epoch convention used
everywhere: at t=0 the prime meridian coincides with the inertial x-axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TWO_PI, ConstellationConfig, PhysicalConstants
from .errors import DomainError, InfeasibleError

BISECT_TOL_RAD = 1e-12
BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class OrbitalElements:
    raan_rad: float
    inclination_rad: float
    phase0_rad: float
    period_s: float
    orbit_radius_km: float


@dataclass(frozen=True)
class LatLon:
    lat_rad: float
    lon_rad: float

    def unit_vector(self) -> np.ndarray:
        cl = math.cos(self.lat_rad)
        return np.array(
            [
                cl * math.cos(self.lon_rad),
                cl * math.sin(self.lon_rad),
                math.sin(self.lat_rad),
            ]
        )


def wrap_lon(lon: float) -> float:
    """Normalize a longitude into [-pi, pi)."""
    lon = math.fmod(lon + math.pi, TWO_PI)
    if lon < 0.0:
        lon += TWO_PI
    if lon >= TWO_PI:  # adding 2*pi to a tiny negative can round back up to 2*pi
        lon = 0.0
    return lon - math.pi


def wrap_angle(a: float) -> float:
    """Normalize any angle into [0, 2*pi)."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:  # adding 2*pi to a tiny negative can round back up to 2*pi
        a = 0.0
    return a


def sat_position_eci(elements: OrbitalElements, t: float) -> np.ndarray:
    """Unit direction of the satellite in the inertial frame at time t.

    Argument of latitude u(t) = 2*pi*t/T + phase0, ascending node at the RAAN,
    orbit plane tilted by the inclination.
    """
    u = TWO_PI * t / elements.period_s + elements.phase0_rad
    cu, su = math.cos(u), math.sin(u)
    cb, sb = math.cos(elements.inclination_rad), math.sin(elements.inclination_rad)
    x_orb = cu
    y_orb = su * cb
    z = su * sb
    ca, sa = math.cos(elements.raan_rad), math.sin(elements.raan_rad)
    return np.array([ca * x_orb - sa * y_orb, sa * x_orb + ca * y_orb, z])


def subpoint(elements: OrbitalElements, t: float, consts: PhysicalConstants) -> LatLon:
    """Earth-fixed sub-point at time t (geocentric latitude)."""
    p = sat_position_eci(elements, t)
    theta = TWO_PI * t / consts.sidereal_day_s
    lat = math.asin(max(-1.0, min(1.0, p[2])))
    if abs(p[0]) < 1e-15 and abs(p[1]) < 1e-15:
        return LatLon(lat, 0.0)  # pole: longitude undefined, 0 by convention
    lon = math.atan2(p[1], p[0]) - theta
    return LatLon(lat, wrap_lon(lon))


def _as_unit(p) -> np.ndarray:
    if isinstance(p, LatLon):
        return p.unit_vector()
    return np.asarray(p, dtype=float)


def great_circle_range(a, b) -> float:
    """Central angle between two points, in [0, pi].

    Uses the arctangent form, which stays accurate for nearly-identical and
    nearly-antipodal inputs where plain acos loses digits.
    """
    va, vb = _as_unit(a), _as_unit(b)
    cross = np.cross(va, vb)
    return math.atan2(float(np.linalg.norm(cross)), float(np.dot(va, vb)))


def link_range_closed_form(i: int, j: int, t: float, cfg: ConstellationConfig) -> float:
    """Great-circle range between base-ring satellites i and j at time t.

    Four-term expansion in half-inclination powers; the last term carries the
    cos(4*pi*t/T + 2*m*(i+j)*pi/N) time coupling.
    """
    if i == j:
        raise DomainError("closed-form range requires i != j")
    n, m = cfg.n, cfg.m
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"satellite indices must be in [0, {n})")
    b2 = cfg.inclination_rad / 2.0
    d = j - i
    c2, s2 = math.cos(b2) ** 2, math.sin(b2) ** 2
    unit = math.pi / n
    s = (
        c2 * c2 * math.sin((m + 1) * d * unit) ** 2
        + 2.0 * s2 * c2 * math.sin(m * d * unit) ** 2
        + s2 * s2 * math.sin((m - 1) * d * unit) ** 2
        + 2.0
        * s2
        * c2
        * math.sin(d * unit) ** 2
        * math.cos(2.0 * TWO_PI * t / cfg.period_s + 2.0 * m * (j + i) * unit)
    )
    if s < -1e-9 or s > 1.0 + 1e-9:
        raise DomainError(f"closed form out of range: sin^2(r/2) = {s}")
    s = max(0.0, min(1.0, s))
    return 2.0 * math.asin(math.sqrt(s))


def link_length_delay(
    r: float, altitude_km: float, consts: PhysicalConstants
) -> tuple[float, float]:
    """Chord length (km) and one-way delay (s) of a link spanning range r."""
    length = 2.0 * (consts.earth_radius_km + altitude_km) * math.sin(r / 2.0)
    return length, length / consts.light_speed_km_s


def slant_range_km(r: float, altitude_km: float, consts: PhysicalConstants) -> float:
    """Ground-to-satellite distance across central angle r (law of cosines)."""
    re = consts.earth_radius_km
    rs = re + altitude_km
    return math.sqrt(max(0.0, re * re + rs * rs - 2.0 * re * rs * math.cos(r)))


def coverage_range(
    altitude_km: float, elev: float, consts: PhysicalConstants
) -> float:
    """Coverage radius R (central angle) at altitude H and elevation limit.

    Solves tan(elev) = (cos R - R_E/(R_E+H)) / sin R for the unique root in
    (0, pi/2) by bisection.
    """
    if altitude_km <= 0:
        raise InfeasibleError("coverage_range requires a positive altitude")
    if not (0.0 <= elev < math.pi / 2):
        raise DomainError("elevation must be in [0, pi/2)")
    ratio = consts.earth_radius_km / (consts.earth_radius_km + altitude_km)
    te = math.tan(elev)

    def g(r: float) -> float:
        return te * math.sin(r) - math.cos(r) + ratio

    lo, hi = 0.0, math.pi / 2
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < BISECT_TOL_RAD:
            break
    return 0.5 * (lo + hi)


def min_satellites(coverage_rad: float) -> int:
    """Minimum ring size N whose per-satellite coverage demand fits within R.

    The per-satellite requirement sqrt(3)*tan(pi/6 * N/(N-2)) decreases in N;
    the result is the smallest N meeting it. The relation has no solution at
    N=3 (the demand diverges), so the floor of the result is 4.
    """
    if not (0.0 < coverage_rad < math.pi / 2):
        raise DomainError("coverage range must be in (0, pi/2)")
    theta = math.atan(1.0 / (math.cos(coverage_rad) * math.sqrt(3.0)))
    q = 6.0 * theta / math.pi
    if q <= 1.0 + 1e-15:
        raise InfeasibleError("coverage range too small for any finite ring")
    x = 2.0 + 2.0 / (q - 1.0)
    return max(4, math.ceil(x - 1e-12))


def visibility_ok(
    r: float, altitude_km: float, consts: PhysicalConstants
) -> bool:
    """True iff a link spanning range r clears the earth plus margin."""
    re = consts.earth_radius_km
    return (altitude_km + re) * math.cos(r / 2.0) > re + consts.atmosphere_margin_km


def elevation_angle(r: float, altitude_km: float, consts: PhysicalConstants) -> float:
    """Elevation of a satellite seen across central angle r from the ground."""
    ratio = consts.earth_radius_km / (consts.earth_radius_km + altitude_km)
    return math.atan2(math.cos(r) - ratio, math.sin(r))
