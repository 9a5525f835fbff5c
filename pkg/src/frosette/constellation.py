"""F-Rosette_k construction: satellites, layered rings, altitude sizing."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

from .config import TWO_PI, ConstellationConfig, PhysicalConstants, config_to_dict
from .errors import InfeasibleError, RangeError
from .geom import OrbitalElements, great_circle_range, sat_position_eci

SatAddress = tuple[int, ...]

R_MAX_TIME_SAMPLES = 4096
R_MAX_REFINE_TOL = 1e-12


def validate_address(addr: SatAddress, cfg: ConstellationConfig) -> None:
    if len(addr) != cfg.k + 1:
        raise RangeError(
            f"address {addr} has {len(addr)} digits, expected {cfg.k + 1}"
        )
    for digit in addr:
        if not (0 <= digit < cfg.n):
            raise RangeError(f"digit {digit} out of range [0, {cfg.n}) in {addr}")


@dataclass(frozen=True)
class Topology:
    """Immutable digit-ring topology of an F-Rosette_k."""

    config: ConstellationConfig
    nodes: tuple[SatAddress, ...]
    edges: tuple[tuple[SatAddress, SatAddress, int], ...]

    def adjacency(self) -> dict[SatAddress, list[tuple[int, int, SatAddress]]]:
        """node -> [(layer, direction, neighbor)], layers ascending, +1 first."""
        return {addr: neighbors(addr, self.config) for addr in self.nodes}

    def has_edge(self, a: SatAddress, b: SatAddress) -> bool:
        return b in {nb for _, _, nb in neighbors(a, self.config)}


def build(cfg: ConstellationConfig) -> Topology:
    """Construct the N^(k+1)-node, (k+1)-ring-per-node topology.

    Node order is lexicographic over digits; each undirected edge appears once,
    emitted from its lower endpoint in the +1 direction of its layer.
    """
    n, k = cfg.n, cfg.k
    nodes = tuple(itertools.product(range(n), repeat=k + 1))
    edges = []
    for addr in nodes:
        for layer in range(k + 1):
            nb = ring_neighbor(addr, layer, +1, n)
            edges.append((addr, nb, layer))
    return Topology(config=cfg, nodes=nodes, edges=tuple(edges))


def ring_neighbor(addr: SatAddress, layer: int, direction: int, n: int) -> SatAddress:
    digits = list(addr)
    digits[layer] = (digits[layer] + direction) % n
    return tuple(digits)


def neighbors(
    addr: SatAddress, cfg: ConstellationConfig
) -> list[tuple[int, int, SatAddress]]:
    """The 2(k+1) ring neighbors of addr as (layer, direction, address)."""
    validate_address(addr, cfg)
    out = []
    for layer in range(cfg.k + 1):
        for direction in (+1, -1):
            out.append((layer, direction, ring_neighbor(addr, layer, direction, cfg.n)))
    return out


def address_to_elements(addr: SatAddress, cfg: ConstellationConfig) -> OrbitalElements:
    """Map a hierarchical address to its orbit.

    Digit 0 selects the base-Rosette slot (RAAN 2*pi*s0/N, phase m*RAAN);
    each deeper digit s_j shifts the in-orbit phase by 2*pi*s_j/N^j.
    """
    validate_address(addr, cfg)
    n = cfg.n
    raan = TWO_PI * addr[0] / n
    phase = TWO_PI * cfg.m * addr[0] / n
    for j in range(1, cfg.k + 1):
        phase += TWO_PI * addr[j] / n**j
    return OrbitalElements(
        raan_rad=raan,
        inclination_rad=cfg.inclination_rad,
        phase0_rad=phase % TWO_PI,
        period_s=cfg.period_s,
        orbit_radius_km=cfg.orbit_radius_km,
    )


def min_altitude_coverage(cfg: ConstellationConfig) -> float:
    """Smallest altitude giving full ground coverage at the config's elevation."""
    total = cfg.n_sats
    demand = math.sqrt(3.0) * math.tan(math.pi / 6.0 * total / (total - 2))
    r = math.acos(1.0 / demand)
    phi = cfg.min_elevation_rad
    denom = math.cos(r) - math.sin(r) * math.tan(phi)
    if denom <= 0.0:
        raise InfeasibleError(
            f"coverage impossible: elevation {phi} too steep for per-satellite range {r}"
        )
    return cfg.consts.earth_radius_km * (1.0 / denom - 1.0)


@dataclass(frozen=True)
class StabilityReport:
    r_max_rad: float
    r_max_closed_form_rad: float
    h_stability_km: float
    h_coverage_km: float
    h_min_km: float


def _layer0_range_at(cfg: ConstellationConfig, i: int, t: float) -> float:
    base = (0,) * cfg.k
    ei = address_to_elements((i,) + base, cfg)
    ej = address_to_elements(((i + 1) % cfg.n,) + base, cfg)
    return great_circle_range(sat_position_eci(ei, t), sat_position_eci(ej, t))


def _max_layer0_range(cfg: ConstellationConfig) -> float:
    """Numeric max over t of the inter-orbit link range, per adjacent pair."""
    period = cfg.period_s
    best = 0.0
    for i in range(cfg.n):
        samples = [
            (_layer0_range_at(cfg, i, s * period / R_MAX_TIME_SAMPLES), s)
            for s in range(R_MAX_TIME_SAMPLES)
        ]
        peak, s_peak = max(samples)
        lo = (s_peak - 1) * period / R_MAX_TIME_SAMPLES
        hi = (s_peak + 1) * period / R_MAX_TIME_SAMPLES
        # golden-section refinement of the bracketed peak
        gr = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c = b - gr * (b - a)
        d = a + gr * (b - a)
        fc = _layer0_range_at(cfg, i, c)
        fd = _layer0_range_at(cfg, i, d)
        while b - a > R_MAX_REFINE_TOL * period:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - gr * (b - a)
                fc = _layer0_range_at(cfg, i, c)
            else:
                a, c, fc = c, d, fd
                d = a + gr * (b - a)
                fd = _layer0_range_at(cfg, i, d)
        best = max(best, peak, fc, fd)
    return best


def _intra_orbit_arcs(cfg: ConstellationConfig) -> list[float]:
    arcs = []
    for j in range(1, cfg.k + 1):
        step = TWO_PI / cfg.n**j
        arcs.append(step)  # non-wrap edge
        wrap = (cfg.n - 1) * step % TWO_PI
        arcs.append(min(wrap, TWO_PI - wrap))  # digit N-1 -> 0 edge
    return arcs


def _closed_form_r_max(cfg: ConstellationConfig) -> float:
    b2 = cfg.inclination_rad / 2.0
    c2, s2 = math.cos(b2) ** 2, math.sin(b2) ** 2
    m, unit = cfg.m, math.pi / cfg.n
    s = (
        c2 * c2 * math.sin(m * (m + 1) * unit) ** 2
        + 2.0 * s2 * c2 * math.sin(m * m * unit) ** 2
        + s2 * s2 * math.sin(m * (m - 1) * unit) ** 2
        + 2.0 * s2 * c2 * math.sin(m * unit) ** 2
    )
    return math.asin(math.sqrt(max(0.0, min(1.0, s))))


def stability_report(cfg: ConstellationConfig) -> StabilityReport:
    """Numeric worst-case link range and the altitude floors it implies.

    r_max is maximized over layer-0 edges across a full period plus the fixed
    intra-orbit arcs (wrap edges included). A closed-form estimate is also
    evaluated and reported for comparison, but never used for the result.
    """
    r_max = max(_max_layer0_range(cfg), *(_intra_orbit_arcs(cfg) or [0.0]))
    if r_max >= math.pi:
        raise InfeasibleError("worst-case link spans a half circle or more")
    re = cfg.consts.earth_radius_km
    h_stab = (1.0 / math.cos(r_max / 2.0) - 1.0) * re
    h_cov = min_altitude_coverage(cfg)
    return StabilityReport(
        r_max_rad=r_max,
        r_max_closed_form_rad=_closed_form_r_max(cfg),
        h_stability_km=h_stab,
        h_coverage_km=h_cov,
        h_min_km=max(h_stab, h_cov),
    )


def min_altitude_stability(cfg: ConstellationConfig) -> float:
    """Altitude floor for links that never graze the earth, >= coverage floor."""
    return stability_report(cfg).h_min_km


def ground_to_space_rtt(altitude_km: float, consts: PhysicalConstants) -> float:
    """Round-trip time (s) straight up and back."""
    return 2.0 * altitude_km / consts.light_speed_km_s


def format_address(addr: SatAddress) -> str:
    return ".".join(str(d) for d in addr)


def topology_to_dict(topo: Topology) -> dict:
    return {
        "config": config_to_dict(topo.config),
        "nodes": [format_address(a) for a in topo.nodes],
        "edges": [
            [format_address(a), format_address(b), layer] for a, b, layer in topo.edges
        ],
    }


def topology_to_json(topo: Topology) -> str:
    return json.dumps(topology_to_dict(topo), indent=2)
