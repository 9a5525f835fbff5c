"""Time-driven emulation: association, delay-optimal oracle, stretch traces.

Every delay is computed from satellite geometry at the query instant; the
oracle runs an exact minimum-delay search over the same snapshot, so the
stretch column measures only the routing scheme's detour, never modeling
slack. Ground legs are charged identically to both routes.
"""
from __future__ import annotations

import csv
import functools
import heapq
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .config import TWO_PI, ConstellationConfig, config_from_dict, config_to_dict
from .constellation import (
    SatAddress,
    Topology,
    address_to_elements,
    build,
    format_address,
)
from .errors import ConfigError, ParseError, RangeError
from .geom import (
    LatLon,
    great_circle_range,
    link_length_delay,
    slant_range_km,
    subpoint,
)
from .georouting import _coverage_radius
from .routing import shortest_path

TRACE_COLUMNS = (
    "t",
    "experiment",
    "frosette_hops",
    "frosette_delay_s",
    "oracle_hops",
    "oracle_delay_s",
    "stretch",
    "src_sat",
    "dst_sat",
    "handoff",
    "flag",
)


@dataclass(frozen=True)
class Scenario:
    config: ConstellationConfig
    start_s: float
    end_s: float
    step_s: float
    endpoints: dict[str, LatLon]
    experiments: tuple[tuple[str, str], ...]
    seed: int = 0

    def __post_init__(self) -> None:
        if self.step_s <= 0:
            raise ConfigError(f"step_s must be positive, got {self.step_s}")
        if self.end_s < self.start_s:
            raise ConfigError("window is empty: end_s < start_s")
        for src, dst in self.experiments:
            for name in (src, dst):
                if name not in self.endpoints:
                    raise ConfigError(f"experiment endpoint {name!r} is not defined")


@dataclass(frozen=True)
class TraceRecord:
    t: float
    experiment: str
    frosette_hops: int
    frosette_delay_s: float
    oracle_hops: int
    oracle_delay_s: float
    stretch: float
    src_sat: SatAddress
    dst_sat: SatAddress
    handoff: bool
    flag: str = ""

    def to_row(self) -> list:
        return [
            repr(self.t),
            self.experiment,
            self.frosette_hops,
            repr(self.frosette_delay_s),
            self.oracle_hops,
            repr(self.oracle_delay_s),
            repr(self.stretch),
            format_address(self.src_sat),
            format_address(self.dst_sat),
            int(self.handoff),
            self.flag,
        ]


def scenario_from_dict(data: dict) -> Scenario:
    try:
        cfg = config_from_dict(data["config"])
        window = data["window"]
        endpoints = {
            name: LatLon(math.radians(ep["lat_deg"]), math.radians(ep["lon_deg"]))
            for name, ep in data["endpoints"].items()
        }
        experiments = tuple((e["src"], e["dst"]) for e in data["experiments"])
        seed = int(data.get("seed", 0))
        scenario = Scenario(
            config=cfg,
            start_s=float(window["start_s"]),
            end_s=float(window["end_s"]),
            step_s=float(window["step_s"]),
            endpoints=endpoints,
            experiments=experiments,
            seed=seed,
        )
    except KeyError as exc:
        raise ParseError(f"scenario is missing key {exc.args[0]!r}") from exc
    env_seed = os.environ.get("FROSETTE_SEED")
    if env_seed is not None:
        scenario = Scenario(
            config=scenario.config,
            start_s=scenario.start_s,
            end_s=scenario.end_s,
            step_s=scenario.step_s,
            endpoints=scenario.endpoints,
            experiments=scenario.experiments,
            seed=int(env_seed),
        )
    return scenario


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


# --- geometry snapshots -----------------------------------------------------


class _Field:
    """Vectorized orbital state for every node of a topology."""

    def __init__(self, topo: Topology) -> None:
        cfg = topo.config
        self.topo = topo
        self.cfg = cfg
        n = cfg.n
        addr = np.array(topo.nodes)  # (M, k+1)
        self.raan = TWO_PI * addr[:, 0] / n
        phase = cfg.m * TWO_PI * addr[:, 0] / n
        for j in range(1, cfg.k + 1):
            phase = phase + TWO_PI * addr[:, j] / n**j
        self.phase0 = phase
        self.index = {a: i for i, a in enumerate(topo.nodes)}

    def unit_positions(self, t: float) -> np.ndarray:
        """(M, 3) inertial unit vectors at time t."""
        cfg = self.cfg
        u = self.phase0 + TWO_PI * t / cfg.period_s
        cb, sb = math.cos(cfg.inclination_rad), math.sin(cfg.inclination_rad)
        ca, sa = np.cos(self.raan), np.sin(self.raan)
        cu, su = np.cos(u), np.sin(u)
        return np.stack(
            [ca * cu - sa * su * cb, sa * cu + ca * su * cb, su * sb], axis=1
        )


@functools.lru_cache(maxsize=8)
def _field(topo: Topology) -> _Field:
    return _Field(topo)


def _ground_unit(p: LatLon, t: float, cfg: ConstellationConfig) -> np.ndarray:
    """Inertial unit vector of a ground point (earth-fixed frame rotates)."""
    lon_inertial = p.lon_rad + cfg.omega_earth_rad_s * t
    cl = math.cos(p.lat_rad)
    return np.array(
        [cl * math.cos(lon_inertial), cl * math.sin(lon_inertial), math.sin(p.lat_rad)]
    )


def associate(p: LatLon, t: float, topo: Topology) -> SatAddress:
    """Physically nearest satellite; ties break to the smallest address."""
    fld = _field(topo)
    dots = fld.unit_positions(t) @ _ground_unit(p, t, topo.config)
    return topo.nodes[int(np.argmax(dots))]


def _edge_angles(fld: _Field, t: float) -> dict:
    pos = fld.unit_positions(t)
    angles = {}
    for a, b, _layer in fld.topo.edges:
        i, j = fld.index[a], fld.index[b]
        d = float(np.dot(pos[i], pos[j]))
        angles[(a, b)] = math.acos(max(-1.0, min(1.0, d)))
    return angles


def delay_oracle(
    topo: Topology, t: float, src: SatAddress, dst: SatAddress
) -> tuple[list[SatAddress], float]:
    """Exact minimum-propagation-delay satellite path at the time-t snapshot."""
    cfg = topo.config
    if src == dst:
        return [src], 0.0
    fld = _field(topo)
    angles = _edge_angles(fld, t)

    def edge_delay(a, b) -> float:
        r = angles.get((a, b))
        if r is None:
            r = angles[(b, a)]
        return link_length_delay(r, cfg.altitude_km, cfg.consts)[1]

    adj = topo.adjacency()
    dist = {src: 0.0}
    prev: dict = {}
    heap = [(0.0, src)]
    done = set()
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        if node == dst:
            break
        done.add(node)
        for _layer, _direction, nb in adj[node]:
            nd = d + edge_delay(node, nb)
            if nd < dist.get(nb, math.inf):
                dist[nb] = nd
                prev[nb] = node
                heapq.heappush(heap, (nd, nb))
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    path.reverse()
    return path, dist[dst]


def path_delay(path: list[SatAddress], t: float, topo: Topology) -> float:
    """In-space propagation delay of a node sequence at the time-t snapshot."""
    if len(path) < 2:
        return 0.0
    cfg = topo.config
    fld = _field(topo)
    pos = fld.unit_positions(t)
    total = 0.0
    for a, b in zip(path, path[1:]):
        d = float(np.dot(pos[fld.index[a]], pos[fld.index[b]]))
        r = math.acos(max(-1.0, min(1.0, d)))
        total += link_length_delay(r, cfg.altitude_km, cfg.consts)[1]
    return total


def _ground_leg_delay(p: LatLon, sat: SatAddress, t: float, topo: Topology) -> float:
    cfg = topo.config
    fld = _field(topo)
    sp = fld.unit_positions(t)[fld.index[sat]]
    d = float(np.dot(sp, _ground_unit(p, t, cfg)))
    r = math.acos(max(-1.0, min(1.0, d)))
    return slant_range_km(r, cfg.altitude_km, cfg.consts) / cfg.consts.light_speed_km_s


def link_delay_trace(
    edge: tuple[SatAddress, SatAddress],
    window: tuple[float, float, float],
    topo: Topology,
) -> list[tuple[float, float]]:
    """First-principles delay series for one inter-satellite link."""
    a, b = edge
    if not topo.has_edge(a, b):
        raise RangeError(f"{a} -- {b} is not a topology edge")
    start, end, step = window
    if step <= 0 or end < start:
        raise ConfigError("window must be non-empty with positive step")
    fld = _field(topo)
    cfg = topo.config
    ia, ib = fld.index[a], fld.index[b]
    out = []
    t = start
    while t <= end + 1e-9:
        pos = fld.unit_positions(t)
        d = float(np.dot(pos[ia], pos[ib]))
        r = math.acos(max(-1.0, min(1.0, d)))
        out.append((t, link_length_delay(r, cfg.altitude_km, cfg.consts)[1]))
        t += step
    return out


# --- the experiment loop ----------------------------------------------------


def run(scenario: Scenario) -> tuple[list[TraceRecord], dict]:
    """Per step and experiment: associate, route, price both paths, record."""
    cfg = scenario.config
    topo = build(cfg)
    edge_count = len(topo.edges)
    records: list[TraceRecord] = []
    last_pair: dict[str, tuple[SatAddress, SatAddress]] = {}

    steps = int(math.floor((scenario.end_s - scenario.start_s) / scenario.step_s + 1e-9)) + 1
    for i in range(steps):
        t = scenario.start_s + i * scenario.step_s
        if len(topo.edges) != edge_count:
            raise AssertionError("topology changed mid-simulation")
        for src_name, dst_name in scenario.experiments:
            exp = f"{src_name}->{dst_name}"
            src_p, dst_p = scenario.endpoints[src_name], scenario.endpoints[dst_name]
            src_sat = associate(src_p, t, topo)
            dst_sat = associate(dst_p, t, topo)

            flags = []
            for p, sat in ((src_p, src_sat), (dst_p, dst_sat)):
                sp = subpoint(address_to_elements(sat, cfg), t, cfg.consts)
                if great_circle_range(sp, p) > _coverage_radius(cfg):
                    flags.append("coverage_violation")
                    break

            fro_path = shortest_path(src_sat, dst_sat, topo)
            legs = _ground_leg_delay(src_p, src_sat, t, topo) + _ground_leg_delay(
                dst_p, dst_sat, t, topo
            )
            fro_delay = legs + path_delay(fro_path, t, topo)
            oracle_path, oracle_space = delay_oracle(topo, t, src_sat, dst_sat)
            oracle_delay = legs + oracle_space

            pair = (src_sat, dst_sat)
            handoff = exp in last_pair and last_pair[exp] != pair
            last_pair[exp] = pair
            records.append(
                TraceRecord(
                    t=t,
                    experiment=exp,
                    frosette_hops=len(fro_path) - 1,
                    frosette_delay_s=fro_delay,
                    oracle_hops=len(oracle_path) - 1,
                    oracle_delay_s=oracle_delay,
                    stretch=fro_delay / oracle_delay,
                    src_sat=src_sat,
                    dst_sat=dst_sat,
                    handoff=handoff,
                    flag=";".join(flags),
                )
            )
    return records, summarize(records, scenario)


def _percentile(sorted_vals: list[float], q: float) -> float:
    if not sorted_vals:
        return math.nan
    pos = q * (len(sorted_vals) - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, len(sorted_vals) - 1)
    frac = pos - lo
    return sorted_vals[lo] * (1 - frac) + sorted_vals[hi] * frac


def summarize(records: list[TraceRecord], scenario: Scenario) -> dict:
    by_exp: dict[str, list[TraceRecord]] = {}
    for rec in records:
        by_exp.setdefault(rec.experiment, []).append(rec)
    out_exp = {}
    for exp, recs in by_exp.items():
        stretches = sorted(r.stretch for r in recs)
        out_exp[exp] = {
            "records": len(recs),
            "stretch_median": _percentile(stretches, 0.5),
            "stretch_p95": _percentile(stretches, 0.95),
            "stretch_max": stretches[-1] if stretches else math.nan,
            "handoffs": sum(r.handoff for r in recs),
            "mean_frosette_hops": (
                sum(r.frosette_hops for r in recs) / len(recs) if recs else math.nan
            ),
            "coverage_violations": sum(1 for r in recs if r.flag),
        }
    all_stretch = sorted(r.stretch for r in records)
    return {
        "seed": scenario.seed,
        "config": config_to_dict(scenario.config),
        "window": {
            "start_s": scenario.start_s,
            "end_s": scenario.end_s,
            "step_s": scenario.step_s,
        },
        "records": len(records),
        "stretch_median": _percentile(all_stretch, 0.5),
        "stretch_p95": _percentile(all_stretch, 0.95),
        "stretch_max": all_stretch[-1] if all_stretch else math.nan,
        "experiments": out_exp,
    }


def write_trace_csv(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for rec in records:
        writer.writerow(rec.to_row())
