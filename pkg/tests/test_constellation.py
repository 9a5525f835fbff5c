"""Topology construction, orbital element assignment, altitude sizing."""
import json
import math
import random

import pytest

from frosette.config import TWO_PI
from frosette.constellation import (
    build,
    format_address,
    ground_to_space_rtt,
    min_altitude_coverage,
    min_altitude_stability,
    neighbors,
    ring_neighbor,
    stability_report,
    address_to_elements,
    topology_to_dict,
    topology_to_json,
    validate_address,
)
from frosette.errors import ConfigError, RangeError
from frosette.geom import great_circle_range, sat_position_eci
from conftest import make_config


@pytest.mark.parametrize("n,k", [(4, 0), (4, 1), (8, 1), (5, 2)])
def test_build_counts_and_degrees(n, k):
    cfg = make_config(n, 1, k)
    topo = build(cfg)
    assert len(topo.nodes) == n ** (k + 1)
    assert len(topo.edges) == (k + 1) * n ** (k + 1)
    assert len(set(topo.nodes)) == len(topo.nodes)
    deg = {node: 0 for node in topo.nodes}
    seen = set()
    for a, b, layer in topo.edges:
        deg[a] += 1
        deg[b] += 1
        assert 0 <= layer <= k
        key = (min(a, b), max(a, b), layer)
        assert key not in seen, f"duplicate edge {key}"
        seen.add(key)
    assert set(deg.values()) == {2 * (k + 1)}


def test_ring_neighbor_and_adjacency():
    cfg = make_config(8, 6, 1)
    assert ring_neighbor((7, 3), 0, +1, 8) == (0, 3)
    assert ring_neighbor((0, 0), 1, -1, 8) == (0, 7)
    nbrs = neighbors((2, 5), cfg)
    assert len(nbrs) == 4
    # layers ascending, +1 before -1 within a layer
    assert [(layer, d) for layer, d, _ in nbrs] == [(0, 1), (0, -1), (1, 1), (1, -1)]
    assert {nb for _, _, nb in nbrs} == {(3, 5), (1, 5), (2, 6), (2, 4)}
    topo = build(cfg)
    assert topo.has_edge((2, 5), (3, 5))
    assert not topo.has_edge((2, 5), (4, 5))


def test_validate_address():
    cfg = make_config(8, 6, 1)
    with pytest.raises(RangeError):
        validate_address((1,), cfg)
    with pytest.raises(RangeError):
        validate_address((1, 8), cfg)
    validate_address((7, 0), cfg)


def test_address_to_elements_formula():
    cfg = make_config(8, 6, 1)
    el = address_to_elements((2, 3), cfg)
    assert el.raan_rad == pytest.approx(math.pi / 2)
    assert el.phase0_rad == pytest.approx((TWO_PI * 6 * 2 / 8 + TWO_PI * 3 / 8) % TWO_PI)
    assert el.period_s == pytest.approx(cfg.consts.sidereal_day_s / 2)
    assert el.orbit_radius_km == pytest.approx(cfg.consts.earth_radius_km + 1200.0)
    assert el.inclination_rad == cfg.inclination_rad
    # deeper digits refine the phase by powers of N
    cfg3 = make_config(4, 1, 2)
    el3 = address_to_elements((1, 2, 3), cfg3)
    want = TWO_PI * (1 * 1 / 4 + 2 / 4 + 3 / 16) % TWO_PI
    assert el3.phase0_rad == pytest.approx(want)


def test_layer_edges_differ_in_one_digit():
    cfg = make_config(4, 1, 2)
    topo = build(cfg)
    for a, b, layer in topo.edges:
        diffs = [j for j in range(3) if a[j] != b[j]]
        assert diffs == [layer]
        assert (a[layer] + 1) % 4 == b[layer]


def test_config_validation():
    with pytest.raises(ConfigError):
        make_config(2, 1, 0)
    with pytest.raises(ConfigError):
        make_config(8, 8, 0)
    with pytest.raises(ConfigError):
        make_config(8, 1, -1)
    with pytest.raises(ConfigError):
        make_config(8, 1, 0, incl_deg=0.0)


# --- altitude sizing ------------------------------------------------------------


def test_min_altitude_coverage_reference_rows():
    # two anchor rows of the published altitude/latency table
    cfg = make_config(8, 1, 1, elev_deg=25.0)
    h = min_altitude_coverage(cfg)
    assert h == pytest.approx(1259.58, rel=5e-4)
    assert ground_to_space_rtt(h, cfg.consts) * 1e3 == pytest.approx(8.40, rel=5e-3)
    cfg16 = make_config(16, 1, 1, elev_deg=25.0)
    assert min_altitude_coverage(cfg16) == pytest.approx(504.83, rel=5e-4)


def test_min_altitude_coverage_elevation_monotone():
    hs = [
        min_altitude_coverage(make_config(8, 1, 1, elev_deg=e)) for e in (0, 10, 25, 40)
    ]
    assert hs == sorted(hs)


def test_stability_report_dominates_random_probes():
    cfg = make_config(8, 6, 1)
    rep = stability_report(cfg)
    rng = random.Random(7)
    probe = 0.0
    for _ in range(2000):
        i = rng.randrange(cfg.n)
        t = rng.uniform(0.0, cfg.period_s)
        ei = address_to_elements((i, 0), cfg)
        ej = address_to_elements(((i + 1) % cfg.n, 0), cfg)
        probe = max(
            probe, great_circle_range(sat_position_eci(ei, t), sat_position_eci(ej, t))
        )
    assert rep.r_max_rad >= probe - 1e-9
    # intra-orbit arcs are fixed and must be accounted for
    assert rep.r_max_rad >= TWO_PI / cfg.n - 1e-12
    re = cfg.consts.earth_radius_km
    assert rep.h_stability_km == pytest.approx(
        (1.0 / math.cos(rep.r_max_rad / 2.0) - 1.0) * re
    )
    assert rep.h_min_km == max(rep.h_stability_km, rep.h_coverage_km)
    assert min_altitude_stability(cfg) == rep.h_min_km


def test_ground_to_space_rtt():
    c = make_config(8, 1, 0).consts
    assert ground_to_space_rtt(c.light_speed_km_s / 2.0, c) == pytest.approx(1.0)


# --- serialization --------------------------------------------------------------


def test_topology_serialization_round_trip():
    cfg = make_config(4, 1, 1)
    topo = build(cfg)
    doc = topology_to_dict(topo)
    assert doc["config"]["n"] == 4
    assert len(doc["nodes"]) == 16
    assert len(doc["edges"]) == 32
    assert doc["nodes"][0] == "0.0"
    parsed = json.loads(topology_to_json(topo))
    assert parsed == doc
    assert format_address((3, 11, 0)) == "3.11.0"
