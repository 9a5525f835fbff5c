"""Topological routing over the digit rings.

A satellite address is one digit per layer; every layer is an independent
N-ring. Shortest paths correct each differing digit along its ring's shorter
arc, forwarding state aggregates into a handful of binary prefixes on the
relative digit, and node-disjoint multipath comes from saturating a
unit-node-capacity flow whose first hops are pinned to the layers where the
addresses differ.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .config import ConstellationConfig
from .constellation import SatAddress, Topology, ring_neighbor, validate_address

Path = list[SatAddress]


def ring_step(s_digit: int, d_digit: int, n: int, rule: str = "optimal") -> tuple[int, int]:
    """Direction (+1/-1) and hop count to correct one ring digit.

    The optimal rule takes the shorter arc and resolves the exact-half tie
    counter-clockwise. rule="literal" keeps the sign convention
    ((s-d) mod N <= N/2 goes clockwise) that picks the longer arc for some
    inputs; it exists for comparison, not for use.
    """
    cw = (d_digit - s_digit) % n
    ccw = (s_digit - d_digit) % n
    if rule == "literal":
        return (1, cw) if ccw <= n / 2 else (-1, ccw)
    if rule != "optimal":
        raise ValueError(f"unknown rule {rule!r}")
    if cw == 0:
        return (1, 0)
    if cw < ccw:
        return (1, cw)
    return (-1, ccw)


def shortest_path(
    src: SatAddress,
    dst: SatAddress,
    topo: Topology,
    permutation: tuple[int, ...] | None = None,
    rule: str = "optimal",
) -> Path:
    """Hop-optimal path correcting digits in the given layer order."""
    cfg = topo.config
    validate_address(src, cfg)
    validate_address(dst, cfg)
    layers = tuple(range(cfg.k + 1)) if permutation is None else permutation
    if sorted(layers) != list(range(cfg.k + 1)):
        raise ValueError(f"{layers} is not a permutation of layers 0..{cfg.k}")
    path = [src]
    cur = src
    for layer in layers:
        direction, dist = ring_step(cur[layer], dst[layer], cfg.n, rule=rule)
        for _ in range(dist):
            cur = ring_neighbor(cur, layer, direction, cfg.n)
            path.append(cur)
    return path


def path_hops(path: Path, cfg: ConstellationConfig) -> list[tuple[int, int]]:
    """(layer, direction) annotation for each hop of a path."""
    hops = []
    for a, b in zip(path, path[1:]):
        diff = [j for j in range(cfg.k + 1) if a[j] != b[j]]
        if len(diff) != 1:
            raise ValueError(f"{a} -> {b} is not a topology hop")
        j = diff[0]
        if (a[j] + 1) % cfg.n == b[j]:
            hops.append((j, 1))
        elif (a[j] - 1) % cfg.n == b[j]:
            hops.append((j, -1))
        else:
            raise ValueError(f"{a} -> {b} is not a topology hop")
    return hops


def hop_bound(cfg: ConstellationConfig) -> int:
    """Worst-case shortest-path hop count across all pairs."""
    return ((cfg.k + 1) * cfg.n + 1) // 2


# --- forwarding state -------------------------------------------------------


@dataclass(frozen=True)
class FibEntry:
    layer: int
    pattern: str  # fixed bits then '*' wildcards, ceil(log2 N) positions
    direction: int

    def matches(self, relative_digit: int) -> bool:
        bits = format(relative_digit, f"0{len(self.pattern)}b")
        return all(p in ("*", b) for p, b in zip(self.pattern, bits))


@dataclass(frozen=True)
class Fib:
    owner: SatAddress
    n: int
    entries: tuple[FibEntry, ...]


def _prefix_cover(lo: int, hi: int, width: int) -> list[str]:
    """Minimal trailing-wildcard patterns covering the integers [lo, hi]."""
    out = []
    while lo <= hi:
        size = lo & -lo if lo else 1 << width
        while lo + size - 1 > hi:
            size >>= 1
        bits = format(lo >> size.bit_length() - 1, f"0{width - size.bit_length() + 1}b")
        out.append(bits + "*" * (size.bit_length() - 1))
        lo += size
    return out


def build_fib(owner: SatAddress, cfg: ConstellationConfig) -> Fib:
    """Forwarding table keyed by relative digit; identical shape for any owner.

    Per layer, relative digits in [1, ceil(N/2)) go clockwise and the rest
    counter-clockwise (the exact-half digit included, matching ring_step);
    each group collapses into its minimal prefix cover.
    """
    validate_address(owner, cfg)
    n = cfg.n
    width = max(1, (n - 1).bit_length())
    split = (n + 1) // 2  # first counter-clockwise relative digit
    entries = []
    for layer in range(cfg.k + 1):
        for pattern in _prefix_cover(1, split - 1, width):
            entries.append(FibEntry(layer, pattern, 1))
        for pattern in _prefix_cover(split, n - 1, width):
            entries.append(FibEntry(layer, pattern, -1))
    return Fib(owner=owner, n=n, entries=tuple(entries))


def fib_lookup(fib: Fib, dst: SatAddress) -> tuple[int, int] | None:
    """Next action for a destination: (layer, direction), or None to deliver.

    Layers are scanned deepest first; the first differing digit decides.
    """
    for layer in range(len(fib.owner) - 1, -1, -1):
        rel = (dst[layer] - fib.owner[layer]) % fib.n
        if rel == 0:
            continue
        for entry in fib.entries:
            if entry.layer == layer and entry.matches(rel):
                return (layer, entry.direction)
        raise AssertionError(f"FIB of {fib.owner} has no entry for relative digit {rel}")
    return None


# --- node-disjoint multipath ------------------------------------------------


@dataclass(frozen=True)
class MultipathResult:
    """Pairwise internally-node-disjoint paths, plus a reason when < 2(k+1)."""

    paths: tuple[tuple[SatAddress, ...], ...]
    reason: str | None

    def __iter__(self):
        return iter(self.paths)

    def __len__(self):
        return len(self.paths)

    def __getitem__(self, idx):
        return self.paths[idx]


def disjoint_paths(src: SatAddress, dst: SatAddress, topo: Topology) -> MultipathResult:
    """Maximum set of node-disjoint paths, one per (differing layer, direction).

    Realized as unit-node-capacity max-flow: every satellite except the
    endpoints is split into an in/out pair with capacity one, and the source's
    first hops are restricted to layers where the digits differ. Saturation
    yields exactly two paths per differing layer, labeled and ordered by their
    first hop (layer ascending, clockwise before counter-clockwise).
    """
    cfg = topo.config
    validate_address(src, cfg)
    validate_address(dst, cfg)
    if src == dst:
        raise ValueError("multipath needs distinct endpoints")
    active = [j for j in range(cfg.k + 1) if src[j] != dst[j]]

    # Node-split flow network over address tuples: ("in", v) / ("out", v).
    # capacity[u][v] with residuals stored in the same dict.
    cap: dict = {}

    def add_edge(u, v, c: int) -> None:
        cap.setdefault(u, {}).setdefault(v, 0)
        cap.setdefault(v, {}).setdefault(u, 0)
        cap[u][v] += c

    source, sink = ("out", src), ("in", dst)
    for v in topo.nodes:
        if v != src and v != dst:
            add_edge(("in", v), ("out", v), 1)
    for a, b, layer in topo.edges:
        for u, v in ((a, b), (b, a)):
            if u == src and layer not in active:
                continue
            if u == dst or v == src:
                continue  # flow terminates at the sink and never re-enters src
            add_edge(("out", u), ("in", v), 1)

    flow: dict = {u: dict.fromkeys(nbrs, 0) for u, nbrs in cap.items()}
    total = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in cap[u]:
                if v not in parent and cap[u][v] - flow[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        v = sink
        while parent[v] is not None:
            u = parent[v]
            flow[u][v] += 1
            flow[v][u] -= 1
            v = u
        total += 1

    paths = []
    for _ in range(total):
        node, walk = source, [src]
        while node != sink:
            nxt = next(v for v in flow[node] if flow[node][v] > 0)
            flow[node][nxt] -= 1
            flow[nxt][node] += 1
            if nxt[0] == "in":
                walk.append(nxt[1])
            node = ("out", nxt[1]) if nxt != sink and nxt[0] == "in" else nxt
        paths.append(tuple(walk))

    def first_hop_key(path):
        hop = path_hops(list(path[:2]), cfg)[0]
        return (hop[0], 0 if hop[1] == 1 else 1)

    paths.sort(key=first_hop_key)
    reason = None
    if len(active) < cfg.k + 1:
        same = cfg.k + 1 - len(active)
        noun = "layer" if same == 1 else "layers"
        reason = (
            f"{same} {noun} already agree; {2 * len(active)} disjoint paths exist"
            + (" (ring case yields exactly 2)" if len(active) == 1 else "")
        )
    return MultipathResult(paths=tuple(paths), reason=reason)
