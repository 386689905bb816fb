"""Repeater-network model and seeded lattice generators.

Networks are undirected simple graphs of repeater nodes joined by channels,
each channel carrying an integer entanglement generation rate (raw pairs per
timestep) and a raw pair fidelity. Triangular, square and hexagonal grids
are generated deterministically from a topology spec: identical specs yield
byte-identical networks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .werner import NoiseParams, PERFECT, check_fidelity

NETWORK_FORMAT = "entroute-network/1"
GENERATOR_NAME = "splitmix64/v1"

LATTICE_KINDS = ("triangular", "square", "hexagonal")
INTERIOR_DEGREE = {"triangular": 6, "square": 4, "hexagonal": 3}

_MASK64 = (1 << 64) - 1


def splitmix64(seed: int):
    """Infinite stream of 64-bit integers from the splitmix64 generator."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def _uniform_int(stream, lo: int, hi: int) -> int:
    """Unbiased uniform draw from the integer range [lo, hi]."""
    span = hi - lo + 1
    limit = ((1 << 64) // span) * span
    while True:
        value = next(stream)
        if value < limit:
            return lo + value % span


@dataclass(frozen=True)
class Channel:
    """An undirected channel between two repeaters (stored with u < v)."""

    u: int
    v: int
    egr: int
    raw_fidelity: float

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("channel endpoints must be distinct")
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)
        if self.egr < 1:
            raise ValueError(f"channel egr must be >= 1, got {self.egr}")
        check_fidelity(self.raw_fidelity)

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class TopologySpec:
    """Parameters of one generated lattice instance."""

    kind: str
    extent: tuple[int, int]  # (rows, cols) of lattice sites
    egr_min: int
    egr_max: int
    raw_fidelity: float
    seed: int

    def __post_init__(self):
        if self.kind not in LATTICE_KINDS:
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        rows, cols = self.extent
        if rows * cols < 2:
            raise ValueError(f"extent {self.extent} has fewer than 2 nodes")
        if not 1 <= self.egr_min <= self.egr_max:
            raise ValueError(f"invalid egr range [{self.egr_min}, {self.egr_max}]")
        check_fidelity(self.raw_fidelity)


class Network:
    """Immutable repeater network: nodes, channels, and the noise model."""

    def __init__(self, channels, noise: NoiseParams = PERFECT, t_decoh: int = 1,
                 seed: int | None = None):
        self.noise = noise
        self.t_decoh = t_decoh
        self.seed = seed
        self._channels: dict[tuple[int, int], Channel] = {}
        adj: dict[int, set[int]] = {}
        for ch in channels:
            if ch.key in self._channels:
                raise ValueError(f"duplicate channel {ch.key}")
            self._channels[ch.key] = ch
            adj.setdefault(ch.u, set()).add(ch.v)
            adj.setdefault(ch.v, set()).add(ch.u)
        self.nodes = tuple(sorted(adj))
        self._adj = {node: tuple(sorted(peers)) for node, peers in adj.items()}

    def __contains__(self, node) -> bool:
        return node in self._adj

    def neighbors(self, node) -> tuple[int, ...]:
        return self._adj[node]

    def channel(self, u, v) -> Channel:
        return self._channels[(u, v) if u < v else (v, u)]

    def channels(self) -> list[Channel]:
        return [self._channels[key] for key in sorted(self._channels)]

    def mean_channel_egr(self) -> float:
        chans = self._channels
        return sum(ch.egr for ch in chans.values()) / len(chans)


def _lattice_edges(kind: str, rows: int, cols: int) -> list[tuple[int, int]]:
    def node(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((node(r, c), node(r, c + 1)))
            if r + 1 < rows:
                if kind != "hexagonal" or (r + c) % 2 == 0:
                    edges.append((node(r, c), node(r + 1, c)))
            if kind == "triangular" and r + 1 < rows and c + 1 < cols:
                edges.append((node(r, c), node(r + 1, c + 1)))
    return sorted(edges)


def generate_network(spec: TopologySpec, noise: NoiseParams = PERFECT) -> Network:
    """Generate the lattice described by ``spec``.

    Channel EGRs are drawn independently and uniformly from the integer
    range [egr_min, egr_max] using a splitmix64 stream seeded from
    spec.seed, visiting channels in canonical (sorted endpoint) order.
    """
    rows, cols = spec.extent
    edges = _lattice_edges(spec.kind, rows, cols)
    stream = splitmix64(spec.seed)
    channels = [
        Channel(u, v, _uniform_int(stream, spec.egr_min, spec.egr_max), spec.raw_fidelity)
        for u, v in edges
    ]
    return Network(channels, noise=noise, seed=spec.seed)


def repeater_egr(net: Network, node) -> int:
    """Sum of raw EGR over the channels incident to ``node``."""
    if node not in net:
        raise KeyError(f"node {node!r} not in network")
    return sum(net.channel(node, peer).egr for peer in net.neighbors(node))


def default_extent(hops: int) -> tuple[int, int]:
    """Smallest lattice extent placing the endpoints ``hops`` apart along a
    central row with two rings of slack on every side."""
    return (5, hops + 5)


def endpoints_for_separation(extent: tuple[int, int], hops: int) -> tuple[int, int]:
    """Source and destination node ids at the given hop separation.

    Both nodes sit on the central row, so their hop distance equals the
    column difference on all three lattice kinds.
    """
    rows, cols = extent
    if hops < 1 or hops + 1 > cols:
        raise ValueError(f"extent {extent} cannot hold hop separation {hops}")
    row = rows // 2
    col = (cols - 1 - hops) // 2
    return (row * cols + col, row * cols + col + hops)


def scaled_egr_range(kind: str, repeater_lo: int, repeater_hi: int) -> tuple[int, int]:
    """Channel EGR range giving every lattice the same mean repeater EGR.

    Interior repeater EGR is degree * mean channel EGR; dividing the target
    repeater range by the interior degree (6, 4, 3) puts the channel ranges
    in the 2:3:4 ratio for triangular, square, hexagonal grids.
    """
    degree = INTERIOR_DEGREE[kind]
    lo = max(1, round(repeater_lo / degree))
    hi = max(lo, round(repeater_hi / degree))
    return lo, hi


def network_to_json(net: Network) -> str:
    """Serialize a network as a versioned JSON document."""
    doc = {
        "format": NETWORK_FORMAT,
        "nodes": list(net.nodes),
        "channels": [
            {"u": ch.u, "v": ch.v, "egr": ch.egr, "raw_fidelity": ch.raw_fidelity}
            for ch in net.channels()
        ],
        "noise": {"p2": net.noise.p2, "eta": net.noise.eta},
        "t_decoh": net.t_decoh,
        "seed": net.seed,
    }
    return json.dumps(doc, indent=2) + "\n"


def network_from_json(text: str) -> Network:
    doc = json.loads(text)
    if doc.get("format") != NETWORK_FORMAT:
        raise ValueError(f"unsupported network format {doc.get('format')!r}")
    channels = [
        Channel(ch["u"], ch["v"], ch["egr"], ch["raw_fidelity"])
        for ch in doc["channels"]
    ]
    noise = NoiseParams(doc["noise"]["p2"], doc["noise"]["eta"])
    return Network(channels, noise=noise, t_decoh=doc.get("t_decoh", 1),
                   seed=doc.get("seed"))


def save_network(net: Network, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(network_to_json(net))


def load_network(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return network_from_json(fh.read())
