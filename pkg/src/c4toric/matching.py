"""Defect-graph metrics, minimum-weight perfect matching and corrections.

The defect graph of one sublattice has a node per check of one Pauli type and
an edge per data qubit whose single-qubit error flips exactly two of those
checks.  On the C4 code squares sit between the two octagons they touch, so a
move between neighbouring octagons costs two edges; on the toric code the
graph is the plain torus grid.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .codes import CheckKind, CodeSpec, Family, edge_plaquettes, edge_stars
from .errors import InvalidParameter, ParityError
from .pauli import PauliOperator

__all__ = [
    "NodeKind",
    "DefectNode",
    "MatchingProblem",
    "defect_node",
    "torus_manhattan",
    "spatial_distance",
    "spatial_distance_bfs",
    "spacetime_distance",
    "mwpm",
    "mwpm_bruteforce",
    "matching_weight",
    "pairing_to_correction",
    "DefectGraph",
    "defect_graph",
]

BRUTEFORCE_LIMIT = 12


class NodeKind(str, enum.Enum):
    SQUARE = "Square"
    OCTAGON = "Octagon"


@dataclass(frozen=True)
class DefectNode:
    """A flipped check at a given syndrome round.

    Toric-code checks are recorded as ``OCTAGON`` nodes: they play the same
    role as octagons, one node per plaquette or star.
    """

    check_id: int
    kind: NodeKind
    coord: tuple[int, ...]
    round: int = 0


def defect_node(spec: CodeSpec, check_id: int, round: int = 0) -> DefectNode:
    c = spec.checks[check_id]
    kind = NodeKind.SQUARE if c.kind.is_square else NodeKind.OCTAGON
    return DefectNode(check_id, kind, tuple(c.coord), round)


def torus_manhattan(l: int, a: Sequence[int], b: Sequence[int]) -> int:
    di = abs(a[0] - b[0]) % l
    dj = abs(a[1] - b[1]) % l
    return min(di, l - di) + min(dj, l - dj)


def _pauli_type(spec: CodeSpec, node: DefectNode) -> str:
    return spec.checks[node.check_id].kind.pauli_type


def _same_sublattice(spec: CodeSpec, a: DefectNode, b: DefectNode) -> str:
    ta, tb = _pauli_type(spec, a), _pauli_type(spec, b)
    if ta != tb:
        raise InvalidParameter(
            f"checks {a.check_id} and {b.check_id} lie on different sublattices")
    return ta


def _octagon_anchors(spec: CodeSpec, node: DefectNode) -> list[tuple[tuple[int, int], int]]:
    # (octagon coordinate, hops to reach it)
    if node.kind is NodeKind.OCTAGON:
        return [(node.coord[:2], 0)]
    kind = spec.checks[node.check_id].kind
    i, j, o = node.coord
    e = 2 * (j * spec.l + i) + o
    nbrs = edge_plaquettes(spec.l, e) if kind is CheckKind.SQUARE_Z else edge_stars(spec.l, e)
    return [(nbrs[0], 1), (nbrs[1], 1)]


def spatial_distance(spec: CodeSpec, a: DefectNode, b: DefectNode) -> int:
    """Deformed Manhattan distance between two same-type checks."""
    _same_sublattice(spec, a, b)
    if a.check_id == b.check_id:
        return 0
    if spec.family is Family.TORIC:
        return torus_manhattan(spec.l, a.coord, b.coord)
    best = None
    for pa, ca in _octagon_anchors(spec, a):
        for pb, cb in _octagon_anchors(spec, b):
            d = ca + cb + 2 * torus_manhattan(spec.l, pa, pb)
            if best is None or d < best:
                best = d
    return best


def spacetime_distance(spec: CodeSpec, a: DefectNode, b: DefectNode, time_weight: int = 1) -> int:
    return spatial_distance(spec, a, b) + time_weight * abs(a.round - b.round)


# ------------------------------------------------------------ defect graph


class DefectGraph:
    """Explicit defect graph of one sublattice, built from the check operators."""

    def __init__(self, spec: CodeSpec, pauli_type: str):
        self.pauli_type = pauli_type
        self.check_ids = spec.check_ids(pauli_type)
        self.index = {c: i for i, c in enumerate(self.check_ids)}
        m = len(self.check_ids)
        # errors of the opposite type are what these checks detect
        flips: dict[int, list[int]] = {}
        for local, cid in enumerate(self.check_ids):
            op = spec.checks[cid].op
            mask = op.x | op.z
            q = 0
            while mask:
                if mask & 1:
                    flips.setdefault(q, []).append(local)
                mask >>= 1
                q += 1
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(m)]
        self.edges: list[tuple[int, int, int]] = []
        for q, hit in sorted(flips.items()):
            if len(hit) == 2:
                u, v = hit
                self.adj[u].append((v, q))
                self.adj[v].append((u, q))
                self.edges.append((u, v, q))
        self.n_qubits = spec.n
        self._trees: dict[int, tuple[list[int], list[int], list[int]]] = {}

    def _tree(self, src: int):
        tree = self._trees.get(src)
        if tree is None:
            m = len(self.check_ids)
            dist = [-1] * m
            pred = [-1] * m
            via = [-1] * m
            dist[src] = 0
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for v, q in self.adj[u]:
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        pred[v] = u
                        via[v] = q
                        queue.append(v)
            tree = (dist, pred, via)
            self._trees[src] = tree
        return tree

    def distance(self, a: int, b: int) -> int:
        d = self._tree(self.index[a])[0][self.index[b]]
        if d < 0:
            raise RuntimeError(f"checks {a} and {b} are disconnected in the defect graph")
        return d

    def path_qubits(self, a: int, b: int) -> list[int]:
        """Qubits along one shortest path from check ``a`` to check ``b``."""
        src, dst = self.index[a], self.index[b]
        dist, pred, via = self._tree(src)
        if dist[dst] < 0:
            raise RuntimeError(f"checks {a} and {b} are disconnected in the defect graph")
        out = []
        v = dst
        while v != src:
            out.append(via[v])
            v = pred[v]
        return out


_GRAPHS: dict[tuple[Family, int, str], DefectGraph] = {}


def defect_graph(spec: CodeSpec, pauli_type: str) -> DefectGraph:
    key = (spec.family, spec.l, pauli_type)
    g = _GRAPHS.get(key)
    if g is None:
        g = DefectGraph(spec, pauli_type)
        _GRAPHS[key] = g
    return g


def spatial_distance_bfs(spec: CodeSpec, a: DefectNode, b: DefectNode) -> int:
    """Shortest-path length on the explicit defect graph."""
    t = _same_sublattice(spec, a, b)
    return defect_graph(spec, t).distance(a.check_id, b.check_id)


# ---------------------------------------------------------------- matching


@dataclass
class MatchingProblem:
    nodes: list[DefectNode]
    weight: Callable[[DefectNode, DefectNode], int]

    def weight_matrix(self) -> np.ndarray:
        n = len(self.nodes)
        w = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                w[i, j] = w[j, i] = self.weight(self.nodes[i], self.nodes[j])
        return w

    def to_json(self) -> str:
        doc = {
            "nodes": [
                {"check_id": v.check_id, "kind": v.kind.value, "coord": list(v.coord), "round": v.round}
                for v in self.nodes
            ],
            "weights": self.weight_matrix().tolist(),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "MatchingProblem":
        doc = json.loads(text)
        nodes = [DefectNode(d["check_id"], NodeKind(d["kind"]), tuple(d["coord"]), d["round"])
                 for d in doc["nodes"]]
        w = doc["weights"]
        pos = {v: i for i, v in enumerate(nodes)}
        return cls(nodes, lambda a, b: w[pos[a]][pos[b]])


def _require_even(problem: MatchingProblem) -> None:
    if len(problem.nodes) % 2:
        raise ParityError(f"odd number of defects ({len(problem.nodes)})")


def mwpm(problem: MatchingProblem) -> list[tuple[DefectNode, DefectNode]]:
    """Exact minimum-weight perfect matching on the complete defect graph."""
    _require_even(problem)
    if not problem.nodes:
        return []
    mate = kernels.min_weight_perfect_matching_dense(problem.weight_matrix())
    return [(problem.nodes[i], problem.nodes[int(j)]) for i, j in enumerate(mate) if i < j]


def mwpm_bruteforce(problem: MatchingProblem) -> list[tuple[DefectNode, DefectNode]]:
    """Minimum over every pairing; refuses more than 12 nodes."""
    _require_even(problem)
    n = len(problem.nodes)
    if n > BRUTEFORCE_LIMIT:
        raise InvalidParameter(f"brute force limited to {BRUTEFORCE_LIMIT} nodes, got {n}")
    w = problem.weight_matrix()

    def best(rest: tuple[int, ...]) -> tuple[int, list[tuple[int, int]]]:
        if not rest:
            return 0, []
        a = rest[0]
        top: Optional[tuple[int, list[tuple[int, int]]]] = None
        for k in range(1, len(rest)):
            cost, pairs = best(rest[1:k] + rest[k + 1:])
            cost += int(w[a, rest[k]])
            if top is None or cost < top[0]:
                top = (cost, [(a, rest[k])] + pairs)
        return top

    _, pairs = best(tuple(range(n)))
    return [(problem.nodes[i], problem.nodes[j]) for i, j in pairs]


def matching_weight(problem: MatchingProblem, pairs) -> int:
    return sum(problem.weight(a, b) for a, b in pairs)


def pairing_to_correction(spec: CodeSpec, pairs) -> PauliOperator:
    """Product of chains along shortest defect-graph paths for each pair.

    Rounds are ignored: time-like separation carries no data correction.
    """
    x = z = 0
    for a, b in pairs:
        t = _same_sublattice(spec, a, b)
        if a.check_id == b.check_id:
            continue
        mask = 0
        for q in defect_graph(spec, t).path_qubits(a.check_id, b.check_id):
            mask ^= 1 << q
        # Z-type checks see X errors and vice versa
        if t == "Z":
            x ^= mask
        else:
            z ^= mask
    return PauliOperator(spec.n, x, z)

