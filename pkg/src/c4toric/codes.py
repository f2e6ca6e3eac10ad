"""Toric and C4-concatenated toric code instances.

Lattice conventions
-------------------
The underlying toric lattice is ``l x l`` and periodic.  Vertices are
``(i, j)`` with ``i`` the column and ``j`` the row.  Edge ``(i, j, 0)`` is
horizontal, from ``(i, j)`` to ``(i+1, j)``; edge ``(i, j, 1)`` is vertical,
from ``(i, j)`` to ``(i, j+1)``.  Edge ids are ``2 * (j * l + i) + o``.
Plaquette ``(i, j)`` is the face whose lower-left corner is vertex ``(i, j)``;
star ``(i, j)`` sits on vertex ``(i, j)``.

In the C4 code every edge becomes a four-qubit cluster, indexed cluster-major:
qubit ``4 * edge + pos`` with corner positions ``BL, BR, TL, TR`` = 0..3,
drawn as an axis-aligned square centred on the edge midpoint.

For each cluster the used logical qubit has its Z representative on a side
parallel to the edge and its X representative on a perpendicular side:

* horizontal edge: Z-octagon of the plaquette above uses the top side, the one
  below uses the bottom side; the star on the left uses the left side, the
  star on the right the right side;
* vertical edge: plaquette to the left uses the left side, plaquette to the
  right the right side; star below uses the bottom side, star above the top.

The gauge pair is XX on the parallel side touching BL and ZZ on the
perpendicular side touching BL.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceeded, InvalidParameter
from .pauli import PauliOperator, commutes, gf2_rank, symplectic

BL, BR, TL, TR = 0, 1, 2, 3

LOGICAL_NAMES = ("X1", "X2", "Z1", "Z2")


class Family(str, enum.Enum):
    TORIC = "Toric"
    C4_TORIC = "C4Toric"

    @classmethod
    def parse(cls, value: "str | Family") -> "Family":
        if isinstance(value, Family):
            return value
        key = str(value).replace("-", "").replace("_", "").lower()
        for fam in cls:
            if fam.value.lower() == key:
                return fam
        raise InvalidParameter(f"unknown code family {value!r}")


class CheckKind(str, enum.Enum):
    SQUARE_X = "SquareX"
    SQUARE_Z = "SquareZ"
    OCTAGON_X = "OctagonX"
    OCTAGON_Z = "OctagonZ"
    TORIC_STAR = "ToricStar"
    TORIC_PLAQUETTE = "ToricPlaquette"

    @property
    def pauli_type(self) -> str:
        return "X" if self in (CheckKind.SQUARE_X, CheckKind.OCTAGON_X, CheckKind.TORIC_STAR) else "Z"

    @property
    def is_square(self) -> bool:
        return self in (CheckKind.SQUARE_X, CheckKind.SQUARE_Z)


@dataclass(frozen=True)
class Check:
    op: PauliOperator
    kind: CheckKind
    coord: tuple[int, ...]


@dataclass(frozen=True)
class CodeSpec:
    family: Family
    l: int
    n: int
    k: int
    d: int
    checks: tuple[Check, ...]
    logicals: dict[str, PauliOperator]
    gauge_generators: tuple[PauliOperator, ...] = ()

    @property
    def num_gauge_qubits(self) -> int:
        return len(self.gauge_generators) // 2

    def check_ids(self, pauli_type: str) -> list[int]:
        """Ids of the checks of one Pauli type ("X" or "Z")."""
        return [i for i, c in enumerate(self.checks) if c.kind.pauli_type == pauli_type]

    def syndrome(self, error: PauliOperator) -> list[int]:
        return [0 if commutes(error, c.op) else 1 for c in self.checks]

    def to_json(self) -> str:
        doc = {
            "family": self.family.value,
            "l": self.l,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "checks": [
                {"pauli": str(c.op), "kind": c.kind.value, "coord": list(c.coord)}
                for c in self.checks
            ],
            "logicals": {name: str(op) for name, op in self.logicals.items()},
            "gauge_generators": [str(g) for g in self.gauge_generators],
        }
        return json.dumps(doc, indent=1)


# ---------------------------------------------------------------- geometry


def edge_id(l: int, i: int, j: int, o: int) -> int:
    return 2 * ((j % l) * l + (i % l)) + o


def edge_coord(l: int, e: int) -> tuple[int, int, int]:
    cell, o = divmod(e, 2)
    j, i = divmod(cell, l)
    return i, j, o


def plaquette_edges(l: int, i: int, j: int) -> dict[str, int]:
    """Boundary edges of plaquette (i, j) keyed by compass side."""
    return {
        "S": edge_id(l, i, j, 0),
        "N": edge_id(l, i, j + 1, 0),
        "W": edge_id(l, i, j, 1),
        "E": edge_id(l, i + 1, j, 1),
    }


def star_edges(l: int, i: int, j: int) -> dict[str, int]:
    """Edges incident to vertex (i, j) keyed by compass direction."""
    return {
        "E": edge_id(l, i, j, 0),
        "W": edge_id(l, i - 1, j, 0),
        "N": edge_id(l, i, j, 1),
        "S": edge_id(l, i, j - 1, 1),
    }


def edge_plaquettes(l: int, e: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two plaquettes bordering an edge; for a horizontal edge (above,
    below), for a vertical edge (left, right)."""
    i, j, o = edge_coord(l, e)
    if o == 0:
        return (i % l, j % l), (i % l, (j - 1) % l)
    return ((i - 1) % l, j % l), (i % l, j % l)


def edge_stars(l: int, e: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two end vertices of an edge; (left, right) or (below, above)."""
    i, j, o = edge_coord(l, e)
    if o == 0:
        return (i % l, j % l), ((i + 1) % l, j % l)
    return (i % l, j % l), (i % l, (j + 1) % l)


# Local corner pairs making up each side of a cluster square.
SIDES = {
    "bottom": (BL, BR),
    "top": (TL, TR),
    "left": (BL, TL),
    "right": (BR, TR),
}


def plaquette_side(o: int, which: int) -> str:
    """Cluster side facing plaquette ``which`` (index into edge_plaquettes)."""
    if o == 0:
        return ("top", "bottom")[which]
    return ("left", "right")[which]


def star_side(o: int, which: int) -> str:
    """Cluster side facing star ``which`` (index into edge_stars)."""
    if o == 0:
        return ("left", "right")[which]
    return ("bottom", "top")[which]


def cluster_qubits(e: int, side: str) -> tuple[int, int]:
    a, b = SIDES[side]
    return 4 * e + a, 4 * e + b


def _check_l(l: int) -> None:
    if not isinstance(l, int) or l < 2:
        raise InvalidParameter(f"lattice size l must be an integer >= 2, got {l!r}")


# ---------------------------------------------------------------- builders


def build_toric(l: int) -> CodeSpec:
    """Kitaev toric code on an l x l torus, qubits on edges."""
    _check_l(l)
    n = 2 * l * l
    checks = []
    for j in range(l):
        for i in range(l):
            qs = star_edges(l, i, j).values()
            checks.append(Check(PauliOperator.from_support(n, "X", qs), CheckKind.TORIC_STAR, (i, j)))
    for j in range(l):
        for i in range(l):
            qs = plaquette_edges(l, i, j).values()
            checks.append(Check(PauliOperator.from_support(n, "Z", qs), CheckKind.TORIC_PLAQUETTE, (i, j)))
    logicals = {
        "X1": PauliOperator.from_support(n, "X", [edge_id(l, 0, j, 0) for j in range(l)]),
        "X2": PauliOperator.from_support(n, "X", [edge_id(l, i, 0, 1) for i in range(l)]),
        "Z1": PauliOperator.from_support(n, "Z", [edge_id(l, i, 0, 0) for i in range(l)]),
        "Z2": PauliOperator.from_support(n, "Z", [edge_id(l, 0, j, 1) for j in range(l)]),
    }
    return CodeSpec(Family.TORIC, l, n, 2, l, tuple(checks), logicals)


def _lift(l: int, n: int, kind: str, edges_and_sides) -> PauliOperator:
    qs = []
    for e, side in edges_and_sides:
        qs.extend(cluster_qubits(e, side))
    return PauliOperator.from_support(n, kind, qs)


def build_c4_toric(l: int) -> CodeSpec:
    """Toric code concatenated with the [[4,2,2]] code, one gauge qubit per
    cluster."""
    _check_l(l)
    n_edges = 2 * l * l
    n = 4 * n_edges
    checks = []
    for e in range(n_edges):
        checks.append(Check(PauliOperator.from_support(n, "X", range(4 * e, 4 * e + 4)),
                            CheckKind.SQUARE_X, edge_coord(l, e)))
    for e in range(n_edges):
        checks.append(Check(PauliOperator.from_support(n, "Z", range(4 * e, 4 * e + 4)),
                            CheckKind.SQUARE_Z, edge_coord(l, e)))
    for j in range(l):
        for i in range(l):
            se = star_edges(l, i, j)
            op = _lift(l, n, "X", [(se["E"], "left"), (se["W"], "right"),
                                   (se["N"], "bottom"), (se["S"], "top")])
            checks.append(Check(op, CheckKind.OCTAGON_X, (i, j)))
    for j in range(l):
        for i in range(l):
            pe = plaquette_edges(l, i, j)
            op = _lift(l, n, "Z", [(pe["S"], "top"), (pe["N"], "bottom"),
                                   (pe["W"], "right"), (pe["E"], "left")])
            checks.append(Check(op, CheckKind.OCTAGON_Z, (i, j)))

    logicals = {
        "X1": _lift(l, n, "X", [(edge_id(l, 0, j, 0), "left") for j in range(l)]),
        "X2": _lift(l, n, "X", [(edge_id(l, i, 0, 1), "bottom") for i in range(l)]),
        "Z1": _lift(l, n, "Z", [(edge_id(l, i, 0, 0), "top") for i in range(l)]),
        "Z2": _lift(l, n, "Z", [(edge_id(l, 0, j, 1), "left") for j in range(l)]),
    }
    gauge = []
    for e in range(n_edges):
        o = e % 2
        parallel = "bottom" if o == 0 else "left"
        perpendicular = "left" if o == 0 else "bottom"
        gauge.append(PauliOperator.from_support(n, "X", cluster_qubits(e, parallel)))
        gauge.append(PauliOperator.from_support(n, "Z", cluster_qubits(e, perpendicular)))
    return CodeSpec(Family.C4_TORIC, l, n, 2, 2 * l, tuple(checks), logicals, tuple(gauge))


def build_code(family: "str | Family", l: int) -> CodeSpec:
    fam = Family.parse(family)
    return build_toric(l) if fam is Family.TORIC else build_c4_toric(l)


# ------------------------------------------------------------ verification


@dataclass
class VerificationReport:
    violations: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    n_generators: int = 0
    rank: int = 0
    derived_k: int = 0
    gauge_qubits: int = 0
    pairing: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_code(spec: CodeSpec) -> VerificationReport:
    """Check commutation structure, counts, rank and logical pairing."""
    rep = VerificationReport()
    ops = [c.op for c in spec.checks]
    rep.n_generators = len(ops)
    for kind in CheckKind:
        cnt = sum(1 for c in spec.checks if c.kind is kind)
        if cnt:
            rep.counts[kind.value] = cnt

    for a, b in itertools.combinations(range(len(ops)), 2):
        if not commutes(ops[a], ops[b]):
            rep.violations.append(f"checks {a} and {b} anticommute")
    for name, lop in spec.logicals.items():
        for a, op in enumerate(ops):
            if not commutes(lop, op):
                rep.violations.append(f"logical {name} anticommutes with check {a}")
    for g_idx, g in enumerate(spec.gauge_generators):
        for a, op in enumerate(ops):
            if not commutes(g, op):
                rep.violations.append(f"gauge {g_idx} anticommutes with check {a}")
        for name, lop in spec.logicals.items():
            if not commutes(g, lop):
                rep.violations.append(f"gauge {g_idx} anticommutes with logical {name}")
    # gauge generators come in (X, Z) pairs per cluster
    gg = spec.gauge_generators
    for a, b in itertools.combinations(range(len(gg)), 2):
        want = 1 if (a // 2 == b // 2) else 0
        if symplectic(gg[a], gg[b]) != want:
            rep.violations.append(f"gauge {a} and {b} have wrong commutation")

    rep.rank = gf2_rank(ops)
    full = gf2_rank(ops + list(gg))
    rep.gauge_qubits = (full - rep.rank) // 2
    rep.derived_k = spec.n - rep.rank - rep.gauge_qubits
    if rep.derived_k != spec.k:
        rep.violations.append(f"derived k={rep.derived_k} differs from k={spec.k}")
    if rep.rank != rep.n_generators - 2:
        rep.violations.append(f"rank {rep.rank} != generators - 2 = {rep.n_generators - 2}")
    if rep.gauge_qubits != spec.num_gauge_qubits:
        rep.violations.append("gauge generators are not independent of the checks")

    l = spec.l
    expected = (
        {"ToricStar": l * l, "ToricPlaquette": l * l}
        if spec.family is Family.TORIC
        else {"SquareX": 2 * l * l, "SquareZ": 2 * l * l, "OctagonX": l * l, "OctagonZ": l * l}
    )
    if rep.counts != expected:
        rep.violations.append(f"check counts {rep.counts} != {expected}")

    xs = [nm for nm in spec.logicals if nm.startswith("X")]
    zs = [nm for nm in spec.logicals if nm.startswith("Z")]
    for xn in xs:
        partners = [zn for zn in zs if not commutes(spec.logicals[xn], spec.logicals[zn])]
        if len(partners) != 1:
            rep.violations.append(f"logical {xn} anticommutes with {partners}")
        else:
            rep.pairing.append((xn, partners[0]))
    for group in (xs, zs):
        for a, b in itertools.combinations(group, 2):
            if not commutes(spec.logicals[a], spec.logicals[b]):
                rep.violations.append(f"logicals {a} and {b} anticommute")
    return rep


# ------------------------------------------------------------ distance


def min_logical_weight(spec: CodeSpec, w_max: int, budget: int = 5_000_000) -> Optional[int]:
    """Smallest weight of a bare X- or Z-type logical, searching up to ``w_max``.

    An operator counts when it commutes with every opposite-type check and
    anticommutes with at least one logical representative.  Returns ``None``
    when nothing of weight <= ``w_max`` exists.
    """
    n = spec.n
    cost = sum(math.comb(n, w) for w in range(1, w_max + 1))
    if cost > budget:
        raise BudgetExceeded(
            f"{cost} supports per Pauli type exceeds the budget of {budget}; lower w_max"
        )
    best = None
    for kind, other in (("X", "Z"), ("Z", "X")):
        # per-qubit signature: bits 0..m-1 checks, then logical bits
        cids = spec.check_ids(other)
        lnames = [nm for nm in spec.logicals if nm.startswith(other)]
        m = len(cids)
        sig = []
        for q in range(n):
            mask = 0
            for b, cid in enumerate(cids):
                op = spec.checks[cid].op
                if ((op.z if other == "Z" else op.x) >> q) & 1:
                    mask |= 1 << b
            for b, nm in enumerate(lnames):
                op = spec.logicals[nm]
                if ((op.z if other == "Z" else op.x) >> q) & 1:
                    mask |= 1 << (m + b)
            sig.append(mask)
        check_mask = (1 << m) - 1
        found = _search_weight(sig, check_mask, w_max)
        if found is not None and (best is None or found < best):
            best = found
    return best


def _search_weight(sig: list[int], check_mask: int, w_max: int) -> Optional[int]:
    n = len(sig)
    for w in range(1, w_max + 1):
        for combo in itertools.combinations(range(n), w):
            acc = 0
            for q in combo:
                acc ^= sig[q]
            if acc and not (acc & check_mask):
                return w
    return None


def distance_witness(spec: CodeSpec) -> PauliOperator:
    """An explicit weight-d X-type logical (the lifted Z1 partner)."""
    return spec.logicals["X1"]
