"""Syndrome-extraction schedules and a reference Pauli-frame simulator.

Qubits ``0 .. spec.n - 1`` are data; ancillas follow.  X checks use an
ancilla prepared in |+>, CNOTs from ancilla to data and an X-basis
measurement; Z checks use |0>, CNOTs from data to ancilla and a Z-basis
measurement.  Octagon checks of the four-step schedule use a Bell pair
(|+> and |0> joined by one CNOT) and report the product of both outcomes.

The C4 CNOT orderings are found by a small constraint search over
translation-invariant templates (see ``solve_templates``):

* every data qubit meets each of its four checks at a different time;
* every overlapping X/Z check pair has an even number of shared qubits on
  which the X check acts first, so all checks are measured exactly;
* a square ancilla finishes one gauge side before starting the other, so a
  single ancilla fault leaves at most a weight-two gauge error;
* each half of a four-step octagon Bell pair covers two diagonally
  opposite corner pairs, so an ancilla fault never leaves both octagon
  qubits of one cluster;
* a single eight-step octagon ancilla cannot do the same for every fault
  position, so its order is chosen to leave such a pair at the fewest
  positions (two per octagon, see ``octagon_hook_count``).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .codes import (
    BL,
    BR,
    SIDES,
    TL,
    TR,
    CheckKind,
    CodeSpec,
    Family,
    cluster_qubits,
    plaquette_edges,
    star_edges,
)
from .errors import ConstructionError, InvalidParameter
from .noise import FaultLocation, LocationKind, NoiseParams, sample_fault
from .pauli import PauliOperator, commutes, conjugate_by_cnot

__all__ = [
    "OpKind",
    "Op",
    "Schedule",
    "SyndromeRecord",
    "ValidationReport",
    "build_toric_schedule",
    "build_c4_schedule_8step",
    "build_c4_schedule_4step",
    "build_schedule",
    "solve_templates",
    "validate_schedule",
    "simulate_rounds",
    "run_round",
    "record_from_syndromes",
    "ideal_syndrome",
]


class OpKind(str, enum.Enum):
    PREP = "Prep"
    CNOT = "CNOT"
    MEASURE = "Measure"
    IDLE = "Idle"


@dataclass(frozen=True)
class Op:
    kind: OpKind
    qubits: tuple[int, ...]
    basis: str = ""

    def __str__(self) -> str:
        if self.kind is OpKind.CNOT:
            return f"CNOT {self.qubits[0]}->{self.qubits[1]}"
        if self.basis:
            return f"{self.kind.value}{self.basis} {self.qubits[0]}"
        return f"{self.kind.value} {self.qubits[0]}"


_LOC_KIND = {
    OpKind.PREP: LocationKind.PREP,
    OpKind.MEASURE: LocationKind.MEASURE,
    OpKind.IDLE: LocationKind.IDLE,
    OpKind.CNOT: LocationKind.TWO_QUBIT_GATE,
}


@dataclass(frozen=True)
class Schedule:
    name: str
    n_data: int
    n_qubits: int
    timesteps: tuple[tuple[Op, ...], ...]
    ancilla_map: dict[int, tuple[int, ...]]
    octagon_ancillas: frozenset[int] = frozenset()

    def combine_rule(self, check_id: int) -> str:
        return "product" if len(self.ancilla_map[check_id]) == 2 else "single"

    @property
    def cnot_timesteps(self) -> list[int]:
        return [t for t, ops in enumerate(self.timesteps)
                if any(op.kind is OpKind.CNOT for op in ops)]

    def data_cnot_timesteps(self) -> list[int]:
        return [t for t, ops in enumerate(self.timesteps)
                if any(op.kind is OpKind.CNOT and min(op.qubits) < self.n_data for op in ops)]

    def locations(self) -> list[FaultLocation]:
        """One fault location per op, in timestep order."""
        out = []
        for t, ops in enumerate(self.timesteps):
            for op in ops:
                touches = any(q in self.octagon_ancillas for q in op.qubits)
                out.append(FaultLocation(_LOC_KIND[op.kind], op.qubits, t,
                                         op.kind is OpKind.CNOT and touches,
                                         op.basis or "Z"))
        return out

    def dump(self) -> str:
        lines = [f"schedule {self.name}: {self.n_data} data, "
                 f"{self.n_qubits - self.n_data} ancillas, {len(self.timesteps)} timesteps"]
        for t, ops in enumerate(self.timesteps):
            active = sorted((op for op in ops if op.kind is not OpKind.IDLE),
                            key=lambda o: (o.kind.value, o.qubits))
            idle = sum(op.kind is OpKind.IDLE for op in ops)
            lines.append(f"t{t}: " + "; ".join(str(op) for op in active) + f" | idle {idle}")
        for cid in sorted(self.ancilla_map):
            lines.append(f"check {cid}: ancillas {list(self.ancilla_map[cid])} "
                         f"({self.combine_rule(cid)})")
        return "\n".join(lines)


@dataclass
class SyndromeRecord:
    """Measured syndromes of every round, the last one ideal.

    ``final_data_error`` is the ground truth for judging the decoder and is
    never read by it.
    """

    rounds: np.ndarray
    final_data_error: PauliOperator

    @property
    def defects(self) -> list[tuple[int, int]]:
        diff = self.rounds.copy()
        diff[1:] ^= self.rounds[:-1]
        r, c = np.nonzero(diff)
        return sorted(zip(c.tolist(), r.tolist()), key=lambda x: (x[1], x[0]))


# ------------------------------------------------------------------ templates

# Octagon roles are (edge label, corner position) pairs.  For a Z octagon the
# edge labels are the plaquette's S/N/W/E boundary edges; for an X octagon the
# star's E/W/N/S incident edges.
_OCTZ_SIDES = {"S": "top", "N": "bottom", "W": "right", "E": "left"}
_OCTX_SIDES = {"E": "left", "W": "right", "N": "bottom", "S": "top"}

_OCTZ_CORNER = {("S", TL): "SW", ("S", TR): "SE", ("N", BL): "NW", ("N", BR): "NE",
                ("W", BR): "SW", ("W", TR): "NW", ("E", BL): "SE", ("E", TL): "NE"}
_OCTX_CORNER = {("E", BL): "SE", ("E", TL): "NE", ("W", BR): "SW", ("W", TR): "NW",
                ("N", BL): "NW", ("N", BR): "NE", ("S", TL): "SW", ("S", TR): "SE"}

# Diagonally opposite corners share no cluster.
_HALVES = (("SW", "NE"), ("SE", "NW"))

# first-pair options: X squares start on a side parallel to the edge, Z
# squares on a perpendicular side
_SQUARE_FIRST = {
    ("X", 0): ("bottom", "top"),
    ("X", 1): ("left", "right"),
    ("Z", 0): ("left", "right"),
    ("Z", 1): ("bottom", "top"),
}


def _square_options(pauli: str, o: int) -> list[dict[int, tuple[int, int]]]:
    out = []
    for first in _SQUARE_FIRST[(pauli, o)]:
        second = [s for s in _SQUARE_FIRST[(pauli, o)] if s != first][0]
        for a in itertools.permutations(SIDES[first]):
            for b in itertools.permutations(SIDES[second]):
                order = list(a) + list(b)
                out.append({pos: (0, k) for k, pos in enumerate(order)})
    return out


def _octagon_options(corner_of: dict, any_split: bool) -> list[dict[tuple[str, int], tuple[int, int]]]:
    """Octagon CNOT orders as {role: (half, step)}.

    Without ``any_split`` each half (ancilla row, or Bell-pair qubit) takes
    two diagonally opposite corners, in any order.  With it the eight roles
    may be split between the halves arbitrarily.
    """
    roles = sorted(corner_of)
    if any_split:
        splits = [(list(h0), [r for r in roles if r not in h0])
                  for h0 in itertools.combinations(roles, 4)]
    else:
        by_corner: dict[str, list] = {}
        for role, corner in corner_of.items():
            by_corner.setdefault(corner, []).append(role)
        splits = []
        for halves in (_HALVES, _HALVES[::-1]):
            splits.append([sorted(by_corner[halves[0][0]] + by_corner[halves[0][1]]),
                           sorted(by_corner[halves[1][0]] + by_corner[halves[1][1]])])
    out = []
    for h0, h1 in splits:
        for s0 in itertools.permutations(h0):
            for s1 in itertools.permutations(h1):
                tmpl = {}
                for k, role in enumerate(s0):
                    tmpl[role] = (0, k)
                for k, role in enumerate(s1):
                    tmpl[role] = (1, k)
                out.append(tmpl)
    return out


def octagon_hook_count(tmpl: dict) -> int:
    """Ancilla fault positions after which both the already-touched and the
    untouched octagon qubits contain a full cluster side.

    Such a fault leaves an error that no product with the octagon check
    brings down to one qubit per cluster.
    """
    seq = [role for role, _ in sorted(tmpl.items(), key=lambda kv: kv[1])]
    bad = 0
    for k in range(1, len(seq)):
        done = [r[0] for r in seq[:k]]
        rest = [r[0] for r in seq[k:]]
        if len(set(done)) < len(done) and len(set(rest)) < len(rest):
            bad += 1
    return bad


def _time_of(mode: str, var: str, slot: tuple[int, int]) -> int:
    half, step = slot
    if mode == "4step":
        return 2 + step
    if var.startswith("sqX"):
        return 1 + step
    if var.startswith("sqZ"):
        return 6 + step
    return (1 if half == 0 else 6) + step


def _roles(l: int):
    """Per check: (var name, [(qubit, role)]) on an l x l lattice."""
    out = []
    for j in range(l):
        for i in range(l):
            qs = []
            for label, e in plaquette_edges(l, i, j).items():
                for q in cluster_qubits(e, _OCTZ_SIDES[label]):
                    qs.append((q, (label, q % 4)))
            out.append(("Z", "octZ", qs))
            qs = []
            for label, e in star_edges(l, i, j).items():
                for q in cluster_qubits(e, _OCTX_SIDES[label]):
                    qs.append((q, (label, q % 4)))
            out.append(("X", "octX", qs))
    for e in range(2 * l * l):
        o = e % 2
        qs = [(4 * e + pos, pos) for pos in range(4)]
        out.append(("X", f"sqX{o}", qs))
        out.append(("Z", f"sqZ{o}", qs))
    return out


def _constraints(sizes: Iterable[int]):
    excl = set()
    parity = set()
    for l in sizes:
        checks = _roles(l)
        per_qubit: dict[int, list] = {}
        for ci, (_, var, qs) in enumerate(checks):
            for q, role in qs:
                per_qubit.setdefault(q, []).append((var, role))
        for items in per_qubit.values():
            excl.add(tuple(sorted(items)))
        supports = [{q: (var, role) for q, role in qs} for _, var, qs in checks]
        for a, (ta, _, _) in enumerate(checks):
            if ta != "X":
                continue
            for b, (tb, _, _) in enumerate(checks):
                if tb != "Z":
                    continue
                shared = supports[a].keys() & supports[b].keys()
                if shared:
                    parity.add(tuple(sorted((supports[a][q], supports[b][q]) for q in shared)))
    return sorted(excl), sorted(parity)


def iter_templates(mode: str, max_hooks: Optional[int] = None,
                   shuffle_seed: Optional[int] = None) -> Iterator[dict]:
    """Every CNOT template meeting the constraints, in a fixed order.

    ``mode`` is ``"4step"`` or ``"8step"``.  Octagon orders are enumerated in
    increasing ``octagon_hook_count``; ``max_hooks`` caps it per octagon.
    ``shuffle_seed`` permutes each variable's options first.
    """
    if mode not in ("4step", "8step"):
        raise InvalidParameter(f"unknown schedule mode {mode!r}")
    excl, parity = _constraints((2, 3, 4))
    any_split = mode == "8step"
    octs = {
        "octZ": _octagon_options(_OCTZ_CORNER, any_split),
        "octX": _octagon_options(_OCTX_CORNER, any_split),
    }
    for v, opts in octs.items():
        opts.sort(key=octagon_hook_count)
        if max_hooks is not None:
            octs[v] = [o for o in opts if octagon_hook_count(o) <= max_hooks]
    options = {f"sq{p}{o}": _square_options(p, o) for p in "XZ" for o in (0, 1)}
    options.update(octs)
    if shuffle_seed is not None:
        rng = np.random.default_rng(shuffle_seed)
        for v, opts in options.items():
            options[v] = [opts[i] for i in rng.permutation(len(opts))]
    order = ["sqX0", "sqX1", "octZ", "sqZ0", "sqZ1", "octX"]
    pos = {v: i for i, v in enumerate(order)}

    # index each constraint under the variables whose assignment can break it
    excl_of: dict[str, list] = {v: [] for v in order}
    for items in excl:
        for v in {v for v, _ in items}:
            excl_of[v].append(items)
    parity_of: dict[str, list] = {v: [] for v in order}
    for pairs in parity:
        vs = {v for (v, _), _ in pairs} | {w for _, (w, _) in pairs}
        parity_of[max(vs, key=pos.get)].append(pairs)

    assign: dict[str, dict] = {}

    def t(var, role):
        return _time_of(mode, var, assign[var][role])

    def ok(var: str) -> bool:
        for items in excl_of[var]:
            times = [t(v, r) for v, r in items if v in assign]
            if len(times) != len(set(times)):
                return False
        for pairs in parity_of[var]:
            if sum(t(va, ra) < t(vb, rb) for (va, ra), (vb, rb) in pairs) % 2:
                return False
        return True

    def search(depth: int):
        if depth == len(order):
            yield {k: dict(v) for k, v in assign.items()}
            return
        var = order[depth]
        for opt in options[var]:
            assign[var] = opt
            if ok(var):
                yield from search(depth + 1)
            del assign[var]

    yield from search(0)


def template_violations(mode: str, tmpl: dict) -> list[str]:
    """Constraint violations of a template (empty when it is valid)."""
    excl, parity = _constraints((2, 3, 4))

    def t(var, role):
        return _time_of(mode, var, tmpl[var][role])

    out = []
    for items in excl:
        times = [t(v, r) for v, r in items]
        if len(times) != len(set(times)):
            out.append(f"qubit exclusivity {items}")
    for pairs in parity:
        if sum(t(va, ra) < t(vb, rb) for (va, ra), (vb, rb) in pairs) % 2:
            out.append(f"commutation parity {pairs}")
    return out


def solve_templates(mode: str) -> dict:
    """The CNOT template used by the C4 schedules.

    Returns the pinned choice from ``TEMPLATES`` after re-checking every
    constraint; without a pinned choice, the first template ``iter_templates``
    finds under the smallest hook budget.
    """
    if mode in _SOLVED:
        return _SOLVED[mode]
    if mode not in ("4step", "8step"):
        raise InvalidParameter(f"unknown schedule mode {mode!r}")
    tmpl = TEMPLATES.get(mode)
    if tmpl is not None:
        bad = template_violations(mode, tmpl)
        if bad:
            raise ConstructionError(f"pinned {mode} template violates {bad[0]}")
    else:
        for budget in range(8):
            tmpl = next(iter_templates(mode, budget), None)
            if tmpl is not None:
                break
        else:
            raise ConstructionError(f"no {mode} CNOT template satisfies the constraints")
    _SOLVED[mode] = tmpl
    return tmpl


_SOLVED: dict[str, dict] = {}

# Templates chosen among the valid ones by an exhaustive single-fault sweep
# at l=2 (see benchmarks/select_templates.py).
TEMPLATES: dict[str, dict] = {
    "4step": {
        "sqX0": {0: (0, 0), 1: (0, 1), 2: (0, 2), 3: (0, 3)},
        "sqX1": {0: (0, 0), 2: (0, 1), 1: (0, 2), 3: (0, 3)},
        "octZ": {("S", 2): (0, 0), ("W", 1): (0, 1), ("E", 2): (0, 2), ("N", 1): (0, 3),
                 ("S", 3): (1, 0), ("W", 3): (1, 1), ("E", 0): (1, 2), ("N", 0): (1, 3)},
        "sqZ0": {1: (0, 0), 3: (0, 1), 0: (0, 2), 2: (0, 3)},
        "sqZ1": {1: (0, 0), 0: (0, 1), 3: (0, 2), 2: (0, 3)},
        "octX": {("S", 2): (0, 0), ("E", 2): (0, 1), ("W", 1): (0, 2), ("N", 1): (0, 3),
                 ("S", 3): (1, 0), ("E", 0): (1, 1), ("W", 3): (1, 2), ("N", 0): (1, 3)},
    },
    "8step": {
        "sqX0": {0: (0, 0), 1: (0, 1), 2: (0, 3), 3: (0, 2)},
        "sqX1": {0: (0, 0), 1: (0, 2), 2: (0, 1), 3: (0, 3)},
        "octZ": {("S", 3): (0, 0), ("E", 0): (0, 1), ("S", 2): (0, 2), ("W", 1): (0, 3),
                 ("N", 0): (1, 0), ("E", 2): (1, 1), ("N", 1): (1, 2), ("W", 3): (1, 3)},
        "sqZ0": {1: (0, 0), 3: (0, 1), 0: (0, 2), 2: (0, 3)},
        "sqZ1": {2: (0, 0), 3: (0, 1), 0: (0, 2), 1: (0, 3)},
        "octX": {("S", 3): (0, 0), ("E", 0): (0, 1), ("N", 0): (0, 2), ("S", 2): (0, 3),
                 ("N", 1): (1, 0), ("W", 1): (1, 1), ("E", 2): (1, 2), ("W", 3): (1, 3)},
    },
}


# ------------------------------------------------------------------ builders


class _Builder:
    def __init__(self, spec: CodeSpec, n_steps: int):
        self.spec = spec
        self.n_data = spec.n
        self.next_q = spec.n
        self.steps: list[list[Op]] = [[] for _ in range(n_steps)]
        self.ancilla_map: dict[int, tuple[int, ...]] = {}
        self.octagon: set[int] = set()
        self.lifetime: dict[int, tuple[int, int]] = {}

    def ancilla(self, prep_t: int, meas_t: int) -> int:
        q = self.next_q
        self.next_q += 1
        self.lifetime[q] = (prep_t, meas_t)
        return q

    def add(self, t: int, op: Op) -> None:
        self.steps[t].append(op)

    def finish(self, name: str) -> Schedule:
        for t, ops in enumerate(self.steps):
            busy = set()
            for op in ops:
                for q in op.qubits:
                    if q in busy:
                        raise ConstructionError(f"qubit {q} used twice in timestep {t}")
                    busy.add(q)
            for q in range(self.n_data):
                if q not in busy:
                    ops.append(Op(OpKind.IDLE, (q,)))
            for q, (a, b) in self.lifetime.items():
                if a < t < b and q not in busy:
                    ops.append(Op(OpKind.IDLE, (q,)))
        return Schedule(name, self.n_data, self.next_q,
                        tuple(tuple(ops) for ops in self.steps),
                        dict(self.ancilla_map), frozenset(self.octagon))

    def single_ancilla_check(self, cid: int, pauli: str, prep_t: int, meas_t: int,
                             cnots: Sequence[tuple[int, int]], octagon: bool = False) -> None:
        """``cnots`` lists (timestep, data qubit)."""
        a = self.ancilla(prep_t, meas_t)
        basis = "X" if pauli == "X" else "Z"
        self.add(prep_t, Op(OpKind.PREP, (a,), basis))
        for t, q in cnots:
            self.add(t, Op(OpKind.CNOT, (a, q) if pauli == "X" else (q, a)))
        self.add(meas_t, Op(OpKind.MEASURE, (a,), basis))
        self.ancilla_map[cid] = (a,)
        if octagon:
            self.octagon.add(a)

    def bell_check(self, cid: int, pauli: str, meas_t: int,
                   cnots: Sequence[tuple[int, int, int]]) -> None:
        """Octagon measured with a Bell pair; ``cnots`` lists (half, t, q)."""
        a1 = self.ancilla(0, meas_t)
        a2 = self.ancilla(0, meas_t)
        self.add(0, Op(OpKind.PREP, (a1,), "X"))
        self.add(0, Op(OpKind.PREP, (a2,), "Z"))
        self.add(1, Op(OpKind.CNOT, (a1, a2)))
        pair = (a1, a2)
        for half, t, q in cnots:
            a = pair[half]
            self.add(t, Op(OpKind.CNOT, (a, q) if pauli == "X" else (q, a)))
        basis = "X" if pauli == "X" else "Z"
        self.add(meas_t, Op(OpKind.MEASURE, (a1,), basis))
        self.add(meas_t, Op(OpKind.MEASURE, (a2,), basis))
        self.ancilla_map[cid] = pair
        self.octagon.update(pair)


def build_toric_schedule(spec: CodeSpec) -> Schedule:
    """Prep, four interleaved CNOT steps in N, W, E, S order, measure."""
    if spec.family is not Family.TORIC:
        raise InvalidParameter("toric schedule needs a Toric code spec")
    l = spec.l
    b = _Builder(spec, 6)
    order = ("N", "W", "E", "S")
    for cid, c in enumerate(spec.checks):
        i, j = c.coord
        if c.kind is CheckKind.TORIC_STAR:
            edges = star_edges(l, i, j)
            b.single_ancilla_check(cid, "X", 0, 5, [(1 + k, edges[d]) for k, d in enumerate(order)])
        else:
            edges = plaquette_edges(l, i, j)
            b.single_ancilla_check(cid, "Z", 0, 5, [(1 + k, edges[d]) for k, d in enumerate(order)])
    return b.finish("toric")


def _octagon_cnots(spec: CodeSpec, c, tmpl: dict, mode: str):
    l = spec.l
    i, j = c.coord
    if c.kind is CheckKind.OCTAGON_Z:
        edges, sides, var = plaquette_edges(l, i, j), _OCTZ_SIDES, "octZ"
    else:
        edges, sides, var = star_edges(l, i, j), _OCTX_SIDES, "octX"
    out = []
    for label, e in edges.items():
        for q in cluster_qubits(e, sides[label]):
            half, step = tmpl[var][(label, q % 4)]
            out.append((half, _time_of(mode, var, (half, step)), q))
    return sorted(out, key=lambda x: x[1])


def _square_cnots(c, tmpl: dict, mode: str, e: int):
    pauli = c.kind.pauli_type
    var = f"sq{pauli}{e % 2}"
    return sorted((_time_of(mode, var, tmpl[var][pos]), 4 * e + pos) for pos in range(4))


def _edge_of(spec: CodeSpec, c) -> int:
    i, j, o = c.coord
    return 2 * (j * spec.l + i) + o


def build_c4_schedule_8step(spec: CodeSpec, template: Optional[dict] = None) -> Schedule:
    """Two rows of four CNOT steps with single-qubit ancillas.

    t0 prep; t1-t4 square X and first octagon halves; t5 measure square X
    and prep square Z; t6-t9 square Z and second octagon halves; t10 measure.
    """
    if spec.family is not Family.C4_TORIC:
        raise InvalidParameter("8-step schedule needs a C4Toric code spec")
    tmpl = template or solve_templates("8step")
    b = _Builder(spec, 11)
    for cid, c in enumerate(spec.checks):
        if c.kind is CheckKind.SQUARE_X:
            b.single_ancilla_check(cid, "X", 0, 5, _square_cnots(c, tmpl, "8step", _edge_of(spec, c)))
        elif c.kind is CheckKind.SQUARE_Z:
            b.single_ancilla_check(cid, "Z", 5, 10, _square_cnots(c, tmpl, "8step", _edge_of(spec, c)))
        else:
            cn = [(t, q) for _, t, q in _octagon_cnots(spec, c, tmpl, "8step")]
            b.single_ancilla_check(cid, c.kind.pauli_type, 0, 10, cn, octagon=True)
    return b.finish("c4-8step")


def build_c4_schedule_4step(spec: CodeSpec, template: Optional[dict] = None) -> Schedule:
    """Bell-pair octagon ancillas and four CNOT steps touching every data qubit.

    t0 prep Bell halves; t1 Bell CNOT and square preps; t2-t5 data CNOTs;
    t6 measure everything.
    """
    if spec.family is not Family.C4_TORIC:
        raise InvalidParameter("4-step schedule needs a C4Toric code spec")
    tmpl = template or solve_templates("4step")
    b = _Builder(spec, 7)
    for cid, c in enumerate(spec.checks):
        if c.kind.is_square:
            b.single_ancilla_check(cid, c.kind.pauli_type, 1, 6,
                                   _square_cnots(c, tmpl, "4step", _edge_of(spec, c)))
        else:
            b.bell_check(cid, c.kind.pauli_type, 6, _octagon_cnots(spec, c, tmpl, "4step"))
    return b.finish("c4-4step")


SCHEDULE_NAMES = ("toric", "8step", "4step")


def build_schedule(spec: CodeSpec, name: str) -> Schedule:
    key = name.lower().replace("-", "").replace("_", "")
    if key in ("toric", "standard", "toric4"):
        return build_toric_schedule(spec)
    if key in ("8step", "c48step", "eightstep"):
        return build_c4_schedule_8step(spec)
    if key in ("4step", "c44step", "fourstep", "bell"):
        return build_c4_schedule_4step(spec)
    raise InvalidParameter(f"unknown schedule {name!r}")


# ------------------------------------------------------------------ simulation


def _apply_code(x: int, z: int, q: int, code: int) -> tuple[int, int]:
    if code & 1:
        x ^= 1 << q
    if code & 2:
        z ^= 1 << q
    return x, z


def run_round(schedule: Schedule, x: int, z: int,
              faults: dict[int, int] | None = None) -> tuple[int, int, dict[int, int]]:
    """Propagate a frame through one round.

    ``faults`` maps location index (see ``Schedule.locations``) to a fault
    code: 1 for prep/measure flips, 1..3 for idles, 1..15 for CNOTs.
    Returns the new frame and each measured ancilla's outcome bit.
    """
    faults = faults or {}
    outcomes: dict[int, int] = {}
    loc = 0
    for ops in schedule.timesteps:
        first = loc
        for op in ops:
            if op.kind is OpKind.PREP:
                a = op.qubits[0]
                x &= ~(1 << a)
                z &= ~(1 << a)
            elif op.kind is OpKind.CNOT:
                c, t = op.qubits
                if (x >> c) & 1:
                    x ^= 1 << t
                if (z >> t) & 1:
                    z ^= 1 << c
            elif op.kind is OpKind.MEASURE:
                a = op.qubits[0]
                outcomes[a] = (x >> a) & 1 if op.basis == "Z" else (z >> a) & 1
            loc += 1
        for k, op in enumerate(ops):
            code = faults.get(first + k, 0)
            if not code:
                continue
            if op.kind is OpKind.PREP:
                x, z = _apply_code(x, z, op.qubits[0], 1 if op.basis == "Z" else 2)
            elif op.kind is OpKind.MEASURE:
                outcomes[op.qubits[0]] ^= 1
            elif op.kind is OpKind.CNOT:
                x, z = _apply_code(x, z, op.qubits[0], code & 3)
                x, z = _apply_code(x, z, op.qubits[1], code >> 2)
            else:
                x, z = _apply_code(x, z, op.qubits[0], code)
    return x, z, outcomes


def _syndrome_from_outcomes(spec: CodeSpec, schedule: Schedule, outcomes: dict[int, int]) -> np.ndarray:
    s = np.zeros(len(spec.checks), dtype=np.uint8)
    for cid, anc in schedule.ancilla_map.items():
        v = 0
        for a in anc:
            v ^= outcomes[a]
        s[cid] = v
    return s


def ideal_syndrome(spec: CodeSpec, error: PauliOperator) -> np.ndarray:
    return np.array(spec.syndrome(error), dtype=np.uint8)


def _fault_code(loc: FaultLocation, f) -> int:
    if isinstance(f, bool):
        return int(f)
    if loc.kind is LocationKind.PREP:
        return int(not f.is_identity())
    if loc.kind is LocationKind.TWO_QUBIT_GATE:
        return (f.x & 1) | ((f.z & 1) << 1) | (((f.x >> 1) & 1) << 2) | (((f.z >> 1) & 1) << 3)
    return (f.x & 1) | ((f.z & 1) << 1)


def simulate_rounds(spec: CodeSpec, schedule: Schedule, params: Optional[NoiseParams],
                    rounds: int, rng: Optional[np.random.Generator] = None,
                    faults: Optional[dict[tuple[int, int], int]] = None) -> SyndromeRecord:
    """Noisy rounds followed by one ideal closing round, for a single trial.

    Faults are sampled at every location from ``params`` unless ``faults``
    is given, in which case exactly those ``(round, location) -> code``
    faults are injected.
    """
    if rounds < 1:
        raise InvalidParameter("rounds must be at least 1")
    locs = schedule.locations()
    x = z = 0
    data_mask = (1 << spec.n) - 1
    synd = np.zeros((rounds + 1, len(spec.checks)), dtype=np.uint8)
    for r in range(rounds):
        if faults is not None:
            fr = {loc: code for (rr, loc), code in faults.items() if rr == r and code}
        else:
            fr = {}
            for k, loc in enumerate(locs):
                code = _fault_code(loc, sample_fault(loc, params, rng))
                if code:
                    fr[k] = code
        x, z, outcomes = run_round(schedule, x, z, fr)
        synd[r] = _syndrome_from_outcomes(spec, schedule, outcomes)
    final = PauliOperator(spec.n, x & data_mask, z & data_mask)
    synd[rounds] = ideal_syndrome(spec, final)
    return SyndromeRecord(synd, final)


def record_from_syndromes(syndromes: np.ndarray, final: PauliOperator) -> SyndromeRecord:
    return SyndromeRecord(np.asarray(syndromes, dtype=np.uint8), final)


# ------------------------------------------------------------------ validation


@dataclass
class ValidationReport:
    failures: dict[str, list[str]] = field(default_factory=dict)
    n_fault_events: int = 0
    # location indices behind the fault_spread failures
    spread_locations: list[int] = field(default_factory=list)

    def fail(self, category: str, message: str) -> None:
        self.failures.setdefault(category, []).append(message)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.ok:
            return "all schedule checks pass"
        lines = []
        for cat, msgs in self.failures.items():
            lines.append(f"{cat}: {len(msgs)} failure(s), e.g. {msgs[0]}")
        return "\n".join(lines)


def _check_exclusivity(schedule: Schedule, rep: ValidationReport) -> None:
    for t, ops in enumerate(schedule.timesteps):
        seen: dict[int, Op] = {}
        for op in ops:
            for q in op.qubits:
                if q in seen:
                    rep.fail("exclusivity", f"t{t}: qubit {q} in '{seen[q]}' and '{op}'")
                seen[q] = op
        for q in range(schedule.n_data):
            if q not in seen:
                rep.fail("exclusivity", f"t{t}: data qubit {q} has no op (not even idle)")


def _heisenberg(spec: CodeSpec, schedule: Schedule, cid: int, rep: ValidationReport) -> None:
    # Back-propagate the measured ancilla observable to the start of the
    # round; it must reduce to the check on the data times stabilizers of
    # the prepared ancilla states.
    anc = schedule.ancilla_map[cid]
    n = schedule.n_qubits
    meas_t = None
    basis = None
    for t, ops in enumerate(schedule.timesteps):
        for op in ops:
            if op.kind is OpKind.MEASURE and op.qubits[0] in anc:
                meas_t, basis = t, op.basis
    if meas_t is None:
        rep.fail("determinism", f"check {cid}: ancillas never measured")
        return
    obs = PauliOperator.from_support(n, basis, anc)
    for t in range(meas_t, -1, -1):
        for op in schedule.timesteps[t]:
            if op.kind is OpKind.CNOT:
                obs = conjugate_by_cnot(obs, *op.qubits)
            elif op.kind is OpKind.PREP:
                a = op.qubits[0]
                bx, bz = (obs.x >> a) & 1, (obs.z >> a) & 1
                want = (1, 0) if op.basis == "X" else (0, 1)
                if (bx, bz) not in ((0, 0), want):
                    rep.fail("determinism", f"check {cid}: observable anticommutes with prep of {a} at t{t}")
                    return
                obs = PauliOperator(n, obs.x & ~(1 << a), obs.z & ~(1 << a))
            elif op.kind is OpKind.MEASURE and t < meas_t and op.qubits[0] in obs.support:
                rep.fail("determinism", f"check {cid}: observable touches ancilla measured at t{t}")
                return
    data_mask = (1 << spec.n) - 1
    if obs.x & ~data_mask or obs.z & ~data_mask:
        rep.fail("determinism", f"check {cid}: observable left on unprepared ancilla")
        return
    if PauliOperator(spec.n, obs.x, obs.z) != spec.checks[cid].op:
        rep.fail("reproduction", f"check {cid}: measures {PauliOperator(spec.n, obs.x, obs.z)!r}")


def _check_ordering(spec: CodeSpec, schedule: Schedule, rep: ValidationReport) -> None:
    meas_t: dict[int, int] = {}
    first_cnot: dict[int, int] = {}
    for t, ops in enumerate(schedule.timesteps):
        for op in ops:
            if op.kind is OpKind.MEASURE:
                meas_t[op.qubits[0]] = t
            if op.kind is OpKind.CNOT:
                for q in op.qubits:
                    first_cnot.setdefault(q, t)
    kinds = {cid: spec.checks[cid].kind for cid in schedule.ancilla_map}

    def when(kind):
        return [meas_t[a] for cid, k in kinds.items() if k is kind for a in schedule.ancilla_map[cid]]

    if schedule.name == "toric":
        if len(schedule.cnot_timesteps) != 4 or len(schedule.timesteps) != 6:
            rep.fail("ordering", "toric round must be prep + 4 CNOT steps + measure")
    elif schedule.name == "c4-8step":
        cn = schedule.cnot_timesteps
        if len(cn) != 8:
            rep.fail("ordering", f"expected 8 CNOT timesteps, found {len(cn)}")
        if max(when(CheckKind.SQUARE_X)) >= min(when(CheckKind.SQUARE_Z)):
            rep.fail("ordering", "square X checks must be measured before square Z checks")
        # square ancillas of the first row are read out before the second row starts
        sq_x_done = max(when(CheckKind.SQUARE_X))
        sq_z_ancillas = {a for cid, k in kinds.items() if k is CheckKind.SQUARE_Z
                         for a in schedule.ancilla_map[cid]}
        second_row = min(first_cnot[a] for a in sq_z_ancillas)
        if sq_x_done >= second_row:
            rep.fail("ordering", "first-row square ancillas measured after second-row CNOTs begin")
        if any(len(schedule.ancilla_map[cid]) != 1 for cid in kinds):
            rep.fail("ordering", "8-step schedule uses one ancilla per check")
    elif schedule.name == "c4-4step":
        data_steps = schedule.data_cnot_timesteps()
        if len(data_steps) != 4:
            rep.fail("ordering", f"expected 4 data CNOT timesteps, found {len(data_steps)}")
        if set(when(CheckKind.SQUARE_X)) != set(when(CheckKind.SQUARE_Z)) or len(set(when(CheckKind.SQUARE_X))) != 1:
            rep.fail("ordering", "square X and Z checks must be measured simultaneously")
        for cid, k in kinds.items():
            anc = schedule.ancilla_map[cid]
            if k.is_square:
                continue
            if len(anc) != 2:
                rep.fail("ordering", f"octagon {cid} needs a Bell pair")
                continue
            bell = [t for t, ops in enumerate(schedule.timesteps) for op in ops
                    if op.kind is OpKind.CNOT and set(op.qubits) == set(anc)]
            data_t = [t for t, ops in enumerate(schedule.timesteps) for op in ops
                      if op.kind is OpKind.CNOT and set(op.qubits) & set(anc)
                      and min(op.qubits) < schedule.n_data]
            if len(bell) != 1 or min(data_t) <= bell[0]:
                rep.fail("ordering", f"octagon {cid}: Bell pair not entangled before data CNOTs")
            for t in data_steps:
                count = sum(1 for op in schedule.timesteps[t] if op.kind is OpKind.CNOT
                            and set(op.qubits) & set(anc))
                if count != 2:
                    rep.fail("ordering", f"octagon {cid}: {count} data qubits at t{t}, want 2")
        # one ancilla per square check and two per octagon
        n_anc = schedule.n_qubits - schedule.n_data
        expected = 8 * spec.l * spec.l
        if n_anc != expected:
            rep.fail("ordering", f"{n_anc} ancillas, expected {expected}")


def _cluster_excess(spec: CodeSpec, mask: int, pauli: str) -> int:
    """Clusters whose restriction cannot be reduced to weight <= 1 by the
    square check and the gauge pair of the same Pauli type."""
    bad = 0
    for e in range(spec.n // 4):
        bits = (mask >> (4 * e)) & 0xF
        if not bits:
            continue
        o = e % 2
        side = ("bottom" if o == 0 else "left") if pauli == "X" else ("left" if o == 0 else "bottom")
        a, b = SIDES[side]
        g = (1 << a) | (1 << b)
        best = min(bin(bits ^ s).count("1") for s in (0, 0xF, g, g ^ 0xF))
        if best > 1:
            bad += 1
    return bad


def _spread_ok(spec: CodeSpec, err: PauliOperator) -> bool:
    candidates = [err]
    for c in spec.checks:
        if (c.op.x | c.op.z) & (err.x | err.z):
            candidates.append(err * c.op)
    if spec.family is Family.TORIC:
        return min(max(e.x.bit_count(), e.z.bit_count()) for e in candidates) <= 2
    for pauli in ("X", "Z"):
        scores = []
        for e in candidates:
            mask = e.x if pauli == "X" else e.z
            scores.append(_cluster_excess(spec, mask, pauli))
        if min(scores) > 0:
            return False
    return True


def fault_codes(loc: FaultLocation) -> range:
    if loc.kind in (LocationKind.PREP, LocationKind.MEASURE):
        return range(1, 2)
    if loc.kind is LocationKind.TWO_QUBIT_GATE:
        return range(1, 16)
    return range(1, 4)


def validate_schedule(spec: CodeSpec, schedule: Schedule, frames: int = 200,
                      seed: int = 0, fault_analysis: bool = True) -> ValidationReport:
    """Machine-check a schedule.

    Categories: ``exclusivity``; ``determinism`` and ``reproduction``
    (Heisenberg back-propagation of every measured observable, plus
    ``frames`` random data frames whose noiseless syndrome must equal the
    commutation syndrome); ``ordering`` (schedule-specific structure);
    ``fault_spread`` (every single fault leaves a data error that reduces,
    modulo one check and the gauge pairs, to at most one qubit per cluster
    and Pauli type; weight <= 2 for the toric code).
    """
    rep = ValidationReport()
    _check_exclusivity(schedule, rep)
    if set(schedule.ancilla_map) != set(range(len(spec.checks))):
        rep.fail("reproduction", "not every check has an ancilla")
        return rep
    for cid in range(len(spec.checks)):
        _heisenberg(spec, schedule, cid, rep)
    rng = np.random.default_rng(seed)
    data_mask = (1 << spec.n) - 1
    for _ in range(frames):
        xb = rng.integers(0, 2, spec.n)
        zb = rng.integers(0, 2, spec.n)
        frame = PauliOperator(spec.n, int("".join(map(str, xb[::-1])), 2), int("".join(map(str, zb[::-1])), 2))
        x, z, out = run_round(schedule, frame.x, frame.z)
        got = _syndrome_from_outcomes(spec, schedule, out)
        want = ideal_syndrome(spec, frame)
        if not np.array_equal(got, want):
            bad = np.nonzero(got != want)[0].tolist()
            rep.fail("reproduction", f"random frame: checks {bad[:5]} disagree")
            break
        if (x & data_mask, z & data_mask) != (frame.x, frame.z):
            rep.fail("reproduction", "noiseless round changed the data frame")
            break
    _check_ordering(spec, schedule, rep)
    if fault_analysis:
        locs = schedule.locations()
        for k, loc in enumerate(locs):
            for code in fault_codes(loc):
                rep.n_fault_events += 1
                x, z, _ = run_round(schedule, 0, 0, {k: code})
                err = PauliOperator(spec.n, x & data_mask, z & data_mask)
                if not _spread_ok(spec, err):
                    rep.spread_locations.append(k)
                    rep.fail("fault_spread", f"location {k} ({loc.kind.value} {loc.qubits} t{loc.timestep}) "
                                             f"code {code} leaves {err.weight}-qubit error")
    return rep
