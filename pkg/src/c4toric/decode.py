"""Decoding syndrome records and judging logical failure.

Two decoders solve the same problem.  ``decode_record`` is the reference:
it builds the complete defect graph with the closed-form space-time metric
and runs the package's own blossom matcher.  ``BatchDecoder`` runs
PyMatching on the explicit space-time defect graph (unit-weight spatial
edges per data qubit, ``time_weight`` edges between rounds) and decodes
thousands of shots per call; campaigns use it.  The two are compared on
matching weight in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import pymatching

from .batch import BatchRecord, check_matrix
from .circuits import Schedule, SyndromeRecord, fault_codes, simulate_rounds
from .codes import CodeSpec
from .errors import ContractViolation
from .matching import (
    DefectNode,
    MatchingProblem,
    defect_graph,
    defect_node,
    mwpm,
    pairing_to_correction,
    spacetime_distance,
)
from .pauli import PauliOperator, commutes

__all__ = [
    "LogicalOutcome",
    "decode_record",
    "judge_failure",
    "record_failure",
    "single_fault_sweep",
    "BatchDecoder",
    "judge_batch",
]

_LOGICAL_ORDER = ("X1", "X2", "Z1", "Z2")


@dataclass(frozen=True)
class LogicalOutcome:
    """``x_flips[i]``: the Z part of the residual anticommutes with X̄ᵢ₊₁;
    ``z_flips[i]``: the X part anticommutes with Z̄ᵢ₊₁."""

    x_flips: tuple[bool, bool]
    z_flips: tuple[bool, bool]

    @property
    def failed(self) -> bool:
        return any(self.x_flips) or any(self.z_flips)


def _defects_by_type(spec: CodeSpec, record: SyndromeRecord) -> dict[str, list[DefectNode]]:
    out: dict[str, list[DefectNode]] = {"X": [], "Z": []}
    for cid, r in record.defects:
        node = defect_node(spec, cid, r)
        out[spec.checks[cid].kind.pauli_type].append(node)
    return out


def decode_record(spec: CodeSpec, record: SyndromeRecord, time_weight: int = 1) -> PauliOperator:
    """Minimum-weight matching correction for both sublattices."""
    correction = PauliOperator.identity(spec.n)
    for nodes in _defects_by_type(spec, record).values():
        problem = MatchingProblem(nodes, lambda a, b: spacetime_distance(spec, a, b, time_weight))
        correction = correction * pairing_to_correction(spec, mwpm(problem))
    return correction


def judge_failure(spec: CodeSpec, residual: PauliOperator) -> LogicalOutcome:
    """Logical flags of a syndrome-free residual error."""
    synd = spec.syndrome(residual)
    if any(synd):
        bad = [i for i, s in enumerate(synd) if s]
        raise ContractViolation(f"residual has nontrivial syndrome on checks {bad[:8]}")
    lg = spec.logicals
    x_flips = tuple(not commutes(PauliOperator(spec.n, 0, residual.z), lg[k]) for k in ("X1", "X2"))
    z_flips = tuple(not commutes(PauliOperator(spec.n, residual.x, 0), lg[k]) for k in ("Z1", "Z2"))
    return LogicalOutcome(x_flips, z_flips)


def record_failure(spec: CodeSpec, record: SyndromeRecord, time_weight: int = 1) -> LogicalOutcome:
    correction = decode_record(spec, record, time_weight)
    return judge_failure(spec, correction * record.final_data_error)


@dataclass
class SweepResult:
    events: int
    failures: list[tuple[int, int, int, str]]

    @property
    def ok(self) -> bool:
        return not self.failures


def single_fault_sweep(spec: CodeSpec, schedule: Schedule, rounds: int = 2,
                       fault_round: int = 0, time_weight: int = 1) -> SweepResult:
    """Inject every single fault at every location of one round and decode.

    Each failure is reported as (round, location, code, description).
    """
    locs = schedule.locations()
    failures = []
    events = 0
    for k, loc in enumerate(locs):
        for code in fault_codes(loc):
            events += 1
            rec = simulate_rounds(spec, schedule, None, rounds, faults={(fault_round, k): code})
            if record_failure(spec, rec, time_weight).failed:
                failures.append((fault_round, k, code, f"{loc.kind.value} {loc.qubits} t{loc.timestep}"))
    return SweepResult(events, failures)


# ------------------------------------------------------------------- batch


class BatchDecoder:
    """PyMatching on the space-time defect graph of each sublattice.

    ``layers`` is the number of syndrome rounds in the records to be decoded
    (noisy rounds plus the ideal closing round).  Fault ids are data qubits,
    so a decoded prediction is directly the correction's qubit mask.
    """

    def __init__(self, spec: CodeSpec, layers: int, time_weight: float = 1.0):
        self.spec = spec
        self.layers = layers
        self.matchers: dict[str, pymatching.Matching] = {}
        self.check_ids: dict[str, np.ndarray] = {}
        for t in ("Z", "X"):
            g = defect_graph(spec, t)
            m = len(g.check_ids)
            mt = pymatching.Matching()
            for r in range(layers):
                for u, v, q in g.edges:
                    # parallel edges differ by a gauge pair; keep the first
                    mt.add_edge(r * m + u, r * m + v, fault_ids={q}, weight=1.0,
                                merge_strategy="smallest-weight")
                if r + 1 < layers:
                    for u in range(m):
                        mt.add_edge(r * m + u, (r + 1) * m + u, weight=time_weight)
            self.matchers[t] = mt
            self.check_ids[t] = np.array(g.check_ids, dtype=np.int64)

    def decode(self, record: BatchRecord) -> tuple[np.ndarray, np.ndarray]:
        """(shots, n) X and Z correction masks."""
        if record.syndromes.shape[0] != self.layers:
            raise ValueError(f"decoder built for {self.layers} rounds, record has "
                             f"{record.syndromes.shape[0]}")
        det = record.detectors()
        out = {}
        for t, mt in self.matchers.items():
            d = det[:, self.check_ids[t], :]
            flat = d.reshape(-1, d.shape[2]).T
            out[t] = np.asarray(mt.decode_batch(np.ascontiguousarray(flat)), dtype=np.uint8)
        n = self.spec.n
        cx, cz = out["Z"][:, :n], out["X"][:, :n]
        return _pad(cx, n), _pad(cz, n)

    def matching_weights(self, record: BatchRecord) -> np.ndarray:
        det = record.detectors()
        total = np.zeros(record.shots)
        for t, mt in self.matchers.items():
            d = det[:, self.check_ids[t], :]
            flat = np.ascontiguousarray(d.reshape(-1, d.shape[2]).T)
            _, w = mt.decode_batch(flat, return_weights=True)
            total += w
        return total


def _pad(a: np.ndarray, n: int) -> np.ndarray:
    if a.shape[1] == n:
        return a
    out = np.zeros((a.shape[0], n), dtype=np.uint8)
    out[:, :a.shape[1]] = a
    return out


def _logical_matrix(spec: CodeSpec, names: Iterable[str], part: str) -> np.ndarray:
    rows = []
    for nm in names:
        op = spec.logicals[nm]
        bits = op.x if part == "x" else op.z
        rows.append([(bits >> q) & 1 for q in range(spec.n)])
    return np.array(rows, dtype=np.int32)


def judge_batch(spec: CodeSpec, rx: np.ndarray, rz: np.ndarray) -> np.ndarray:
    """Logical flags (shots, 4) in order X̄₁ X̄₂ Z̄₁ Z̄₂ for residual masks.

    Raises ``ContractViolation`` if any residual has a nontrivial syndrome.
    """
    h = check_matrix(spec)
    zmask = np.array([c.kind.pauli_type == "Z" for c in spec.checks])
    sx = (h[zmask] @ rx.T.astype(np.int32)) & 1
    sz = (h[~zmask] @ rz.T.astype(np.int32)) & 1
    if sx.any() or sz.any():
        shots = np.nonzero(sx.any(axis=0) | sz.any(axis=0))[0]
        raise ContractViolation(f"{len(shots)} residual(s) with nontrivial syndrome, e.g. shot {shots[0]}")
    # X̄ logicals are X-type: they see the Z part; Z̄ logicals see the X part
    lx = _logical_matrix(spec, ("X1", "X2"), "x")
    lz = _logical_matrix(spec, ("Z1", "Z2"), "z")
    fx = (rz.astype(np.int32) @ lx.T) & 1
    fz = (rx.astype(np.int32) @ lz.T) & 1
    return np.concatenate([fx, fz], axis=1).astype(bool)
