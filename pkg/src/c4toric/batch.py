"""Vectorised many-shot samplers for the three noise scenarios.

Shots are bit-packed 64 to a ``uint64`` word, so one numpy operation moves a
qubit's frame bit for every shot at once.  Faults are drawn sparsely (see
``noise.sample_sparse``) and XOR-ed in after the timestep they belong to,
exactly as ``circuits.run_round`` does for a single frame.

Every sampler returns a ``BatchRecord``: per-round syndromes for each check
plus the final data frame, unpacked to one byte per bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .circuits import OpKind, Schedule
from .codes import CodeSpec
from .errors import InvalidParameter
from .noise import LocationKind, NoiseParams, draw_codes, location_rate, sample_data_error_bits, sample_sparse

__all__ = [
    "BatchRecord",
    "check_matrix",
    "CompiledCircuit",
    "sample_data_only",
    "sample_data_syndrome",
    "sample_circuit",
]


@dataclass
class BatchRecord:
    """``syndromes[r, c, s]`` is check ``c`` at round ``r`` of shot ``s``;
    the last round is ideal.  ``final_x`` and ``final_z`` are (shots, n)."""

    syndromes: np.ndarray
    final_x: np.ndarray
    final_z: np.ndarray

    @property
    def shots(self) -> int:
        return self.final_x.shape[0]

    def detectors(self) -> np.ndarray:
        """XOR of consecutive rounds, round -1 all-trivial: (rounds, checks, shots)."""
        d = self.syndromes.copy()
        d[1:] ^= self.syndromes[:-1]
        return d


def check_matrix(spec: CodeSpec) -> sp.csr_matrix:
    """Sparse (checks x n) support matrix; a check's row is its Pauli support."""
    rows, cols = [], []
    for cid, c in enumerate(spec.checks):
        for q in c.op.support:
            rows.append(cid)
            cols.append(q)
    data = np.ones(len(rows), dtype=np.int32)
    return sp.csr_matrix((data, (rows, cols)), shape=(len(spec.checks), spec.n))


def _syndrome_of(spec: CodeSpec, ex: np.ndarray, ez: np.ndarray) -> np.ndarray:
    """(checks, shots) syndrome of dense (shots, n) X and Z error masks."""
    h = check_matrix(spec)
    zmask = np.array([c.kind.pauli_type == "Z" for c in spec.checks])
    # Z checks see X errors, X checks see Z errors
    sx = (h @ ex.T.astype(np.int32)) & 1
    sz = (h @ ez.T.astype(np.int32)) & 1
    return np.where(zmask[:, None], sx, sz).astype(np.uint8)


def sample_data_only(spec: CodeSpec, p: float, shots: int,
                     rng: np.random.Generator) -> BatchRecord:
    """Independent X and Z flips at rate ``p`` and one perfect syndrome round."""
    ex, ez = sample_data_error_bits(spec.n, shots, p, rng)
    synd = _syndrome_of(spec, ex, ez)[None]
    return BatchRecord(synd, ex, ez)


def sample_data_syndrome(spec: CodeSpec, p: float, q: float, rounds: int, shots: int,
                         rng: np.random.Generator) -> BatchRecord:
    """``rounds`` noisy rounds of fresh data flips (rate ``p``) with syndrome
    bit flips (rate ``q``), then one perfect round."""
    if rounds < 1:
        raise InvalidParameter("rounds must be at least 1")
    m = len(spec.checks)
    ex = np.zeros((shots, spec.n), dtype=np.uint8)
    ez = np.zeros((shots, spec.n), dtype=np.uint8)
    synd = np.zeros((rounds + 1, m, shots), dtype=np.uint8)
    for r in range(rounds):
        dx, dz = sample_data_error_bits(spec.n, shots, p, rng)
        ex ^= dx
        ez ^= dz
        synd[r] = _syndrome_of(spec, ex, ez)
        loc, shot = sample_sparse(m, shots, q, rng)
        synd[r, loc, shot] ^= 1
    synd[rounds] = _syndrome_of(spec, ex, ez)
    return BatchRecord(synd, ex, ez)


# ------------------------------------------------------------ circuit level


def _unpack(words: np.ndarray, shots: int) -> np.ndarray:
    """(rows, W) uint64 -> (rows, shots) uint8, shot s = bit s % 64 of word s // 64."""
    b = np.unpackbits(np.ascontiguousarray(words).view(np.uint8), axis=1, bitorder="little")
    return b[:, :shots]


class CompiledCircuit:
    """A schedule flattened into per-timestep index arrays for batch runs."""

    def __init__(self, spec: CodeSpec, schedule: Schedule):
        self.spec = spec
        self.schedule = schedule
        self.n_qubits = schedule.n_qubits
        locs = schedule.locations()
        self.locations = locs
        n_loc = len(locs)
        self.loc_t = np.array([loc.timestep for loc in locs], dtype=np.int64)
        self.loc_q0 = np.array([loc.qubits[0] for loc in locs], dtype=np.int64)
        self.loc_q1 = np.array([loc.qubits[1] if len(loc.qubits) > 1 else -1 for loc in locs],
                               dtype=np.int64)
        self.loc_kind = [loc.kind for loc in locs]
        self.steps = []
        meas_slot = {}
        self.loc_meas = np.full(n_loc, -1, dtype=np.int64)
        self.loc_prep_code = np.zeros(n_loc, dtype=np.int64)
        k = 0
        for t, ops in enumerate(schedule.timesteps):
            prep, ctl, tgt, mz, mx, mz_slot, mx_slot = [], [], [], [], [], [], []
            for op in ops:
                if op.kind is OpKind.PREP:
                    prep.append(op.qubits[0])
                    self.loc_prep_code[k] = 1 if op.basis == "Z" else 2
                elif op.kind is OpKind.CNOT:
                    ctl.append(op.qubits[0])
                    tgt.append(op.qubits[1])
                elif op.kind is OpKind.MEASURE:
                    slot = len(meas_slot)
                    meas_slot[op.qubits[0]] = slot
                    self.loc_meas[k] = slot
                    if op.basis == "Z":
                        mz.append(op.qubits[0])
                        mz_slot.append(slot)
                    else:
                        mx.append(op.qubits[0])
                        mx_slot.append(slot)
                k += 1
            arr = lambda v: np.array(v, dtype=np.int64)
            self.steps.append((arr(prep), arr(ctl), arr(tgt), arr(mz), arr(mz_slot), arr(mx), arr(mx_slot)))
        self.n_meas = len(meas_slot)
        # syndrome bit of a check = XOR of its ancillas' outcome slots
        self.check_slots = [[meas_slot[a] for a in schedule.ancilla_map[cid]]
                            for cid in range(len(spec.checks))]
        kinds = np.array([kd.value for kd in self.loc_kind])
        self.is_cnot = kinds == LocationKind.TWO_QUBIT_GATE.value
        self.is_meas = kinds == LocationKind.MEASURE.value
        self.is_prep = kinds == LocationKind.PREP.value
        self.octagon_cnot = np.array([loc.touches_octagon_ancilla for loc in locs]) & self.is_cnot

    def _rate_classes(self, params: NoiseParams) -> list[tuple[np.ndarray, float]]:
        plain = np.nonzero(~self.octagon_cnot)[0]
        out = [(plain, params.p)]
        octs = np.nonzero(self.octagon_cnot)[0]
        if len(octs):
            out.append((octs, location_rate(self.locations[int(octs[0])], params)))
        return out

    def sample_faults(self, params: NoiseParams, shots: int,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """One round of faults as (location, shot, code) arrays."""
        locs, shot_l, codes = [], [], []
        for members, rate in self._rate_classes(params):
            li, si = sample_sparse(len(members), shots, rate, rng)
            li = members[li]
            code = np.ones(len(li), dtype=np.int64)
            two = self.is_cnot[li]
            one = ~two & ~self.is_meas[li] & ~self.is_prep[li]
            code[two] = draw_codes(LocationKind.TWO_QUBIT_GATE, int(two.sum()), rng)
            code[one] = draw_codes(LocationKind.IDLE, int(one.sum()), rng)
            locs.append(li)
            shot_l.append(si)
            codes.append(code)
        return np.concatenate(locs), np.concatenate(shot_l), np.concatenate(codes)

    def _effects(self, loc: np.ndarray, shot: np.ndarray, code: np.ndarray):
        """Split faults into Pauli hits (t, qubit, shot, code2) and outcome flips (t, slot, shot)."""
        meas = self.is_meas[loc]
        prep = self.is_prep[loc]
        two = self.is_cnot[loc]
        pc = np.where(prep, self.loc_prep_code[loc], code)
        first = np.where(two, code & 3, pc)
        t_all = self.loc_t[loc]
        keep = ~meas & (first != 0)
        hits_t = [t_all[keep]]
        hits_q = [self.loc_q0[loc][keep]]
        hits_s = [shot[keep]]
        hits_c = [first[keep]]
        second = (code >> 2) & 3
        k2 = two & (second != 0)
        hits_t.append(t_all[k2])
        hits_q.append(self.loc_q1[loc][k2])
        hits_s.append(shot[k2])
        hits_c.append(second[k2])
        hits = tuple(np.concatenate(v) for v in (hits_t, hits_q, hits_s, hits_c))
        flips = (t_all[meas], self.loc_meas[loc][meas], shot[meas])
        return hits, flips

    def run(self, params: Optional[NoiseParams], rounds: int, shots: int,
            rng: Optional[np.random.Generator] = None,
            faults: Optional[list[tuple[int, int, int, int]]] = None) -> BatchRecord:
        """Noisy rounds plus an ideal closing round.

        With ``faults`` given as (round, location, shot, code) tuples, exactly
        those faults are injected and nothing is sampled.
        """
        if rounds < 1:
            raise InvalidParameter("rounds must be at least 1")
        spec = self.spec
        w = (shots + 63) // 64
        x = np.zeros((self.n_qubits, w), dtype=np.uint64)
        z = np.zeros((self.n_qubits, w), dtype=np.uint64)
        m = len(spec.checks)
        synd = np.zeros((rounds + 1, m, shots), dtype=np.uint8)
        if faults is not None:
            fa = np.array(faults, dtype=np.int64).reshape(-1, 4)
        for r in range(rounds):
            if faults is not None:
                sel = fa[fa[:, 0] == r]
                loc, shot, code = sel[:, 1], sel[:, 2], sel[:, 3]
            else:
                loc, shot, code = self.sample_faults(params, shots, rng)
            hits, flips = self._effects(loc, shot, code)
            out = self._run_round(x, z, w, hits, flips)
            bits = _unpack(out, shots)
            for cid, slots in enumerate(self.check_slots):
                row = bits[slots[0]].copy()
                for s in slots[1:]:
                    row ^= bits[s]
                synd[r, cid] = row
        fx = _unpack(x[:spec.n], shots).T.copy()
        fz = _unpack(z[:spec.n], shots).T.copy()
        synd[rounds] = _syndrome_of(spec, fx, fz)
        return BatchRecord(synd, fx, fz)

    def _run_round(self, x, z, w, hits, flips) -> np.ndarray:
        ht, hq, hs, hc = hits
        order = np.argsort(ht, kind="stable")
        ht, hq, hs, hc = ht[order], hq[order], hs[order], hc[order]
        bounds = np.searchsorted(ht, np.arange(len(self.steps) + 1))
        word = hq * w + (hs >> 6)
        bit = np.left_shift(np.uint64(1), (hs & 63).astype(np.uint64))
        xf = x.reshape(-1)
        zf = z.reshape(-1)
        out = np.zeros((self.n_meas, w), dtype=np.uint64)
        for t, (prep, ctl, tgt, mz, mz_slot, mx, mx_slot) in enumerate(self.steps):
            if len(prep):
                x[prep] = 0
                z[prep] = 0
            if len(ctl):
                x[tgt] ^= x[ctl]
                z[ctl] ^= z[tgt]
            if len(mz):
                out[mz_slot] = x[mz]
            if len(mx):
                out[mx_slot] = z[mx]
            a, b = bounds[t], bounds[t + 1]
            if a < b:
                c = hc[a:b]
                sx = (c & 1) == 1
                sz = (c & 2) == 2
                np.bitwise_xor.at(xf, word[a:b][sx], bit[a:b][sx])
                np.bitwise_xor.at(zf, word[a:b][sz], bit[a:b][sz])
        ft, fslot, fshot = flips
        if len(fslot):
            of = out.reshape(-1)
            np.bitwise_xor.at(of, fslot * w + (fshot >> 6),
                              np.left_shift(np.uint64(1), (fshot & 63).astype(np.uint64)))
        return out


_COMPILED: dict[tuple, CompiledCircuit] = {}


def compiled(spec: CodeSpec, schedule: Schedule) -> CompiledCircuit:
    key = (spec.family, spec.l, schedule.name)
    cc = _COMPILED.get(key)
    if cc is None or cc.schedule is not schedule or cc.spec is not spec:
        cc = CompiledCircuit(spec, schedule)
        _COMPILED[key] = cc
    return cc


def sample_circuit(spec: CodeSpec, schedule: Schedule, params: NoiseParams, rounds: int,
                   shots: int, rng: np.random.Generator) -> BatchRecord:
    return compiled(spec, schedule).run(params, rounds, shots, rng)
