import numpy as np
import pytest

from c4toric.batch import CompiledCircuit, sample_circuit, sample_data_syndrome
from c4toric.circuits import build_schedule, fault_codes, ideal_syndrome, record_from_syndromes, simulate_rounds
from c4toric.codes import build_code
from c4toric.decode import (
    BatchDecoder,
    decode_record,
    judge_batch,
    judge_failure,
    record_failure,
    single_fault_sweep,
)
from c4toric.errors import ContractViolation
from c4toric.matching import MatchingProblem, defect_node, matching_weight, mwpm, spacetime_distance
from c4toric.noise import LocationKind, NoiseParams
from c4toric.pauli import PauliOperator


def _record(spec, err):
    return record_from_syndromes(np.array([ideal_syndrome(spec, err)]), err)


def _vec(op: PauliOperator) -> int:
    return op.x | (op.z << op.n)


def _in_span(gens: list[int], v: int) -> bool:
    # GF(2) elimination on int bit-vectors
    basis: dict[int, int] = {}
    for g in gens:
        while g:
            top = g.bit_length() - 1
            if top not in basis:
                basis[top] = g
                break
            g ^= basis[top]
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return False
        v ^= basis[top]
    return True


@pytest.fixture(scope="module")
def c4():
    return build_code("C4Toric", 2)


def test_no_defects_no_correction(c4):
    rec = _record(c4, PauliOperator.identity(c4.n))
    assert decode_record(c4, rec).is_identity()


@pytest.mark.parametrize("family,l", [("Toric", 3), ("C4Toric", 2), ("C4Toric", 3)])
def test_every_single_qubit_error_corrected(family, l):
    spec = build_code(family, l)
    for q in range(spec.n):
        for x, z in ((1, 0), (0, 1), (1, 1)):
            err = PauliOperator(spec.n, x << q, z << q)
            assert not record_failure(spec, _record(spec, err)).failed, (q, x, z)


def test_single_x_fault_corrected_to_equivalent(c4):
    # the correction may differ from the error only by a gauge/stabilizer
    err = PauliOperator(c4.n, 1 << 9, 0)
    corr = decode_record(c4, _record(c4, err))
    gens = [_vec(c.op) for c in c4.checks] + [_vec(g) for g in c4.gauge_generators]
    assert _in_span(gens, _vec(corr * err))


def test_measurement_flip_needs_no_correction(c4):
    s = build_schedule(c4, "4step")
    k = next(i for i, loc in enumerate(s.locations()) if loc.kind is LocationKind.MEASURE)
    rec = simulate_rounds(c4, s, None, 2, faults={(0, k): 1})
    assert len(rec.defects) == 2
    assert decode_record(c4, rec).is_identity()


def test_judge_examples(c4):
    lg = c4.logicals
    assert not judge_failure(c4, PauliOperator.identity(c4.n)).failed
    assert not judge_failure(c4, c4.checks[0].op * c4.checks[5].op).failed
    out = judge_failure(c4, lg["X1"])
    assert out.z_flips == (True, False) and out.x_flips == (False, False)
    out = judge_failure(c4, lg["Z2"] * lg["X2"])
    assert out.x_flips == (False, True) and out.z_flips == (False, True)
    with pytest.raises(ContractViolation):
        judge_failure(c4, PauliOperator(c4.n, 1, 0))


def test_judge_gauge_invariant(c4):
    rng = np.random.default_rng(0)
    lg = c4.logicals
    for _ in range(50):
        base = PauliOperator.identity(c4.n)
        for name in lg:
            if rng.integers(2):
                base = base * lg[name]
        out = judge_failure(c4, base)
        for g in c4.gauge_generators:
            assert judge_failure(c4, base * g) == out


@pytest.mark.parametrize("family", ["Toric", "C4Toric"])
def test_logical_flags_match_homology(family):
    # a syndrome-free residual is trivial exactly when it lies in the span of
    # checks and gauge generators; flagged logicals account for the rest
    spec = build_code(family, 2)
    gens = [_vec(c.op) for c in spec.checks] + [_vec(g) for g in spec.gauge_generators]
    lg = spec.logicals
    rng = np.random.default_rng(1)
    for _ in range(1000):
        r = PauliOperator.identity(spec.n)
        for v in gens:
            if rng.integers(2):
                r = r * PauliOperator(spec.n, v & ((1 << spec.n) - 1), v >> spec.n)
        picked = {name: bool(rng.integers(2)) for name in lg}
        for name, on in picked.items():
            if on:
                r = r * lg[name]
        out = judge_failure(spec, r)
        assert out.z_flips == (picked["X1"], picked["X2"])
        assert out.x_flips == (picked["Z1"], picked["Z2"])
        assert out.failed == (not _in_span(gens, _vec(r)))


def test_decoded_residuals_homology(c4):
    gens = [_vec(c.op) for c in c4.checks] + [_vec(g) for g in c4.gauge_generators]
    rng = np.random.default_rng(2)
    for _ in range(300):
        x = int(rng.integers(0, 2, c4.n) @ (1 << np.arange(c4.n, dtype=object)))
        z = int(rng.integers(0, 2, c4.n) @ (1 << np.arange(c4.n, dtype=object)))
        err = PauliOperator(c4.n, x, z)
        res = decode_record(c4, _record(c4, err)) * err
        assert judge_failure(c4, res).failed == (not _in_span(gens, _vec(res)))


@pytest.mark.parametrize("family,l,tw", [("Toric", 3, 1), ("C4Toric", 3, 1), ("C4Toric", 2, 2)])
def test_pymatching_weight_agrees_with_blossom(family, l, tw):
    # two routes to the same optimum: explicit graph + PyMatching, closed-form
    # metric + own blossom
    spec = build_code(family, l)
    rounds = 3
    rec = sample_data_syndrome(spec, 0.03, 0.03, rounds, 60, np.random.default_rng(3))
    dec = BatchDecoder(spec, rounds + 1, tw)
    pm = dec.matching_weights(rec)
    for s in range(rec.shots):
        total = 0
        det = rec.detectors()[:, :, s]
        for t in "XZ":
            nodes = [defect_node(spec, c, r) for r, c in zip(*np.nonzero(det))
                     if spec.checks[c].kind.pauli_type == t]
            prob = MatchingProblem(nodes, lambda a, b: spacetime_distance(spec, a, b, tw))
            total += matching_weight(prob, mwpm(prob))
        assert pm[s] == pytest.approx(total), s


def test_batch_decoder_clears_syndrome():
    spec = build_code("C4Toric", 3)
    sched = build_schedule(spec, "4step")
    rec = sample_circuit(spec, sched, NoiseParams(0.005), 3, 500, np.random.default_rng(4))
    cx, cz = BatchDecoder(spec, 4).decode(rec)
    flags = judge_batch(spec, cx ^ rec.final_x, cz ^ rec.final_z)
    assert flags.shape == (500, 4)
    with pytest.raises(ValueError):
        BatchDecoder(spec, 2).decode(rec)


def test_judge_batch_rejects_syndrome():
    spec = build_code("Toric", 3)
    rx = np.zeros((2, spec.n), dtype=np.uint8)
    rz = np.zeros((2, spec.n), dtype=np.uint8)
    rx[1, 0] = 1
    with pytest.raises(ContractViolation):
        judge_batch(spec, rx, rz)


def test_zero_noise_never_fails():
    spec = build_code("C4Toric", 3)
    sched = build_schedule(spec, "8step")
    rec = sample_circuit(spec, sched, NoiseParams(0.0), 2, 1000, np.random.default_rng(5))
    cx, cz = BatchDecoder(spec, 3).decode(rec)
    assert not judge_batch(spec, cx ^ rec.final_x, cz ^ rec.final_z).any()


def test_reference_single_fault_sweep_toric():
    spec = build_code("Toric", 3)
    res = single_fault_sweep(spec, build_schedule(spec, "toric"))
    assert res.ok and res.events > 0


@pytest.mark.parametrize("name", ["toric", "4step", "8step"])
def test_batch_single_fault_sweep_l3(name):
    # every single circuit fault is corrected once the code distance allows it
    spec = build_code("Toric" if name == "toric" else "C4Toric", 3)
    sched = build_schedule(spec, name)
    faults = [(0, k, 0, code) for k, loc in enumerate(sched.locations()) for code in fault_codes(loc)]
    faults = [(r, k, s, c) for s, (r, k, _, c) in enumerate(faults)]
    rec = CompiledCircuit(spec, sched).run(None, 2, len(faults), faults=faults)
    cx, cz = BatchDecoder(spec, 3).decode(rec)
    flags = judge_batch(spec, cx ^ rec.final_x, cz ^ rec.final_z)
    assert not flags.any(), np.nonzero(flags.any(axis=1))[0][:5]
