import dataclasses

import numpy as np
import pytest

from c4toric.circuits import (
    OpKind,
    Schedule,
    build_c4_schedule_4step,
    build_c4_schedule_8step,
    build_schedule,
    build_toric_schedule,
    fault_codes,
    iter_templates,
    octagon_hook_count,
    run_round,
    simulate_rounds,
    solve_templates,
    template_violations,
    validate_schedule,
)
from c4toric.codes import CheckKind, build_code
from c4toric.errors import InvalidParameter
from c4toric.noise import LocationKind, NoiseParams


@pytest.fixture(scope="module")
def c4():
    return build_code("C4Toric", 2)


@pytest.fixture(scope="module")
def toric3():
    return build_code("Toric", 3)


def test_toric_schedule_shape(toric3):
    s = build_toric_schedule(toric3)
    assert len(s.timesteps) == 6
    assert s.cnot_timesteps == [1, 2, 3, 4]
    assert all(len(a) == 1 for a in s.ancilla_map.values())


def test_wrong_family_rejected(c4, toric3):
    with pytest.raises(InvalidParameter):
        build_toric_schedule(c4)
    with pytest.raises(InvalidParameter):
        build_c4_schedule_4step(toric3)
    with pytest.raises(InvalidParameter):
        build_c4_schedule_8step(toric3)
    with pytest.raises(InvalidParameter):
        build_schedule(c4, "nine-step")


@pytest.mark.parametrize("family,name,l", [("Toric", "toric", 2), ("Toric", "toric", 3),
                                           ("C4Toric", "4step", 2), ("C4Toric", "4step", 3)])
def test_validate_passes(family, name, l):
    spec = build_code(family, l)
    rep = validate_schedule(spec, build_schedule(spec, name))
    assert rep.ok, rep.summary()
    assert rep.n_fault_events > 0


def test_eight_step_structure(c4):
    s = build_c4_schedule_8step(c4)
    assert len(s.cnot_timesteps) == 8
    assert len(s.timesteps) == 11
    rep = validate_schedule(c4, s)
    assert set(rep.failures) <= {"fault_spread"}, rep.summary()
    sq_x = [s.ancilla_map[c][0] for c, ch in enumerate(c4.checks) if ch.kind is CheckKind.SQUARE_X]
    sq_z = [s.ancilla_map[c][0] for c, ch in enumerate(c4.checks) if ch.kind is CheckKind.SQUARE_Z]
    meas = {op.qubits[0]: t for t, ops in enumerate(s.timesteps) for op in ops if op.kind is OpKind.MEASURE}
    assert max(meas[a] for a in sq_x) < min(meas[a] for a in sq_z)
    # the one-step gap between the rows carries no CNOT
    gap = max(meas[a] for a in sq_x)
    assert gap not in s.cnot_timesteps and gap - 1 in s.cnot_timesteps and gap + 1 in s.cnot_timesteps


def test_eight_step_spread_failures_are_octagon_hooks(c4):
    # every data error wider than one qubit per cluster comes from an octagon
    # ancilla fault at a position octagon_hook_count flags
    s = build_c4_schedule_8step(c4)
    rep = validate_schedule(c4, s)
    octs = s.octagon_ancillas
    for msg in rep.failures.get("fault_spread", []):
        k = int(msg.split()[1])
        loc = s.locations()[k]
        assert set(loc.qubits) & octs, msg
    tmpl = solve_templates("8step")
    assert octagon_hook_count(tmpl["octZ"]) == octagon_hook_count(tmpl["octX"]) == 2


def test_four_step_structure(c4):
    s = build_c4_schedule_4step(c4)
    assert len(s.data_cnot_timesteps()) == 4
    assert s.n_qubits - s.n_data == 8 * c4.l ** 2
    for cid, ch in enumerate(c4.checks):
        anc = s.ancilla_map[cid]
        assert len(anc) == (1 if ch.kind.is_square else 2)
        assert s.combine_rule(cid) == ("single" if ch.kind.is_square else "product")


def test_noiseless_round_trivial(c4):
    for name in ("8step", "4step"):
        rec = simulate_rounds(c4, build_schedule(c4, name), NoiseParams(0.0), 3, np.random.default_rng(0))
        assert not rec.rounds.any()
        assert rec.defects == []
        assert rec.final_data_error.is_identity()


def test_stabilizer_frame_gives_trivial_syndrome(c4):
    # a product of checks is a stabilizer: octagon Bell-pair products read +1
    s = build_c4_schedule_4step(c4)
    frame = c4.checks[-1].op * c4.checks[-2].op * c4.checks[0].op
    _, _, out = run_round(s, frame.x, frame.z)
    for cid, anc in s.ancilla_map.items():
        assert sum(out[a] for a in anc) % 2 == 0


def _data_idle_loc(s: Schedule, q: int, t: int) -> int:
    for k, loc in enumerate(s.locations()):
        if loc.kind is LocationKind.IDLE and loc.qubits == (q,) and loc.timestep == t:
            return k
    raise LookupError


def test_single_data_x_between_rounds(c4):
    s = build_c4_schedule_4step(c4)
    last = len(s.timesteps) - 1
    k = _data_idle_loc(s, 5, last)
    rec = simulate_rounds(c4, s, None, 3, faults={(0, k): 1})
    flipped = [c for c in range(len(c4.checks)) if rec.rounds[1, c]]
    kinds = sorted(c4.checks[c].kind.value for c in flipped)
    assert kinds == ["OctagonZ", "SquareZ"]
    assert all(r == 1 for _, r in rec.defects) and len(rec.defects) == 2


def test_measurement_flip_gives_time_pair(c4):
    s = build_c4_schedule_8step(c4)
    k = next(i for i, loc in enumerate(s.locations()) if loc.kind is LocationKind.MEASURE)
    rec = simulate_rounds(c4, s, None, 3, faults={(1, k): 1})
    cid = next(c for c, anc in s.ancilla_map.items() if s.locations()[k].qubits[0] in anc)
    assert rec.defects == [(cid, 1), (cid, 2)]
    assert rec.final_data_error.is_identity()


def test_gauge_transparency(c4):
    s = build_c4_schedule_4step(c4)
    for g in c4.gauge_generators:
        faults = {}
        for q in g.support:
            code = (1 if (g.x >> q) & 1 else 0) | (2 if (g.z >> q) & 1 else 0)
            faults[(0, _data_idle_loc(s, q, 0))] = code
        rec = simulate_rounds(c4, s, None, 2, faults=faults)
        assert rec.defects == []


def test_defect_parity_and_linearity(c4):
    s = build_c4_schedule_4step(c4)
    locs = s.locations()
    rng = np.random.default_rng(3)
    for _ in range(20):
        keys = rng.choice(len(locs), size=6, replace=False)
        fa = {(int(rng.integers(2)), int(k)): int(rng.choice(list(fault_codes(locs[k])))) for k in keys[:3]}
        fb = {(int(rng.integers(2)), int(k)): int(rng.choice(list(fault_codes(locs[k])))) for k in keys[3:]}
        ra = simulate_rounds(c4, s, None, 2, faults=fa)
        rb = simulate_rounds(c4, s, None, 2, faults=fb)
        rab = simulate_rounds(c4, s, None, 2, faults={**fa, **fb})
        assert np.array_equal(rab.rounds, ra.rounds ^ rb.rounds)
        assert rab.final_data_error == ra.final_data_error * rb.final_data_error
        for t in "XZ":
            ids = set(c4.check_ids(t))
            assert sum(1 for c, _ in rab.defects if c in ids) % 2 == 0


def test_noisy_defect_parity(c4):
    s = build_c4_schedule_8step(c4)
    rng = np.random.default_rng(4)
    for _ in range(10):
        rec = simulate_rounds(c4, s, NoiseParams(0.02), 3, rng)
        for t in "XZ":
            ids = set(c4.check_ids(t))
            assert sum(1 for c, _ in rec.defects if c in ids) % 2 == 0


def _with_steps(s: Schedule, steps) -> Schedule:
    return dataclasses.replace(s, timesteps=tuple(tuple(ops) for ops in steps))


def test_injected_exclusivity_violation(c4):
    s = build_c4_schedule_4step(c4)
    steps = [list(ops) for ops in s.timesteps]
    t = s.data_cnot_timesteps()[0]
    cn = next(op for op in steps[t] if op.kind is OpKind.CNOT)
    other = next(op for op in steps[t + 1] if op.kind is OpKind.CNOT and not set(op.qubits) & set(cn.qubits))
    steps[t].append(other)
    rep = validate_schedule(c4, _with_steps(s, steps), fault_analysis=False)
    assert "exclusivity" in rep.failures


def test_injected_permutation_breaks_reproduction(toric3):
    # running the star CNOTs in reverse order against unchanged plaquettes
    # keeps every qubit busy once per step but spoils commutation
    s = build_toric_schedule(toric3)
    steps = [list(ops) for ops in s.timesteps]
    is_star = lambda op: op.kind is OpKind.CNOT and op.qubits[0] >= s.n_data
    new = [list(ops) for ops in steps]
    for i in range(4):
        new[1 + i] = [op for op in steps[1 + i] if not is_star(op)] + [op for op in steps[4 - i] if is_star(op)]
    rep = validate_schedule(toric3, _with_steps(s, new), fault_analysis=False)
    assert "determinism" in rep.failures
    assert "exclusivity" not in rep.failures


def test_dump_is_stable(c4):
    a = build_c4_schedule_4step(c4).dump()
    b = build_c4_schedule_4step(build_code("C4Toric", 2)).dump()
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "schedule c4-4step: 32 data, 32 ancillas, 7 timesteps"
    assert lines[1].startswith("t0: PrepX")


def test_pinned_templates_valid():
    for mode in ("4step", "8step"):
        assert template_violations(mode, solve_templates(mode)) == []


def test_template_violation_detected():
    tmpl = {k: dict(v) for k, v in solve_templates("4step").items()}
    a, b = list(tmpl["sqX0"])[:2]
    tmpl["sqX0"][a], tmpl["sqX0"][b] = tmpl["sqX0"][b], tmpl["sqX0"][a]
    tmpl["sqX0"][a] = tmpl["sqX0"][b]
    assert template_violations("4step", tmpl)


def test_hook_count_examples():
    roles = [("S", 2), ("W", 1), ("E", 2), ("N", 1), ("S", 3), ("W", 3), ("E", 0), ("N", 0)]
    one_per_cluster = {r: (k // 4, k % 4) for k, r in enumerate(roles)}
    assert octagon_hook_count(one_per_cluster) == 0
    sides = [("S", 2), ("S", 3), ("N", 0), ("N", 1), ("W", 1), ("W", 3), ("E", 0), ("E", 2)]
    by_side = {r: (k // 4, k % 4) for k, r in enumerate(sides)}
    assert octagon_hook_count(by_side) == 5


def test_four_step_templates_hook_free():
    first = next(iter_templates("4step"))
    assert octagon_hook_count(first["octZ"]) == octagon_hook_count(first["octX"]) == 0


@pytest.mark.slow
def test_eight_step_needs_two_hook_positions():
    # no valid 8-step template keeps every octagon fault within one qubit per
    # cluster side at fewer than two positions per octagon
    assert next(iter_templates("8step", max_hooks=1), None) is None
