import json

import pytest

from c4toric.codes import (
    CheckKind,
    CodeSpec,
    Family,
    build_c4_toric,
    build_code,
    build_toric,
    distance_witness,
    min_logical_weight,
    verify_code,
)
from c4toric.errors import BudgetExceeded, InvalidParameter
from c4toric.pauli import PauliOperator, commutes, gf2_rank


@pytest.mark.parametrize("l", [2, 3, 4])
@pytest.mark.parametrize("family", ["Toric", "C4Toric"])
def test_verify_code_clean(family, l):
    spec = build_code(family, l)
    rep = verify_code(spec)
    assert rep.ok, rep.violations
    assert rep.rank == rep.n_generators - 2
    assert rep.derived_k == 2
    assert rep.pairing == [("X1", "Z1"), ("X2", "Z2")]
    if family == "C4Toric":
        assert rep.counts == {"SquareX": 2 * l * l, "SquareZ": 2 * l * l,
                              "OctagonX": l * l, "OctagonZ": l * l}
        assert rep.gauge_qubits == 2 * l * l
    else:
        assert rep.counts == {"ToricStar": l * l, "ToricPlaquette": l * l}


def test_toric_parameters():
    spec = build_toric(2)
    assert (spec.n, spec.k, spec.d) == (8, 2, 2)
    assert gf2_rank([c.op for c in spec.checks]) == 6
    prod = PauliOperator.identity(spec.n)
    for c in spec.checks:
        if c.kind is CheckKind.TORIC_PLAQUETTE:
            prod = prod * c.op
    assert prod.is_identity()


def test_c4_parameters():
    spec = build_c4_toric(2)
    assert (spec.n, spec.k, spec.d, spec.num_gauge_qubits) == (32, 2, 4, 8)
    assert len(spec.checks) == 24
    assert gf2_rank([c.op for c in spec.checks]) == 22
    for c in spec.checks:
        assert c.op.weight == (4 if c.kind.is_square else 8)


def test_gauge_pairs():
    spec = build_c4_toric(3)
    g = spec.gauge_generators
    for a in range(len(g)):
        for b in range(len(g)):
            expect = (a // 2 == b // 2) and a != b
            assert commutes(g[a], g[b]) != expect
        assert all(commutes(g[a], c.op) for c in spec.checks)
        assert all(commutes(g[a], op) for op in spec.logicals.values())


def test_injected_fault_is_reported():
    spec = build_c4_toric(2)
    checks = list(spec.checks)
    c = checks[0]
    bad = PauliOperator(spec.n, c.op.x, c.op.z ^ 1)
    checks[0] = type(c)(bad, c.kind, c.coord)
    broken = CodeSpec(spec.family, spec.l, spec.n, spec.k, spec.d, tuple(checks),
                      spec.logicals, spec.gauge_generators)
    assert len(verify_code(broken).violations) >= 1


def test_bad_l():
    for l in (0, 1, -3):
        with pytest.raises(InvalidParameter):
            build_c4_toric(l)
        with pytest.raises(InvalidParameter):
            build_toric(l)
    with pytest.raises(InvalidParameter):
        build_code("Honeycomb", 3)


def test_family_parse():
    assert Family.parse("c4-toric") is Family.C4_TORIC
    assert Family.parse("toric") is Family.TORIC


def test_min_logical_weight():
    assert min_logical_weight(build_c4_toric(2), 4) == 4
    assert min_logical_weight(build_c4_toric(2), 3) is None
    assert min_logical_weight(build_toric(2), 2) == 2
    assert min_logical_weight(build_toric(3), 3) == 3


def test_min_logical_weight_budget():
    with pytest.raises(BudgetExceeded):
        min_logical_weight(build_c4_toric(4), 8, budget=1000)


@pytest.mark.parametrize("l", [2, 3, 4])
def test_distance_witness(l):
    spec = build_c4_toric(l)
    w = distance_witness(spec)
    assert w.weight == 2 * l
    assert all(commutes(w, c.op) for c in spec.checks)
    assert not commutes(w, spec.logicals["Z1"])


def test_json_roundtrip():
    spec = build_c4_toric(2)
    doc = json.loads(spec.to_json())
    assert doc["n"] == 32 and doc["family"] == "C4Toric"
    assert len(doc["checks"]) == 24
    rebuilt = [PauliOperator.from_string(c["pauli"]) for c in doc["checks"]]
    assert rebuilt == [c.op for c in spec.checks]
    assert doc["checks"][0]["pauli"] == "XXXX" + "I" * 28
