import importlib.util
import json
import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from c4toric import _pykernels, kernels
from c4toric.codes import CheckKind, build_c4_toric, build_code, build_toric
from c4toric.errors import InvalidParameter, ParityError
from c4toric.matching import (
    DefectNode,
    MatchingProblem,
    NodeKind,
    defect_node,
    matching_weight,
    mwpm,
    mwpm_bruteforce,
    pairing_to_correction,
    spacetime_distance,
    spatial_distance,
    spatial_distance_bfs,
)
from c4toric.pauli import PauliOperator


def octagon_z(spec, i, j):
    for cid, c in enumerate(spec.checks):
        if c.kind in (CheckKind.OCTAGON_Z, CheckKind.TORIC_PLAQUETTE) and c.coord == (i, j):
            return defect_node(spec, cid)
    raise KeyError((i, j))


def square_z(spec, i, j, o):
    for cid, c in enumerate(spec.checks):
        if c.kind is CheckKind.SQUARE_Z and c.coord == (i, j, o):
            return defect_node(spec, cid)
    raise KeyError((i, j, o))


def random_problem(rng, n, hi=20):
    w = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = rng.randint(1, hi)
    nodes = [DefectNode(i, NodeKind.OCTAGON, (i, 0)) for i in range(n)]
    return MatchingProblem(nodes, lambda a, b: w[a.check_id][b.check_id])


def test_metric_examples():
    spec = build_c4_toric(4)
    a = octagon_z(spec, 0, 0)
    assert spatial_distance(spec, a, a) == 0
    assert spatial_distance(spec, a, octagon_z(spec, 1, 0)) == 2
    # vertical edge at (1, 0) separates plaquettes (0,0) and (1,0)
    sq = square_z(spec, 1, 0, 1)
    assert spatial_distance(spec, sq, octagon_z(spec, 2, 0)) == 3
    assert spatial_distance_bfs(spec, sq, octagon_z(spec, 2, 0)) == 3


def test_spacetime_examples():
    spec = build_c4_toric(4)
    a = octagon_z(spec, 0, 0)
    late = DefectNode(a.check_id, a.kind, a.coord, 5)
    early = DefectNode(a.check_id, a.kind, a.coord, 2)
    assert spacetime_distance(spec, early, late) == 3
    b = octagon_z(spec, 1, 0)
    b1 = DefectNode(b.check_id, b.kind, b.coord, 1)
    assert spacetime_distance(spec, a, b1) == 3
    assert spacetime_distance(spec, a, b1, time_weight=0) == spatial_distance(spec, a, b1)


def test_mixed_sublattice_rejected():
    spec = build_c4_toric(2)
    z = defect_node(spec, spec.check_ids("Z")[0])
    x = defect_node(spec, spec.check_ids("X")[0])
    with pytest.raises(InvalidParameter):
        spatial_distance(spec, z, x)
    with pytest.raises(InvalidParameter):
        spatial_distance_bfs(spec, z, x)


@pytest.mark.parametrize("l", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("family", ["Toric", "C4Toric"])
def test_closed_form_matches_bfs(family, l):
    spec = build_code(family, l)
    for t in "XZ":
        nodes = [defect_node(spec, c) for c in spec.check_ids(t)]
        for a in nodes:
            for b in nodes:
                assert spatial_distance(spec, a, b) == spatial_distance_bfs(spec, a, b)


def test_toric_metric_is_torus_manhattan():
    spec = build_toric(5)
    a, b = octagon_z(spec, 0, 0), octagon_z(spec, 4, 2)
    assert spatial_distance(spec, a, b) == 1 + 2


@pytest.mark.parametrize("l", [2, 3, 4])
@pytest.mark.parametrize("family", ["Toric", "C4Toric"])
def test_metric_axioms(family, l):
    spec = build_code(family, l)
    for t in "XZ":
        nodes = [defect_node(spec, c) for c in spec.check_ids(t)]
        d = np.array([[spatial_distance(spec, a, b) for b in nodes] for a in nodes])
        assert (d == d.T).all()
        assert (np.diag(d) == 0).all()
        off = ~np.eye(len(nodes), dtype=bool)
        assert (d[off] > 0).all()
        # triangle inequality: d[i,k] <= d[i,j] + d[j,k]
        assert (d[:, None, :] <= d[:, :, None] + d[None, :, :]).all()


def test_mwpm_examples():
    spec = build_c4_toric(8)
    nodes = [octagon_z(spec, x, 0) for x in (0, 1, 4, 5)]
    prob = MatchingProblem(nodes, lambda a, b: spatial_distance(spec, a, b))
    pairs = mwpm(prob)
    got = {frozenset((a.coord[0], b.coord[0])) for a, b in pairs}
    assert got == {frozenset((0, 1)), frozenset((4, 5))}
    assert matching_weight(prob, pairs) == 4
    assert matching_weight(prob, mwpm_bruteforce(prob)) == 4
    two = MatchingProblem(nodes[:2], prob.weight)
    assert [(a.coord, b.coord) for a, b in mwpm(two)] == [((0, 0), (1, 0))]
    assert mwpm(MatchingProblem([], prob.weight)) == []


def test_parity_and_size_errors():
    spec = build_c4_toric(4)
    nodes = [octagon_z(spec, x, 0) for x in range(3)]
    prob = MatchingProblem(nodes, lambda a, b: spatial_distance(spec, a, b))
    with pytest.raises(ParityError):
        mwpm(prob)
    with pytest.raises(ParityError):
        mwpm_bruteforce(prob)
    big = random_problem(random.Random(0), 14)
    with pytest.raises(InvalidParameter):
        mwpm_bruteforce(big)


def test_mwpm_equals_bruteforce_random():
    rng = random.Random(2024)
    for _ in range(500):
        n = rng.choice([2, 4, 6, 8, 10])
        prob = random_problem(rng, n, hi=rng.choice([2, 5, 50]))
        pairs = mwpm(prob)
        assert sorted(v.check_id for p in pairs for v in p) == list(range(n))
        assert matching_weight(prob, pairs) == matching_weight(prob, mwpm_bruteforce(prob))


def test_mwpm_beats_greedy_on_defects():
    rng = random.Random(5)
    spec = build_c4_toric(5)
    zs = spec.check_ids("Z")
    for _ in range(100):
        ids = rng.sample(zs, 2 * rng.randint(1, 8))
        rounds = [rng.randint(0, 4) for _ in ids]
        nodes = [defect_node(spec, c, r) for c, r in zip(ids, rounds)]
        prob = MatchingProblem(nodes, lambda a, b: spacetime_distance(spec, a, b))
        best = matching_weight(prob, mwpm(prob))
        sequential = [(nodes[i], nodes[i + 1]) for i in range(0, len(nodes), 2)]
        assert best <= matching_weight(prob, sequential)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11), st.integers(1, 30)),
                max_size=40),
       st.booleans())
def test_backends_agree(edges, maxcard):
    edges = [(i, j, w) for i, j, w in edges if i != j]
    a = _pykernels.max_weight_matching(edges, 12, maxcard)
    b = kernels.max_weight_matching(edges, 12, maxcard)

    def total(mate):
        best = {}
        for i, j, w in edges:
            key = (min(i, j), max(i, j))
            best[key] = max(best.get(key, 0), w)
        return sum(best[(i, m)] for i, m in enumerate(mate) if m > i), sum(m >= 0 for m in mate)

    # duplicate edges are allowed; compare objective, not the mate vector
    assert total(a) == total(b)


def test_pairing_to_correction_single_fault():
    spec = build_c4_toric(3)
    for q in range(spec.n):
        err = PauliOperator.from_support(spec.n, "X", [q])
        syn = spec.syndrome(err)
        nodes = [defect_node(spec, c) for c, s in enumerate(syn) if s]
        assert len(nodes) == 2
        corr = pairing_to_correction(spec, mwpm(MatchingProblem(
            nodes, lambda a, b: spatial_distance(spec, a, b))))
        residual = corr * err
        assert not any(spec.syndrome(residual))
        assert all(residual.x & op.z == 0 or (residual.x & op.z).bit_count() % 2 == 0
                   for op in spec.logicals.values())


def test_pairing_to_correction_empty_and_timelike():
    spec = build_c4_toric(2)
    assert pairing_to_correction(spec, []).is_identity()
    a = defect_node(spec, spec.check_ids("Z")[3], 0)
    b = defect_node(spec, spec.check_ids("Z")[3], 4)
    assert pairing_to_correction(spec, [(a, b)]).is_identity()


def test_equivalent_paths_differ_by_stabilizer_gauge():
    # two octagons two steps apart have several minimal paths; any two chains
    # between them multiply to something with trivial syndrome and no
    # logical action
    spec = build_c4_toric(4)
    a, b = octagon_z(spec, 0, 0), octagon_z(spec, 1, 1)
    c1 = pairing_to_correction(spec, [(a, b)])
    c2 = pairing_to_correction(spec, [(b, a)])
    assert c1.weight == c2.weight == spatial_distance(spec, a, b)
    prod = c1 * c2
    assert not any(spec.syndrome(prod))
    for op in spec.logicals.values():
        assert ((prod.x & op.z) ^ (prod.z & op.x)).bit_count() % 2 == 0


def test_problem_json_roundtrip():
    spec = build_c4_toric(3)
    nodes = [defect_node(spec, c, r) for c, r in zip(spec.check_ids("X")[:4], [0, 1, 2, 3])]
    prob = MatchingProblem(nodes, lambda a, b: spacetime_distance(spec, a, b))
    text = prob.to_json()
    again = MatchingProblem.from_json(text)
    assert again.nodes == nodes
    assert (again.weight_matrix() == prob.weight_matrix()).all()
    assert json.loads(text)["weights"][0][0] == 0



def test_backend_selected_at_import():
    code = "import c4toric.kernels as k; print(k.BACKEND)"
    env = {**os.environ, "C4TORIC_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("C4TORIC_PURE_PYTHON")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == ("cython" if importlib.util.find_spec("c4toric._kernels") else "python")
