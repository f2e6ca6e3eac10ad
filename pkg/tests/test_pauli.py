import pytest
from hypothesis import given, strategies as st

from c4toric.errors import DimensionError
from c4toric.pauli import (
    PauliOperator,
    commutes,
    conjugate_by_cnot,
    gf2_rank,
    multiply,
    symplectic,
)

P = PauliOperator.from_string


def paulis(n):
    return st.builds(
        lambda x, z: PauliOperator(n, x, z),
        st.integers(0, (1 << n) - 1),
        st.integers(0, (1 << n) - 1),
    )


@pytest.mark.parametrize("a, b, out", [
    ("XIXI", "XIXI", "IIII"),
    ("XXXX", "ZZZZ", "YYYY"),
    ("IZIZ", "ZZII", "ZIIZ"),
])
def test_multiply_examples(a, b, out):
    assert str(multiply(P(a), P(b))) == out


def test_commutes_examples():
    assert not commutes(P("IIXX"), P("IZIZ"))
    assert commutes(P("XXXX"), P("ZZZZ"))
    assert commutes(P("XXII"), P("ZZII"))


def test_length_mismatch():
    with pytest.raises(DimensionError):
        multiply(P("XX"), P("XXX"))
    with pytest.raises(DimensionError):
        commutes(P("X"), P("XZ"))


def test_string_roundtrip_and_weight():
    p = P("IXYZ")
    assert str(p) == "IXYZ"
    assert p.weight == 3
    assert p.support == [1, 2, 3]
    assert p.x_bits == [0, 1, 1, 0]
    assert p.z_bits == [0, 0, 1, 1]


def test_from_support():
    assert str(PauliOperator.from_support(5, "Z", [0, 4])) == "ZIIIZ"
    with pytest.raises(DimensionError):
        PauliOperator.from_support(3, "X", [3])


@pytest.mark.parametrize("before, c, t, after", [
    ("XI", 0, 1, "XX"),
    ("IZ", 0, 1, "ZZ"),
    ("IX", 0, 1, "IX"),
    ("ZI", 0, 1, "ZI"),
    ("YI", 0, 1, "YX"),
    ("IY", 0, 1, "ZY"),
])
def test_cnot_propagation(before, c, t, after):
    assert str(conjugate_by_cnot(P(before), c, t)) == after


def test_cnot_bad_args():
    with pytest.raises(DimensionError):
        conjugate_by_cnot(P("XI"), 1, 1)
    with pytest.raises(DimensionError):
        conjugate_by_cnot(P("XI"), 0, 2)


def test_gf2_rank_examples():
    assert gf2_rank([]) == 0
    assert gf2_rank([P("XXXX"), P("ZZZZ")]) == 2
    assert gf2_rank([P("XIXI"), P("IXIX"), P("XXXX")]) == 2
    assert gf2_rank([P("YY"), P("XX"), P("ZZ")]) == 2


@given(paulis(6), paulis(6), paulis(6))
def test_multiply_group_laws(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    assert multiply(a, b) == multiply(b, a)
    assert multiply(a, a).is_identity()


@given(paulis(6), paulis(6), paulis(6))
def test_symplectic_bilinear(a, b, c):
    assert commutes(a, b) == commutes(b, a)
    assert symplectic(a, multiply(b, c)) == (symplectic(a, b) + symplectic(a, c)) % 2


@given(paulis(5), paulis(5), st.integers(0, 4), st.integers(0, 4))
def test_cnot_is_involutive_and_preserves_commutation(a, b, c, t):
    if c == t:
        return
    ca, cb = conjugate_by_cnot(a, c, t), conjugate_by_cnot(b, c, t)
    assert conjugate_by_cnot(ca, c, t) == a
    assert commutes(ca, cb) == commutes(a, b)
    assert multiply(ca, cb) == conjugate_by_cnot(multiply(a, b), c, t)


@given(st.lists(paulis(5), max_size=6), st.data())
def test_rank_unchanged_by_products(ops, data):
    if not ops:
        return
    subset = data.draw(st.lists(st.sampled_from(ops), min_size=1))
    prod = PauliOperator.identity(5)
    for s in subset:
        prod = prod * s
    assert gf2_rank(ops + [prod]) == gf2_rank(ops)
