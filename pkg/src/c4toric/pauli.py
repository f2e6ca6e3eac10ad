"""Phaseless Pauli operators in binary-symplectic form.

An n-qubit Pauli is stored as two Python integers used as bit sets: bit ``i``
of ``x`` (``z``) is set when the operator has an X (Z) component on qubit
``i``.  Phases are dropped; nothing downstream depends on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError

__all__ = [
    "DimensionError",
    "PauliOperator",
    "multiply",
    "commutes",
    "symplectic",
    "conjugate_by_cnot",
    "gf2_rank",
    "bits_to_int",
]


_CHAR_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_CHAR = {v: k for k, v in _CHAR_BITS.items()}


def bits_to_int(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence (qubit 0 first) into an integer bit set."""
    out = 0
    for i, b in enumerate(bits):
        if b:
            out |= 1 << i
    return out


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DimensionError("negative qubit count")
        limit = 1 << self.n
        if self.x >= limit or self.z >= limit or self.x < 0 or self.z < 0:
            raise DimensionError(f"bits exceed {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_string(cls, s: str) -> "PauliOperator":
        x = z = 0
        for i, c in enumerate(s.upper()):
            try:
                bx, bz = _CHAR_BITS[c]
            except KeyError:
                raise ValueError(f"bad Pauli character {c!r}") from None
            x |= bx << i
            z |= bz << i
        return cls(len(s), x, z)

    @classmethod
    def from_support(cls, n: int, kind: str, qubits: Iterable[int]) -> "PauliOperator":
        """Uniform-type operator, e.g. ``from_support(8, "X", [0, 3])``."""
        mask = 0
        for q in qubits:
            if not 0 <= q < n:
                raise DimensionError(f"qubit {q} out of range for n={n}")
            mask ^= 1 << q
        bx, bz = _CHAR_BITS[kind.upper()]
        return cls(n, mask if bx else 0, mask if bz else 0)

    @property
    def x_bits(self) -> list[int]:
        return [(self.x >> i) & 1 for i in range(self.n)]

    @property
    def z_bits(self) -> list[int]:
        return [(self.z >> i) & 1 for i in range(self.n)]

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> list[int]:
        m = self.x | self.z
        return [i for i in range(self.n) if (m >> i) & 1]

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __str__(self) -> str:
        return "".join(
            _BITS_CHAR[((self.x >> i) & 1, (self.z >> i) & 1)] for i in range(self.n)
        )

    def __repr__(self) -> str:
        if self.n <= 64:
            return f"PauliOperator({str(self)!r})"
        return f"PauliOperator(n={self.n}, support={self.support})"


def _check_same(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise DimensionError(f"length mismatch: {a.n} vs {b.n}")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    _check_same(a, b)
    return PauliOperator(a.n, a.x ^ b.x, a.z ^ b.z)


def symplectic(a: PauliOperator, b: PauliOperator) -> int:
    """Symplectic inner product, 0 if the operators commute and 1 otherwise."""
    _check_same(a, b)
    return ((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return symplectic(a, b) == 0


def conjugate_by_cnot(p: PauliOperator, control: int, target: int) -> PauliOperator:
    """Propagate ``p`` through CNOT(control -> target).

    X on the control is copied onto the target and Z on the target is copied
    onto the control.  The map is its own inverse, so it also serves for
    Heisenberg-picture back-propagation.
    """
    if control == target:
        raise DimensionError("control and target coincide")
    for q in (control, target):
        if not 0 <= q < p.n:
            raise DimensionError(f"qubit {q} out of range for n={p.n}")
    x, z = p.x, p.z
    if (x >> control) & 1:
        x ^= 1 << target
    if (z >> target) & 1:
        z ^= 1 << control
    return PauliOperator(p.n, x, z)


def _rows(ops: Sequence[PauliOperator]) -> list[int]:
    if not ops:
        return []
    n = ops[0].n
    rows = []
    for op in ops:
        if op.n != n:
            raise DimensionError("operators of different lengths")
        rows.append(op.x | (op.z << n))
    return rows


def _rank_of_ints(rows: Iterable[int]) -> int:
    # xor basis keyed by leading bit
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            if lead in basis:
                r ^= basis[lead]
            else:
                basis[lead] = r
                break
    return len(basis)


def gf2_rank(ops: Sequence[PauliOperator]) -> int:
    """Rank over GF(2) of the rows ``(x_bits | z_bits)``."""
    return _rank_of_ints(_rows(ops))
