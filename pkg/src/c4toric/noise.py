"""Pauli fault sampling for the three noise scenarios.

Single-draw functions take a ``numpy.random.Generator`` and return one
sample; they are the readable reference.  The batch samplers below draw the
faults of many shots at once and are what the simulators use.

Pauli codes: a one-qubit Pauli is a 2-bit code ``x | z << 1`` (1 = X,
2 = Z, 3 = Y).  A two-qubit Pauli is ``code_a | code_b << 2`` with ``a`` the
first qubit of the location, 1..15 for the non-identity ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .codes import CodeSpec
from .errors import InvalidParameter
from .pauli import PauliOperator

__all__ = [
    "NoiseParams",
    "LocationKind",
    "FaultLocation",
    "location_rate",
    "sample_data_errors",
    "sample_syndrome_flip",
    "sample_fault",
    "sample_sparse",
    "sample_data_error_bits",
    "draw_codes",
]


@dataclass(frozen=True)
class NoiseParams:
    p: float
    q: float | None = None
    octagon_cnot_multiplier: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameter(f"p must lie in [0, 1], got {self.p}")
        if self.q is not None and not 0.0 <= self.q <= 1.0:
            raise InvalidParameter(f"q must lie in [0, 1], got {self.q}")
        if self.octagon_cnot_multiplier < 0:
            raise InvalidParameter("octagon_cnot_multiplier must be non-negative")
        if self.p * self.octagon_cnot_multiplier > 1.0:
            raise InvalidParameter(
                f"p * multiplier = {self.p * self.octagon_cnot_multiplier} exceeds 1")

    @property
    def syndrome_flip(self) -> float:
        return self.p if self.q is None else self.q


class LocationKind(str, enum.Enum):
    PREP = "Prep"
    MEASURE = "Measure"
    IDLE = "Idle"
    ONE_QUBIT_GATE = "OneQubitGate"
    TWO_QUBIT_GATE = "TwoQubitGate"


@dataclass(frozen=True)
class FaultLocation:
    kind: LocationKind
    qubits: tuple[int, ...]
    timestep: int
    touches_octagon_ancilla: bool = False
    # prep/measure basis, "Z" or "X"
    basis: str = field(default="Z", compare=False)

    def __post_init__(self) -> None:
        want = 2 if self.kind is LocationKind.TWO_QUBIT_GATE else 1
        if len(self.qubits) != want:
            raise InvalidParameter(f"{self.kind.value} location needs {want} qubit(s)")


def location_rate(loc: FaultLocation, params: NoiseParams) -> float:
    if loc.kind is LocationKind.TWO_QUBIT_GATE and loc.touches_octagon_ancilla:
        r = params.p * params.octagon_cnot_multiplier
    else:
        r = params.p
    if r > 1.0:
        raise InvalidParameter(f"effective error rate {r} exceeds 1")
    return r


def sample_data_errors(spec: CodeSpec, p: float, rng: np.random.Generator) -> PauliOperator:
    """Independent X and Z flips, each with probability ``p`` on every qubit."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameter(f"p must lie in [0, 1], got {p}")
    xs = rng.random(spec.n) < p
    zs = rng.random(spec.n) < p
    return PauliOperator(spec.n, _pack(xs), _pack(zs))


def _pack(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def sample_syndrome_flip(q: float, rng: np.random.Generator) -> bool:
    if not 0.0 <= q <= 1.0:
        raise InvalidParameter(f"q must lie in [0, 1], got {q}")
    return bool(rng.random() < q)


def sample_fault(loc: FaultLocation, params: NoiseParams,
                 rng: np.random.Generator) -> Union[PauliOperator, bool]:
    """One draw of the fault after ``loc``.

    Returns a Pauli on the location's qubits (qubit order as in
    ``loc.qubits``), or for measurements a flag saying whether the recorded
    outcome is flipped.
    """
    r = location_rate(loc, params)
    hit = rng.random() < r
    if loc.kind is LocationKind.MEASURE:
        return bool(hit)
    if loc.kind is LocationKind.PREP:
        if not hit:
            return PauliOperator(1)
        return PauliOperator.from_string("X" if loc.basis == "Z" else "Z")
    if loc.kind is LocationKind.TWO_QUBIT_GATE:
        code = int(rng.integers(1, 16)) if hit else 0
        return PauliOperator(2, (code & 1) | ((code >> 2) & 1) << 1,
                             ((code >> 1) & 1) | ((code >> 3) & 1) << 1)
    code = int(rng.integers(1, 4)) if hit else 0
    return PauliOperator(1, code & 1, code >> 1)


# ------------------------------------------------------------------ batch


def sample_sparse(n_locations: int, shots: int, rate: float,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Positions of Bernoulli(``rate``) successes on an ``n_locations x shots`` grid.

    Drawn by geometric gap skipping, so the cost is proportional to the
    number of faults rather than the grid size.  Returns ``(location, shot)``
    index arrays sorted by flat position.
    """
    total = n_locations * shots
    if rate <= 0.0 or total == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    if rate >= 1.0:
        flat = np.arange(total, dtype=np.int64)
    else:
        chunks = []
        pos = -1
        expect = total * rate
        while True:
            k = int(expect + 6.0 * np.sqrt(expect) + 16)
            gaps = rng.geometric(rate, size=k)
            # tiny rates can overflow int64; any gap past the end is equivalent
            gaps[(gaps <= 0) | (gaps > total)] = total + 1
            steps = pos + np.cumsum(gaps, dtype=np.int64)
            inside = steps[steps < total]
            chunks.append(inside)
            if len(inside) < k:
                break
            pos = int(steps[-1])
            expect = (total - pos) * rate
        flat = np.concatenate(chunks) if len(chunks) > 1 else chunks[0]
    return flat // shots, flat % shots


def sample_data_error_bits(n: int, shots: int, p: float,
                           rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Dense (shots, n) boolean X and Z flip masks at rate ``p`` each."""
    xs = np.zeros((shots, n), dtype=np.uint8)
    zs = np.zeros((shots, n), dtype=np.uint8)
    loc, shot = sample_sparse(n, shots, p, rng)
    xs[shot, loc] = 1
    loc, shot = sample_sparse(n, shots, p, rng)
    zs[shot, loc] = 1
    return xs, zs


def two_qubit_code_split(code: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split 4-bit two-qubit Pauli codes into per-qubit 2-bit codes."""
    return code & 3, (code >> 2) & 3


def draw_codes(kind: LocationKind, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform non-identity Pauli codes for ``count`` faults at a location kind."""
    if kind is LocationKind.TWO_QUBIT_GATE:
        return rng.integers(1, 16, size=count, dtype=np.int64)
    return rng.integers(1, 4, size=count, dtype=np.int64)

