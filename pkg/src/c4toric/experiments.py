"""Monte Carlo campaigns: logical failure rates, confidence intervals and
threshold estimates from curve crossings.

Trials run in fixed blocks of ``BLOCK`` shots.  Block ``b`` of point
``(l, p_index)`` draws from ``SeedSequence([master_seed, l, p_index, b])``,
so a table depends only on the config, never on how blocks are spread over
workers.
"""

from __future__ import annotations

import enum
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import batch
from .circuits import SyndromeRecord, build_schedule
from .codes import CodeSpec, Family, build_code
from .decode import BatchDecoder, decode_record, judge_batch
from .errors import InvalidParameter
from .noise import NoiseParams
from .pauli import PauliOperator

__all__ = [
    "Scenario",
    "ScheduleKind",
    "ExperimentConfig",
    "PointResult",
    "ThresholdEstimate",
    "SweepResult",
    "run_point",
    "wilson_ci",
    "estimate_threshold",
    "run_sweep",
    "BLOCK",
]

BLOCK = 1024


class Scenario(str, enum.Enum):
    DATA_ONLY = "DataOnly"
    DATA_SYNDROME = "DataSyndrome"
    CIRCUIT = "CircuitLevel"


class ScheduleKind(str, enum.Enum):
    NONE = "None"
    TORIC4 = "Toric4"
    C4_EIGHT = "C4Eight"
    C4_FOUR = "C4Four"

    @property
    def builder_name(self) -> str:
        return {"Toric4": "toric", "C4Eight": "8step", "C4Four": "4step"}[self.value]


_SCHEDULE_FAMILY = {
    ScheduleKind.TORIC4: Family.TORIC,
    ScheduleKind.C4_EIGHT: Family.C4_TORIC,
    ScheduleKind.C4_FOUR: Family.C4_TORIC,
}


@dataclass(frozen=True)
class ExperimentConfig:
    family: Family
    scenario: Scenario
    l_values: tuple[int, ...]
    p_values: tuple[float, ...]
    schedule: ScheduleKind = ScheduleKind.NONE
    trials: int = 10_000
    octagon_cnot_multiplier: float = 1.0
    time_weight: float = 1.0
    master_seed: int = 0
    # syndrome flip rate for DataSyndrome; None means q = p
    q: Optional[float] = None
    # noisy rounds before the ideal one; None means d rounds
    rounds: Optional[int] = None
    decoder: str = "pymatching"

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        object.__setattr__(self, "schedule", ScheduleKind(self.schedule))
        object.__setattr__(self, "l_values", tuple(int(l) for l in self.l_values))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        if self.trials < 1:
            raise InvalidParameter("trials must be at least 1")
        if not self.l_values:
            raise InvalidParameter("l_values is empty")
        if any(l < 2 for l in self.l_values):
            raise InvalidParameter("every l must be at least 2")
        if list(self.p_values) != sorted(self.p_values):
            raise InvalidParameter("p_values must be sorted ascending")
        for p in self.p_values:
            if not 0.0 <= p <= 1.0:
                raise InvalidParameter(f"p value {p} outside [0, 1]")
        if self.q is not None and not 0.0 <= self.q <= 1.0:
            raise InvalidParameter(f"q value {self.q} outside [0, 1]")
        if self.rounds is not None and self.rounds < 1:
            raise InvalidParameter("rounds must be at least 1")
        if self.decoder not in ("pymatching", "blossom"):
            raise InvalidParameter(f"unknown decoder {self.decoder!r}")
        if self.scenario is Scenario.CIRCUIT:
            if self.schedule is ScheduleKind.NONE:
                raise InvalidParameter("CircuitLevel scenario needs a schedule")
            if _SCHEDULE_FAMILY[self.schedule] is not self.family:
                raise InvalidParameter(
                    f"schedule {self.schedule.value} does not fit family {self.family.value}")
        # validates the octagon multiplier against every p
        for p in self.p_values:
            NoiseParams(p, self.q, self.octagon_cnot_multiplier)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        d["scenario"] = self.scenario.value
        d["schedule"] = self.schedule.value
        d["l_values"] = list(self.l_values)
        d["p_values"] = list(self.p_values)
        return d


@dataclass(frozen=True)
class PointResult:
    l: int
    d: int
    p: float
    trials: int
    failures: int
    ci_low: float
    ci_high: float
    # per encoded qubit: either logical of qubit 1 (resp. 2) flipped
    failures_q1: int = 0
    failures_q2: int = 0

    @property
    def logical_rate(self) -> float:
        return self.failures / self.trials


@dataclass(frozen=True)
class ThresholdEstimate:
    p_c: Optional[float]
    ci: Optional[tuple[float, float]]
    crossings: tuple[Optional[float], ...] = ()
    method: str = ("local weighted quadratic fits of log rate vs p around each adjacent-size "
                   "sign change; median crossing; binomial-resample bootstrap")

    @property
    def found(self) -> bool:
        return self.p_c is not None

    def to_dict(self) -> dict:
        return {"p_c": self.p_c, "ci": list(self.ci) if self.ci else None,
                "crossings": list(self.crossings), "method": self.method,
                "found": self.found}


@dataclass
class SweepResult:
    config: ExperimentConfig
    points: list[PointResult]
    threshold: ThresholdEstimate

    def curves(self) -> dict[int, list[PointResult]]:
        out: dict[int, list[PointResult]] = {}
        for pt in self.points:
            out.setdefault(pt.l, []).append(pt)
        return out


# ------------------------------------------------------------- statistics


def wilson_ci(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise InvalidParameter("trials must be positive")
    if not 0 <= failures <= trials:
        raise InvalidParameter(f"failures {failures} outside [0, {trials}]")
    if not 0.0 < confidence < 1.0:
        raise InvalidParameter("confidence must lie in (0, 1)")
    z = statistics.NormalDist().inv_cdf(0.5 + confidence / 2)
    n = trials
    phat = failures / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    low = 0.0 if failures == 0 else max(0.0, centre - half)
    high = 1.0 if failures == trials else min(1.0, centre + half)
    return low, high


def _log_rate(failures: np.ndarray, trials: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # continuity-corrected so zero counts stay finite
    r = (failures + 0.5) / (trials + 1.0)
    sigma = np.sqrt((1 - r) / ((trials + 1.0) * r))
    return np.log(r), sigma


def _fit(p: np.ndarray, failures: np.ndarray, trials: np.ndarray) -> np.ndarray:
    y, sigma = _log_rate(failures, trials)
    deg = min(2, len(p) - 1)
    coef = np.polyfit(p, y, deg, w=1.0 / sigma)
    return np.pad(coef, (3 - len(coef), 0))


_HALF_WINDOW = 3


def _crossing(pa, ka, na, pb, kb, nb) -> Optional[float]:
    """Crossing of two sizes' log-rate curves on their shared p values.

    The raw log-rate difference locates a sign change; weighted quadratics
    fitted to the points around it place the crossing between grid points.
    """
    shared, ia, ib = np.intersect1d(pa, pb, return_indices=True)
    if len(shared) < 2:
        return None
    ya, _ = _log_rate(ka[ia], na[ia])
    yb, _ = _log_rate(kb[ib], nb[ib])
    diff = ya - yb
    # below threshold the larger lattice (b) fails less, so diff falls through zero
    falling = [i for i in range(len(diff) - 1) if diff[i] > 0 >= diff[i + 1]]
    rising = [i for i in range(len(diff) - 1) if diff[i] < 0 <= diff[i + 1]]
    steps = falling or rising
    if not steps:
        return None
    i = max(steps, key=lambda j: abs(diff[j] - diff[j + 1]))
    lo, hi = shared[i], shared[i + 1]
    guess = lo + (hi - lo) * diff[i] / (diff[i] - diff[i + 1])
    win = slice(max(0, i - _HALF_WINDOW + 1), min(len(shared), i + _HALF_WINDOW + 1))
    pw = shared[win]
    if len(pw) < 3:
        return float(guess)
    poly = _fit(pw, ka[ia][win], na[ia][win]) - _fit(pw, kb[ib][win], nb[ib][win])
    roots = np.roots(np.trim_zeros(poly, "f")) if np.any(poly) else []
    real = [float(r.real) for r in roots if abs(r.imag) < 1e-12 and pw[0] <= r.real <= pw[-1]]
    if not real:
        return float(guess)
    return min(real, key=lambda r: abs(r - guess))


def _pairwise(curves: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]]) -> list[Optional[float]]:
    ls = sorted(curves)
    return [_crossing(*curves[a], *curves[b]) for a, b in zip(ls, ls[1:])]


def estimate_threshold(curves: dict[int, Sequence[PointResult]], bootstrap: int = 200,
                       seed: int = 0) -> ThresholdEstimate:
    """Threshold from the crossings of adjacent-size failure curves.

    Adjacent sizes are compared on their shared p values: the sign change
    of the log-rate difference is refined by weighted quadratic fits to the
    nearby points, and ``p_c`` is the median crossing.  The interval comes from refitting binomial
    resamples of every point.  Curves that never cross give ``p_c = None``.
    """
    if len(curves) < 2:
        raise InvalidParameter("need at least two lattice sizes")
    arrays = {}
    for l, pts in curves.items():
        pts = sorted(pts, key=lambda r: r.p)
        if len(pts) < 2:
            raise InvalidParameter(f"curve l={l} needs at least two points")
        arrays[l] = (np.array([r.p for r in pts]),
                     np.array([r.failures for r in pts], dtype=float),
                     np.array([r.trials for r in pts], dtype=float))
    crossings = _pairwise(arrays)
    found = [c for c in crossings if c is not None]
    if not found:
        return ThresholdEstimate(None, None, tuple(crossings))
    p_c = float(np.median(found))
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(bootstrap):
        res = {}
        for l, (p, k, n) in arrays.items():
            res[l] = (p, rng.binomial(n.astype(np.int64), k / n).astype(float), n)
        cs = [c for c in _pairwise(res) if c is not None]
        if cs:
            samples.append(float(np.median(cs)))
    ci = (float(np.percentile(samples, 2.5)), float(np.percentile(samples, 97.5))) if samples else None
    return ThresholdEstimate(p_c, ci, tuple(crossings))


# ---------------------------------------------------------------- running


_SPECS: dict[tuple, CodeSpec] = {}
_DECODERS: dict[tuple, BatchDecoder] = {}
_SCHEDULES: dict[tuple, object] = {}


def _spec(family: Family, l: int) -> CodeSpec:
    key = (family, l)
    if key not in _SPECS:
        _SPECS[key] = build_code(family, l)
    return _SPECS[key]


def _decoder(spec: CodeSpec, layers: int, time_weight: float) -> BatchDecoder:
    key = (spec.family, spec.l, layers, time_weight)
    if key not in _DECODERS:
        _DECODERS[key] = BatchDecoder(spec, layers, time_weight)
    return _DECODERS[key]


def _schedule(spec: CodeSpec, kind: ScheduleKind):
    key = (spec.family, spec.l, kind)
    if key not in _SCHEDULES:
        _SCHEDULES[key] = build_schedule(spec, kind.builder_name)
    return _SCHEDULES[key]


def block_seed(master_seed: int, l: int, p_index: int, block: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, l, p_index, block])


def _sample(config: ExperimentConfig, spec: CodeSpec, p: float, shots: int,
            rng: np.random.Generator) -> batch.BatchRecord:
    rounds = config.rounds or spec.d
    if config.scenario is Scenario.DATA_ONLY:
        return batch.sample_data_only(spec, p, shots, rng)
    if config.scenario is Scenario.DATA_SYNDROME:
        q = p if config.q is None else config.q
        return batch.sample_data_syndrome(spec, p, q, rounds, shots, rng)
    params = NoiseParams(p, None, config.octagon_cnot_multiplier)
    return batch.sample_circuit(spec, _schedule(spec, config.schedule), params, rounds, shots, rng)


def _reference_corrections(spec: CodeSpec, rec: batch.BatchRecord,
                           time_weight: float) -> tuple[np.ndarray, np.ndarray]:
    cx = np.zeros_like(rec.final_x)
    cz = np.zeros_like(rec.final_z)
    ident = PauliOperator.identity(spec.n)
    for s in range(rec.shots):
        corr = decode_record(spec, SyndromeRecord(rec.syndromes[:, :, s], ident), time_weight)
        cx[s] = [(corr.x >> q) & 1 for q in range(spec.n)]
        cz[s] = [(corr.z >> q) & 1 for q in range(spec.n)]
    return cx, cz


def _run_block(config: ExperimentConfig, l: int, p_index: int, block: int, shots: int) -> np.ndarray:
    """Logical flags (shots, 4) of one block."""
    spec = _spec(config.family, l)
    p = config.p_values[p_index]
    rng = np.random.default_rng(block_seed(config.master_seed, l, p_index, block))
    rec = _sample(config, spec, p, shots, rng)
    if config.decoder == "blossom":
        cx, cz = _reference_corrections(spec, rec, config.time_weight)
    else:
        cx, cz = _decoder(spec, rec.syndromes.shape[0], config.time_weight).decode(rec)
    return judge_batch(spec, rec.final_x ^ cx, rec.final_z ^ cz)


def _blocks(trials: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range((trials + BLOCK - 1) // BLOCK)]


def _point_from_flags(config: ExperimentConfig, l: int, p: float, flags: np.ndarray) -> PointResult:
    spec = _spec(config.family, l)
    failures = int(flags.any(axis=1).sum())
    lo, hi = wilson_ci(failures, config.trials)
    # flags order: X1, X2, Z1, Z2
    q1 = int((flags[:, 0] | flags[:, 2]).sum())
    q2 = int((flags[:, 1] | flags[:, 3]).sum())
    return PointResult(l, spec.d, p, config.trials, failures, lo, hi, q1, q2)


def _block_task(args):
    config, l, p_index, block, shots = args
    return _run_block(config, l, p_index, block, shots)


def run_point(config: ExperimentConfig, l: int, p: float, workers: int = 1) -> PointResult:
    """``config.trials`` trials at one (l, p)."""
    if p in config.p_values:
        p_index = config.p_values.index(p)
    else:
        config = ExperimentConfig(**{**config.to_dict(), "p_values": (p,)})
        p_index = 0
    tasks = [(config, l, p_index, b, n) for b, n in _blocks(config.trials)]
    flags = _map(tasks, workers)
    return _point_from_flags(config, l, p, np.concatenate(flags))


def _map(tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [_block_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_block_task, tasks))


def run_sweep(config: ExperimentConfig, workers: int = 1,
              progress: Optional[Callable[[PointResult], None]] = None,
              bootstrap: int = 200) -> SweepResult:
    """Every (l, p) point of the grid, sorted by l then p, plus the threshold."""
    points = []
    for l in sorted(config.l_values):
        for p_index, p in enumerate(config.p_values):
            tasks = [(config, l, p_index, b, n) for b, n in _blocks(config.trials)]
            pt = _point_from_flags(config, l, p, np.concatenate(_map(tasks, workers)))
            points.append(pt)
            if progress is not None:
                progress(pt)
    curves: dict[int, list[PointResult]] = {}
    for pt in points:
        curves.setdefault(pt.l, []).append(pt)
    if len(curves) >= 2 and len(config.p_values) >= 2:
        thr = estimate_threshold(curves, bootstrap=bootstrap, seed=config.master_seed)
    else:
        thr = ThresholdEstimate(None, None)
    return SweepResult(config, points, thr)
