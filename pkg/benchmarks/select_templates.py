"""Rank valid C4 CNOT templates by single-fault decoding failures at l=2.

Every single fault of one noisy round is injected as its own shot, followed
by a clean round and the ideal closing round.  Each candidate is decoded
with PyMatching and with the reference blossom decoder.  The two break ties
between equal-weight matchings differently, so candidates are ranked by the
sum of both failure counts and the search stops early at zero.

    python3 benchmarks/select_templates.py 4step --limit 300 --seed 1
"""

import argparse
import itertools
import pprint
import time

import numpy as np

from c4toric.batch import CompiledCircuit
from c4toric.circuits import (
    build_c4_schedule_4step,
    build_c4_schedule_8step,
    fault_codes,
    iter_templates,
    octagon_hook_count,
    SyndromeRecord,
)
from c4toric.codes import build_code
from c4toric.decode import BatchDecoder, decode_record, judge_batch
from c4toric.pauli import PauliOperator

BUILDERS = {"4step": build_c4_schedule_4step, "8step": build_c4_schedule_8step}


def _bits_to_int(row) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def sweep_failures(spec, schedule, decoder) -> tuple[int, int]:
    """(PyMatching failures, reference-decoder failures) over all single faults."""
    cc = CompiledCircuit(spec, schedule)
    faults = []
    for k, loc in enumerate(schedule.locations()):
        for code in fault_codes(loc):
            faults.append((0, k, len(faults), code))
    rec = cc.run(None, 2, len(faults), faults=faults)
    cx, cz = decoder.decode(rec)
    pm = int(judge_batch(spec, rec.final_x ^ cx, rec.final_z ^ cz).any(axis=1).sum())
    cache = {}
    ref_x = np.zeros_like(cx)
    ref_z = np.zeros_like(cz)
    for s in range(rec.shots):
        synd = rec.syndromes[:, :, s]
        key = synd.tobytes()
        if key not in cache:
            corr = decode_record(spec, SyndromeRecord(synd, PauliOperator.identity(spec.n)))
            cache[key] = corr
        corr = cache[key]
        ref_x[s] = [(corr.x >> q) & 1 for q in range(spec.n)]
        ref_z[s] = [(corr.z >> q) & 1 for q in range(spec.n)]
    ref = int(judge_batch(spec, rec.final_x ^ ref_x, rec.final_z ^ ref_z).any(axis=1).sum())
    return pm, ref


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("mode", choices=sorted(BUILDERS))
    ap.add_argument("--limit", type=int, default=200)
    ap.add_argument("--max-hooks", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--l", type=int, default=2)
    args = ap.parse_args()
    spec = build_code("C4Toric", args.l)
    decoder = BatchDecoder(spec, 3)
    best = None
    t0 = time.time()
    cands = iter_templates(args.mode, args.max_hooks, args.seed)
    for i, tmpl in enumerate(itertools.islice(cands, args.limit)):
        sched = BUILDERS[args.mode](spec, tmpl)
        pm, ref = sweep_failures(spec, sched, decoder)
        score = pm + ref
        if best is None or score < best[0]:
            best = (score, i, tmpl)
            hooks = (octagon_hook_count(tmpl["octZ"]), octagon_hook_count(tmpl["octX"]))
            print(f"candidate {i}: pymatching {pm}, reference {ref}, hooks {hooks} "
                  f"({time.time() - t0:.0f}s)", flush=True)
        if score == 0:
            break
    print(f"best candidate {best[1]} with {best[0]} failures")
    pprint.pprint(best[2], width=120)


if __name__ == "__main__":
    main()
