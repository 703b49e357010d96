#!/usr/bin/env python3
"""Size of the relative structures as a function of the mutation rate.

Writes CSV rows: rate, target, n, rfm_bpc, rlcp_bpc, phrases, avg_phrase.
"""

import argparse
import sys
import time

from rstree._io import to_bytes
from rstree.bundle import ReferenceSet, TargetSet
from rstree.synth import MutationModel, mutate, random_dna, repetitive_dna
from rstree.textindex import SuffixStructures, as_text

RATES = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--length", type=int, default=1_000_000)
    ap.add_argument("--targets", type=int, default=5)
    ap.add_argument("--model", choices=("iid", "repeats"), default="repeats")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--rates", type=float, nargs="+", default=RATES)
    args = ap.parse_args(argv)

    gen = repetitive_dna if args.model == "repeats" else random_dna
    r = gen(args.length, seed=args.seed)
    tr = as_text(r)
    sx = SuffixStructures.build(tr)
    ref = ReferenceSet.build(tr, sx=sx)
    print("rate,target,n,rfm_bpc,rlcp_bpc,phrases,avg_phrase")
    for p in args.rates:
        for k in range(args.targets):
            t0 = time.perf_counter()
            s, _ = mutate(r, MutationModel(p, seed=100 + k))
            tgt = TargetSet.build(ref, s, ref_text=tr, ref_sx=sx)
            n = len(s) + 1
            z = tgt.rlcp.z
            print(f"{p:g},{k},{n},{8 * len(to_bytes(tgt.rfm)) / n:.4f},"
                  f"{8 * len(to_bytes(tgt.rlcp)) / n:.4f},{z},{n / z:.2f}", flush=True)
            print(f"p={p:g} target {k}: {time.perf_counter() - t0:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
