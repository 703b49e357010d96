"""Command-line interface: ``rst <command> ...``.

Commands: build-ref, build-rel, query, bench, synth, verify.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._io import FormatError
from .bench import CSV_COLUMNS, OPERATIONS, run_bench
from .bundle import ReferenceSet, TargetSet, load_reference, load_target, save, section_sizes
from .rfm import LCSConfig, RFMConfig
from .rlz import RLZConfig
from .synth import MutationModel, mutate, random_dna, repetitive_dna
from .textindex import FMConfig, as_text, pattern
from .verify import verify_pair, verify_random

DNA_N = set(b"ACGTN")


class FastaError(ValueError):
    pass


@dataclass
class FastaReport:
    records: int
    length: int
    remapped: int  # symbols outside ACGTN turned into N


def read_fasta(path, separator: bool = False) -> tuple[bytes, FastaReport]:
    """Concatenate all records, uppercased; other symbols become N."""
    raw = Path(path).read_bytes()
    if not raw.strip():
        raise FastaError(f"{path}: empty file")
    records: list[bytearray] = []
    for lineno, line in enumerate(raw.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith(b">"):
            if not line[1:].strip():
                raise FastaError(f"{path}:{lineno}: header without a name")
            records.append(bytearray())
        elif line.startswith(b";"):
            continue
        else:
            if not records:
                raise FastaError(f"{path}:{lineno}: sequence data before the first header")
            records[-1] += line
    if not records:
        raise FastaError(f"{path}: no FASTA records")
    joined = (b"N" if separator else b"").join(bytes(r).upper() for r in records)
    arr = np.frombuffer(joined, np.uint8).copy()
    bad = ~np.isin(arr, np.frombuffer(b"ACGTN", np.uint8))
    arr[bad] = ord("N")
    return arr.tobytes(), FastaReport(len(records), int(arr.size), int(bad.sum()))


def truncate_n_runs(seq: bytes) -> bytes:
    return re.sub(rb"N{2,}", b"N", seq)


def write_fasta(path, name: str, seq: bytes, width: int = 80) -> None:
    with open(path, "wb") as fh:
        fh.write(b">" + name.encode() + b"\n")
        for k in range(0, len(seq), width):
            fh.write(seq[k : k + width] + b"\n")


def _load_seq(path, args) -> bytes:
    seq, rep = read_fasta(path, separator=args.separator)
    if getattr(args, "truncate_n", False):
        seq = truncate_n_runs(seq)
    print(f"{path}: {rep.records} record(s), {rep.length} symbols, {rep.remapped} mapped to N", file=sys.stderr)
    if not seq:
        raise FastaError(f"{path}: no sequence data")
    return seq


# --------------------------------------------------------------------------


def cmd_build_ref(args) -> int:
    seq = _load_seq(args.fasta, args)
    t0 = time.perf_counter()
    ref = ReferenceSet.build(seq, FMConfig(sa_rate=args.sa_rate, isa_rate=args.isa_rate))
    size = save(ref, args.output)
    print(f"reference: n={ref.n} bytes={size} bpc={8 * size / ref.n:.3f} "
          f"time={time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0


def cmd_build_rel(args) -> int:
    ref = load_reference(args.ref)
    seq = _load_seq(args.fasta, args)
    rfm_cfg = RFMConfig(full=not args.basic, sa_rate=args.sa_rate, isa_rate=args.isa_rate,
                        lcs=LCSConfig() if args.basic else None)
    rlz_cfg = RLZConfig(max_len=args.max_len)
    t0 = time.perf_counter()
    try:
        tgt = TargetSet.build(ref, seq, rfm_cfg, rlz_cfg, with_rselect=args.rselect)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    data = tgt.to_bytes()
    Path(args.output).write_bytes(data)
    n = tgt.rfm.n
    parts = " ".join(f"{k}={8 * v / n:.3f}" for k, v in section_sizes(data).items())
    print(f"target: n={n} bytes={len(data)} bpc={8 * len(data) / n:.3f} [{parts}] "
          f"time={time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0


def _open_pair(args):
    ref = load_reference(args.ref)
    return ref, load_target(args.target, ref)


def cmd_query(args) -> int:
    _, tgt = _open_pair(args)
    rfm = tgt.rfm
    if args.op in ("find", "locate"):
        sp, ep = rfm.find(pattern(args.pattern))
        count = max(0, ep - sp + 1)
        if args.op == "find":
            print(f"{sp}\t{ep}\t{count}")
        else:
            if not rfm.full:
                print("error: locate needs a full target index (built without --basic)", file=sys.stderr)
                return 2
            for p in sorted(rfm.locate(sp, ep))[: args.limit]:
                print(p)
    else:
        i, j = int(args.pattern), int(args.end)
        if not rfm.full:
            print("error: extract needs a full target index (built without --basic)", file=sys.stderr)
            return 2
        out = rfm.extract(i, j)
        print("".join("$" if c == 0 else chr(c) for c in out.tolist()))
    return 0


def cmd_bench(args) -> int:
    ref, tgt = _open_pair(args)
    ops = args.ops.split(",") if args.ops else list(OPERATIONS)
    rows = run_bench(ref, tgt, ops, args.queries, args.seed)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        print(",".join(CSV_COLUMNS), file=out)
        for row in rows:
            print(row.csv(), file=out)
    finally:
        if args.output:
            out.close()
    return 0


def cmd_synth(args) -> int:
    if args.source:
        seq, _ = read_fasta(args.source)
        out, stats = mutate(seq, MutationModel(args.rate, seed=args.seed))
        print(f"mutations: {stats.total} (sub {stats.substitutions}, ins {stats.insertions}, "
              f"del {stats.deletions})", file=sys.stderr)
        name = f"mutated p={args.rate} seed={args.seed}"
    else:
        gen = repetitive_dna if args.model == "repeats" else random_dna
        out = gen(args.length, args.seed)
        name = f"{args.model} n={args.length} seed={args.seed}"
    write_fasta(args.output, name, out)
    return 0


def cmd_verify(args) -> int:
    if args.random:
        rep = verify_random(args.random, args.length, args.seed, args.samples)
    else:
        if not (args.ref and args.target):
            print("error: verify needs --ref and --target, or --random", file=sys.stderr)
            return 2
        ref, tgt = _open_pair(args)
        text = None
        if args.fasta:
            seq, _ = read_fasta(args.fasta, separator=args.separator)
            text = as_text(seq)
        rep = verify_pair(ref, tgt, text, args.samples, args.seed)
    if rep.ok:
        print(f"ok: {rep.checks} checks passed")
        return 0
    print(f"FAILED: {len(rep.failures)} of {rep.checks} checks; first: {rep.failures[0]}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rst", description="Relative suffix tree indexes.")
    sub = p.add_subparsers(dest="command", required=True)

    def fasta_flags(q):
        q.add_argument("--separator", action="store_true", help="insert N between FASTA records")
        q.add_argument("--truncate-n", action="store_true", help="collapse runs of N to one N")

    q = sub.add_parser("build-ref", help="index a reference sequence")
    q.add_argument("fasta")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--sa-rate", type=int, default=17)
    q.add_argument("--isa-rate", type=int, default=64)
    fasta_flags(q)
    q.set_defaults(func=cmd_build_ref)

    q = sub.add_parser("build-rel", help="index a target relative to a reference bundle")
    q.add_argument("fasta")
    q.add_argument("--ref", required=True)
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--basic", action="store_true", help="rank-only relative FM-index")
    q.add_argument("--rselect", action="store_true", help="add the relative select structure")
    q.add_argument("--sa-rate", type=int, default=257)
    q.add_argument("--isa-rate", type=int, default=512)
    q.add_argument("--max-len", type=int, default=1024, help="RLZ phrase length limit for the LCP parse")
    fasta_flags(q)
    q.set_defaults(func=cmd_build_rel)

    q = sub.add_parser("query", help="find/locate a pattern or extract a substring")
    q.add_argument("--ref", required=True)
    q.add_argument("--target", required=True)
    q.add_argument("op", choices=("find", "locate", "extract"))
    q.add_argument("pattern", help="pattern, or start position for extract")
    q.add_argument("end", nargs="?", help="end position for extract")
    q.add_argument("--limit", type=int, default=1000)
    q.set_defaults(func=cmd_query)

    q = sub.add_parser("bench", help="time queries; CSV output")
    q.add_argument("--ref", required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--ops", help=f"comma-separated subset of {','.join(OPERATIONS)}")
    q.add_argument("--queries", type=int, default=1000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_bench)

    q = sub.add_parser("synth", help="generate a reference or a mutated target")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--source", help="FASTA to mutate; without it a reference is generated")
    q.add_argument("--rate", type=float, default=0.001)
    q.add_argument("--length", type=int, default=1_000_000)
    q.add_argument("--model", choices=("iid", "repeats"), default="repeats")
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_synth)

    q = sub.add_parser("verify", help="check indexes against plain-array oracles")
    q.add_argument("--ref")
    q.add_argument("--target")
    q.add_argument("--fasta", help="target FASTA (default: text extracted from the index)")
    q.add_argument("--separator", action="store_true")
    q.add_argument("--random", type=int, default=0, help="check this many random pairs instead")
    q.add_argument("--length", type=int, default=1000)
    q.add_argument("--samples", type=int, default=500)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FastaError, FormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
