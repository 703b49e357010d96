"""Synthetic targets: random DNA and a seeded point-mutation model."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DNA = b"ACGT"


@dataclass(frozen=True)
class MutationModel:
    rate: float
    substitution: float = 0.90
    insertion: float = 0.05
    deletion: float = 0.05
    indel_p: float = 0.2  # P(k) = indel_p * (1 - indel_p)^(k-1)
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("mutation rate must lie in [0, 1]")
        if abs(self.substitution + self.insertion + self.deletion - 1.0) > 1e-12:
            raise ValueError("mutation class probabilities must sum to 1")
        if not 0.0 < self.indel_p <= 1.0:
            raise ValueError("indel_p must lie in (0, 1]")


@dataclass
class MutationStats:
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    inserted: int = 0
    deleted: int = 0
    indel_lengths: list[int] = field(default_factory=list)  # drawn lengths, in event order

    @property
    def total(self) -> int:
        return self.substitutions + self.insertions + self.deletions


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_dna(n: int, seed: int = 0, alphabet: bytes = DNA) -> bytes:
    rng = rng_for(seed)
    return bytes(np.frombuffer(alphabet, np.uint8)[rng.integers(0, len(alphabet), n)])


def mutate(reference: bytes, model: MutationModel, alphabet: bytes = DNA) -> tuple[bytes, MutationStats]:
    """Apply independent mutations at each reference position with probability ``model.rate``.

    Substitutions pick a different symbol; insertions place k random symbols
    before the position; deletions remove k symbols starting at it.
    """
    rng = rng_for(model.seed)
    src = np.frombuffer(bytes(reference), np.uint8)
    n = src.size
    sym = np.frombuffer(alphabet, np.uint8)
    hits = np.flatnonzero(rng.random(n) < model.rate)
    kind = rng.choice(3, size=hits.size, p=[model.substitution, model.insertion, model.deletion])
    lens = rng.geometric(model.indel_p, size=hits.size)
    stats = MutationStats()
    out: list[np.ndarray] = []
    pos = 0
    for h, k, ln in zip(hits.tolist(), kind.tolist(), lens.tolist()):
        if h < pos:
            continue  # swallowed by an earlier deletion
        out.append(src[pos:h])
        pos = h
        if k == 0:
            cur = int(src[h])
            choices = sym[sym != cur]
            if choices.size == 0:
                choices = sym
            out.append(np.array([choices[rng.integers(0, choices.size)]], np.uint8))
            pos = h + 1
            stats.substitutions += 1
        elif k == 1:
            out.append(sym[rng.integers(0, sym.size, ln)])
            stats.insertions += 1
            stats.inserted += ln
            stats.indel_lengths.append(ln)
        else:
            end = min(n, h + ln)
            stats.deletions += 1
            stats.deleted += end - h
            stats.indel_lengths.append(ln)
            pos = end
    out.append(src[pos:])
    return np.concatenate(out).tobytes() if out else b"", stats


def repetitive_dna(n: int, seed: int = 0, repeat_fraction: float = 0.5, families: int = 20,
                   family_len: tuple[int, int] = (300, 6000), max_divergence: float = 0.15,
                   alphabet: bytes = DNA) -> bytes:
    """Random DNA interleaved with diverged copies of a few repeat families.

    Family lengths are log-uniform in ``family_len``; each copy gets its own
    divergence, uniform in [0, max_divergence].  Unique stretches have
    exponential lengths with the same mean as a family, so about
    ``repeat_fraction`` of the output comes from repeats.
    """
    rng = rng_for(seed)
    lo, hi = family_len
    lens = np.exp(rng.uniform(np.log(lo), np.log(hi), families)).astype(int)
    fams = [random_dna(int(k), int(rng.integers(1 << 62)), alphabet) for k in lens]
    mean_len = float(lens.mean())
    parts: list[bytes] = []
    total = 0
    while total < n:
        if rng.random() < repeat_fraction:
            f = fams[int(rng.integers(families))]
            d = float(rng.uniform(0.0, max_divergence))
            piece, _ = mutate(f, MutationModel(d, seed=int(rng.integers(1 << 62))), alphabet)
        else:
            piece = random_dna(1 + int(rng.exponential(mean_len)), int(rng.integers(1 << 62)), alphabet)
        parts.append(piece)
        total += len(piece)
    return b"".join(parts)[:n]
