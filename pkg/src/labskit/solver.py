"""Restart local search over partition-restricted skew-symmetric classes.

One run searches the class fixed by a partition projection: the first
k and last k elements stay pinned, moves flip one free half position
q in [k, l] (pairing with n-1-q to preserve skew-symmetry), each with
an O(n) incremental energy delta.  Per restart the search keeps a
visited hash set and walks to the best unvisited neighbor (optionally
only strictly improving ones) until the neighborhood is exhausted or
the inner move budget runs out.  Whenever the current merit factor
clears the activation threshold, the four adjacent pseudo-skew
candidates of lengths n-1 and n+1 are probed through their closed-form
deltas, so one run maintains best candidates at three lengths at once.

Workers are share-nothing processes with RNG streams derived from
(seed, worker id); the merged result takes the per-target maximum.
Single-worker runs are fully deterministic for a fixed seed.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .core import BinarySequence
from .errors import DomainError
from .partitions import sample_member
from .pseudo import append_delta_arrays, truncate_delta_arrays
from .records import encode_hex
from .skew import SkewSearchState

POLICY_SELF_AVOIDING = "self-avoiding-best"
POLICY_STRICT_DESCENT = "strict-descent"
POLICIES = (POLICY_SELF_AVOIDING, POLICY_STRICT_DESCENT)

_M64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a_words(words: Sequence[int]) -> int:
    """64-bit FNV-1a-style fold over 64-bit words."""
    h = _FNV_OFFSET
    for w in words:
        h ^= w & _M64
        h = (h * _FNV_PRIME) & _M64
    return h


def hash_half_bits(half_bits: int, half_len: int) -> int:
    """Stable digest of a packed half sequence, length-prefixed."""
    words = [half_len]
    v = half_bits
    while v:
        words.append(v & _M64)
        v >>= 64
    return fnv1a_words(words)


def hash_state(state: SkewSearchState) -> int:
    return hash_half_bits(state.half_bits, state.l + 1)


@dataclass
class SolverConfig:
    n: int
    partition: Tuple[int, ...]
    t_inner: int = 100_000
    t_outer: int = 1_000
    t_activate: float = 0.0
    workers: int = 1
    seed: int = 0
    time_limit: Optional[float] = None
    policy: str = POLICY_SELF_AVOIDING
    leading: int = 1

    def validate(self) -> None:
        if self.n < 3 or self.n % 2 == 0:
            raise DomainError(f"search length must be odd and >= 3, got {self.n}")
        parts = tuple(int(t) for t in self.partition)
        if not parts or any(t < 1 for t in parts):
            raise DomainError(f"partition parts must be >= 1, got {parts}")
        k = sum(parts)
        if self.n < 2 * k + 1:
            raise DomainError(
                f"length {self.n} too short for partition of {k} (need >= {2 * k + 1})"
            )
        if self.t_inner < 1:
            raise DomainError(f"inner threshold must be >= 1, got {self.t_inner}")
        if self.t_outer < 1:
            raise DomainError(f"outer threshold must be >= 1, got {self.t_outer}")
        if self.t_activate < 0:
            raise DomainError(f"activation threshold must be >= 0, got {self.t_activate}")
        if self.workers < 1:
            raise DomainError(f"worker count must be >= 1, got {self.workers}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise DomainError(f"time limit must be positive, got {self.time_limit}")
        if self.policy not in POLICIES:
            raise DomainError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if self.leading not in (-1, 1):
            raise DomainError(f"leading sign must be -1 or +1, got {self.leading!r}")

    @property
    def order(self) -> int:
        return sum(self.partition)


@dataclass(frozen=True)
class BestRecord:
    mf: Fraction
    sequence: BinarySequence
    found_flips: int
    found_restarts: int
    found_elapsed: float
    worker: int = 0


@dataclass
class BestTriple:
    shorter: Optional[BestRecord] = None  # length n-1, pseudo-skew-symmetric
    target: Optional[BestRecord] = None   # length n, skew-symmetric
    longer: Optional[BestRecord] = None   # length n+1, pseudo-skew-symmetric

    def by_length(self, n: int) -> dict:
        return {n - 1: self.shorter, n: self.target, n + 1: self.longer}


@dataclass
class RunStats:
    restarts: int = 0
    flips: int = 0
    probes: int = 0
    elapsed: float = 0.0
    interrupted: bool = False
    per_worker: list = field(default_factory=list)


@dataclass
class SolverResult:
    config: SolverConfig
    best: BestTriple
    stats: RunStats
    events: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


def pick_better_neighbor(state: SkewSearchState, visited: set, policy: str,
                         indices: Optional[Sequence[int]] = None) -> Optional[int]:
    """Index of the best unvisited single-flip neighbor, or None.

    Under strict-descent only neighbors with lower energy qualify; under
    self-avoiding-best the best unvisited neighbor wins regardless.
    Ties break to the smallest index.
    """
    if indices is None:
        indices = range(state.l + 1)
    best_q = None
    best_energy = None
    for q in indices:
        if hash_half_bits(state.half_bits ^ (1 << q), state.l + 1) in visited:
            continue
        result = state.energy + state.flip_delta(q)
        if best_energy is None or result < best_energy:
            best_q, best_energy = q, result
    if best_q is None:
        return None
    if policy == POLICY_STRICT_DESCENT and best_energy >= state.energy:
        return None
    return best_q


def _event(kind: str, target_n: int, mf: Fraction, seq: BinarySequence,
           flips: int, restarts: int, worker: int) -> dict:
    return {
        "kind": kind,
        "target": target_n,
        "mf": float(mf),
        "mf_num": mf.numerator,
        "mf_den": mf.denominator,
        "hex": encode_hex(seq),
        "n": seq.n,
        "flips": flips,
        "restarts": restarts,
        "worker": worker,
    }


def _run_worker(config: SolverConfig, worker_id: int,
                on_event: Optional[Callable[[dict], None]] = None) -> SolverResult:
    n = config.n
    k = config.order
    l = n // 2
    free = range(k, l + 1)
    rng = np.random.default_rng(np.random.SeedSequence(
        entropy=(config.seed & _M64, worker_id)))

    best = BestTriple()
    stats = RunStats()
    events: List[dict] = []
    start = time.monotonic()
    deadline = None if config.time_limit is None else start + config.time_limit

    def emit(kind: str, target_n: int, mf: Fraction, seq: BinarySequence) -> None:
        ev = _event(kind, target_n, mf, seq, stats.flips, stats.restarts, worker_id)
        events.append(ev)
        if on_event is not None:
            on_event(ev)

    def consider_target(state: SkewSearchState) -> Fraction:
        mf = Fraction(n * n, 2 * state.energy)
        if best.target is None or mf > best.target.mf:
            best.target = BestRecord(mf, state.sequence(), stats.flips,
                                     stats.restarts, time.monotonic() - start, worker_id)
            emit("improvement", n, mf, best.target.sequence)
        return mf

    def probe_adjacent(state: SkewSearchState) -> None:
        c, e, v = state.c, state.e, state.energy
        stats.probes += 4
        for sign in (1, -1):
            _, energy_hi = append_delta_arrays(c, e, n, v, sign, "last")
            mf = Fraction((n + 1) * (n + 1), 2 * energy_hi)
            if best.longer is None or mf > best.longer.mf:
                seq = BinarySequence((state.sequence().bits << 1) | (sign == 1), n + 1)
                best.longer = BestRecord(mf, seq, stats.flips, stats.restarts,
                                         time.monotonic() - start, worker_id)
                emit("improvement", n + 1, mf, seq)
        for end in ("last", "first"):
            _, energy_lo = truncate_delta_arrays(c, e, n, v, end)
            mf = Fraction((n - 1) * (n - 1), 2 * energy_lo)
            if best.shorter is None or mf > best.shorter.mf:
                bits = state.sequence().bits
                seq = (BinarySequence(bits >> 1, n - 1) if end == "last"
                       else BinarySequence(bits & ((1 << (n - 1)) - 1), n - 1))
                best.shorter = BestRecord(mf, seq, stats.flips, stats.restarts,
                                          time.monotonic() - start, worker_id)
                emit("improvement", n - 1, mf, seq)

    w_o = 0
    try:
        while True:
            if deadline is not None and time.monotonic() >= deadline:
                break
            stats.restarts += 1
            half = sample_member(config.partition, n, rng, config.leading)
            state = SkewSearchState(half)
            visited = {hash_state(state)}
            w_i = 0
            mf_now = consider_target(state)
            while True:
                q = pick_better_neighbor(state, visited, config.policy, free)
                if q is None:
                    break
                state.apply_flip(q)
                stats.flips += 1
                w_i += 1
                visited.add(hash_state(state))
                mf_now = consider_target(state)
                if float(mf_now) >= config.t_activate:
                    probe_adjacent(state)
                if w_i > config.t_inner:
                    break
                if deadline is not None and stats.flips % 256 == 0 \
                        and time.monotonic() >= deadline:
                    break
            # every restart counts toward the outer budget; the visited
            # set and inner counter reset on the next pass
            w_o += 1
            if w_o > config.t_outer:
                break
    except KeyboardInterrupt:
        stats.interrupted = True
    stats.elapsed = time.monotonic() - start
    return SolverResult(config=config, best=best, stats=stats, events=events,
                        metadata=_metadata(config))


def _metadata(config: SolverConfig) -> dict:
    return {
        "n": config.n,
        "partition": list(config.partition),
        "t_inner": config.t_inner,
        "t_outer": config.t_outer,
        "t_activate": config.t_activate,
        "workers": config.workers,
        "seed": config.seed,
        "time_limit": config.time_limit,
        "policy": config.policy,
        "leading": config.leading,
        "rng": "numpy PCG64, SeedSequence(entropy=(seed, worker_id))",
    }


def _worker_entry(args) -> SolverResult:
    config, worker_id = args
    return _run_worker(config, worker_id, on_event=None)


def _merge(config: SolverConfig, results: List[SolverResult]) -> SolverResult:
    best = BestTriple()
    stats = RunStats()
    events: List[dict] = []
    for r in results:
        for attr in ("shorter", "target", "longer"):
            cand = getattr(r.best, attr)
            cur = getattr(best, attr)
            if cand is not None and (cur is None or cand.mf > cur.mf):
                setattr(best, attr, cand)
        stats.restarts += r.stats.restarts
        stats.flips += r.stats.flips
        stats.probes += r.stats.probes
        stats.elapsed = max(stats.elapsed, r.stats.elapsed)
        stats.interrupted = stats.interrupted or r.stats.interrupted
        stats.per_worker.append({
            "restarts": r.stats.restarts,
            "flips": r.stats.flips,
            "probes": r.stats.probes,
            "elapsed": r.stats.elapsed,
        })
        events.extend(r.events)
    return SolverResult(config=config, best=best, stats=stats, events=events,
                        metadata=_metadata(config))


def run(config: SolverConfig,
        on_event: Optional[Callable[[dict], None]] = None) -> SolverResult:
    """Execute the restart search described by `config`.

    With one worker the search runs inline and `on_event` fires on every
    improvement, in a deterministic order for a fixed seed.  With more
    workers the search fans out to processes and events are delivered
    after the merge, grouped by worker.
    """
    config.validate()
    if config.workers == 1:
        result = _run_worker(config, 0, on_event)
        result.stats.per_worker.append({
            "restarts": result.stats.restarts,
            "flips": result.stats.flips,
            "probes": result.stats.probes,
            "elapsed": result.stats.elapsed,
        })
        return result
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        results = list(pool.map(_worker_entry,
                                [(config, w) for w in range(config.workers)]))
    merged = _merge(config, results)
    if on_event is not None:
        for ev in merged.events:
            on_event(ev)
    return merged
