"""Pseudo-skew-symmetric (PSS) sequences and O(n) boundary probes.

A PSS sequence is an even-length sequence that becomes skew-symmetric
after dropping its first or its last element.  Every even-index entry
of its reversed-order sidelobe array is +-1, so its energy decomposes
into a fixed floor plus the odd-index contributions.

Starting from a skew-symmetric B of odd length n with energy E and
reversed-order sidelobes Chat, the four adjacent PSS candidates have
closed-form energies:

    append b (length n+1):   E + n + 2*b*delta,
                             delta = sum_{u even, 0..n-2} Chat_u * b_{u+1}
    drop last (length n-1):  E + n - 3 + 2*b_{n-1}*delta,
                             delta = sum_{u even, 2..n-2} -Chat_u * b_u

Prepend and drop-first follow by applying the same formulas to the
reversal of B (reversal preserves skew-symmetry, correlations and
energy).  All formulas are exact integer identities, validated against
direct recomputation in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import BinarySequence, sidelobes
from .errors import DomainError
from .skew import is_skew_symmetric

DIRECTIONS = ("append-last", "prepend-first", "drop-last", "drop-first")


@dataclass(frozen=True)
class PssProbe:
    """Energy/MF of one PSS sequence adjacent to a skew-symmetric base."""

    direction: str
    sign: int | None
    delta_sum: int
    energy: int
    length: int

    @property
    def merit_factor(self) -> Fraction:
        return Fraction(self.length * self.length, 2 * self.energy)


def is_pseudo_skew_symmetric(seq: BinarySequence) -> bool:
    """True iff dropping the first OR the last element leaves a
    skew-symmetric sequence (forces even length)."""
    n = seq.n
    if n < 2 or n % 2 == 1:
        return False
    e = seq.elements
    prefix = BinarySequence.from_elements(e[:-1])
    if is_skew_symmetric(prefix):
        return True
    suffix = BinarySequence.from_elements(e[1:])
    return is_skew_symmetric(suffix)


def _require_skew(seq: BinarySequence) -> None:
    if not is_skew_symmetric(seq):
        raise DomainError("probe formulas need a skew-symmetric input")


def _arrays(seq: BinarySequence):
    """(correlations by shift, elements) for the closed-form deltas."""
    e = seq.as_array().astype(np.int64)
    n = seq.n
    corr = np.correlate(e, e, mode="full")[n - 1 :]
    return corr, e


def append_delta_arrays(c: np.ndarray, e: np.ndarray, n: int, v: int, sign: int,
                        end: str = "last") -> tuple:
    """(delta, energy) for appending `sign` at `end`, from raw state arrays.

    `c` holds C_u by shift, `e` the elements, `v` the current energy.
    In reversed indexing Chat_u = C_{n-1-u}, so the sum over even
    reversed indices becomes a sum over even shifts s with b_{n-s}
    (or b_{s-1} for the prepend case, via reversal).
    """
    ss = np.arange(2, n, 2)
    if end == "last":
        delta = int(np.sum(c[ss] * e[n - ss]))
    elif end == "first":
        delta = int(np.sum(c[ss] * e[ss - 1]))
    else:
        raise DomainError(f"end must be 'last' or 'first', got {end!r}")
    return delta, v + n + 2 * sign * delta


def truncate_delta_arrays(c: np.ndarray, e: np.ndarray, n: int, v: int,
                          end: str = "last") -> tuple:
    """(delta, energy) for dropping the element at `end`."""
    ss = np.arange(2, n - 2, 2)
    if end == "last":
        delta = -int(np.sum(c[ss] * e[n - 1 - ss]))
        edge = int(e[n - 1])
    elif end == "first":
        delta = -int(np.sum(c[ss] * e[ss]))
        edge = int(e[0])
    else:
        raise DomainError(f"end must be 'last' or 'first', got {end!r}")
    return delta, v + n - 3 + 2 * edge * delta


def append_delta(seq: BinarySequence, sign: int, end: str = "last") -> PssProbe:
    """Probe the PSS sequence obtained by appending `sign` at `end`."""
    if sign not in (-1, 1):
        raise DomainError(f"appended element must be -1 or +1, got {sign!r}")
    _require_skew(seq)
    c, e = _arrays(seq)
    v = int(np.sum(c[1:] ** 2))
    delta, out = append_delta_arrays(c, e, seq.n, v, sign, end)
    direction = "append-last" if end == "last" else "prepend-first"
    return PssProbe(direction=direction, sign=sign, delta_sum=delta,
                    energy=out, length=seq.n + 1)


def truncate_delta(seq: BinarySequence, end: str = "last") -> PssProbe:
    """Probe the PSS sequence obtained by dropping the element at `end`."""
    _require_skew(seq)
    if seq.n < 3:
        raise DomainError("truncation probe needs length >= 3")
    c, e = _arrays(seq)
    v = int(np.sum(c[1:] ** 2))
    delta, out = truncate_delta_arrays(c, e, seq.n, v, end)
    direction = "drop-last" if end == "last" else "drop-first"
    return PssProbe(direction=direction, sign=None, delta_sum=delta,
                    energy=out, length=seq.n - 1)


def probe_neighbors(seq: BinarySequence) -> list:
    """All four boundary probes: append both signs, drop both ends."""
    probes = [append_delta(seq, s) for s in (1, -1)]
    probes += [truncate_delta(seq, end) for end in ("last", "first")]
    return probes


def materialize(seq: BinarySequence, probe: PssProbe) -> BinarySequence:
    """Construct the PSS sequence a probe refers to."""
    n = seq.n
    if probe.direction == "append-last":
        return BinarySequence((seq.bits << 1) | (probe.sign == 1), n + 1)
    if probe.direction == "prepend-first":
        high = (1 << n) if probe.sign == 1 else 0
        return BinarySequence(seq.bits | high, n + 1)
    if probe.direction == "drop-last":
        return BinarySequence(seq.bits >> 1, n - 1)
    if probe.direction == "drop-first":
        return BinarySequence(seq.bits & ((1 << (n - 1)) - 1), n - 1)
    raise DomainError(f"unknown probe direction {probe.direction!r}")


def pss_sidelobe_check(seq: BinarySequence) -> bool:
    """True iff every even-index reversed-order sidelobe is exactly +-1.

    Holds for every PSS sequence; raises if the input is not PSS.
    """
    if not is_pseudo_skew_symmetric(seq):
        raise DomainError("sidelobe check needs a pseudo-skew-symmetric input")
    arr = sidelobes(seq)
    return all(abs(arr[i]) == 1 for i in range(0, len(arr), 2))


def pss_energy_floor(seq: BinarySequence) -> int:
    """Count of even reversed indices: the fixed +-1 energy contribution."""
    if not is_pseudo_skew_symmetric(seq):
        raise DomainError("energy floor needs a pseudo-skew-symmetric input")
    return (seq.n - 1 + 1) // 2


def pss_energy_decomposition(seq: BinarySequence) -> tuple:
    """(floor, odd-index contribution); their sum equals the energy."""
    floor = pss_energy_floor(seq)
    arr = sidelobes(seq)
    odd = sum(arr[i] ** 2 for i in range(1, len(arr), 2))
    return floor, odd
