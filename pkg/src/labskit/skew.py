"""Skew-symmetric sequences: compact halves, incremental search state,
and exhaustive small-length optimization.

A skew-symmetric sequence of odd length n = 2l+1 satisfies

    b_{l+i} = (-1)^i * b_{l-i},   i = 1..l,

so it is determined by its first l+1 elements, and every odd-shift
autocorrelation vanishes.  Energy reduces to the even shifts.

`SkewSearchState` maintains a sequence, its full correlation array and
its energy under paired flips.  Flipping position q < l must also flip
position n-1-q to stay skew-symmetric; the energy delta is computed in
O(n): each even shift u changes only through the at most four products
that involve a flipped endpoint exactly once,

    C_u' = C_u - 2*T_u,
    T_u  = sum of old products b_j*b_{j+u} with exactly one of
           j, j+u in {q, n-1-q},

and the term pairing q with n-1-q itself (u = n-1-2q, both endpoints
flipped) is excluded since it is unchanged.  The center q = l flips a
single bit and is handled the same way with the singleton flip set.
Exactness is enforced against full recomputation in the test suite, and
optionally at runtime via LABSKIT_DEBUG_VERIFY=1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .core import BinarySequence, SidelobeArray, merit_factor
from .errors import DomainError

#: When set (env LABSKIT_DEBUG_VERIFY=1), every apply_flip re-derives the
#: correlation array from scratch and asserts agreement.
DEBUG_VERIFY = os.environ.get("LABSKIT_DEBUG_VERIFY", "") not in ("", "0")

#: Caps for exhaustive_best.
MAX_EXHAUSTIVE_SKEW = 31
MAX_EXHAUSTIVE_FULL = 24


@dataclass(frozen=True)
class SkewHalf:
    """First l+1 elements of a skew-symmetric sequence of length 2l+1."""

    elements: tuple

    def __post_init__(self):
        if len(self.elements) < 1:
            raise DomainError("skew half needs at least one element")
        for e in self.elements:
            if e not in (-1, 1):
                raise DomainError(f"binary element must be -1 or +1, got {e!r}")

    @property
    def l(self) -> int:
        return len(self.elements) - 1

    @property
    def full_length(self) -> int:
        return 2 * self.l + 1


def expand(half: SkewHalf) -> BinarySequence:
    """The full length-(2l+1) sequence determined by the half."""
    l = half.l
    elems = list(half.elements)
    for i in range(1, l + 1):
        elems.append(elems[l - i] if i % 2 == 0 else -elems[l - i])
    return BinarySequence.from_elements(elems)


def is_skew_symmetric(seq: BinarySequence) -> bool:
    n = seq.n
    if n % 2 == 0:
        return False
    l = n // 2
    e = seq.elements
    return all(e[l + i] == (e[l - i] if i % 2 == 0 else -e[l - i]) for i in range(1, l + 1))


def _expanded_array(half: SkewHalf) -> np.ndarray:
    l = half.l
    e = np.empty(2 * l + 1, dtype=np.int64)
    e[: l + 1] = half.elements
    if l:
        i = np.arange(1, l + 1)
        e[l + i] = e[l - i] * (1 - 2 * (i & 1))
    return e


def _pack_half(elements) -> int:
    """Half packed little-endian: bit q set iff element q is +1."""
    bits = 0
    for q, e in enumerate(elements):
        if e == 1:
            bits |= 1 << q
    return bits


class SkewSearchState:
    """Mutable, single-owner state for local search over skew halves.

    Keeps the expanded elements `e`, the correlation array `c`
    (c[u] = C_u, c[0] = n; odd entries identically zero) and the exact
    energy, all updated in O(n) per flip.
    """

    __slots__ = ("n", "l", "e", "c", "energy", "half_bits", "_even_shifts")

    def __init__(self, half: SkewHalf):
        self.l = half.l
        self.n = 2 * self.l + 1
        self.e = _expanded_array(half)
        corr = np.correlate(self.e, self.e, mode="full")
        self.c = corr[self.n - 1 :].astype(np.int64)
        self.energy = int(np.sum(self.c[1:] ** 2))
        self.half_bits = _pack_half(half.elements)
        self._even_shifts = np.arange(2, self.n, 2)

    @classmethod
    def from_half(cls, half: SkewHalf) -> "SkewSearchState":
        return cls(half)

    @classmethod
    def from_sequence(cls, seq: BinarySequence) -> "SkewSearchState":
        if not is_skew_symmetric(seq):
            raise DomainError("sequence is not skew-symmetric")
        return cls(SkewHalf(seq.elements[: seq.n // 2 + 1]))

    def half(self) -> SkewHalf:
        return SkewHalf(tuple(int(x) for x in self.e[: self.l + 1]))

    def sequence(self) -> BinarySequence:
        return BinarySequence.from_elements(int(x) for x in self.e)

    def sidelobes(self) -> SidelobeArray:
        return SidelobeArray(values=tuple(int(x) for x in self.c[:0:-1]), n=self.n)

    def merit_factor(self) -> Fraction:
        return Fraction(self.n * self.n, 2 * self.energy)

    def _flip_terms(self, q: int) -> Tuple[np.ndarray, np.ndarray]:
        """(even shifts, T_u per even shift) for flipping q (and its pair)."""
        n, l, e = self.n, self.l, self.e
        us = self._even_shifts
        t = np.zeros(us.shape[0], dtype=np.int64)
        if q == l:
            m = us <= l
            um = us[m]
            t[m] = e[l] * e[l + um] + e[l - um] * e[l]
        else:
            p = n - 1 - q
            outer = (us <= n - 1 - q) & (us != n - 1 - 2 * q)
            inner = us <= q
            uo = us[outer]
            ui = us[inner]
            to = e[q] * e[q + uo] + e[p - uo] * e[p]
            ti = e[q - ui] * e[q] + e[p] * e[p + ui]
            t[outer] += to
            t[inner] += ti
        return us, t

    def flip_delta(self, q: int) -> int:
        """E(after flip at q) - E(now), exact, without mutating."""
        if not 0 <= q <= self.l:
            raise DomainError(f"flip index {q} out of range [0, {self.l}]")
        us, t = self._flip_terms(q)
        return int(4 * np.sum(t * (t - self.c[us])))

    def apply_flip(self, q: int) -> None:
        """Flip position q (pairing with n-1-q for q < l), in place."""
        if not 0 <= q <= self.l:
            raise DomainError(f"flip index {q} out of range [0, {self.l}]")
        us, t = self._flip_terms(q)
        self.energy += int(4 * np.sum(t * (t - self.c[us])))
        self.c[us] -= 2 * t
        self.e[q] = -self.e[q]
        if q != self.l:
            self.e[self.n - 1 - q] = -self.e[self.n - 1 - q]
        self.half_bits ^= 1 << q
        if DEBUG_VERIFY:
            self._verify()

    def _verify(self) -> None:
        corr = np.correlate(self.e, self.e, mode="full")[self.n - 1 :]
        if not np.array_equal(corr, self.c):
            raise AssertionError("incremental correlations diverged from recompute")
        if self.energy != int(np.sum(corr[1:] ** 2)):
            raise AssertionError("incremental energy diverged from recompute")


# --- exhaustive search -----------------------------------------------------


def _bits_to_pm1(values: np.ndarray, width: int) -> np.ndarray:
    """(B,) uint -> (B, width) +-1 int8, bit width-1 first (MSB = element 0)."""
    shifts = np.arange(width - 1, -1, -1, dtype=np.uint64)
    bits = (values[:, None] >> shifts[None, :]) & 1
    return (2 * bits - 1).astype(np.int8)


def _block_energies(e: np.ndarray) -> np.ndarray:
    """Exact energies for a (B, n) +-1 block."""
    b, n = e.shape
    work = e.astype(np.int64)
    out = np.zeros(b, dtype=np.int64)
    for u in range(1, n):
        c = np.einsum("ij,ij->i", work[:, : n - u], work[:, u:])
        out += c * c
    return out


def exhaustive_best(n: int, skew_only: bool = False) -> Tuple[Fraction, BinarySequence]:
    """Global optimum merit factor over a full or skew-restricted length.

    Full search fixes b_0 = +1 (complementing preserves energy, so one
    representative per complement pair suffices) and scans 2^{n-1}
    sequences; the skew search scans all 2^{l+1} halves.  Deterministic:
    ties resolve to the smallest packed representative.
    """
    if skew_only:
        if n % 2 == 0:
            raise DomainError("skew-symmetric sequences have odd length")
        if not 3 <= n <= MAX_EXHAUSTIVE_SKEW:
            raise DomainError(
                f"skew exhaustive search supports 3 <= n <= {MAX_EXHAUSTIVE_SKEW}, got {n}"
            )
        l = n // 2
        best_e: Optional[int] = None
        best_seq: Optional[BinarySequence] = None
        block = 1 << 14
        total = 1 << (l + 1)
        for start in range(0, total, block):
            vals = np.arange(start, min(start + block, total), dtype=np.uint64)
            halves = _bits_to_pm1(vals, l + 1)
            full = np.empty((halves.shape[0], n), dtype=np.int8)
            full[:, : l + 1] = halves
            if l:
                i = np.arange(1, l + 1)
                full[:, l + i] = halves[:, l - i] * (1 - 2 * (i & 1)).astype(np.int8)
            energies = _block_energies(full)
            idx = int(np.argmin(energies))
            if best_e is None or energies[idx] < best_e:
                best_e = int(energies[idx])
                best_seq = BinarySequence.from_elements(int(x) for x in full[idx])
        return Fraction(n * n, 2 * best_e), best_seq

    if not 2 <= n <= MAX_EXHAUSTIVE_FULL:
        raise DomainError(
            f"full exhaustive search supports 2 <= n <= {MAX_EXHAUSTIVE_FULL}, got {n}"
        )
    best_e = None
    best_seq = None
    block = 1 << 16
    total = 1 << (n - 1)  # b_0 fixed to +1
    top = 1 << (n - 1)
    for start in range(0, total, block):
        vals = np.arange(start, min(start + block, total), dtype=np.uint64)
        e = _bits_to_pm1(vals + top, n)  # +top sets the b_0 = +1 bit
        energies = _block_energies(e)
        idx = int(np.argmin(energies))
        if best_e is None or energies[idx] < best_e:
            best_e = int(energies[idx])
            best_seq = BinarySequence.from_elements(int(x) for x in e[idx])
    return Fraction(n * n, 2 * best_e), best_seq
