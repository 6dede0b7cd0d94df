"""Scalar reference implementations used as oracles in tests.

Deliberately naive O(n^2) sums over +-1/0 element lists, independent of
the bit-packed kernels in `labskit.core`.
"""

from __future__ import annotations

from typing import Sequence


def ref_autocorrelation(elements: Sequence[int], u: int) -> int:
    n = len(elements)
    return sum(elements[j] * elements[j + u] for j in range(n - u))


def ref_sidelobes(elements: Sequence[int]) -> list:
    """[C_{n-1}, ..., C_1] (reversed indexing, mainlobe excluded)."""
    n = len(elements)
    return [ref_autocorrelation(elements, n - 1 - i) for i in range(n - 1)]


def ref_energy(elements: Sequence[int]) -> int:
    n = len(elements)
    return sum(ref_autocorrelation(elements, u) ** 2 for u in range(1, n))
