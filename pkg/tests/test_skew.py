import random
from fractions import Fraction
from itertools import product

import pytest

from labskit.core import BinarySequence, energy, sidelobes
from labskit.errors import DomainError
from labskit.skew import (SkewHalf, SkewSearchState, exhaustive_best, expand,
                          is_skew_symmetric)


def random_half(rnd, l):
    return SkewHalf(tuple(rnd.choice((-1, 1)) for _ in range(l + 1)))


def test_expand_examples():
    assert expand(SkewHalf((1, 1))).elements == (1, 1, -1)
    # positions mirror with alternating sign: half (1,1,1) closes to Barker-5
    assert expand(SkewHalf((1, 1, 1))).elements == (1, 1, 1, -1, 1)
    assert expand(SkewHalf((1,))).elements == (1,)


def test_expand_injective():
    for l in range(0, 7):
        seen = set()
        for half in product((-1, 1), repeat=l + 1):
            seen.add(expand(SkewHalf(half)))
        assert len(seen) == 2 ** (l + 1)


def test_expansions_have_zero_odd_sidelobes():
    rnd = random.Random(21)
    for _ in range(300):
        l = rnd.randrange(1, 30)
        seq = expand(random_half(rnd, l))
        assert is_skew_symmetric(seq)
        arr = sidelobes(seq)
        assert all(arr[i] == 0 for i in range(1, len(arr), 2))


def test_is_skew_symmetric():
    assert is_skew_symmetric(BinarySequence.from_elements([1, 1, -1]))
    assert not is_skew_symmetric(BinarySequence.from_elements([1, 1, 1]))
    assert not is_skew_symmetric(BinarySequence.from_elements([1, 1, -1, 1]))
    assert is_skew_symmetric(BinarySequence.from_text("+++++--++-+-+"))


def test_flip_delta_length_three():
    st = SkewSearchState(SkewHalf((1, 1)))
    assert st.energy == 1
    assert st.flip_delta(0) == 0  # pair flip lands on (-1,+1,+1), energy 1
    assert st.flip_delta(1) == 0  # center flip lands on (+1,-1,-1), energy 1


def test_flip_matches_recompute():
    rnd = random.Random(22)
    for _ in range(300):
        l = rnd.randrange(1, 50)
        st = SkewSearchState(random_half(rnd, l))
        q = rnd.randrange(0, l + 1)
        delta = st.flip_delta(q)
        before = st.energy
        st.apply_flip(q)
        seq = st.sequence()
        assert is_skew_symmetric(seq)
        assert st.energy == energy(seq)
        assert before + delta == st.energy


def test_apply_flip_is_involution():
    rnd = random.Random(23)
    st = SkewSearchState(random_half(rnd, 20))
    snapshot = (st.sequence(), st.energy, tuple(st.c))
    for q in (0, 7, 20):
        st.apply_flip(q)
        st.apply_flip(q)
    assert (st.sequence(), st.energy, tuple(st.c)) == snapshot


def test_state_sidelobes_stay_consistent():
    rnd = random.Random(24)
    st = SkewSearchState(random_half(rnd, 25))
    for _ in range(60):
        st.apply_flip(rnd.randrange(0, 26))
    assert st.sidelobes().values == sidelobes(st.sequence()).values
    assert st.energy == sidelobes(st.sequence()).energy()
    assert st.merit_factor() == Fraction(st.n * st.n, 2 * st.energy)


def test_flip_index_range():
    st = SkewSearchState(SkewHalf((1, 1, -1)))
    with pytest.raises(DomainError):
        st.flip_delta(3)
    with pytest.raises(DomainError):
        st.apply_flip(-1)


def test_state_roundtrip():
    half = SkewHalf((1, -1, -1, 1))
    st = SkewSearchState(half)
    assert st.half() == half
    assert SkewSearchState.from_sequence(st.sequence()).energy == st.energy
    with pytest.raises(DomainError):
        SkewSearchState.from_sequence(BinarySequence.from_elements([1, 1, 1]))


def test_exhaustive_small_optima():
    mf5, w5 = exhaustive_best(5)
    assert mf5 == Fraction(25, 4)
    assert energy(w5) == 2
    mf11, _ = exhaustive_best(11)
    assert mf11 == Fraction(121, 10)
    mf13, w13 = exhaustive_best(13)
    assert mf13 == Fraction(169, 12)
    assert energy(w13) == 6


def test_exhaustive_skew_variant():
    mf, witness = exhaustive_best(13, skew_only=True)
    assert mf == Fraction(169, 12)
    assert is_skew_symmetric(witness)
    # the skew optimum can never beat the full optimum
    for n in (5, 7, 9, 11, 13):
        assert exhaustive_best(n, skew_only=True)[0] <= exhaustive_best(n)[0]


def test_debug_verify_shadow_recompute(monkeypatch):
    import labskit.skew as skew_mod
    monkeypatch.setattr(skew_mod, "DEBUG_VERIFY", True)
    rnd = random.Random(25)
    st = SkewSearchState(random_half(rnd, 15))
    for q in (0, 5, 15, 5):
        st.apply_flip(q)  # raises if the incremental update ever diverges
    assert st.energy == energy(st.sequence())


def test_exhaustive_tiny_lengths():
    mf2, w2 = exhaustive_best(2)
    assert mf2 == Fraction(2, 1) and w2.n == 2
    mf3, w3 = exhaustive_best(3, skew_only=True)
    assert mf3 == Fraction(9, 2)  # Barker-3, E=1
    assert is_skew_symmetric(w3)


def test_exhaustive_caps():
    with pytest.raises(DomainError):
        exhaustive_best(25)
    with pytest.raises(DomainError):
        exhaustive_best(33, skew_only=True)
    with pytest.raises(DomainError):
        exhaustive_best(12, skew_only=True)  # even length
    with pytest.raises(DomainError):
        exhaustive_best(1)
