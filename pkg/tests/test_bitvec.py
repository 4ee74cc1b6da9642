import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smlg.bitvec import BitVector, WORD_BITS, bv_and, bv_not, bv_or, build_match_matrix, shl, shr
from smlg.errors import UsageError


def bv(bits: str) -> BitVector:
    """Vector from an MSB-first bit string, as bit-vectors are written."""
    return BitVector.from_int(int(bits, 2), len(bits))


# per-bit reference on python ints
def ref_shl(v, k, m):
    return [(v >> (i - k)) & 1 if i - k >= 0 else 0 for i in range(m)]


def ref_shr(v, k, m):
    return [(v >> (i + k)) & 1 if i + k < m else 0 for i in range(m)]


def test_and_examples():
    assert bv_and(bv("1010"), bv("1100")) == bv("1000")
    x = bv("0110")
    assert x & BitVector.ones(4) == x
    assert (x & BitVector.zeros(4)) == BitVector.zeros(4)


def test_shift_and_not_examples():
    assert shl(bv("0101"), 1) == bv("1010")
    assert shl(bv("1000"), 1) == bv("0000")
    assert bv_not(bv("0011")) == bv("1100")


def test_length_mismatch_is_usage_error():
    with pytest.raises(UsageError):
        bv_or(BitVector(3), BitVector(4))


@pytest.mark.parametrize("k", [-1, 5])
def test_shift_out_of_range(k):
    with pytest.raises(UsageError):
        shl(BitVector(4), k)
    with pytest.raises(UsageError):
        shr(BitVector(4), k)


def test_get_set_bit_bounds():
    b = BitVector(3)
    b.set_bit(2)
    assert b.get_bit(2) == 1 and b.to_int() == 4
    with pytest.raises(UsageError):
        b.get_bit(3)


@pytest.mark.parametrize("m", range(1, 17))
def test_unary_ops_exhaustive(m):
    mask = (1 << m) - 1
    ks = sorted({1, m // 2, m})
    for v in range(1 << m):
        a = BitVector.from_int(v, m)
        assert (~a).to_int() == ~v & mask
        for k in ks:
            assert shl(a, k).to_int() == (v << k) & mask
            assert shr(a, k).to_int() == v >> k


@pytest.mark.parametrize("m", [1, 5, 8])
def test_shifts_against_per_bit_reference(m):
    for v in range(1 << m):
        a = BitVector.from_int(v, m)
        for k in range(m + 1):
            assert shl(a, k).to_bits() == ref_shl(v, k, m)
            assert shr(a, k).to_bits() == ref_shr(v, k, m)


@pytest.mark.parametrize("m", range(1, 8))
def test_binary_ops_exhaustive(m):
    for u, v in itertools.product(range(1 << m), repeat=2):
        a, b = BitVector.from_int(u, m), BitVector.from_int(v, m)
        assert (a & b).to_int() == u & v
        assert (a | b).to_int() == u | v


vectors = st.integers(1, 3 * WORD_BITS).flatmap(
    lambda m: st.tuples(st.just(m), st.integers(0, (1 << m) - 1), st.integers(0, (1 << m) - 1), st.integers(0, m))
)


@given(vectors)
@settings(max_examples=400)
def test_multiword_matches_reference(case):
    m, u, v, k = case
    mask = (1 << m) - 1
    a, b = BitVector.from_int(u, m), BitVector.from_int(v, m)
    assert (a & b).to_int() == u & v
    assert (a | b).to_int() == u | v
    assert (~a).to_int() == ~u & mask
    assert shl(a, k).to_int() == (u << k) & mask
    assert shr(a, k).to_int() == u >> k
    # tail bits stay zero in the backing words
    for r in (~a, shl(a, k), a | b):
        assert r.to_int() <= mask
        assert r.length == m


@given(vectors)
def test_shift_round_trip_never_invents_bits(case):
    m, u, _, k = case
    x = BitVector.from_int(u, m)
    y = shl(shr(x, k), k)
    assert (y & x) == y


def test_match_matrix_examples():
    mm = build_match_matrix("aba", "ab")
    assert mm.column("a") == bv("101") and mm.column("b") == bv("010")
    mm = build_match_matrix("aa", "ab")
    assert mm.column("a") == bv("11") and mm.column("b") == bv("00")
    mm = build_match_matrix("b", "ab")
    assert mm.column("a") == bv("0") and mm.column("b") == bv("1")


def test_match_matrix_errors():
    with pytest.raises(UsageError):
        build_match_matrix("abc", "ab")
    with pytest.raises(UsageError):
        build_match_matrix("", "ab")


def test_match_matrix_integer_alphabet():
    mm = build_match_matrix([3, 0, 3], range(5))
    assert mm.alphabet == (0, 1, 2, 3, 4)
    assert mm.column(3).to_bits() == [1, 0, 1]
    assert mm.as_array().sum() == 3


@given(st.text(alphabet="abcd", min_size=1, max_size=150))
def test_match_matrix_columns_partition(p):
    mm = build_match_matrix(p, "abcd")
    acc = BitVector.zeros(len(p))
    for c in mm.alphabet:
        assert (acc & mm.column(c)).count() == 0
        acc = acc | mm.column(c)
    assert acc == BitVector.ones(len(p))
    assert np.all(mm.as_array().sum(axis=0) == 1)
