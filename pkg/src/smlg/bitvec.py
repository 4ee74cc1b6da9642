"""Multi-word bit-vectors and the pattern match matrix.

Bit ``i`` of a vector lives in bit ``i % WORD_BITS`` of word ``i // WORD_BITS``
(LSB-first). Bits at positions ``>= length`` are kept zero after every
operation so vectors compare word-for-word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import UsageError

WORD_BITS = 64
_ONES = np.uint64(0xFFFF_FFFF_FFFF_FFFF)


def _n_words(length: int) -> int:
    return max(1, -(-length // WORD_BITS))


def _tail_mask(length: int) -> np.uint64:
    r = length % WORD_BITS
    if length == 0:
        return np.uint64(0)
    if r == 0:
        return _ONES
    return np.uint64((1 << r) - 1)


class BitVector:
    """Fixed-length bit array backed by ``ceil(length / 64)`` uint64 words."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise UsageError(f"negative bit-vector length {length}")
        self.length = length
        if words is None:
            words = np.zeros(_n_words(length), dtype=np.uint64)
        else:
            words = np.asarray(words, dtype=np.uint64).copy()
            if words.shape != (_n_words(length),):
                raise UsageError("word array does not match length")
        self.words = words
        self._clear_tail()

    @classmethod
    def from_int(cls, value: int, length: int) -> BitVector:
        if value < 0:
            raise UsageError("bit-vectors hold non-negative integers")
        value &= (1 << length) - 1
        words = [(value >> (WORD_BITS * k)) & int(_ONES) for k in range(_n_words(length))]
        return cls(length, np.array(words, dtype=np.uint64))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        """Build from an LSB-first sequence of 0/1 values."""
        bits = list(bits)
        bv = cls(len(bits))
        for i, b in enumerate(bits):
            if b:
                bv.set_bit(i)
        return bv

    @classmethod
    def ones(cls, length: int) -> BitVector:
        return cls(length, np.full(_n_words(length), _ONES, dtype=np.uint64))

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length)

    def _clear_tail(self) -> None:
        self.words[-1] &= _tail_mask(self.length)
        if self.length == 0:
            self.words[:] = 0

    def _check_same(self, other: BitVector) -> None:
        if self.length != other.length:
            raise UsageError(
                f"bit-vector length mismatch: {self.length} vs {other.length}"
            )

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.length:
            raise UsageError(f"bit index {i} outside [0, {self.length})")

    # -- accessors ---------------------------------------------------------

    def get_bit(self, i: int) -> int:
        self._check_index(i)
        return int((self.words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & np.uint64(1))

    def set_bit(self, i: int, value: int = 1) -> None:
        """Mutate bit ``i`` in place."""
        self._check_index(i)
        mask = np.uint64(1 << (i % WORD_BITS))
        if value:
            self.words[i // WORD_BITS] |= mask
        else:
            self.words[i // WORD_BITS] &= ~mask

    def to_int(self) -> int:
        return sum(int(w) << (WORD_BITS * k) for k, w in enumerate(self.words))

    def to_bits(self) -> list[int]:
        v = self.to_int()
        return [(v >> i) & 1 for i in range(self.length)]

    def count(self) -> int:
        return self.to_int().bit_count()

    def any(self) -> bool:
        return bool(self.words.any())

    def copy(self) -> BitVector:
        return BitVector(self.length, self.words)

    # -- algebra -----------------------------------------------------------

    def __and__(self, other: BitVector) -> BitVector:
        self._check_same(other)
        return BitVector(self.length, self.words & other.words)

    def __or__(self, other: BitVector) -> BitVector:
        self._check_same(other)
        return BitVector(self.length, self.words | other.words)

    def __xor__(self, other: BitVector) -> BitVector:
        self._check_same(other)
        return BitVector(self.length, self.words ^ other.words)

    def __invert__(self) -> BitVector:
        return BitVector(self.length, ~self.words)

    def __lshift__(self, k: int) -> BitVector:
        return shl(self, k)

    def __rshift__(self, k: int) -> BitVector:
        return shr(self, k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.to_int()))

    def __repr__(self) -> str:
        # most significant bit first, as bit-vectors are usually drawn
        s = "".join(str(b) for b in reversed(self.to_bits()))
        return f"BitVector({self.length}, 0b{s or '0'})"


def bv_and(a: BitVector, b: BitVector) -> BitVector:
    return a & b


def bv_or(a: BitVector, b: BitVector) -> BitVector:
    return a | b


def bv_not(a: BitVector) -> BitVector:
    return ~a


def _check_shift(a: BitVector, k: int) -> None:
    if not 0 <= k <= a.length:
        raise UsageError(f"shift amount {k} outside [0, {a.length}]")


def shl(a: BitVector, k: int) -> BitVector:
    """Move bit ``i`` to ``i + k``; bits pushed past the end are dropped."""
    _check_shift(a, k)
    q, r = divmod(k, WORD_BITS)
    n = len(a.words)
    out = np.zeros(n, dtype=np.uint64)
    if q < n:
        src = a.words[: n - q]
        if r == 0:
            out[q:] = src
        else:
            out[q:] = src << np.uint64(r)
            out[q + 1 :] |= src[:-1] >> np.uint64(WORD_BITS - r)
    return BitVector(a.length, out)


def shr(a: BitVector, k: int) -> BitVector:
    """Move bit ``i + k`` to ``i``; vacated high bits become 0."""
    _check_shift(a, k)
    q, r = divmod(k, WORD_BITS)
    n = len(a.words)
    out = np.zeros(n, dtype=np.uint64)
    if q < n:
        src = a.words[q:]
        if r == 0:
            out[: n - q] = src
        else:
            out[: n - q] = src >> np.uint64(r)
            out[: n - q - 1] |= src[1:] << np.uint64(WORD_BITS - r)
    return BitVector(a.length, out)


def label_sort_key(label: Hashable):
    """Total order over mixed str/int labels (ints first)."""
    return (isinstance(label, str), label)


def make_alphabet(symbols: Iterable[Hashable]) -> tuple:
    return tuple(sorted(set(symbols), key=label_sort_key))


@dataclass(frozen=True)
class MatchMatrix:
    """Column per symbol: bit ``j`` of ``columns[c]`` is set iff ``P[j] == c``."""

    pattern: tuple
    alphabet: tuple
    columns: dict

    @property
    def pattern_length(self) -> int:
        return len(self.pattern)

    def column(self, symbol) -> BitVector:
        try:
            return self.columns[symbol]
        except KeyError:
            raise UsageError(f"symbol {symbol!r} not in alphabet") from None

    def entry(self, j: int, symbol) -> int:
        return self.column(symbol).get_bit(j)

    def as_array(self) -> np.ndarray:
        """Dense ``|alphabet| x m`` uint8 table, rows in alphabet order."""
        out = np.zeros((len(self.alphabet), len(self.pattern)), dtype=np.uint8)
        for r, c in enumerate(self.alphabet):
            out[r] = self.columns[c].to_bits()
        return out


def build_match_matrix(pattern: Sequence, alphabet: Iterable | None = None) -> MatchMatrix:
    """Build the |P| x |alphabet| match table.

    ``alphabet`` may be any iterable of labels or a ``range`` for integer
    alphabets; it defaults to the symbols of ``pattern``.
    """
    pattern = tuple(pattern)
    if not pattern:
        raise UsageError("pattern must be non-empty")
    alphabet = make_alphabet(pattern if alphabet is None else alphabet)
    known = set(alphabet)
    for j, c in enumerate(pattern):
        if c not in known:
            raise UsageError(f"pattern symbol {c!r} at {j} not in alphabet")
    m = len(pattern)
    columns = {c: BitVector(m) for c in alphabet}
    for j, c in enumerate(pattern):
        columns[c].set_bit(j)
    return MatchMatrix(pattern, alphabet, columns)
