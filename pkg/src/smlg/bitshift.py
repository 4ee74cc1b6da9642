"""Classical Shift-And on text and on level DAGs."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .bitvec import BitVector, build_match_matrix, make_alphabet, shl
from .errors import UsageError
from .graph import LevelDag


def _set_bit0(b: BitVector) -> BitVector:
    # "B <- B + 1": bit 0 is always clear here, so +1 and set-bit-0 coincide
    assert b.get_bit(0) == 0
    out = b.copy()
    out.set_bit(0)
    return out


def shift_and_text(
    text: Sequence, pattern: Sequence, alphabet=None, first_only: bool = False
) -> list[int]:
    """End positions ``i`` with ``text[i-m+1..i] == pattern``.

    Raises:
        UsageError: a symbol of text or pattern is outside ``alphabet``.
    """
    text, pattern = tuple(text), tuple(pattern)
    if not pattern:
        raise UsageError("pattern must be non-empty")
    sigma = make_alphabet(text + pattern) if alphabet is None else make_alphabet(alphabet)
    known = set(sigma)
    for c in text:
        if c not in known:
            raise UsageError(f"text symbol {c!r} not in alphabet")
    mm = build_match_matrix(pattern, sigma)
    m = len(pattern)
    b = BitVector(m)
    ends = []
    for i, c in enumerate(text):
        b = _set_bit0(b)
        b = b & mm.column(c)
        if b.get_bit(m - 1):
            ends.append(i)
            if first_only:
                break
        b = shl(b, 1)
    return ends


def shift_and_level_dag(g: LevelDag, pattern: Sequence, record: bool = False):
    """Shift-And generalized to a level DAG.

    Nodes are processed in index order; each node ORs the (already shifted)
    vectors of its in-neighbours, sets bit 0, ANDs the match column of its
    label and then shifts its own vector. Returns ``found`` or, with
    ``record``, ``(found, table)`` where ``table[i, j]`` is bit ``j`` of node
    ``i``'s vector before its shift.
    """
    pattern = tuple(pattern)
    if not pattern:
        raise UsageError("pattern must be non-empty")
    m = len(pattern)
    mm = build_match_matrix(pattern, make_alphabet(g.alphabet + pattern))
    shifted: list[BitVector] = []
    table = np.zeros((g.n, m), dtype=bool) if record else None
    found = False
    for i in range(g.n):
        b = BitVector(m)
        for k in g.in_neighbors[i]:
            b = b | shifted[k]
        b = _set_bit0(b)
        b = b & mm.column(g.labels[i])
        if b.get_bit(m - 1):
            found = True
            if not record:
                return True
        if record:
            table[i] = b.to_bits()
        shifted.append(shl(b, 1))
    return (found, table) if record else found
