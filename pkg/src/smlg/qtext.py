"""Quantum exact matching of a binary pattern in a binary text.

One track per candidate start position. Iteration ``j`` compares ``T[i+j]``
with ``P[j]`` through QRAM reads and folds the result into ``A_j`` with a
Toffoli; Grover then searches for tracks with ``A_{m-1} = 1``.

Windows that run past the end of the text must never match. Reads beyond
the text return 0, which would spuriously equal a 0 in the pattern, so each
track also reads a validity bit (1 inside the text, pad 0 outside) and the
comparison is ANDed with it before reaching ``A_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ScratchNotClean, UsageError
from .graph import next_pow2
from .grover import SearchOutcome, run_randomized_search
from .qcore import QramArray, TrackTable

SCRATCH = ("C_T", "C_P", "C_V", "C_E")


def to_bits(s: Sequence, what: str = "input") -> tuple[int, ...]:
    out = []
    for ch in s:
        if ch in ("0", 0, False):
            out.append(0)
        elif ch in ("1", 1, True):
            out.append(1)
        else:
            raise UsageError(f"{what} is not binary: symbol {ch!r}")
    return tuple(out)


def a_name(j: int) -> str:
    return f"A{j}" if j >= 0 else "A_1"


@dataclass
class TextRun:
    text: tuple
    pattern: tuple
    state: TrackTable
    qram: dict
    j: int = 0

    @property
    def n(self) -> int:
        return len(self.text)

    @property
    def m(self) -> int:
        return len(self.pattern)

    @property
    def padded_n(self) -> int:
        return self.state.n_tracks

    def starts(self) -> np.ndarray:
        return self.state["S"]


def init_text_run(text: Sequence, pattern: Sequence, trace=None) -> TextRun:
    """Prepare the superposition over start positions.

    When ``|T|`` is not a power of two, ``I'`` spans the next power of two
    and ``I`` holds ``i' mod |T|``; the duplicate tracks are harmless.
    """
    T, P = to_bits(text, "text"), to_bits(pattern, "pattern")
    n, m = len(T), len(P)
    if m < 1 or m > n:
        raise UsageError(f"need 1 <= |P| <= |T|, got |P|={m}, |T|={n}")
    padded = next_pow2(n)
    x = padded.bit_length() - 1
    iw = x + 1  # I reaches at most n - 1 + m < 2 * padded, so it never wraps
    jw = max(1, m.bit_length())

    st = TrackTable(trace=trace)
    st.declare("I", iw)
    st.declare("S", iw)
    st.declare("J", jw)
    st.declare("Q", max(iw, jw), value=1)
    st.declare_many(SCRATCH)
    st.declare("A_1", 1, value=1)
    st.declare_many([a_name(j) for j in range(m)])
    st.hadamard_init("IP", x)
    st.apply_function("IP", "I", lambda ip: ip % n, name="MOD")
    st.apply_function("I", "S", lambda i: i, name="COPY")
    qram = {
        "T": QramArray("T", np.array(T), pad_value=0),
        "P": QramArray("P", np.array(P), pad_value=0),
        "VALID": QramArray("VALID", np.ones(n, dtype=np.int64), pad_value=0),
    }
    return TextRun(T, P, st, qram)


def _check_scratch(st: TrackTable) -> None:
    for q in SCRATCH:
        if not st.is_zero(q):
            raise ScratchNotClean(f"scratch qubit {q} dirty at iteration boundary")


def text_iteration(run: TextRun) -> TextRun:
    """Process pattern position ``run.j`` on every track, then advance
    ``I`` and ``J``."""
    st, q = run.state, run.qram
    j = run.j
    if not 0 <= j < run.m:
        raise UsageError(f"iteration {j} outside [0, {run.m})")
    _check_scratch(st)
    compute = [
        ("qram", "I", q["T"], "C_T"),
        ("qram", "J", q["P"], "C_P"),
        ("qram", "I", q["VALID"], "C_V"),
        ("cx", "C_T", "C_P"),
        ("x", "C_P"),
        ("ccx", "C_P", "C_V", "C_E"),
    ]
    for g in compute:
        _apply(st, g)
    st.apply_ccx("C_E", a_name(j - 1), a_name(j), require_clean=True)
    for g in reversed(compute):
        _apply(st, g)
    _check_scratch(st)
    st.increment("I", "Q")
    st.increment("J", "Q")
    run.j += 1
    return run


def _apply(st: TrackTable, g) -> None:
    kind = g[0]
    if kind == "qram":
        st.qram_read(g[1], g[2], g[3])
    elif kind == "cx":
        st.apply_cx(g[1], g[2])
    elif kind == "x":
        st.apply_x(g[1])
    else:
        st.apply_ccx(g[1], g[2], g[3])


@dataclass
class TextResult:
    end: int | None
    search: SearchOutcome
    gates: int
    n_tracks: int

    @property
    def found(self) -> bool:
        return self.end is not None


def run_quantum_text(
    text: Sequence,
    pattern: Sequence,
    c: int = 10,
    seed: int = 0,
    k_mode: str = "period",
    doubling: bool = False,
    trace=None,
) -> TextResult:
    """Find the end position of some occurrence, or ``None``.

    The prepared state does not depend on the round, so it is built once and
    measured up to ``c`` times. A measured track is certified classically
    before its position is reported.
    """
    run = init_text_run(text, pattern, trace=trace)
    for _ in range(run.m):
        text_iteration(run)
    rng = np.random.default_rng(seed)
    out = run_randomized_search(
        run.state, a_name(run.m - 1), c, rng,
        k_mode=k_mode, pattern_length=run.m, doubling=doubling,
    )
    end = None
    if out.found:
        start = int(run.state["S"][out.track])
        if run.text[start : start + run.m] == run.pattern:
            end = start + run.m - 1
    return TextResult(end, out, run.state.gates + out.ops, run.state.n_tracks)
