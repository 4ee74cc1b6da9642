"""Quantum Shift-And on level DAGs.

Register ``J`` indexes the bit positions of a Shift-And vector: track ``t``
holds, in qubit ``V_i``, bit ``J[t]`` of node ``i``'s vector. Bitwise
operations become gates applied on every track at once. The shift is an
increment of ``J``, which relabels every track; since it moves every node's
vector, it is applied once per level, after all nodes of the level.

Qubit names: ``V{i}``, ``Vp{i}`` (V'), ``R{i}``, ``Rp{i}`` (R'), ``E{i}_{d}``;
registers ``I``, ``J``, ``Q``, ``C``; qubits ``A``, ``B``, ``M`` and the
constant ``ZERO`` standing in for ``R_{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bitvec import make_alphabet
from .errors import ScratchNotClean, StateCorruption, UsageError
from .graph import LevelDag, next_pow2, pad_classical
from .grover import SearchOutcome, run_randomized_search
from .oracle import dp_match
from .qcore import QramArray, TrackTable

PAD_MODES = ("substates", "classical")


def V(i):
    return f"V{i}"


def Vp(i):
    return f"Vp{i}"


def R(i):
    return f"R{i}" if i >= 0 else "ZERO"


def Rp(i):
    return f"Rp{i}"


def E(i, d):
    return f"E{i}_{d}"


@dataclass
class InvariantReport:
    """Tally of checkpoint comparisons against the DP oracle."""

    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        passed, total = self.counts.get(name, (0, 0))
        self.counts[name] = (passed + ok, total + 1)
        if not ok and len(self.failures) < 20:
            self.failures.append(f"{name}: {detail}")

    @property
    def ok(self) -> bool:
        return not self.failures and all(p == t for p, t in self.counts.values())

    def summary(self) -> dict:
        return {k: {"passed": p, "total": t} for k, (p, t) in sorted(self.counts.items())}


class InvariantChecker:
    """Compares the track table with ``dp_match`` at the checkpoints."""

    def __init__(self, g: LevelDag, pattern: tuple):
        self.table = dp_match(g, pattern)[1]
        self.p_len = len(pattern)
        self.report = InvariantReport()

    def node_vector(self, run: GraphRun, i: int) -> None:
        J = run.state["J"]
        v = run.state[V(i)]
        real = J < self.p_len
        want = self.table[i, J[real]]
        got = v[real].astype(bool)
        ok = bool(np.array_equal(got, want))
        self.report.record("invariant1", ok, f"node {i}: tracks say {got.tolist()}, dp says {want.tolist()}")

    def match_flag(self, run: GraphRun, t: int) -> None:
        got = bool(run.state[R(t)].any()) if t >= 0 else False
        want = bool(self.table[: t + 1, self.p_len - 1].any())
        self.report.record("invariant2", got == want, f"after node {t}: R={got}, dp={want}")

    def scratch(self, run: GraphRun, where: str) -> None:
        st = run.state
        self.report.record("scratch_CM", st.is_zero("C") and st.is_zero("M"), f"C/M dirty {where}")

    def delta_form(self, run: GraphRun) -> None:
        self.report.record("delta_AB", run.delta_form_ok(), f"A/B not in delta form after shift {run.shift_count}")


@dataclass
class GraphRun:
    graph: LevelDag
    pattern: tuple
    p_len: int
    state: TrackTable
    qram: dict
    shift_count: int = 0
    checker: InvariantChecker | None = None

    @property
    def m(self) -> int:
        return self.state.n_tracks

    def delta_form_ok(self) -> bool:
        J = self.state["J"]
        return bool(
            np.array_equal(self.state["A"], (J == 0).astype(np.int64))
            and np.array_equal(self.state["B"], (J == self.p_len - 1).astype(np.int64))
        )


def init_graph_run(
    g: LevelDag,
    pattern: Sequence,
    pad_mode: str = "substates",
    check_invariants: bool = False,
    trace=None,
) -> GraphRun:
    """Allocate all qubits, put ``J`` in superposition and set ``A``, ``B``.

    With ``pad_mode="substates"`` the track count is rounded up to a power of
    two and matrix reads on the extra tracks return 1; ``B`` still marks the
    last real pattern position. ``pad_mode="classical"`` first rewrites the
    instance with a sentinel chain.
    """
    pattern = tuple(pattern)
    if len(pattern) < 2:
        raise UsageError("this engine needs |P| >= 2; use a label scan for |P| = 1")
    if pad_mode not in PAD_MODES:
        raise UsageError(f"unknown pad mode {pad_mode!r}")
    if pad_mode == "classical" and len(pattern) & (len(pattern) - 1):
        g, pattern = pad_classical(g, pattern, _pick_sentinel(g, pattern))
    p_len = len(pattern)
    m = next_pow2(p_len)
    sigma = make_alphabet(g.alphabet + pattern)
    rank = {c: r for r, c in enumerate(sigma)}

    matrix = np.zeros((len(sigma), p_len), dtype=np.int64)
    for j, c in enumerate(pattern):
        matrix[rank[c], j] = 1
    qram = {
        "LABEL": QramArray("LABEL", np.array([rank[c] for c in g.labels], dtype=np.int64),
                           width=max(1, len(sigma).bit_length())),
        "MATRIX": QramArray("MATRIX", matrix, pad_value=1),
    }

    jw = m.bit_length() - 1
    iw = max(1, g.n.bit_length())
    st = TrackTable(trace=trace)
    st.declare("I", iw)
    st.declare("Q", max(iw, jw), value=1)
    st.declare("C", qram["LABEL"].width)
    st.declare_many(["A", "B", "M", "ZERO"])
    for i in range(g.n):
        st.declare_many([V(i), Vp(i), R(i), Rp(i)])
        st.declare_many([E(i, d) for d in range(g.in_degree(i))])
    st.hadamard_init("J", jw)
    st.apply_delta_init("J", 0, "A")
    st.apply_delta_init("J", p_len - 1, "B")
    checker = InvariantChecker(g, pattern) if check_invariants else None
    return GraphRun(g, pattern, p_len, st, qram, checker=checker)


def _pick_sentinel(g: LevelDag, pattern: tuple):
    used = set(g.alphabet) | set(pattern)
    for cand in "$#%&@!~^":
        if cand not in used:
            return cand
    return max((c for c in used if isinstance(c, int)), default=-1) + 1


def _load_row(run: GraphRun) -> None:
    st, q = run.state, run.qram
    st.qram_read("I", q["LABEL"], "C")
    st.qram_read(("C", "J"), q["MATRIX"], "M")


def _unload_row(run: GraphRun) -> None:
    st, q = run.state, run.qram
    st.qram_read(("C", "J"), q["MATRIX"], "M")
    st.qram_read("I", q["LABEL"], "C")


def source_nodes_init(run: GraphRun) -> GraphRun:
    """``V_i = M[l(v_i)][j] & delta_{0,j}`` for every level-0 node."""
    st = run.state
    for i in run.graph.levels[0]:
        _load_row(run)
        st.apply_ccx("M", "A", V(i), require_clean=True)
        if run.checker:
            run.checker.node_vector(run, i)
        _unload_row(run)
        st.increment("I", "Q")
        if run.checker:
            run.checker.scratch(run, f"after source {i}")
    return run


def operation_one(run: GraphRun, i: int) -> GraphRun:
    """Load the label row, OR the in-neighbour qubits into ``E_{i,*}`` and
    OR in ``A`` to get ``V'_i``."""
    g, st = run.graph, run.state
    ins = g.in_neighbors[i]
    if not ins:
        raise StateCorruption(f"node {i} at level {g.node_levels[i]} has no in-neighbours")
    for name in [V(i), Vp(i)] + [E(i, d) for d in range(len(ins))]:
        if not st.is_zero(name):
            raise ScratchNotClean(f"{name} not clean before processing node {i}")
    _load_row(run)
    st.apply_cx(V(ins[0]), E(i, 0))
    for d in range(1, len(ins)):
        st.apply_or(V(ins[d]), E(i, d - 1), E(i, d))
    st.apply_or("A", E(i, len(ins) - 1), Vp(i))
    return run


def operation_two(run: GraphRun, i: int) -> GraphRun:
    run.state.apply_ccx("M", Vp(i), V(i), require_clean=True)
    return run


def operation_three(run: GraphRun, i: int) -> GraphRun:
    """``R_i = (V_i & B) | R_{i-1}``."""
    st = run.state
    st.apply_ccx(V(i), "B", Rp(i), require_clean=True)
    st.apply_or(Rp(i), R(i - 1), R(i))
    return run


def increase_i(run: GraphRun) -> GraphRun:
    _unload_row(run)
    run.state.increment("I", "Q")
    return run


def operation_four(run: GraphRun) -> GraphRun:
    """Shift: clear ``A``/``B``, increment ``J`` on every track, re-derive
    ``A``/``B`` from the new ``J`` values."""
    st = run.state
    if not run.delta_form_ok():
        raise StateCorruption("A/B not in delta form before the shift")
    st.apply_delta_toggle("J", 0, "A")
    st.apply_delta_toggle("J", run.p_len - 1, "B")
    st.increment("J", "Q")
    st.apply_delta_init("J", 0, "A")
    st.apply_delta_init("J", run.p_len - 1, "B")
    run.shift_count += 1
    return run


increase_j = operation_four


@dataclass
class SmlgResult:
    answer: bool
    marked: int
    n_tracks: int
    gates_main: int
    search: SearchOutcome
    invariants: InvariantReport | None

    @property
    def gates(self) -> int:
        return self.gates_main + self.search.ops


def run_main_loop(run: GraphRun) -> GraphRun:
    """Everything before the Grover stage."""
    g, ck = run.graph, run.checker
    source_nodes_init(run)
    operation_four(run)
    last = len(g.levels[0]) - 1
    if ck:
        ck.delta_form(run)
        ck.match_flag(run, -1)
    for level in g.levels[1:]:
        for i in level:
            operation_one(run, i)
            operation_two(run, i)
            if ck:
                ck.node_vector(run, i)
            operation_three(run, i)
            increase_i(run)
            if ck:
                ck.scratch(run, f"after node {i}")
            last = i
        operation_four(run)
        if ck:
            ck.delta_form(run)
            ck.match_flag(run, last)
    return run


def run_quantum_smlg(
    g: LevelDag,
    pattern: Sequence,
    c: int = 10,
    seed: int = 0,
    pad_mode: str = "substates",
    k_mode: str = "period",
    doubling: bool = False,
    check_invariants: bool = False,
    trace=None,
) -> SmlgResult:
    """Decide whether ``pattern`` occurs in ``g``; ``yes`` only ever comes
    from a measured marked track, so a ``yes`` is always correct."""
    run = init_graph_run(g, pattern, pad_mode, check_invariants, trace)
    run_main_loop(run)
    final = R(run.graph.n - 1)
    rng = np.random.default_rng(seed)
    out = run_randomized_search(
        run.state, final, c, rng, k_mode=k_mode, pattern_length=run.p_len, doubling=doubling
    )
    return SmlgResult(
        answer=out.found,
        marked=run.state.count_marked(final),
        n_tracks=run.m,
        gates_main=run.state.gates,
        search=out,
        invariants=run.checker.report if run.checker else None,
    )


def marked_nonempty(g: LevelDag, pattern: Sequence, pad_mode: str = "substates") -> bool:
    """Deterministic read-out: does any track end with ``R_{n-1} = 1``?"""
    run = run_main_loop(init_graph_run(g, pattern, pad_mode))
    return run.state.count_marked(R(run.graph.n - 1)) > 0


def label_scan(g: LevelDag, pattern: Sequence) -> bool:
    """Single-symbol patterns: any node carrying the symbol."""
    pattern = tuple(pattern)
    if len(pattern) != 1:
        raise UsageError("label scan handles |P| = 1 only")
    return pattern[0] in g.labels
