"""Node-labeled level DAGs: validation, .ldag I/O and instance transforms."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .bitvec import label_sort_key, make_alphabet
from .errors import NotADag, NotLevelDag, ParseError, UsageError

Label = Hashable


@dataclass(frozen=True)
class LevelDag:
    """A validated level DAG.

    Nodes are indexed ``0..n-1`` grouped by level (level 0 first), which is
    also a topological order. ``in_neighbors[i]`` lists the in-neighbours of
    node ``i`` in ascending index order, so ``in_neighbors[i][d]`` is the
    d-th in-neighbour.
    """

    labels: tuple
    node_levels: tuple
    in_neighbors: tuple
    alphabet: tuple = field(compare=False)
    levels: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n_levels = (max(self.node_levels) + 1) if self.node_levels else 0
        buckets: list[list[int]] = [[] for _ in range(n_levels)]
        for i, lv in enumerate(self.node_levels):
            buckets[lv].append(i)
        object.__setattr__(self, "levels", tuple(tuple(b) for b in buckets))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def n_edges(self) -> int:
        return sum(len(ins) for ins in self.in_neighbors)

    def edges(self) -> list[tuple[int, int]]:
        return [(k, i) for i, ins in enumerate(self.in_neighbors) for k in ins]

    def in_degree(self, i: int) -> int:
        return len(self.in_neighbors[i])

    def out_neighbors(self) -> list[list[int]]:
        outs: list[list[int]] = [[] for _ in range(self.n)]
        for k, i in self.edges():
            outs[k].append(i)
        return outs


def in_neighbor(g: LevelDag, i: int, d: int) -> int:
    """Index of the d-th in-neighbour of node ``i``."""
    if not 0 <= i < g.n:
        raise UsageError(f"node {i} out of range")
    ins = g.in_neighbors[i]
    if not 0 <= d < len(ins):
        raise UsageError(f"node {i} has in-degree {len(ins)}; rank {d} out of range")
    return ins[d]


def validate_levels(
    labels: Sequence[Label],
    edges: Iterable[tuple[int, int]],
    alphabet: Iterable[Label] | None = None,
) -> tuple[LevelDag, list[int]]:
    """Level a raw labeled graph and reindex it level-contiguously.

    Sources get level 0; every edge must then advance exactly one level.
    Returns the validated graph and ``new_index`` mapping each raw node id to
    its index in the returned graph (stable within a level).

    Raises:
        NotADag: the edge set has a cycle.
        NotLevelDag: some edge does not advance exactly one level.
    """
    n = len(labels)
    edges = list(edges)
    ins: list[set[int]] = [set() for _ in range(n)]
    outs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise UsageError(f"edge ({u}, {v}) references an unknown node")
        if u == v:
            raise NotADag(f"self-loop on node {u}")
        if u in ins[v]:
            continue
        ins[v].add(u)
        outs[u].append(v)

    indeg = [len(s) for s in ins]
    level = [0 if indeg[v] == 0 else -1 for v in range(n)]
    queue = deque(v for v in range(n) if indeg[v] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in outs[u]:
            want = level[u] + 1
            if level[v] == -1:
                level[v] = want
            elif level[v] != want:
                raise NotLevelDag(
                    f"node {v} reached at levels {level[v]} and {want}"
                )
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if seen != n:
        raise NotADag("graph has a cycle")
    # edge-local check; redundant with the above on acyclic graphs but cheap
    for u, v in edges:
        if level[v] != level[u] + 1:
            raise NotLevelDag(f"edge ({u}, {v}) spans levels {level[u]}->{level[v]}")

    order = sorted(range(n), key=lambda v: (level[v], v))
    new_index = [0] * n
    for new, old in enumerate(order):
        new_index[old] = new
    new_ins = [tuple(sorted(new_index[u] for u in ins[old])) for old in order]
    sigma = make_alphabet(list(labels) + list(alphabet or ()))
    g = LevelDag(
        labels=tuple(labels[old] for old in order),
        node_levels=tuple(level[old] for old in order),
        in_neighbors=tuple(new_ins),
        alphabet=sigma,
    )
    return g, new_index


def build_level_dag(labels, edges, alphabet=None) -> LevelDag:
    return validate_levels(labels, edges, alphabet)[0]


def chain(labels: Sequence[Label]) -> LevelDag:
    return build_level_dag(list(labels), [(i, i + 1) for i in range(len(labels) - 1)])


def from_degenerate_string(segments: Sequence[Iterable[Label]]) -> LevelDag:
    """Level ``l`` holds one node per symbol of ``segments[l]``, fully
    connected to level ``l + 1``."""
    labels: list[Label] = []
    edges: list[tuple[int, int]] = []
    prev: list[int] = []
    for l, seg in enumerate(segments):
        seg = sorted(set(seg), key=label_sort_key)
        if not seg:
            raise UsageError(f"segment {l} is empty")
        cur = list(range(len(labels), len(labels) + len(seg)))
        labels.extend(seg)
        edges.extend((u, v) for u in prev for v in cur)
        prev = cur
    return build_level_dag(labels, edges)


def next_pow2(x: int) -> int:
    return 1 if x <= 1 else 1 << (x - 1).bit_length()


def pad_classical(g: LevelDag, pattern: Sequence[Label], sentinel: Label = "$"):
    """Reduce to a power-of-two pattern length with a sentinel chain.

    The pattern is padded with ``sentinel`` up to the next power of two. For
    every level ``l`` a sentinel node is added one level below it, fed by all
    nodes of level ``l``; these nodes are chained and followed by a further
    chain of ``len(pattern)`` sentinel nodes. Returns ``(g2, pattern2)``.
    """
    pattern = tuple(pattern)
    if len(pattern) < 2:
        raise UsageError("padding needs |P| >= 2")
    if sentinel in g.alphabet or sentinel in pattern:
        raise UsageError(f"sentinel {sentinel!r} already in the alphabet")
    m2 = next_pow2(len(pattern))
    padded = pattern + (sentinel,) * (m2 - len(pattern))

    labels = list(g.labels)
    edges = g.edges()
    prev_pad = None
    for level_nodes in g.levels:
        s = len(labels)
        labels.append(sentinel)
        edges.extend((u, s) for u in level_nodes)
        if prev_pad is not None:
            edges.append((prev_pad, s))
        prev_pad = s
    for _ in range(len(pattern)):
        s = len(labels)
        labels.append(sentinel)
        if prev_pad is not None:
            edges.append((prev_pad, s))
        prev_pad = s
    g2 = build_level_dag(labels, edges, g.alphabet + (sentinel,))
    return g2, padded


def encode_binary(g: LevelDag, pattern: Sequence[Label]):
    """Replace each node by a chain of ``w = ceil(log2 |alphabet|)`` bit nodes.

    Labels are encoded by their rank in the alphabet, most significant bit
    first. Every occurrence of ``pattern`` maps to an occurrence of the
    encoded pattern, but for ``w > 1`` the encoded graph can also contain
    occurrences that start mid-chain; callers must filter those by level
    (``level % w == 0`` at the start node). Returns ``(g2, pattern2, w)``.
    """
    sigma = g.alphabet
    rank = {c: r for r, c in enumerate(sigma)}
    for c in pattern:
        if c not in rank:
            raise UsageError(f"pattern symbol {c!r} not in graph alphabet")
    w = max(1, math.ceil(math.log2(len(sigma)))) if len(sigma) > 1 else 1

    def code(c) -> list[str]:
        r = rank[c]
        return [str((r >> (w - 1 - b)) & 1) for b in range(w)]

    labels: list[Label] = []
    head, tail = [], []
    edges: list[tuple[int, int]] = []
    for c in g.labels:
        bits = code(c)
        first = len(labels)
        labels.extend(bits)
        edges.extend((first + b, first + b + 1) for b in range(w - 1))
        head.append(first)
        tail.append(first + w - 1)
    edges.extend((tail[k], head[i]) for k, i in g.edges())
    g2 = build_level_dag(labels, edges, ("0", "1"))
    p2 = tuple(b for c in pattern for b in code(c))
    return g2, p2, w


# -- .ldag text format -----------------------------------------------------


def format_label(label: Label) -> str:
    if isinstance(label, int):
        return f"int:{label}"
    if not (isinstance(label, str) and len(label) == 1 and label.isprintable() and not label.isspace()):
        raise UsageError(f"label {label!r} is not representable in .ldag")
    return label


def parse_label(tok: str) -> Label:
    if tok.startswith("int:") and len(tok) > 4:
        try:
            return int(tok[4:])
        except ValueError:
            raise UsageError(f"bad integer label {tok!r}") from None
    if len(tok) != 1 or not tok.isprintable() or tok.isspace():
        raise UsageError(f"bad label {tok!r}")
    return tok


def serialize_ldag(g: LevelDag) -> str:
    lines = [f"ldag {g.n} {g.n_edges} {g.n_levels}"]
    for i, (lab, lv) in enumerate(zip(g.labels, g.node_levels)):
        lines.append(f"node {i} {lv} {format_label(lab)}")
    for u, v in sorted(g.edges()):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


def parse_ldag(text: str) -> LevelDag:
    """Parse .ldag text. Errors carry the 1-based line number."""
    header = None
    labels: list[Label] = []
    declared_levels: list[int] = []
    edges: list[tuple[int, int]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        kind = toks[0]
        try:
            if header is None:
                if kind != "ldag" or len(toks) != 4:
                    raise ParseError("expected header 'ldag <n> <e> <L>'", lineno)
                header = tuple(int(t) for t in toks[1:])
                if min(header) < 0:
                    raise ParseError("negative count in header", lineno)
            elif kind == "node":
                if len(toks) != 4:
                    raise ParseError("expected 'node <id> <level> <label>'", lineno)
                nid, lv = int(toks[1]), int(toks[2])
                if nid < len(labels):
                    raise ParseError(f"duplicate node id {nid}", lineno)
                if nid != len(labels):
                    raise ParseError(f"node ids must be consecutive; got {nid}", lineno)
                if edges:
                    raise ParseError("node line after edge lines", lineno)
                if declared_levels and lv < declared_levels[-1]:
                    raise ParseError("nodes must be grouped by ascending level", lineno)
                labels.append(parse_label(toks[3]))
                declared_levels.append(lv)
            elif kind == "edge":
                if len(toks) != 3:
                    raise ParseError("expected 'edge <src> <dst>'", lineno)
                u, v = int(toks[1]), int(toks[2])
                for x in (u, v):
                    if not 0 <= x < header[0]:
                        raise ParseError(f"edge references unknown node {x}", lineno)
                edges.append((u, v))
            else:
                raise ParseError(f"unknown record {kind!r}", lineno)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if header is None:
        raise ParseError("empty input", last_line or 1)
    n, e, n_lev = header
    if len(labels) != n:
        raise ParseError(f"header declares {n} nodes, found {len(labels)}", last_line)
    if len(edges) != e:
        raise ParseError(f"header declares {e} edges, found {len(edges)}", last_line)
    g, new_index = validate_levels(labels, edges)
    if new_index != list(range(n)):
        raise ParseError("node ids are not level-contiguous", last_line)
    if list(g.node_levels) != declared_levels:
        raise ParseError("declared node levels disagree with the edge structure", last_line)
    if g.n_levels != n_lev:
        raise ParseError(f"header declares {n_lev} levels, graph has {g.n_levels}", last_line)
    return g


def parse_pattern_line(line: str) -> tuple:
    line = line.strip()
    if "int:" in line:
        return tuple(parse_label(t) for t in line.split())
    return tuple(parse_label(ch) for ch in line if not ch.isspace())


def format_pattern(pattern: Sequence[Label]) -> str:
    if any(isinstance(c, int) for c in pattern):
        return " ".join(format_label(c) for c in pattern)
    return "".join(format_label(c) for c in pattern)


def parse_patterns(text: str) -> list[tuple]:
    out = []
    for raw in text.splitlines():
        if raw.strip() and not raw.lstrip().startswith("#"):
            out.append(parse_pattern_line(raw))
    return out
