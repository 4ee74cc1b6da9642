"""Ground-truth matchers and seeded instance generators."""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GenerationError, UsageError
from .graph import LevelDag, build_level_dag

MAX_ENUM_NODES = 12
PLANT_RETRIES = 1000


def naive_text_match(text: Sequence, pattern: Sequence) -> list[int]:
    """All end positions of ``pattern`` in ``text`` by direct comparison."""
    text, pattern = tuple(text), tuple(pattern)
    m = len(pattern)
    return [i + m - 1 for i in range(len(text) - m + 1) if text[i : i + m] == pattern]


def dp_match(g: LevelDag, pattern: Sequence):
    """``(found, table)`` with ``table[i, j]`` true iff ``P[0..j]`` spells a
    path ending at node ``i``."""
    pattern = tuple(pattern)
    m = len(pattern)
    if m < 1:
        raise UsageError("pattern must be non-empty")
    table = np.zeros((g.n, m), dtype=bool)
    for i in range(g.n):
        lab = g.labels[i]
        ins = g.in_neighbors[i]
        for j in range(m):
            if pattern[j] != lab:
                continue
            table[i, j] = j == 0 or any(table[k, j - 1] for k in ins)
    return bool(table[:, m - 1].any()), table


def enumerate_paths_match(g: LevelDag, pattern: Sequence) -> bool:
    """Try every path of ``len(pattern)`` nodes; only for tiny graphs."""
    if g.n > MAX_ENUM_NODES:
        raise UsageError(f"path enumeration limited to {MAX_ENUM_NODES} nodes")
    pattern = tuple(pattern)
    outs = g.out_neighbors()
    m = len(pattern)

    def walk(v, path):
        path.append(g.labels[v])
        try:
            if len(path) == m:
                return tuple(path) == pattern
            return any(walk(w, path) for w in outs[v])
        finally:
            path.pop()

    return any(walk(v, []) for v in range(g.n))


@dataclass(frozen=True)
class GenParams:
    n_nodes: int
    n_levels: int
    density: float = 0.3
    alphabet_size: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n_levels < 2:
            raise UsageError("need at least 2 levels")
        if self.n_nodes < self.n_levels:
            raise UsageError("need at least one node per level")
        if not 0 <= self.density <= 1:
            raise UsageError("density must lie in [0, 1]")
        if self.alphabet_size < 1:
            raise UsageError("alphabet must be non-empty")


def alphabet_of_size(k: int) -> tuple:
    if k <= 26:
        return tuple(string.ascii_lowercase[:k])
    return tuple(range(k))


def gen_level_dag(params: GenParams) -> LevelDag:
    """Random level DAG; each non-source node has an in-edge from the
    previous level plus extra edges with probability ``density``."""
    rng = np.random.default_rng(params.seed)
    L = params.n_levels
    sizes = np.ones(L, dtype=int)
    np.add.at(sizes, rng.integers(0, L, params.n_nodes - L), 1)
    sigma = alphabet_of_size(params.alphabet_size)
    labels = [sigma[int(x)] for x in rng.integers(0, len(sigma), params.n_nodes)]
    starts = np.concatenate([[0], np.cumsum(sizes)])
    edges = []
    for l in range(1, L):
        prev = range(starts[l - 1], starts[l])
        for v in range(starts[l], starts[l + 1]):
            anchor = int(rng.integers(prev.start, prev.stop))
            for u in prev:
                if u == anchor or rng.random() < params.density:
                    edges.append((u, v))
    return build_level_dag(labels, edges, sigma)


def gen_pattern(g: LevelDag, length: int, planted: bool, seed: int) -> tuple:
    """Pattern guaranteed to occur (``planted``) or to be absent from ``g``.

    Raises:
        GenerationError: no valid pattern could be produced.
    """
    rng = np.random.default_rng(seed)
    if length < 1:
        raise UsageError("pattern length must be >= 1")
    if planted:
        ends = [v for v in range(g.n) if g.node_levels[v] >= length - 1]
        if not ends:
            raise GenerationError(f"no path of {length} nodes in a {g.n_levels}-level graph")
        v = ends[int(rng.integers(len(ends)))]
        path = [v]
        for _ in range(length - 1):
            ins = g.in_neighbors[path[-1]]
            path.append(ins[int(rng.integers(len(ins)))])
        return tuple(g.labels[u] for u in reversed(path))
    sigma = g.alphabet
    for _ in range(PLANT_RETRIES):
        p = tuple(sigma[int(x)] for x in rng.integers(0, len(sigma), length))
        if not dp_match(g, p)[0]:
            return p
    raise GenerationError(f"no absent pattern of length {length} after {PLANT_RETRIES} tries")


@dataclass(frozen=True)
class Instance:
    id: str
    graph: LevelDag
    pattern: tuple
    planted: bool
    seed: int


def gen_instance(seed: int, max_nodes: int = 24, max_m: int = 8, planted: bool | None = None,
                 alphabet_size: int | None = None) -> Instance:
    """One random corpus instance, fully determined by ``seed``."""
    rng = np.random.default_rng([seed, 0x5EED])
    m = int(rng.integers(2, max_m + 1))
    if planted is None:
        planted = bool(rng.integers(2))
    n_levels = int(rng.integers(max(2, m - 1), min(max_nodes, m + 4) + 1))
    if planted:
        n_levels = max(n_levels, m)
    n_levels = min(n_levels, max_nodes)
    n_nodes = int(rng.integers(n_levels, max_nodes + 1))
    sigma = alphabet_size or int(rng.integers(1, 5))
    if not planted:
        sigma = max(sigma, 2)
    params = GenParams(n_nodes, n_levels, float(rng.uniform(0.0, 0.6)), sigma, seed)
    g = gen_level_dag(params)
    pattern = gen_pattern(g, m, planted, seed)
    return Instance(f"inst{seed:05d}", g, pattern, planted, seed)


def gen_corpus(count: int, seed: int = 0, **kw) -> list[Instance]:
    """``count`` instances; instance ``k`` uses seed ``seed + k``. Instances
    whose absent pattern cannot be generated are replaced by planted ones."""
    out = []
    for k in range(count):
        s = seed + k
        try:
            out.append(gen_instance(s, **kw))
        except GenerationError:
            out.append(gen_instance(s, planted=True, **{k2: v for k2, v in kw.items() if k2 != "planted"}))
    return out
