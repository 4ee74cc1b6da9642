import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smlg.errors import GenerationError, UsageError
from smlg.graph import build_level_dag, chain, serialize_ldag
from smlg.oracle import (
    MAX_ENUM_NODES,
    GenParams,
    dp_match,
    enumerate_paths_match,
    gen_corpus,
    gen_instance,
    gen_level_dag,
    gen_pattern,
    naive_text_match,
)


def diamond():
    return build_level_dag(["a", "b", "c", "d"], [(0, 1), (0, 2), (1, 3), (2, 3)])


def test_naive_examples():
    assert naive_text_match("abab", "ab") == [1, 3]
    assert naive_text_match("ab", "abc") == []


def test_dp_examples():
    found, table = dp_match(diamond(), "acd")
    assert found
    assert table[3, 2] and table[2, 1] and not table[1, 1]
    assert not dp_match(diamond(), "bc")[0]
    with pytest.raises(UsageError):
        dp_match(diamond(), "")


def test_enumeration_examples_and_guard():
    assert enumerate_paths_match(diamond(), "abd")
    assert not enumerate_paths_match(diamond(), "abcd")
    with pytest.raises(UsageError):
        enumerate_paths_match(chain("a" * (MAX_ENUM_NODES + 1)), "aa")


def test_dp_equals_enumeration_on_small_corpus(corpus):
    small = [i for i in corpus if i.graph.n <= MAX_ENUM_NODES]
    assert len(small) > 20
    for inst in small:
        assert dp_match(inst.graph, inst.pattern)[0] == enumerate_paths_match(inst.graph, inst.pattern)


@given(st.integers(0, 10**6))
@settings(max_examples=100)
def test_dp_equals_enumeration_random(seed):
    inst = gen_instance(seed, max_nodes=MAX_ENUM_NODES, max_m=5, planted=True)
    assert dp_match(inst.graph, inst.pattern)[0] and enumerate_paths_match(inst.graph, inst.pattern)


def test_genparams_validation():
    for bad in [(3, 1), (2, 3), (5, 3, 1.5), (5, 3, 0.3, 0)]:
        with pytest.raises(UsageError):
            GenParams(*bad)


def test_generated_graph_shape():
    g = gen_level_dag(GenParams(30, 6, 0.2, 3, seed=4))
    assert g.n == 30 and g.n_levels == 6
    assert all(g.in_neighbors[v] for v in range(g.n) if g.node_levels[v] > 0)


def test_generation_is_deterministic():
    a = [serialize_ldag(i.graph) + repr(i.pattern) for i in gen_corpus(30, seed=9)]
    b = [serialize_ldag(i.graph) + repr(i.pattern) for i in gen_corpus(30, seed=9)]
    assert a == b
    assert a != [serialize_ldag(i.graph) + repr(i.pattern) for i in gen_corpus(30, seed=10)]


def test_planted_flags_hold(corpus):
    assert any(i.planted for i in corpus) and any(not i.planted for i in corpus)
    for inst in corpus:
        assert dp_match(inst.graph, inst.pattern)[0] == inst.planted


def test_absent_pattern_impossible():
    # unary alphabet: every length-2 string occurs in a 3-level chain
    with pytest.raises(GenerationError):
        gen_pattern(chain("aaa"), 2, planted=False, seed=0)
    with pytest.raises(GenerationError):
        gen_pattern(chain("ab"), 3, planted=True, seed=0)


def test_planted_pattern_walks_edges():
    rng = np.random.default_rng(0)
    for seed in range(50):
        g = gen_level_dag(GenParams(20, 5, 0.3, 3, seed=seed))
        p = gen_pattern(g, int(rng.integers(1, 6)), planted=True, seed=seed)
        assert dp_match(g, p)[0]
