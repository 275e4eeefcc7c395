import pytest

from pancyc.errors import EmbedFailed, ImpossibleLength, NotFound
from pancyc.graph import Graph, check_cycle, check_path
from pancyc.pathfinder import (
    SearchBudget,
    ExpanderCore,
    embed_leafy_tree,
    extract_core,
    find_exact_cycle,
    find_exact_path,
    hamilton_path_between,
)
from pancyc.sampler import sample_gnp


class TestBudget:
    def test_default_steps_scale(self):
        b = SearchBudget()
        assert b.steps_for(100) == 2000
        assert SearchBudget(max_steps=77).steps_for(100) == 77


class TestFindExactPath:
    def test_on_complete_graph(self):
        g = Graph.complete(12)
        for length in (1, 2, 5, 11):
            p = find_exact_path(g, 0, 1, length, budget=SearchBudget(rng_seed=3))
            assert p.vertices[0] == 0 and p.vertices[-1] == 1
            assert len(p.vertices) == length + 1
            assert check_path(g, p.vertices)

    def test_exact_on_path_graph(self):
        g = Graph(6)
        for v in range(5):
            g.add_edge(v, v + 1)
        p = find_exact_path(g, 0, 5, 5)
        assert p.vertices == (0, 1, 2, 3, 4, 5)
        with pytest.raises(ImpossibleLength):  # BFS distance proves it
            find_exact_path(g, 0, 5, 3)

    def test_forbidden_vertices(self):
        g = Graph.complete(8)
        p = find_exact_path(g, 0, 1, 4, forbidden={2, 3})
        assert not {2, 3} & set(p.vertices)

    def test_impossible_lengths(self):
        g = Graph.complete(5)
        with pytest.raises(ImpossibleLength):
            find_exact_path(g, 0, 1, 0)
        with pytest.raises(ImpossibleLength):
            find_exact_path(g, 0, 1, 5)  # only 5 vertices available

    def test_endpoints_must_differ(self):
        g = Graph.complete(5)
        with pytest.raises(ValueError):
            find_exact_path(g, 2, 2, 3)

    def test_deterministic(self):
        g = sample_gnp(100, 0.2, seed=5)
        a = find_exact_path(g, 0, 1, 10, budget=SearchBudget(rng_seed=9))
        b = find_exact_path(g, 0, 1, 10, budget=SearchBudget(rng_seed=9))
        assert a == b

    def test_random_graph_battery(self):
        # moderate version of the regression battery (the full one runs
        # in the acceptance suite)
        g = sample_gnp(300, 0.15, seed=1)
        wins = 0
        for i in range(30):
            s, t = (7 * i) % 300, (11 * i + 1) % 300
            if s == t:
                continue
            length = 3 + (i % 40)
            try:
                p = find_exact_path(g, s, t, length, budget=SearchBudget(rng_seed=i))
            except NotFound:
                continue
            assert check_path(g, p.vertices)
            wins += 1
        assert wins >= 25


class TestFindExactCycle:
    def test_triangle_in_sparse_graph(self):
        g = Graph(9)
        for v in range(8):
            g.add_edge(v, v + 1)
        g.add_edge(6, 8)  # lone triangle 6-7-8
        c = find_exact_cycle(g, 3)
        assert sorted(c) == [6, 7, 8]

    def test_lengths_on_complete(self):
        g = Graph.complete(10)
        for length in (3, 5, 10):
            c = find_exact_cycle(g, length, budget=SearchBudget(rng_seed=1))
            assert len(c) == length
            assert check_cycle(g, c)

    def test_forbidden(self):
        g = Graph.complete(10)
        c = find_exact_cycle(g, 4, forbidden={0, 1, 2})
        assert not {0, 1, 2} & set(c)

    def test_too_long(self):
        with pytest.raises(ImpossibleLength):
            find_exact_cycle(Graph.complete(5), 6)


class TestExpanderCore:
    def test_complete_graph_keeps_everything(self):
        g = Graph.complete(20)
        core = extract_core(g, set(range(20)), beta=0.2)
        assert core.vertices == set(range(20))

    def test_peels_pendant_chain(self):
        h = Graph(43)
        for u, v in Graph.complete(40).edges():
            h.add_edge(u, v)
        for v in (40, 41, 42):  # pendant chain off the clique
            h.add_edge(v - 1, v)
        core = extract_core(h, set(range(43)), beta=0.11)
        assert {40, 41, 42} & core.vertices == set()
        assert core.vertices == set(range(40))

    def test_raises_when_too_much_peels(self):
        from pancyc.errors import CoreTooSmall

        h = Graph(13)
        for u, v in Graph.complete(10).edges():
            h.add_edge(u, v)
        for v in (10, 11, 12):
            h.add_edge(v - 1, v)
        with pytest.raises(CoreTooSmall):
            extract_core(h, set(range(13)), beta=0.11)

    def test_result_type(self):
        core = extract_core(Graph.complete(8), set(range(8)), beta=0.3)
        assert isinstance(core, ExpanderCore)
        assert core.peel_log is not None


class TestTreeEmbedding:
    def test_embeds_in_complete_graph(self):
        g = Graph.complete(40)
        core = extract_core(g, set(range(40)), beta=0.2)
        emb = embed_leafy_tree(core, g, root=0, arity=3, depth=2, stem=1)
        assert len(emb.leaves) == 9
        for leaf in emb.leaves:
            path = emb.root_path(leaf)
            assert path[0] == emb.root and path[-1] == leaf
            assert check_path(g, path)

    def test_fails_when_too_big(self):
        g = Graph.complete(10)
        core = extract_core(g, set(range(10)), beta=0.2)
        with pytest.raises(EmbedFailed):
            embed_leafy_tree(core, g, root=0, arity=4, depth=3, stem=2)


class TestHamiltonPathBetween:
    def test_complete_graph(self):
        g = Graph.complete(30)
        inner = list(range(2, 30))
        p = hamilton_path_between(g, inner, 0, 1)
        assert p.vertices[0] == 0 and p.vertices[-1] == 1
        assert set(p.vertices) == set(range(30))
        assert check_path(g, p.vertices)

    def test_random_graph(self):
        g = sample_gnp(120, 0.12, seed=3)
        inner = list(range(2, 120))
        p = hamilton_path_between(g, inner, 0, 1, SearchBudget(rng_seed=4))
        assert set(p.vertices) == set(range(120))
        assert check_path(g, p.vertices)

    def test_impossible(self):
        g = Graph(5)  # no edges at all
        with pytest.raises((NotFound, ValueError)):
            hamilton_path_between(g, [2, 3, 4], 0, 1, SearchBudget(max_restarts=3))
