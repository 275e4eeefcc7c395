import random

import pytest

from pancyc.certificate import verify
from pancyc.errors import StepFailed
from pancyc.graph import Graph
from pancyc.params import derive_params, edge_budget
from pancyc.pathfinder import SearchBudget
from pancyc.pipeline import (
    PipelineResult,
    _State,
    _step1,
    _step2,
    _step3,
    _step4,
    assemble_hamilton_cycle,
    audit_layer_discipline,
    choose_spare_edges,
    run_pipeline,
)
from pancyc.sampler import LayerSample, sample_layers


@pytest.fixture(scope="module")
def run200():
    ps = derive_params(200)
    sample = sample_layers(200, 1)
    result = run_pipeline(sample, ps, SearchBudget(rng_seed=1))
    assert result.ok, result.failure
    return ps, sample, result


def complete_sample(n):
    g = Graph.complete(n)
    return LayerSample(n=n, seed=0, probs=(1.0,) * 5, layers=[g.copy() for _ in range(5)])


class TestSpareEdges:
    @pytest.mark.parametrize("n", [64, 200, 500, 1000, 2000])
    def test_valid_selection(self, n):
        ps = derive_params(n)
        spares, star = choose_spare_edges(ps)
        ls = ps.ell_star
        shortcuts = {i * (ps.d + 3) for i in range(ps.K0 + 1)}
        chosen = spares + [star]
        assert len(chosen) == ps.K - ps.K0 + 1
        for q in chosen:
            assert q not in shortcuts
        # pairwise vertex-disjoint (cyclic distance >= 2)
        for a in chosen:
            for b in chosen:
                if a != b:
                    assert min((a - b) % ls, (b - a) % ls) >= 2
        # e* may not touch a shortcut junction
        for s in shortcuts:
            assert min((star - s) % ls, (s - star) % ls) >= 2


class TestStepsOnCompleteHost:
    # with complete layers every search must succeed, which isolates the
    # bookkeeping from the probabilistic behaviour
    def test_full_run(self):
        ps = derive_params(64)
        result = run_pipeline(complete_sample(64), ps, SearchBudget(rng_seed=0))
        assert result.ok
        report = verify(result.h5, result.certificate)
        assert report.pancyclic

    def test_step_structures(self):
        ps = derive_params(64)
        sample = complete_sample(64)
        st = _State(ps=ps, layers=sample.layers, rng=random.Random(0),
                    budget=SearchBudget(rng_seed=0))
        _step1(st)
        assert len(st.c_short) == ps.b * ps.t + 1
        assert set(st.binary) == set(range(ps.K0 + 1))
        for i in range(ps.K0 + 1):
            assert len(st.binary[i].arc) == ps.ell(i) + 1
        _step2(st)
        assert len(st.c_star) == ps.ell_star
        _step3(st)
        assert set(st.binary) == set(range(ps.K + 1))
        for i in range(ps.K0 + 1, ps.K + 1):
            assert len(st.binary[i].arc) == ps.ell(i) + 1
        assert len(st.gadget_paths) == ps.b * ps.t
        assert len(st.p_star) == ps.d + 3
        _step4(st)
        ch = st.c_h
        assert sorted(ch) == list(range(64))
        # the backbone region sits at the front of the cycle
        region = set(st.c_star)
        for bc in st.binary.values():
            region.update(bc.arc)
        assert set(ch[: len(region)]) == region

    def test_assembled_cycle_is_hamiltonian(self):
        ps = derive_params(64)
        sample = complete_sample(64)
        st = _State(ps=ps, layers=sample.layers, rng=random.Random(3),
                    budget=SearchBudget(rng_seed=3))
        for step in (_step1, _step2, _step3, _step4):
            step(st)
        g = sample.layers[0]
        n = len(st.c_h)
        for q in range(n):
            assert g.has_edge(st.c_h[q], st.c_h[(q + 1) % n])


class TestRunPipeline:
    def test_success_on_sampled_layers(self, run200):
        ps, _, result = run200
        assert isinstance(result, PipelineResult)
        assert all(rec.ok for rec in result.step_log)
        assert result.h5.m - ps.n <= edge_budget(ps)

    def test_verifies_pancyclic(self, run200):
        _, _, result = run200
        report = verify(result.h5, result.certificate)
        assert report.ok and report.pancyclic

    def test_layer_discipline(self, run200):
        # every edge the construction placed must come from the layer
        # assigned to its step; this is what keeps the steps independent
        ps, sample, result = run200
        cert = result.certificate
        layers = sample.layers
        ch_edges = {frozenset(e) for e in zip(cert.c_h, cert.c_h[1:] + cert.c_h[:1])}
        for i, bc in cert.binary.items():
            g = layers[0] if i <= ps.K0 else layers[2]
            for u, v in zip(bc.arc, bc.arc[1:]):
                assert g.has_edge(u, v) or frozenset((u, v)) in ch_edges
        for ls in cert.longs.values():
            assert layers[4].has_edge(*ls.edge)
        for p in cert.singles.values():
            for u, v in zip(p, p[1:]):
                assert layers[4].has_edge(u, v)

    def test_deterministic(self):
        ps = derive_params(200)
        sample = sample_layers(200, 2)
        a = run_pipeline(sample, ps, SearchBudget(rng_seed=7))
        b = run_pipeline(sample, ps, SearchBudget(rng_seed=7))
        assert a.ok and b.ok
        assert a.certificate.to_json() == b.certificate.to_json()
        assert a.h5.edges() == b.h5.edges()

    def test_failure_is_reported_not_raised(self):
        ps = derive_params(64)
        empty = LayerSample(
            n=64, seed=0, probs=(0.0,) * 5, layers=[Graph(64) for _ in range(5)]
        )
        result = run_pipeline(empty, ps, SearchBudget(max_restarts=2, rng_seed=0))
        assert not result.ok
        assert isinstance(result.failure, StepFailed)
        assert result.failure.step == 1
        assert result.h5 is None and result.certificate is None

    def test_n_mismatch(self):
        ps = derive_params(64)
        with pytest.raises(ValueError):
            run_pipeline(sample_layers(100, 0), ps)
