import json

import pytest

from pancyc.certificate import (
    Certificate,
    build_h5,
    decodable_lengths,
    decode_cycle,
    resolve_case,
    verify,
)
from pancyc.errors import MalformedCertificate, NoCaseApplies
from pancyc.graph import check_cycle
from pancyc.params import derive_params, edge_budget
from pancyc.synth import synthesize


@pytest.fixture(scope="module")
def built():
    ps = derive_params(200)
    g, cert = synthesize(ps)
    return ps, g, cert


class TestDecode:
    def test_every_length_decodes(self, built):
        ps, g, cert = built
        for ell in range(3, ps.n + 1):
            cyc = decode_cycle(cert, ell)
            assert len(cyc) == ell
            assert check_cycle(g, cyc), ell

    def test_all_cases_exercised(self, built):
        ps, _, cert = built
        cases = {resolve_case(cert, ell)[0] for ell in range(3, ps.n + 1)}
        assert {"a", "b", "c", "d", "e"} <= cases

    def test_case_b_window(self, built):
        ps, g, cert = built
        gb = ps.gadget_base
        for ell in range(gb + 1, gb + ps.gadget_size + 1):
            case, _ = resolve_case(cert, ell)
            cyc = decode_cycle(cert, ell, case="b")
            assert len(cyc) == ell and check_cycle(g, cyc)

    def test_case_c_window(self, built):
        ps, g, cert = built
        for ell in range(ps.ell_star, ps.ell_star + ps.L + 1):
            cyc = decode_cycle(cert, ell, case="c")
            assert len(cyc) == ell and check_cycle(g, cyc)

    def test_case_e_window(self, built):
        ps, g, cert = built
        for ell in range(ps.n - ps.L, ps.n + 1):
            cyc = decode_cycle(cert, ell, case="e")
            assert len(cyc) == ell and check_cycle(g, cyc)

    def test_out_of_range(self, built):
        _, _, cert = built
        with pytest.raises(NoCaseApplies):
            decode_cycle(cert, 2)
        with pytest.raises(NoCaseApplies):
            decode_cycle(cert, cert.n + 1)

    def test_two_edge_shortcut_variant(self):
        ps = derive_params(200)
        plain = synthesize(ps)[1]
        lengths = tuple(sorted(plain.singles))[:2]
        g, cert = synthesize(ps, two_edge_for=lengths)
        for ell in lengths:
            assert len(cert.singles[ell]) == 3
            cyc = decode_cycle(cert, ell)
            assert len(cyc) == ell and check_cycle(g, cyc)

    def test_decodable_lengths_is_sound(self, built):
        ps, _, cert = built
        assert decodable_lengths(cert) == set(range(3, ps.n + 1))


class TestSerialization:
    def test_json_roundtrip(self, built):
        _, _, cert = built
        again = Certificate.from_json(cert.to_json())
        assert again.to_json() == cert.to_json()
        assert again.c_h == cert.c_h
        assert again.singles == cert.singles

    def test_malformed_json(self):
        with pytest.raises(MalformedCertificate):
            Certificate.from_json("{not json")
        with pytest.raises(MalformedCertificate):
            Certificate.from_json(json.dumps({"version": 1}))

    def test_build_h5_matches_edge_registry(self, built):
        ps, g, cert = built
        assert build_h5(cert).edges() == g.edges()
        assert g.m - ps.n <= edge_budget(ps)


class TestVerify:
    def test_verdict_on_good_certificate(self, built):
        ps, g, cert = built
        report = verify(g, cert)
        assert report.ok and report.pancyclic
        assert report.failures == []
        assert report.excess == g.m - ps.n
        assert sum(report.case_counts.values()) == ps.n - 2

    def test_missing_edge_detected(self, built):
        ps, g, cert = built
        h = g.copy()
        # drop one doubling chord: its window must fail
        u, v = cert.binary[ps.K0 + 1].edge
        h.remove_edge(u, v)
        report = verify(h, cert)
        assert not report.ok
        assert report.failures

    def test_tampered_hamilton_cycle(self, built):
        _, g, cert = built
        doc = json.loads(cert.to_json())
        doc["c_h"][0], doc["c_h"][1] = doc["c_h"][1], doc["c_h"][0]
        bad = Certificate.from_json(json.dumps(doc))
        report = verify(g, bad)
        assert not report.ok

    def test_report_json_shape(self, built):
        _, g, cert = built
        payload = json.loads(verify(g, cert).to_json())
        for key in ("ok", "pancyclic", "edges", "excess", "budget", "case_counts"):
            assert key in payload
