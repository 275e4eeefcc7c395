import math

import pytest

from pancyc.bondy import bondy_construction, doubling_anchor_count, excess_edges
from pancyc.errors import Infeasible
from pancyc.graph import check_cycle, cycle_spectrum_bruteforce


class TestAnchors:
    def test_n64(self):
        assert doubling_anchor_count(64) == 4

    def test_monotone(self):
        ks = [doubling_anchor_count(n) for n in range(8, 600)]
        assert all(a <= b for a, b in zip(ks, ks[1:]))

    def test_anchors_fit(self):
        for n in (8, 16, 37, 100, 1000):
            cert = bondy_construction(n)
            assert cert.anchors[-1] <= n - 1
            assert cert.anchors[-1] == 2 ** (cert.K + 1) + cert.K

    def test_too_small(self):
        with pytest.raises(Infeasible):
            doubling_anchor_count(4)


class TestConstruction:
    @pytest.mark.parametrize("n", [8, 16, 32, 64, 100, 128, 256, 1024])
    def test_decodes_every_length(self, n):
        cert = bondy_construction(n)
        g = cert.to_graph()
        for ell in range(3, n + 1):
            cyc = cert.cycle_of_length(ell)
            assert len(cyc) == ell, ell
            assert check_cycle(g, cyc), ell

    @pytest.mark.parametrize("n", [16, 64, 128])
    def test_spectrum_matches_bruteforce(self, n):
        g = bondy_construction(n).to_graph()
        assert cycle_spectrum_bruteforce(g) == set(range(3, n + 1))

    def test_edge_count_envelope(self):
        for n in (8, 16, 64, 256, 1024, 4096):
            extra = excess_edges(n)
            lg = math.log2(n)
            assert extra <= lg + 2 * math.log2(lg) + 4

    def test_chords_are_chords(self):
        cert = bondy_construction(200)
        for u, v in cert.chords:
            assert (v - u) % 200 not in (0, 1, 199)

    def test_length_out_of_range(self):
        cert = bondy_construction(32)
        with pytest.raises(ValueError):
            cert.cycle_of_length(2)
        with pytest.raises(ValueError):
            cert.cycle_of_length(33)

    def test_ablation_closing_chord(self):
        # removing the closing chord must kill the mid window
        cert = bondy_construction(128)
        g = cert.to_graph()
        g.remove_edge(cert.anchors[0], cert.anchors[-1])
        k = cert.K
        mid = cert.cycle_of_length(k + 2)
        assert not check_cycle(g, mid)

    def test_ablation_first_shortcut(self):
        cert = bondy_construction(128)
        g = cert.to_graph()
        g.remove_edge(*cert.chords[0])  # e_0
        # every decode that uses e_0 (odd saves) must now fail
        broken = [
            ell
            for ell in range(3, 129)
            if not check_cycle(g, cert.cycle_of_length(ell))
        ]
        assert broken
        saves = {128 - ell for ell in broken if ell >= 128 - (2 ** (cert.K + 1) - 1)}
        assert all(s & 1 for s in saves)  # exactly the odd-save decodes
