import random

import pytest

from dpnia import (BudgetExceededError, EdgeListParseError, InjectionLedger,
                   InterlinkError, MultiplexInstance, SocialNetwork,
                   inject_node, load_edge_list, load_interlinks,
                   split_interlinks, write_edge_list)

from conftest import random_multiplex


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadEdgeList:
    def test_basic(self, tmp_path):
        net, stats = load_edge_list(_write(tmp_path, "g.txt", "a b\nb c\n"))
        assert net.n == 3
        assert net.m == 2
        assert net.degree(net.index_of("b")) == 2
        assert stats.lines == 2 and stats.self_loops == 0 and stats.duplicates == 0

    def test_symmetry_dedup(self, tmp_path):
        net, stats = load_edge_list(_write(tmp_path, "g.txt", "a b\nb a\n"))
        assert net.m == 1
        assert stats.duplicates == 1

    def test_self_loop_counted(self, tmp_path):
        net, stats = load_edge_list(_write(tmp_path, "g.txt", "a a\na b\n"))
        assert net.m == 1
        assert stats.self_loops == 1

    def test_comments_and_blanks(self, tmp_path):
        net, _ = load_edge_list(_write(tmp_path, "g.txt", "# header\n\na b\n"))
        assert net.m == 1

    def test_malformed_line_reports_number(self, tmp_path):
        path = _write(tmp_path, "g.txt", "a b\nc\n")
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_edge_list(path)

    def test_first_appearance_order(self, tmp_path):
        net, _ = load_edge_list(_write(tmp_path, "g.txt", "x y\ny z\n"))
        assert [net.label(i) for i in range(3)] == ["x", "y", "z"]

    def test_idempotent_on_own_output(self, tmp_path):
        net, _ = load_edge_list(_write(tmp_path, "g.txt", "a b\nb c\nc a\nd a\n"))
        out = tmp_path / "round.txt"
        write_edge_list(net, out)
        net2, stats2 = load_edge_list(out)
        assert stats2.duplicates == 0 and stats2.self_loops == 0
        edges1 = {(net.label(i), net.label(j)) for i, j in net.iter_edges()}
        edges2 = {(net2.label(i), net2.label(j)) for i, j in net2.iter_edges()}
        assert edges1 == edges2

    def test_label_map(self, tmp_path):
        net, _ = load_edge_list(_write(tmp_path, "g.txt", "a b\n"),
                                label_map={"b": 0, "a": 1})
        assert net.label(0) == "b" and net.label(1) == "a"


class TestInterlinks:
    def _nets(self, tmp_path):
        g1, _ = load_edge_list(_write(tmp_path, "g1.txt", "a1 a2\na2 a3\n"))
        g2, _ = load_edge_list(_write(tmp_path, "g2.txt", "b1 b2\nb2 b3\n"))
        return g1, g2

    def test_basic(self, tmp_path):
        g1, g2 = self._nets(tmp_path)
        pairs = load_interlinks(_write(tmp_path, "il.txt", "a1 b1\na2 b2\n"), g1, g2)
        assert len(pairs) == 2
        labels = {(g1.label(i), g2.label(j)) for i, j in pairs}
        assert labels == {("a1", "b1"), ("a2", "b2")}

    def test_unknown_label_named(self, tmp_path):
        g1, g2 = self._nets(tmp_path)
        with pytest.raises(InterlinkError, match="zz"):
            load_interlinks(_write(tmp_path, "il.txt", "a1 zz\n"), g1, g2)

    def test_duplicate_left(self, tmp_path):
        g1, g2 = self._nets(tmp_path)
        with pytest.raises(InterlinkError, match="duplicate left"):
            load_interlinks(_write(tmp_path, "il.txt", "a1 b1\na1 b2\n"), g1, g2)

    def test_duplicate_right(self, tmp_path):
        g1, g2 = self._nets(tmp_path)
        with pytest.raises(InterlinkError, match="duplicate right"):
            load_interlinks(_write(tmp_path, "il.txt", "a1 b1\na2 b1\n"), g1, g2)


class TestSplit:
    PAIRS = [(i, i) for i in range(10)]

    def test_ninety_ten(self):
        phi, psi = split_interlinks(self.PAIRS, 0.9, seed=5)
        assert len(phi) == 9 and len(psi) == 1

    def test_half(self):
        phi, psi = split_interlinks(self.PAIRS, 0.5, seed=5)
        assert len(phi) == 5 and len(psi) == 5

    def test_partition(self):
        for seed in range(10):
            phi, psi = split_interlinks(self.PAIRS, 0.7, seed=seed)
            assert set(phi) | set(psi) == set(self.PAIRS)
            assert not set(phi) & set(psi)

    def test_deterministic(self):
        assert split_interlinks(self.PAIRS, 0.9, 3) == split_interlinks(self.PAIRS, 0.9, 3)

    def test_too_few_pairs(self):
        with pytest.raises(ValueError):
            split_interlinks([(0, 0)], 0.9, 1)

    def test_fraction_bounds(self):
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                split_interlinks(self.PAIRS, bad, 1)


class TestMultiplexInstance:
    def test_endpoint_reuse_rejected(self):
        g1 = SocialNetwork.from_edges([("a", "b")])
        g2 = SocialNetwork.from_edges([("x", "y")])
        with pytest.raises(ValueError, match="more than one pair"):
            MultiplexInstance(g1, g2, [(0, 0), (0, 1)])
        with pytest.raises(ValueError, match="more than one pair"):
            MultiplexInstance(g1, g2, [(0, 0)], [(0, 1)])

    def test_unknown_endpoint_rejected(self):
        g1 = SocialNetwork.from_edges([("a", "b")])
        g2 = SocialNetwork.from_edges([("x", "y")])
        with pytest.raises(ValueError, match="no such"):
            MultiplexInstance(g1, g2, [(5, 0)])

    def test_unmatched_excludes_phi_endpoints(self, ):
        g1 = SocialNetwork.from_edges([("a", "b"), ("b", "c")])
        g2 = SocialNetwork.from_edges([("x", "y"), ("y", "z")])
        inst = MultiplexInstance(g1, g2, [(0, 0)], [(1, 1)])
        assert 0 not in inst.unmatched(1)
        assert 1 in inst.unmatched(1)  # held-out endpoints stay unmatched


class TestInjection:
    def _net(self):
        return SocialNetwork.from_edges(
            [("b1", "b2"), ("b2", "b3")], nodes=["b1", "b2", "b3"])

    def test_success_consumes_budget(self):
        net = self._net()
        ledger = InjectionLedger(0, 3)
        new = inject_node(net, ledger, 2, [0, 1, 2])
        assert new == 3
        assert ledger.remaining(2) == 0
        assert net.degree(new) == 3

    def test_budget_exceeded_leaves_network_unchanged(self):
        net = self._net()
        before = [set(net.neighbors(i)) for i in range(net.n)]
        ledger = InjectionLedger(0, 2)
        with pytest.raises(BudgetExceededError) as err:
            inject_node(net, ledger, 2, [0, 1, 2])
        assert err.value.remaining == 2
        assert net.n == 3
        assert [set(net.neighbors(i)) for i in range(net.n)] == before

    def test_two_injections_share_budget(self):
        net = self._net()
        ledger = InjectionLedger(0, 2)
        inject_node(net, ledger, 2, [0])
        inject_node(net, ledger, 2, [1])
        assert len(ledger.atk_links2) == 2
        assert ledger.remaining(2) == 0

    def test_injected_anchor_uncharged(self):
        net = self._net()
        ledger = InjectionLedger(0, 2)
        first = inject_node(net, ledger, 2, [0])
        second = inject_node(net, ledger, 2, [1, first])
        assert ledger.remaining(2) == 0
        assert (second, first) in ledger.peer_links2
        assert net.has_edge(second, first)

    def test_injected_ids_follow_originals(self):
        net = self._net()
        ledger = InjectionLedger(0, 5)
        ids = [inject_node(net, ledger, 2, [0]) for _ in range(3)]
        assert ids == [3, 4, 5]

    def test_original_subgraph_preserved_under_random_sequences(self):
        rng = random.Random(11)
        for trial in range(10):
            inst = random_multiplex(seed=trial)
            net = inst.g2.copy()
            n0 = net.n
            before = [set(net.neighbors(i)) for i in range(n0)]
            ledger = InjectionLedger(0, 50)
            for _ in range(rng.randint(1, 5)):
                anchors = rng.sample(range(n0), rng.randint(0, min(4, n0)))
                inject_node(net, ledger, 2, anchors)
            after = [set(v for v in net.neighbors(i) if v < n0) for i in range(n0)]
            assert after == before
            assert len(ledger.atk_links2) <= 50
