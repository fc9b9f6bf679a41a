"""Ranking: Morgan refinement, tie-breaking, component ordering."""

import pytest

import corpus
from sfiles2 import FlowsheetGraph, encode, morgan_iterate, rank_graph


class TestMorgan:
    def test_single_node(self):
        g = FlowsheetGraph()
        g.add_node("v-1")
        state = morgan_iterate(g)
        assert state.value == {"v-1": 1}
        assert state.val_set == 1

    def test_symmetric_chain_keeps_siblings_equal(self):
        g = corpus.build(
            ["raw-1", "mix-1", "raw-2", "prod-1"],
            [("raw-1", "mix-1"), ("raw-2", "mix-1"), ("mix-1", "prod-1")],
        )
        state = morgan_iterate(g)
        # The two feeds see identical surroundings and must share a class;
        # the center splits away from the leaves.
        assert state.value["raw-1"] == state.value["raw-2"]
        assert state.value["raw-1"] != state.value["mix-1"]

    def test_stops_early_when_fully_discriminated(self):
        # Parallel pair v/hex plus a product draw: three distinct
        # neighborhoods, resolved on the first sweep.
        g = corpus.build(
            ["v-1", "hex-1", "prod-1"],
            [("v-1", "hex-1"), ("hex-1", "v-1"), ("hex-1", "prod-1")],
        )
        state = morgan_iterate(g)
        assert state.val_set == 3
        assert state.iteration == 1

    def test_returns_peak_not_converged_values(self):
        # On the reference recycle plant the refinement peaks at nine
        # distinct values and later collapses; the snapshot must be the
        # first iteration at the peak, where the valve still scores
        # below the column and the reactor.
        g = corpus.fixture("reactor_recycle_plant").make()
        state = morgan_iterate(g)
        assert state.val_set == 9
        v = state.value
        assert v["v-1"] < v["dist-1"] < v["r-1"] < v["splt-1"] < v["mix-1"]

    def test_parallel_edges_count_twice(self):
        straight = corpus.build(
            ["v-1", "hex-1", "v-2", "hex-2"],
            [("v-1", "hex-1"), ("hex-1", "v-2"), ("v-2", "hex-2")],
        )
        doubled = corpus.build(
            ["v-1", "hex-1", "v-2", "hex-2"],
            [
                ("v-1", "hex-1"),
                ("hex-1", "v-1"),  # forms a parallel pair with the first
                ("hex-1", "v-2"),
                ("v-2", "hex-2"),
            ],
        )
        s1 = morgan_iterate(straight)
        s2 = morgan_iterate(doubled)
        assert s1.value["v-1"] != s2.value["v-1"]

    def test_signals_are_invisible_to_refinement(self):
        g = corpus.fixture("tank_level_control").make()
        bare = corpus.without_signals(g)
        assert morgan_iterate(g, g.nodes()).value == morgan_iterate(bare, bare.nodes()).value

    def test_classes_group_by_value(self):
        g = corpus.build(
            ["raw-1", "mix-1", "raw-2", "prod-1"],
            [("raw-1", "mix-1"), ("raw-2", "mix-1"), ("mix-1", "prod-1")],
        )
        classes = morgan_iterate(g).classes()
        assert classes == [["prod-1", "raw-1", "raw-2"], ["mix-1"]]


class TestRankTables:
    @pytest.mark.parametrize(
        "key", [f.key for f in corpus.FIXTURES if f.ranks is not None]
    )
    def test_pinned_ranks(self, key):
        f = corpus.fixture(key)
        assert rank_graph(f.make()).rank == f.ranks

    def test_controllers_outrank_everything(self):
        g = corpus.fixture("tank_level_control").make()
        table = rank_graph(g)
        assert table.rank["C-1"] == 1

    def test_products_before_feeds_within_a_class(self):
        g = corpus.fixture("absorber").make()
        r = rank_graph(g).rank
        assert r["prod-1"] < r["raw-1"]
        assert r["prod-2"] < r["raw-2"]

    def test_feed_with_longer_reach_ranks_first(self):
        r = corpus.fixture("reactor_recycle_plant").ranks
        # raw-1 reaches the whole plant, raw-2 reaches one unit fewer.
        assert r["raw-1"] < r["raw-2"]

    def test_deep_structure_beats_numbering(self):
        # The two feeds agree on category, reach, and immediate
        # neighborhood; only the third unit down the chain differs.
        # Which chain becomes the trunk must follow that structure, not
        # whichever raw happens to carry the lower number.
        def plant(reactor_feed_first: bool):
            mid = [("r-1", "pp-1"), ("pp-1", "r-1")][reactor_feed_first]
            return corpus.build(
                ["raw-1", "v-1", mid[1], "raw-2", "v-2", mid[0], "mix-1", "hex-1", "prod-1"],
                [
                    ("raw-1", "v-1"),
                    ("v-1", mid[1]),
                    (mid[1], "mix-1"),
                    ("raw-2", "v-2"),
                    ("v-2", mid[0]),
                    (mid[0], "mix-1"),
                    ("mix-1", "hex-1"),
                    ("hex-1", "prod-1"),
                ],
            )

        a = plant(True)
        b = plant(False)
        assert str(encode(a)) == str(encode(b))

    def test_numbering_is_the_final_tiebreak(self):
        g = corpus.build(
            ["raw-1", "mix-1", "raw-2", "prod-1"],
            [("raw-1", "mix-1"), ("raw-2", "mix-1"), ("mix-1", "prod-1")],
        )
        r = rank_graph(g).rank
        assert r["raw-1"] < r["raw-2"]
        # Renaming the feeds swaps their ranks with it.
        g2 = corpus.build(
            ["raw-7", "mix-1", "raw-2", "prod-1"],
            [("raw-7", "mix-1"), ("raw-2", "mix-1"), ("mix-1", "prod-1")],
        )
        r2 = rank_graph(g2).rank
        assert r2["raw-2"] < r2["raw-7"]


class TestComponents:
    def test_larger_component_first(self):
        table = rank_graph(corpus.fixture("multistream_exchanger_plant").make())
        sizes = [len(c) for c in table.subgraph_order]
        assert sizes == sorted(sizes, reverse=True)
        assert "dist-1" in table.subgraph_order[0]

    def test_equal_components_ordered_by_string(self):
        g = corpus.build(
            ["raw-2", "prod-2", "raw-1", "prod-1"],
            [("raw-2", "prod-2"), ("raw-1", "prod-1")],
        )
        table = rank_graph(g)
        # Identical shapes fall through to the numbered string, which
        # puts the lower numbered train first.  Lists are in rank order
        # and products outrank feeds.
        assert table.subgraph_order[0] == ["prod-1", "raw-1"]
        assert table.subgraph_order[1] == ["prod-2", "raw-2"]

    def test_ranks_restart_per_component(self):
        table = rank_graph(corpus.fixture("refrigeration_cycle").make())
        for comp in table.subgraph_order:
            assert sorted(table.rank[n] for n in comp) == list(range(1, len(comp) + 1))

    def test_pure_cycle_component_is_ranked(self):
        g = corpus.build(
            ["hex-1", "comp-1", "v-1"],
            [("hex-1", "comp-1"), ("comp-1", "v-1"), ("v-1", "hex-1")],
        )
        table = rank_graph(g)
        assert sorted(table.rank.values()) == [1, 2, 3]
