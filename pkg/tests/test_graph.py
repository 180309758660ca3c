import random
from fractions import Fraction

import pytest

from sheafflow.errors import ValidationError
from sheafflow.graph import (
    FiltrationDirection,
    build_filtration,
    build_graph,
    critical_values,
    fraction_to_decimal,
    parse_network,
    parse_strength,
)

from netspecs import butterfly_spec, single_edge_spec


def graph_with_strengths(strengths):
    n = len(strengths)
    return build_graph(
        {
            "vertices": [f"v{i}" for i in range(n + 1)],
            "edges": [
                {"id": f"e{i}", "tail": f"v{i}", "head": f"v{i + 1}", "cap": 1, "strength": s}
                for i, s in enumerate(strengths)
            ],
        }
    )


class TestBuildGraph:
    def test_single_edge(self):
        g = build_graph(single_edge_spec())
        assert g.vertices == ("u", "v")
        assert len(g.edges) == 1
        assert g.cap["e"] == 1
        assert g.strength["e"] == 1

    def test_self_loop_rejected_with_edge_named(self):
        spec = single_edge_spec()
        spec["edges"][0]["head"] = "u"
        with pytest.raises(ValidationError, match="'e'"):
            build_graph(spec)

    def test_butterfly_validates(self):
        g = build_graph(butterfly_spec())
        assert len(g.vertices) == 7
        assert len(g.edges) == 9
        assert g.sources == ("s",)
        assert g.targets == ("t1", "t2")

    def test_duplicate_vertex_id(self):
        with pytest.raises(ValidationError, match="duplicate vertex"):
            build_graph({"vertices": ["a", "a"], "edges": []})

    def test_duplicate_edge_id(self):
        spec = single_edge_spec()
        spec["edges"].append(dict(spec["edges"][0]))
        with pytest.raises(ValidationError, match="duplicate edge"):
            build_graph(spec)

    def test_dangling_endpoint(self):
        spec = single_edge_spec()
        spec["edges"][0]["head"] = "ghost"
        with pytest.raises(ValidationError, match="ghost"):
            build_graph(spec)

    def test_bad_capacity(self):
        spec = single_edge_spec()
        spec["edges"][0]["cap"] = 0
        with pytest.raises(ValidationError, match="capacity"):
            build_graph(spec)

    def test_negative_strength(self):
        spec = single_edge_spec()
        spec["edges"][0]["strength"] = "-1"
        with pytest.raises(ValidationError, match="negative strength"):
            build_graph(spec)

    def test_source_target_overlap(self):
        spec = single_edge_spec()
        spec["targets"] = ["u", "v"]
        with pytest.raises(ValidationError, match="both source and target"):
            build_graph(spec)

    def test_unknown_source(self):
        spec = single_edge_spec()
        spec["sources"] = ["w"]
        with pytest.raises(ValidationError, match="'w'"):
            build_graph(spec)

    def test_incidence_helpers(self):
        g = build_graph(butterfly_spec())
        assert [e.id for e in g.in_edges("c")] == ["ac", "bc"]
        assert [e.id for e in g.out_edges("a")] == ["ac", "at1"]


class TestStrengthParsing:
    def test_decimal_strings_are_exact(self):
        assert parse_strength("1.2") == Fraction(6, 5)
        assert parse_strength("0.1") + parse_strength("0.2") == parse_strength("0.3")

    def test_trailing_zeros_collapse(self):
        assert parse_strength("1.20") == parse_strength("1.2")

    def test_ints_pass_through(self):
        assert parse_strength(3) == 3

    def test_garbage_rejected(self):
        with pytest.raises(ValidationError):
            parse_strength("strong")


class TestCriticalValues:
    def test_dedup_and_sort(self):
        g = graph_with_strengths(["0.5", "1.2", "1.2", "3.0"])
        assert critical_values(g) == [Fraction(1, 2), Fraction(6, 5), Fraction(3)]

    def test_all_equal_gives_one(self):
        g = graph_with_strengths(["2.0", "2.0", "2.0"])
        assert critical_values(g) == [Fraction(2)]

    def test_empty_edge_set(self):
        g = build_graph({"vertices": ["a", "b"], "edges": []})
        assert critical_values(g) == []


class TestFiltration:
    def test_weak_first_two_edges(self):
        g = graph_with_strengths(["1", "2"])
        levels = build_filtration(g, FiltrationDirection.WEAK_FIRST)
        assert [lv.alive_edges for lv in levels] == [("e0",), ("e0", "e1")]
        assert [lv.critical_value for lv in levels] == [1, 2]

    def test_strong_first_two_edges(self):
        g = graph_with_strengths(["1", "2"])
        levels = build_filtration(g, FiltrationDirection.STRONG_FIRST)
        assert [lv.alive_edges for lv in levels] == [("e1",), ("e0", "e1")]
        assert [lv.critical_value for lv in levels] == [2, 1]

    def test_butterfly_distinct_strengths(self):
        g = build_graph(butterfly_spec())
        levels = build_filtration(g)
        assert len(levels) == 9
        for t, lv in enumerate(levels):
            assert len(lv.alive_edges) == t + 1

    def test_default_direction_is_weak_first(self):
        g = graph_with_strengths(["1", "2"])
        assert build_filtration(g) == build_filtration(g, FiltrationDirection.WEAK_FIRST)

    def test_empty_graph_single_level(self):
        g = build_graph({"vertices": ["a"], "edges": []})
        levels = build_filtration(g)
        assert len(levels) == 1
        assert levels[0].alive_edges == ()

    def test_nesting_and_final_level(self):
        rng = random.Random(7)
        for _ in range(20):
            strengths = [str(rng.randint(0, 5)) for _ in range(rng.randint(1, 8))]
            g = graph_with_strengths(strengths)
            for direction in FiltrationDirection:
                levels = build_filtration(g, direction)
                assert len(levels) == len(critical_values(g))
                for a, b in zip(levels, levels[1:]):
                    assert set(a.alive_edges) <= set(b.alive_edges)
                assert set(levels[-1].alive_edges) == {e.id for e in g.edges}

    def test_directions_reverse_each_other_when_distinct(self):
        g = graph_with_strengths(["1", "3", "2", "5"])
        weak = build_filtration(g, FiltrationDirection.WEAK_FIRST)
        strong = build_filtration(g, FiltrationDirection.STRONG_FIRST)
        # Complement chains: level t of one direction holds exactly the edges
        # missing from level (n-2-t) of the other.
        n = len(weak)
        all_edges = {e.id for e in g.edges}
        for t in range(n - 1):
            assert set(weak[t].alive_edges) == all_edges - set(strong[n - 2 - t].alive_edges)

    def test_rebuild_is_deterministic(self):
        spec = butterfly_spec()
        assert build_filtration(build_graph(spec)) == build_filtration(build_graph(spec))


class TestParseNetwork:
    def test_splits_graph_field_codings(self):
        graph, field, codings = parse_network(butterfly_spec())
        assert field.p == 2
        assert len(graph.edges) == 9
        assert codings is None

    def test_missing_field_p(self):
        spec = butterfly_spec()
        del spec["field_p"]
        with pytest.raises(ValidationError, match="field_p"):
            parse_network(spec)

    def test_non_prime_field_p(self):
        spec = butterfly_spec()
        spec["field_p"] = 6
        with pytest.raises(ValidationError, match="not prime"):
            parse_network(spec)


class TestFractionRendering:
    @pytest.mark.parametrize(
        "frac,text",
        [
            (Fraction(3), "3"),
            (Fraction(1, 2), "0.5"),
            (Fraction(6, 5), "1.2"),
            (Fraction(-7, 4), "-1.75"),
            (Fraction(1, 3), "1/3"),
            (Fraction(0), "0"),
        ],
    )
    def test_rendering(self, frac, text):
        assert fraction_to_decimal(frac) == text

    def test_round_trips_through_parse(self):
        for s in ["0.5", "1.2", "3", "10.25", "0"]:
            assert fraction_to_decimal(parse_strength(s)) == s
