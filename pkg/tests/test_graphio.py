import numpy as np
import pytest
from hypothesis import given, strategies as st

from pbitsa.errors import ParseError
from pbitsa.graphio import (
    REGISTRY,
    best_known,
    build_ising,
    load_instance,
    load_problem,
    locate_benchmark,
    parse_gset,
    serialize_gset,
    serialize_instance,
    sniff_format,
)
from pbitsa.ising import Graph

from conftest import random_graph, random_model


class TestParseGset:
    def test_minimal(self):
        g = parse_gset("2 1\n1 2 1\n")
        assert g.n == 2 and g.edges == [(0, 1, 1.0)]

    def test_mixed_weights(self):
        g = parse_gset("3 2\n1 2 1\n2 3 -1\n")
        assert g.edges == [(0, 1, 1.0), (1, 2, -1.0)]

    def test_reversed_pair_is_normalized(self):
        assert parse_gset("3 1\n3 1 2\n").edges == [(0, 2, 2.0)]

    def test_missing_weight_defaults_to_one(self):
        assert parse_gset("3 2\n1 2\n2 3 -1\n").edges == [(0, 1, 1.0), (1, 2, -1.0)]

    def test_blank_lines_tolerated(self):
        assert parse_gset("\n2 1\n\n1 2 1\n\n").n_edges == 1

    @pytest.mark.parametrize("text, line", [
        ("2 1\n1 3 1\n", 2),            # index out of range
        ("2 1\n0 2 1\n", 2),            # 1-based indices
        ("3 2\n1 2 1\n2 2 1\n", 3),     # self loop
        ("3 2\n1 2 1\n2 1 1\n", 3),     # duplicate (reversed)
        ("3 2\n1 2 1\n1 x 1\n", 3),     # malformed token
        ("3 2\n1 2 1\n1 3 1 9\n", 3),   # too many fields
        ("3 2\n1 2 abc\n1 3 1\n", 2),   # bad weight
        ("3\n1 2 1\n", 1),              # bad header
    ])
    def test_errors_name_the_line(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_gset(text)
        assert info.value.line == line
        assert f"line {line}" in str(info.value)

    @pytest.mark.parametrize("text", ["3 2\n1 2 1\n", "2 1\n1 2 1\n1 2 1\n", "2 1\n1 2 1\n2 1 1\n"])
    def test_edge_count_mismatch_or_duplicate(self, text):
        with pytest.raises(ParseError):
            parse_gset(text)

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_gset("")

    @given(st.integers(0, 2**32 - 1))
    def test_round_trip(self, seed):
        rs = np.random.default_rng(seed)
        n = int(rs.integers(2, 30))
        m = int(rs.integers(1, n * (n - 1) // 2 + 1))
        g = random_graph(n, m, seed=seed, signed=True)
        # shuffle the edge order before serializing
        perm = rs.permutation(m)
        shuffled = Graph(n, g.u[perm], g.v[perm], g.w[perm])
        assert parse_gset(serialize_gset(shuffled)) == g

    def test_round_trip_fractional_weights(self):
        g = Graph.from_edges(4, [(0, 1, 0.25), (2, 3, -1.5e-3), (1, 3, 7.0)])
        assert parse_gset(serialize_gset(g)) == g


class TestBuildIsing:
    def test_positive_weight(self):
        m = build_ising(Graph.from_edges(2, [(0, 1, 1.0)]))
        assert list(m.h) == [0.0, 0.0] and m.J[0, 1] == -1.0 and m.J[1, 0] == -1.0

    def test_negative_weight(self):
        assert build_ising(Graph.from_edges(2, [(0, 1, -1.0)])).J[0, 1] == 1.0

    def test_coupling_count_matches_edges(self):
        g = random_graph(50, 200, seed=3, signed=True)
        m = build_ising(g)
        assert m.n_couplings == 200
        assert set(np.unique(m.J.data)) <= {-1.0, 1.0}


class TestInstances:
    def test_bias_only(self):
        m = load_instance("1\nB 1 0.5\n")
        assert m.n == 1 and list(m.h) == [0.5]

    def test_single_coupling(self):
        m = load_instance("2\nC 1 2 -1\n")
        assert m.J[0, 1] == -1.0 and m.J[1, 0] == -1.0 and not m.h.any()

    @pytest.mark.parametrize("text", [
        "2\nC 1 2 1\nC 2 1 1\n",
        "2\nB 1 1\nB 1 2\n",
        "2\nC 1 1 1\n",
        "2\nC 1 3 1\n",
        "2\nX 1 2\n",
        "2\nC 1 2\n",
    ])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            load_instance(text)

    @given(st.integers(0, 2**32 - 1))
    def test_round_trip(self, seed):
        model = random_model(int(np.random.default_rng(seed).integers(1, 15)), seed=seed)
        assert load_instance(serialize_instance(model)) == model

    def test_sniff(self):
        assert sniff_format("2 1\n1 2 1\n") == "gset"
        assert sniff_format("2\nC 1 2 1\n") == "instance"

    def test_load_problem(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("3 2\n1 2 1\n2 3 1\n")
        graph, model = load_problem(p)
        assert graph.n_edges == 2 and model.n_couplings == 2
        q = tmp_path / "i.txt"
        q.write_text("2\nB 1 1\nC 1 2 1\n")
        graph, model = load_problem(q)
        assert graph is None and model.h[0] == 1.0


class TestRegistry:
    @pytest.mark.parametrize("name, value", [("G1", 11624), ("K2000", 33337), ("G48", 6000)])
    def test_best_known(self, name, value):
        assert best_known(name) == value

    def test_all_rows_present_and_positive(self):
        assert len(REGISTRY) == 16
        assert all(e.best_known > 0 for e in REGISTRY.values())

    def test_table_sizes(self):
        assert (REGISTRY["G1"].n_nodes, REGISTRY["G1"].n_edges) == (800, 19176)
        assert (REGISTRY["G11"].n_nodes, REGISTRY["G11"].n_edges) == (800, 1600)
        assert REGISTRY["K2000"].n_edges == 2000 * 1999 // 2

    def test_unknown(self):
        with pytest.raises(LookupError):
            best_known("G999")

    def test_locate(self, tmp_path):
        (tmp_path / "g11.txt").write_text("2 1\n1 2 1\n")
        assert locate_benchmark("G11", [tmp_path]) == tmp_path / "g11.txt"
        assert locate_benchmark("G1", [tmp_path]) is None

    def test_local_files_match_registry(self):
        found = 0
        for name, entry in REGISTRY.items():
            path = locate_benchmark(name)
            if path is None:
                continue
            found += 1
            g = parse_gset(path.read_text())
            assert (g.n, g.n_edges) == (entry.n_nodes, entry.n_edges)
        if not found:
            pytest.skip("no benchmark files available locally")
