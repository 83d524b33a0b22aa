import math

import numpy as np
import pytest
import yaml

from lspgb.algorithms import RunRecord
from lspgb.dataio import (CSV_HEADER, ConfigError, DataError, ResultRow, ResultTable,
                          config_from_dict, expand_k, load_dense_matrix, load_edge_list,
                          load_tweet_corpus, parse_experiment_config, read_results_csv,
                          write_edge_list, write_results_csv)
from lspgb.generators import gen_ba, gen_er, gen_ws
from lspgb.objectives import TweetSummarization, tweet_summ_value


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# -- edge lists ---------------------------------------------------------------------

def test_edge_list_path(tmp_path):
    g = load_edge_list(write(tmp_path, "g.txt", "0 1\n1 2"))
    assert g.n == 3 and g.num_edges == 2


def test_edge_list_comment_only(tmp_path):
    g = load_edge_list(write(tmp_path, "g.txt", "# comment\n"))
    assert g.n == 0 and g.num_edges == 0


def test_edge_list_dedup(tmp_path):
    g = load_edge_list(write(tmp_path, "g.txt", "0 1\n1 0\n0 1\n"))
    assert g.num_edges == 1


def test_edge_list_header_sets_n(tmp_path):
    g = load_edge_list(write(tmp_path, "g.txt", "# n=10\n0 1\n"))
    assert g.n == 10
    with pytest.raises(DataError, match="header"):
        load_edge_list(write(tmp_path, "h.txt", "# n=2\n0 5\n"))


@pytest.mark.parametrize("text,line", [("0 1\n1 x\n", 2), ("0 1 2\n", 1), ("0 1\n\n3 3\n", 3),
                                       ("-1 2\n", 1)])
def test_edge_list_errors_carry_line(tmp_path, text, line):
    with pytest.raises(DataError, match=f":{line}:"):
        load_edge_list(write(tmp_path, "g.txt", text))


def test_edge_list_missing_file(tmp_path):
    with pytest.raises(DataError):
        load_edge_list(tmp_path / "nope.txt")


def test_edge_list_remap(tmp_path):
    g, ids = load_edge_list(write(tmp_path, "g.txt", "100 7\n7 42\n"), remap=True)
    assert ids.tolist() == [7, 42, 100]
    assert g.n == 3 and sorted(g.edges()) == [(0, 1), (0, 2)]


@pytest.mark.parametrize("graph", [gen_ba(300, 5, seed=1), gen_er(200, 0.02, seed=2),
                                   gen_ws(150, 6, 0.2, seed=3), gen_er(5, 0.0, seed=0)])
def test_edge_list_round_trip(tmp_path, graph):
    path = tmp_path / "g.txt"
    write_edge_list(graph, path)
    assert load_edge_list(path) == graph


# -- matrices -------------------------------------------------------------------------

def test_dense_matrix(tmp_path):
    m = load_dense_matrix(write(tmp_path, "m.csv", "1,0.5\n0.5,1\n"))
    assert m.tolist() == [[1, 0.5], [0.5, 1]]


def test_dense_matrix_features(tmp_path):
    m = load_dense_matrix(write(tmp_path, "f.csv", "1,0\n0,1\n"), features=True)
    assert m.tolist() == [[1, 0], [0, 1]]
    m = load_dense_matrix(write(tmp_path, "g.csv", "1,0\n1,1\n"), features=True)
    assert m[0, 1] == pytest.approx(1 / math.sqrt(2))


@pytest.mark.parametrize("text", ["1,0.5\n0.5\n", "1,0.5,0\n0.5,1,0\n", "1,a\n0,1\n", "1,nan\n0,1\n"])
def test_dense_matrix_errors(tmp_path, text):
    with pytest.raises(DataError):
        load_dense_matrix(write(tmp_path, "m.csv", text))


# -- tweets ---------------------------------------------------------------------------

def test_tweet_corpus(tmp_path):
    c = load_tweet_corpus(write(tmp_path, "t.tsv", "9\tw\n16\tw\n"))
    assert c.n == 2 and c.vocab_size == 1
    assert tweet_summ_value(c, {0, 1}) == 5


def test_tweet_corpus_empty(tmp_path):
    c = load_tweet_corpus(write(tmp_path, "t.tsv", ""))
    assert c.n == 0 and TweetSummarization(c).value(np.empty(0, dtype=np.int64)) == 0


def test_tweet_corpus_vocab_order_and_dups(tmp_path):
    c = load_tweet_corpus(write(tmp_path, "t.tsv", "1\tb,a,b\n4\tc,a\n"))
    assert c.vocabulary == ["b", "a", "c"]
    assert c.keywords[c.indptr[0]:c.indptr[1]].tolist() == [0, 1]
    assert tweet_summ_value(c, {0}) == 2


@pytest.mark.parametrize("text", ["-1\tw\n", "3\t\n", "3 w\n", "x\tw\n"])
def test_tweet_corpus_errors(tmp_path, text):
    with pytest.raises(DataError):
        load_tweet_corpus(write(tmp_path, "t.tsv", text))


# -- config -----------------------------------------------------------------------------

MINIMAL = {"objective": "max_cover", "dataset": {"generator": {"model": "ba", "n": 1000}},
           "algorithms": ["ls_pgb"], "k": 10}


def test_minimal_config_defaults(tmp_path):
    path = write(tmp_path, "c.yaml", yaml.safe_dump(MINIMAL))
    cfg = parse_experiment_config(path)
    assert cfg.repetitions == 5 and cfg.retries == 3 and cfg.seed == 0
    assert cfg.k_values(1000) == [10]
    assert cfg.algorithms[0].name == "ls_pgb" and cfg.algorithms[0].params == {}
    assert cfg.timing is True


def test_ls_pgb_defaults_from_signature():
    import inspect
    from lspgb.algorithms import ls_pgb
    sig = inspect.signature(ls_pgb)
    assert sig.parameters["epsilon"].default == 0.1
    assert sig.parameters["epsilon_ls"].default == 0.21


def test_k_range_expansion():
    assert expand_k("n/1000..n/10 x2", 10000) == [10, 20, 40, 80, 160, 320, 640]
    assert expand_k("1..8 x2", 100) == [1, 2, 4, 8]
    assert expand_k([3, 5], 10) == [3, 5]
    with pytest.raises(ConfigError):
        expand_k("10 to 20", 100)


@pytest.mark.parametrize("change,needle", [
    ({"k": 0}, "k=0"),
    ({"k": 2000}, "k=2000 outside"),
    ({"algorithms": ["nope"]}, "unknown algorithm"),
    ({"objective": "nope"}, "unknown objective"),
    ({"repetitions": 0}, "repetitions"),
    ({"extra": 1}, "unknown key"),
    ({"dataset": {"generator": {"model": "ba", "n": 10}, "path": "x"}}, "exactly one"),
    ({"dataset": {"generator": {"model": "features", "n": 10}}}, "cannot feed"),
])
def test_config_errors(change, needle):
    with pytest.raises(ConfigError) as info:
        config_from_dict({**MINIMAL, **change})
    assert any(needle in p for p in info.value.problems)


def test_config_lists_all_problems():
    with pytest.raises(ConfigError) as info:
        config_from_dict({"objective": "zzz", "algorithms": ["a", "b"], "k": 0})
    assert len(info.value.problems) >= 5


@pytest.mark.parametrize("text", ["", "[1, 2]", "objective: [", "k: {a: 1}\n"])
def test_config_parsing_is_total(tmp_path, text):
    with pytest.raises(ConfigError):
        parse_experiment_config(write(tmp_path, "c.yaml", text))


def test_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_experiment_config(tmp_path / "none.yaml")


# -- results ------------------------------------------------------------------------------

def record(alg, k, value, seed=1):
    return RunRecord(alg, [0], value, 10, 2, 0.5, False, k, 100, seed)


def test_empty_table_header_only(tmp_path):
    path = tmp_path / "r.csv"
    write_results_csv(ResultTable(), path)
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"


def test_one_run_two_lines(tmp_path):
    t = ResultTable()
    t.add(ResultRow.from_record(record("lazy_greedy", 5, 1 / 3), "max_cover", 0))
    path = tmp_path / "r.csv"
    write_results_csv(t, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    rows = read_results_csv(path)
    assert float(rows[0]["value"]) == 1 / 3
    assert rows[0]["value_norm"] == "1"


def test_value_norm_and_row_order(tmp_path):
    t = ResultTable()
    t.add(ResultRow.from_record(record("ls_pgb", 5, 9.0), "max_cover", 1))
    t.add(ResultRow.from_record(record("ls_pgb", 5, 8.0), "max_cover", 0))
    t.add(ResultRow.from_record(record("lazy_greedy", 5, 10.0), "max_cover", 0))
    t.add(ResultRow.from_record(record("ls_pgb", 2, 3.0), "max_cover", 0))
    path = tmp_path / "r.csv"
    write_results_csv(t, path)
    rows = read_results_csv(path)
    assert [(r["algorithm"], r["k"], r["rep"]) for r in rows] == [
        ("lazy_greedy", "5", "0"), ("ls_pgb", "2", "0"), ("ls_pgb", "5", "0"), ("ls_pgb", "5", "1")]
    assert [r["value_norm"] for r in rows] == ["1", "", "0.80000000000000004", "0.90000000000000002"]


def test_aggregate_matches_rows():
    t = ResultTable()
    for rep, v in enumerate([1.0, 2.0, 4.0]):
        t.add(ResultRow.from_record(record("linear_seq", 3, v), "max_cover", rep))
    agg = t.aggregate()[("linear_seq", 3)]
    assert agg["runs"] == 3
    assert agg["value"][0] == pytest.approx(7 / 3)
    assert agg["value"][1] == pytest.approx(np.std([1, 2, 4], ddof=1))
    assert "value_norm" not in agg


def test_write_csv_bad_path(tmp_path):
    with pytest.raises(DataError):
        write_results_csv(ResultTable(), tmp_path / "missing" / "r.csv")
