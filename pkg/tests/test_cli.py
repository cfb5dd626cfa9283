import csv
import io

import pytest

from rwmeet.cli import fmt, main
from rwmeet.graph import load_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_fmt_nine_significant_digits():
    assert fmt(5.988) == "5.988"
    assert fmt(2 / 3) == "0.666666667"
    assert fmt(123456789.123) == "123456789"
    assert fmt(7) == "7"
    assert fmt(float("nan")) == "nan"
    assert fmt(float("inf")) == "inf"


def test_generate_ba(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, text, _ = run(capsys, "generate", "--model", "ba", "--n", "1000", "--davg", "6",
                        "--seed", "7", "--graph-out", str(out))
    assert code == 0
    assert text.startswith("# rwmeet ")
    assert '"seed": 7' in text.splitlines()[0]
    (row,) = rows(text)
    assert float(row["d_avg"]) == pytest.approx(5.988)
    assert load_edge_list(out.read_text()).n == 1000


def test_generate_small_complete(tmp_path, capsys):
    out = tmp_path / "k4.txt"
    code, text, _ = run(capsys, "generate", "--model", "ba", "--n", "4", "--davg", "6", "--graph-out", str(out))
    assert code == 0
    assert load_edge_list(out.read_text()).edge_count == 6


def test_generate_er_failure(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--model", "er", "--n", "1000", "--davg", "2",
                       "--max-retries", "20", "--graph-out", str(tmp_path / "er.txt"))
    assert code != 0
    assert "20 attempts" in err


def test_analyze_complete_graph(tmp_path, capsys):
    path = write(tmp_path, "k4.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    code, text, _ = run(capsys, "analyze", "--graph", path, "--a", "1", "--b", "2,4")
    assert code == 0
    r = rows(text)
    assert [x["b"] for x in r] == ["2", "4"]
    assert float(r[0]["error_bound"]) == pytest.approx(7 / 162, rel=1e-8)
    assert float(r[0]["principal"]) == 4


def test_analyze_ring_principal(tmp_path, capsys):
    path = write(tmp_path, "ring.txt", "".join(f"{i} {(i + 1) % 7}\n" for i in range(7)))
    code, text, _ = run(capsys, "analyze", "--graph", path, "--b", "3")
    assert code == 0
    assert float(rows(text)[0]["principal"]) == pytest.approx(7)


def test_analyze_default_sweep(capsys):
    code, text, _ = run(capsys, "analyze", "--seed", "3")
    assert code == 0
    r = rows(text)
    assert len(r) == 10
    mus = [float(x["mu_spectral"]) for x in r]
    assert max(mus) / min(mus) < 1.05


def test_analyze_rejects_bad_graphs(tmp_path, capsys):
    path = write(tmp_path, "p.txt", "0 1\n1 2\n2 3\n")
    code, _, err = run(capsys, "analyze", "--graph", path, "--b", "2")
    assert code != 0 and "bipartite" in err
    path = write(tmp_path, "d.txt", "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n")
    code, _, err = run(capsys, "analyze", "--graph", path, "--b", "2")
    assert code != 0 and "disconnected" in err


def test_simulate_complete_graph(tmp_path, capsys):
    path = write(tmp_path, "k3.txt", "0 1\n1 2\n0 2\n")
    freq = tmp_path / "f.csv"
    code, text, _ = run(capsys, "simulate", "--graph", path, "--runs", "10000", "--freq-out", str(freq))
    assert code == 0
    (r,) = rows(text)
    assert abs(float(r["mean"]) - 4) <= 3 * float(r["std_err"])
    f = rows(freq.read_text())
    assert sum(int(x["frequency"]) for x in f) == 10000


def test_simulate_bipartite(tmp_path, capsys):
    path = write(tmp_path, "p.txt", "0 1\n1 2\n2 3\n")
    code, text, err = run(capsys, "simulate", "--graph", path, "--a", "1", "--b", "2", "--runs", "30")
    assert code == 0
    assert "never meet" in err
    assert rows(text)[0]["truncated"] == "30"


def test_zero_based_flag(tmp_path, capsys):
    path = write(tmp_path, "k4.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    _, text, _ = run(capsys, "analyze", "--graph", path, "--zero-based", "--a", "0", "--b", "3")
    assert rows(text)[0]["a"] == "0"
    code, _, err = run(capsys, "analyze", "--graph", path, "--a", "0", "--b", "3")
    assert code != 0 and "out of range" in err


def test_oracle(tmp_path, capsys):
    path = write(tmp_path, "k4.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    nodes = tmp_path / "n.csv"
    code, text, _ = run(capsys, "oracle", "--graph", path, "--nodes-out", str(nodes))
    assert code == 0
    r = rows(text)[0]
    assert float(r["exact"]) == pytest.approx(4.5)
    assert [float(x["probability"]) for x in rows(nodes.read_text())] == pytest.approx([0.2, 0.2, 0.3, 0.3])
    code, _, err = run(capsys, "oracle", "--n", "80")
    assert code != 0 and "cap" in err


def test_sweep_marks_failed_cells(tmp_path, capsys):
    pairs = tmp_path / "pairs.csv"
    code, text, err = run(capsys, "sweep", "--models", "ba,er", "--n", "200", "--davg", "2,6",
                          "--pairs", "2", "--runs", "300", "--pairs-out", str(pairs))
    assert code == 1
    r = rows(text)
    assert [(x["model"], x["d_avg"]) for x in r] == [("BA", "2"), ("ER", "2"), ("BA", "6"), ("ER", "6")]
    er2 = r[1]
    assert er2["error"] and "attempts" in er2["error"]
    assert not r[2]["error"]
    assert len(rows(pairs.read_text())) == 6
    assert "failed" in err


def test_env_seed(monkeypatch, tmp_path, capsys):
    path = write(tmp_path, "k5.txt", "".join(f"{i} {j}\n" for i in range(5) for j in range(i + 1, 5)))
    monkeypatch.setenv("RWMEET_SEED", "555")
    _, text, _ = run(capsys, "simulate", "--graph", path, "--runs", "50")
    assert rows(text)[0]["seed"] == "555"
