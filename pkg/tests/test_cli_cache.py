"""Command-line surface and the binary cache."""

import json

import numpy as np
import pytest

from wqbg.cache import CacheError, load_cache, save_cache
from wqbg.cli import main
from wqbg.coxeter import get_group
from wqbg.qbg import build_qbg


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_qbg_dist_command(capsys):
    code, doc = run_cli(capsys, "qbg", "dist", "--type", "A2", "--from", "", "--to", "1 2 1")
    assert code == 0
    assert doc["result"] == 3
    assert doc["command"] == "qbg dist"
    assert "elapsed_ms" in doc


def test_qbg_wt_command(capsys):
    code, doc = run_cli(capsys, "qbg", "wt", "--type", "A2", "--from", "1 2 1", "--to", "")
    assert code == 0
    assert doc["result"] == [1, 1]


def test_report_table51(capsys):
    for label, expect in [("E8", 8), ("E7", 7), ("H4", 4)]:
        code, doc = run_cli(capsys, "report", "table51", "--type", label)
        assert code == 0 and doc["result"]["lR_w0"] == expect


def test_rootsys_info_and_group_enum(capsys):
    code, doc = run_cli(capsys, "rootsys", "info", "--type", "B3")
    assert code == 0
    assert doc["result"]["n_positive_roots"] == 9
    code, doc = run_cli(capsys, "group", "enum", "--type", "A2")
    assert code == 0 and doc["result"]["order"] == 6


def test_adm_commands(capsys):
    code, doc = run_cli(capsys, "adm", "oracle", "--type", "A1", "--mu", "6")
    assert code == 0 and doc["result"]["size"] == 25
    code, doc = run_cli(capsys, "adm", "check", "--type", "A1", "--mu", "6",
                        "--element", "t[5] 1")
    assert code == 0 and doc["result"]["admissible"] is True
    code, doc = run_cli(capsys, "adm", "check", "--type", "A1", "--mu", "6",
                        "--element", "t[-7]")
    assert code == 0 and doc["result"]["admissible"] is False


def test_dim_commands(capsys):
    code, doc = run_cli(capsys, "dim", "xmub", "--type", "A1", "--mu", "6",
                        "--b", "nu=0", "def=0", "kappa=")
    assert code == 0 and doc["result"]["value"] == "6"
    code, doc = run_cli(capsys, "dim", "virtual", "--type", "A1",
                        "--element", "t[6] 1", "--b", "nu=0", "def=0")
    assert code == 0 and doc["result"] == "6"


def test_exit_codes(capsys):
    # parse error
    assert main(["rootsys", "info", "--type", "Q9"]) == 2
    capsys.readouterr()
    # hypothesis failure
    assert main(["dim", "xmub", "--type", "A1", "--mu", "1", "--b", "nu=0", "def=0"]) == 3
    capsys.readouterr()
    # budget exceeded
    assert main(["group", "enum", "--type", "E7"]) == 4
    capsys.readouterr()
    assert main(["adm", "oracle", "--type", "A3", "--mu", "40 40 40"]) == 4
    capsys.readouterr()


def test_verify_command(capsys):
    code, doc = run_cli(capsys, "verify", "thm52", "--type", "B2")
    assert code == 0 and doc["result"]["ok"]
    code, doc = run_cli(capsys, "verify", "prop-adm", "--type", "A1", "--mu", "6")
    assert code == 0
    assert doc["result"]["members"] == 25 and doc["result"]["ok"]
    code, doc = run_cli(capsys, "verify", "lemma31", "--type", "B2")
    assert code == 0 and doc["result"]["ok"]


def test_tsv_format(capsys):
    code = main(["--format", "tsv", "qbg", "dist", "--type", "A2", "--from", "", "--to", "1"])
    out = capsys.readouterr().out
    assert code == 0 and out.strip() == "1"


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("WQBG_BUDGET", "10")
    assert main(["group", "enum", "--type", "A3"]) == 4
    capsys.readouterr()


def test_cache_round_trip(tmp_path):
    g = get_group("B3")
    graph = build_qbg(g)
    path = tmp_path / "B3.wqbg"
    save_cache(path, g, graph)
    g2, table, graph2 = load_cache(path)
    assert g2 is g  # shared instance by label
    fresh = g.enumerate()
    assert table.mat.dtype == fresh.mat.dtype
    assert np.array_equal(table.mat, fresh.mat)
    for name in ("out_ptr", "out_dst", "out_kind", "out_root",
                 "in_ptr", "in_src", "in_kind", "in_root", "weight_enc"):
        a, b = getattr(graph, name), getattr(graph2, name)
        assert a.dtype == b.dtype and np.array_equal(a, b), name


def test_cache_corruption(tmp_path):
    g = get_group("A2")
    path = tmp_path / "A2.wqbg"
    save_cache(path, g, build_qbg(g))
    raw = path.read_bytes()

    truncated = tmp_path / "trunc.wqbg"
    truncated.write_bytes(raw[:-10])
    with pytest.raises(CacheError):
        load_cache(truncated)

    stale = tmp_path / "stale.wqbg"
    bad = bytearray(raw)
    bad[4] = 99  # version byte
    stale.write_bytes(bytes(bad))
    with pytest.raises(CacheError):
        load_cache(stale)

    flipped = tmp_path / "bit.wqbg"
    bad = bytearray(raw)
    bad[40] ^= 1
    flipped.write_bytes(bytes(bad))
    with pytest.raises(CacheError):
        load_cache(flipped)


def test_cache_cli(tmp_path, capsys):
    code, doc = run_cli(capsys, "--cache-dir", str(tmp_path), "cache", "save",
                        "--type", "B2", "--qbg")
    assert code == 0
    path = doc["result"]["path"]
    code, doc = run_cli(capsys, "cache", "load", "--path", path)
    assert code == 0 and doc["result"]["order"] == 8
    assert doc["result"]["qbg_edges"] is not None
