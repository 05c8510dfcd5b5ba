import json
import xml.etree.ElementTree as ET

import pytest

import _graphs as G
from unitdist import cli, graph
from unitdist.geometry import format_point

SVG = "{http://www.w3.org/2000/svg}"


def write_points(path, pts):
    path.write_text(",\n".join(format_point(p) for p in pts) + ".\n")
    return str(path)


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(*args):
    return cli.main([str(a) for a in args])


def test_build_single_point(workdir):
    pts = write_points(workdir / "one.txt", [G.E1])
    assert run("build", "--points", pts, "-o", "g.json") == 0
    assert graph.load_json("g.json").n == 1


def test_build_rhombus_and_self_sum(workdir):
    a = write_points(workdir / "a.txt", [G.E1])
    b = write_points(workdir / "b.txt", [G.ORIGIN, G.E60])
    assert run("build", "--points", a, "--with-origin", "--minkowski-with", b, "-o", "r.json") == 0
    r = graph.load_json("r.json")
    assert (r.n, r.num_edges()) == (4, 5)
    # origin plus two unit vectors 60 degrees apart, added to itself once
    both = write_points(workdir / "ab.txt", [G.E1, G.E60])
    assert run("build", "--points", both, "--with-origin", "--minkowski-self", 1, "-o", "s.json") == 0
    assert graph.load_json("s.json").n == 6


def test_build_sector_dataset(workdir):
    from unitdist import dataset

    (workdir / "sector.txt").write_text(dataset.final_102_text())
    assert run("build", "--points", "sector.txt", "-o", "g.json") == 0
    assert graph.load_json("g.json").n == 102


def test_build_parse_error(workdir, capsys):
    (workdir / "bad.txt").write_text("((0, 0, 0, 0), (0, 0, 0, 0))\n((1, 0), (0, 0, 0, 0))\n")
    assert run("build", "--points", "bad.txt") == 2
    assert "line 2" in capsys.readouterr().err


def test_transform_and_exit_codes(workdir):
    graph.save_json(G.rhombus(), "r.json")
    u, v = G.rhombus_far_pair(G.rhombus())
    assert run("transform", "--graph", "r.json", "--op", "spindle", u, v, "-o", "s.json") == 0
    s = graph.load_json("s.json")
    assert (s.n, s.num_edges()) == (7, 11)
    assert run("transform", "--graph", "s.json", "--op", "circle", "-o", "c.json") == 0
    assert run("transform", "--graph", "r.json", "--op", "trim", "1000", "-o", "t.json") == 0
    assert graph.load_json("t.json") == G.rhombus()
    # d^2 = 2 needs sqrt(7): leaves the field
    graph.save_json(graph.build([G.ORIGIN, G.point(1, 1)]), "d.json")
    assert run("transform", "--graph", "d.json", "--op", "spindle", 0, 1) == 3
    assert run("transform", "--graph", "r.json", "--op", "spindle", 0, 0) == 2
    assert run("transform", "--graph", "r.json", "--op", "bogus") == 2
    assert run("transform", "--graph", "missing.json", "--op", "circle") == 2


def test_alphastar_verify_reduce(workdir, capsys):
    graph.save_json(G.moser_spindle(), "s.json")
    assert run("alphastar", "--graph", "s.json", "--orbits", "full", "-o", "c.json") == 0
    out = capsys.readouterr().out
    assert "alpha* = 2/7" in out and "chi_f(R^2) >= 3.5" in out
    assert (workdir / "c-graph.png").exists() and (workdir / "c-convergence.png").exists()
    assert run("verify", "--graph", "s.json", "--certificate", "c.json") == 0

    good = json.loads((workdir / "c.json").read_text())
    for key, value in (("orbit_weights", ["0"] + good["orbit_weights"][1:]), ("alpha", "1/4"),
                       ("witness_sets", [[0, 1, 2]] + good["witness_sets"][1:])):
        (workdir / "bad.json").write_text(json.dumps(dict(good, **{key: value})))
        assert run("verify", "--graph", "s.json", "--certificate", "bad.json") == 1, key
    (workdir / "junk.json").write_text("{}")
    assert run("verify", "--graph", "s.json", "--certificate", "junk.json") == 1
    graph.save_json(G.rhombus(), "r.json")
    assert run("verify", "--graph", "r.json", "--certificate", "c.json") == 1

    assert run("transform", "--graph", "s.json", "--op", "reduce", "0",
               "--certificate", "c.json", "-o", "red.json") == 0
    assert graph.load_json("red.json") == G.moser_spindle()
    assert run("transform", "--graph", "s.json", "--op", "reduce", "1",
               "--certificate", "c.json") == 2


def test_alphastar_golden_values(workdir, capsys):
    for make, text in ((G.p3, "alpha* = 1/2"), (G.pentagon, "alpha* = 2/5")):
        graph.save_json(make(), "g.json")
        assert run("alphastar", "--graph", "g.json", "--orbits", "none", "--no-figures",
                   "--threads", 2) == 0
        assert text in capsys.readouterr().out


def test_export_formats(workdir):
    graph.save_json(G.moser_spindle(), "s.json")
    assert run("export", "--graph", "s.json", "--format", "svg", "-o", "s.svg") == 0
    root = ET.parse(workdir / "s.svg").getroot()
    assert len(root.findall(f".//{SVG}circle")) == 7
    assert len(root.findall(f".//{SVG}line")) == 11
    graph.save_json(G.p3(), "p.json")
    assert run("export", "--graph", "p.json", "--format", "dimacs", "-o", "p.dimacs") == 0
    assert "p edge 3 2" in (workdir / "p.dimacs").read_text().splitlines()
    assert run("export", "--graph", "s.json", "--format", "json", "-o", "copy.json") == 0
    assert graph.load_json("copy.json") == G.moser_spindle()


def test_export_empty_svg(workdir):
    graph.save_json(graph.build([]), "e.json")
    assert run("export", "--graph", "e.json", "--format", "svg", "-o", "e.svg") == 0
    root = ET.parse(workdir / "e.svg").getroot()
    assert root.tag == f"{SVG}svg" and not root.findall(f".//{SVG}circle")


def test_plot(workdir):
    graph.save_json(G.moser_spindle(), "s.json")
    assert run("plot", "--graph", "s.json", "-o", "fig.png") == 0
    assert (workdir / "fig-graph.png").stat().st_size > 1000


def test_reproduce_corrupted_dataset(workdir, monkeypatch):
    from unitdist import dataset

    monkeypatch.setattr(dataset, "final_102_text", lambda: "((0, 0, 0, 0), (0, 0, 0, 0)).")
    dataset.final_graph.cache_clear()
    try:
        assert run("reproduce-theorem2", "-o", workdir) == 2
        assert run("reproduce-theorem2", "--quick", "-o", workdir) == 2
    finally:
        dataset.final_graph.cache_clear()
