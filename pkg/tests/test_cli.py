import json
import math
from pathlib import Path

import numpy as np
import pytest

from fockfilter.cli import main, oracle_check
from fockfilter.sweep import (
    COLUMNS,
    SpecError,
    SweepSpec,
    load_figure,
    parse_hole,
    read_csv,
    run_sweep,
    shipped_figures,
    to_csv,
    to_json,
    to_svg,
)

GOLDEN = Path(__file__).parent / "golden"


def small_cat_spec(**kw):
    base = dict(family="cat", variable="gamma_abs", start=0.0, stop=1.5, steps=4,
                holes=("odd", "even"), cutoff=48)
    base.update(kw)
    return SweepSpec(**base)


def test_spec_validation():
    with pytest.raises(SpecError):
        small_cat_spec(steps=1)
    with pytest.raises(SpecError):
        small_cat_spec(start=1.0, stop=0.5)
    with pytest.raises(SpecError):
        small_cat_spec(theta1=0.0)
    with pytest.raises(SpecError):
        small_cat_spec(variable="s")
    with pytest.raises(SpecError):
        SweepSpec(family="squeezed_coherent", variable="s", start=0, stop=1, holes=("even",))
    with pytest.raises(SpecError):
        SweepSpec.from_mapping({"family": "cat", "variable": "gamma_abs", "start": 0, "stop": 1,
                                "bogus": 3})


def test_parse_hole():
    assert parse_hole("n=2", "squeezed_coherent") == ("index", 2)
    assert parse_hole("odd", "cat") == ("parity", "odd")
    for bad in ("n=-1", "n=x", "hole"):
        with pytest.raises(SpecError):
            parse_hole(bad, "cat")


def test_shipped_figures_load():
    names = shipped_figures()
    assert len(names) == 6
    for name in names:
        spec = load_figure(name)
        assert spec.steps == 81
        assert spec.theta1 == pytest.approx(math.pi / 4)


def test_overrides_take_precedence():
    spec = load_figure("fig6_mandel_cat", {"cutoff": 80, "steps": 5})
    assert spec.cutoff == 80 and spec.steps == 5


def test_csv_layout_and_flags():
    spec = small_cat_spec()
    rows = run_sweep(spec)
    assert len(rows) == spec.steps * len(spec.holes)
    text = to_csv(spec, rows)
    assert text.splitlines()[0].startswith("# fockfilter")
    parsed = read_csv(text)
    assert list(parsed[0].keys()) == COLUMNS
    # |gamma| = 0 is the vacuum: nothing survives the filter
    first = parsed[0]
    assert first["Q"] == "" and "ZeroProbability" in first["flag"]
    later = [r for r in parsed if float(r["value"]) > 0]
    assert all(r["flag"] == "" for r in later)
    for r in later:
        assert 0 <= float(r["p"]) <= 1
        assert r["Q"] == f"{float(r['Q']):.12g}"


def test_sweep_output_is_deterministic():
    spec = small_cat_spec()
    assert to_csv(spec, run_sweep(spec)) == to_csv(spec, run_sweep(spec))
    assert to_json(spec, run_sweep(spec)) == to_json(spec, run_sweep(spec))


def test_golden_cat_sweep():
    spec = small_cat_spec()
    got = read_csv(to_csv(spec, run_sweep(spec)))
    want = read_csv((GOLDEN / "cat_small.csv").read_text())
    assert len(got) == len(want)
    for g, w in zip(got, want):
        for col in COLUMNS:
            if col in ("hole", "flag") or w[col] == "":
                assert g[col] == w[col]
            else:
                assert float(g[col]) == pytest.approx(float(w[col]), rel=1e-9, abs=1e-12)


def test_svg_render():
    spec = small_cat_spec(plot_metric="Q", y_range=(-1.0, 1.0))
    svg = to_svg(spec, run_sweep(spec))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") >= 3


def test_cli_sweep_writes_files(tmp_path):
    cfg = tmp_path / "mini.toml"
    cfg.write_text(
        'family = "squeezed_coherent"\nvariable = "s"\nstart = 0.1\nstop = 0.4\nsteps = 4\n'
        'holes = ["n=0", "n=1"]\ngamma_abs = 0.5\ncutoff = 64\n'
    )
    out = tmp_path / "mini.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out), "--svg", str(tmp_path / "m.svg")]) == 0
    rows = read_csv(out.read_text())
    assert len(rows) == 8 and all(r["flag"] == "" for r in rows)
    assert (tmp_path / "m.svg").exists()
    assert main(["sweep", "--config", str(cfg), "--format", "json", "--out", str(tmp_path / "m.json")]) == 0
    data = json.loads((tmp_path / "m.json").read_text())
    assert data["metadata"]["cutoff"] == 64 and len(data["rows"]) == 8


def test_cli_sweep_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('family = "cat"\nvariable = "gamma_abs"\nstart = 1\nstop = 0\n')
    assert main(["sweep", "--config", str(bad)]) == 1
    assert main(["sweep"]) == 1
    assert main(["sweep", "--figure", "nope"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--format", "xml"])
    assert exc.value.code == 1


def run_filter(capsys, *args):
    code = main(["filter", *args])
    return code, json.loads(capsys.readouterr().out)


def test_cli_filter_hole(capsys):
    code, rep = run_filter(capsys, "--state", "squeezed", "--gamma", "0.5", "--s", "1.0",
                           "--hole", "0", "--cutoff", "128")
    assert code == 0 and rep["error"] is None
    assert rep["hole"]["verified"] and rep["hole"]["relative_amplitude"] <= 1e-12
    assert 0 < rep["probability"] < 1
    assert len(rep["amplitudes"]) == 10
    assert abs(complex(*rep["amplitudes"][0])) <= 1e-12


def test_cli_filter_parity(capsys):
    code, rep = run_filter(capsys, "--state", "cat", "--gamma", "1", "--parity", "odd")
    assert code == 0 and rep["parity"]["verified"]
    amps = np.array([complex(*a) for a in rep["amplitudes"]])
    assert np.max(np.abs(amps[0::2])) <= 1e-12


def test_cli_filter_coherent_is_degenerate(capsys):
    code, rep = run_filter(capsys, "--state", "coherent", "--gamma", "1", "--hole", "0")
    assert code == 2
    assert rep["error"]["type"] == "ZeroProbability"
    assert "coherent" in rep["error"]["hint"]


def test_cli_filter_numeric_errors(capsys):
    code, rep = run_filter(capsys, "--state", "squeezed", "--gamma", "0", "--s", "0.5", "--hole", "1")
    assert code == 2 and rep["error"]["type"] == "HoleUndefined"
    code, rep = run_filter(capsys, "--state", "squeezed", "--gamma", "0.5", "--s", "1.0")
    assert code == 2 and rep["error"]["type"] == "CutoffTooSmall"


def test_cli_filter_explicit_alpha(capsys):
    code, rep = run_filter(capsys, "--state", "fock", "--n", "1", "--alpha", "0", "--cutoff", "8")
    assert code == 0 and rep["probability"] == pytest.approx(0.25)


def test_oracle_check_report():
    rep = oracle_check(42, 20)
    assert rep["passed"]
    assert rep["max_amplitude_deviation"] <= 1e-9
    assert rep["max_probability_deviation"] <= 1e-10
    assert oracle_check(42, 20) == rep
    assert oracle_check(43, 3) != oracle_check(42, 3)


def test_cli_oracle_check(capsys):
    assert main(["oracle-check", "--seed", "42", "--trials", "20"]) == 0
    first = capsys.readouterr().out
    assert first.startswith("PASS")
    main(["oracle-check", "--seed", "42", "--trials", "20"])
    assert capsys.readouterr().out == first
    assert main(["oracle-check", "--trials", "0"]) == 1
