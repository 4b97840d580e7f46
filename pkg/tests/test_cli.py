import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithdeg.cli.cache import INLINE_DIGITS, OrbitCache
from arithdeg.cli.main import main
from arithdeg.cli.reports import RunReport, fmt_float, render, strip_timings
from arithdeg.cli.systems import (
    SystemFileError,
    corpus_names,
    dump_system,
    load_corpus,
    load_corpus_system,
    load_system,
    parse_system,
)
from arithdeg.dynamics import ProjPoint, decimal_digits, iterate, power_map
from arithdeg.polynomials import ParseError


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


@pytest.fixture
def cache_dir(tmp_path):
    return tmp_path / "cache"


def write_system(tmp_path, data, name="sys.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


def system_dict(blocks, space=(1,), points=None, name="s"):
    return {"schema": 1, "name": name, "space": list(space), "blocks": blocks, "points": points or {}}


# system files ---------------------------------------------------------------------


def test_corpus_is_complete():
    names = corpus_names()
    assert len(names) >= 20
    systems = load_corpus()
    assert {s.name for s in systems} == set(names)
    assert all(s.points for s in systems)


def test_round_trip_is_byte_identical(tmp_path):
    messy = system_dict([["1/2*X0_0^2", "X0_1 ^ 2 * 1/3"]], points={"x": [[4, 2]]}, name="messy")
    first = dump_system(parse_system(messy))
    p = tmp_path / "canon.json"
    p.write_text(first)
    assert dump_system(load_system(p)) == first
    assert json.loads(first)["blocks"] == [["3*X0_0^2", "2*X0_1^2"]]
    assert json.loads(first)["points"] == {"x": [[2, 1]]}


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_round_trip(name):
    text = dump_system(load_corpus_system(name))
    assert dump_system(parse_system(json.loads(text))) == text


def test_system_file_errors(tmp_path):
    with pytest.raises(SystemFileError, match="schema"):
        parse_system({"schema": 2, "name": "s", "space": [1], "blocks": [["X0_0", "X0_1"]]})
    with pytest.raises(SystemFileError, match="name"):
        parse_system({"schema": 1, "space": [1], "blocks": [["X0_0", "X0_1"]]})
    with pytest.raises(SystemFileError, match="does not match"):
        parse_system(system_dict([["X0_0", "X0_1"]], points={"x": [[1, 2, 3]]}))
    with pytest.raises(SystemFileError, match="all-zero"):
        parse_system(system_dict([["X0_0", "X0_1"]], points={"x": [[0, 0]]}))
    with pytest.raises(SystemFileError):
        parse_system(system_dict([["X0_0 +* X0_1", "X0_1"]]))
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 1,\n  "name": }')
    with pytest.raises(SystemFileError, match="line 2 column"):
        load_system(bad)


def test_parse_error_reports_column():
    with pytest.raises(SystemFileError) as exc:
        parse_system(system_dict([["X0_0^2", "X0_1^2 $"]]))
    cause = exc.value.__cause__
    assert isinstance(cause, ParseError) and cause.column == 8


# reports --------------------------------------------------------------------------


def test_float_formatting():
    assert fmt_float(1 / 3) == "0.333333333333"
    assert fmt_float(-1e-15) == "0.000000000000"
    assert fmt_float(2.0, 3) == "2.000"
    assert fmt_float(float("inf")) == "inf"


def test_render_formats():
    r = RunReport("alpha", {"system": "s"}, {"verdict": "ok", "estimate": 2.0, "flag": True}, "abc", {"total": 0.5})
    js = json.loads(render(r, "json"))
    assert js["results"]["estimate"] == "2.000000000000" and js["timings"] == {"total": "0.500"}
    csv_text = render(r, "csv")
    assert csv_text.splitlines()[0] == "key,value" and "results.flag,true" in csv_text
    text = render(r, "text", precision=3)
    assert text.splitlines()[0] == "ok" and "results.estimate: 2.000" in text
    assert strip_timings(render(r)) == {k: v for k, v in js.items() if k != "timings"}


# commands ---------------------------------------------------------------------------


def test_degrees_split(capsys):
    code, rep, _ = run_json(capsys, "degrees", "split_23")
    assert code == 0
    lam = [d["exact"] for d in rep["results"]["dynamical_degrees"]]
    mu = [d["exact"] for d in rep["results"]["multipliers"]]
    assert lam == ["1", "3", "6"] and mu == ["3", "2"]
    assert rep["results"]["growth"]["1"]["intersections"][:3] == ["2", "5", "13"]


def test_degrees_identity_and_swap(capsys):
    _, rep, _ = run_json(capsys, "degrees", "identity_p1p1")
    assert all(d["exact"] == "1" for d in rep["results"]["dynamical_degrees"])
    _, rep, _ = run_json(capsys, "degrees", "swap_twist_23")
    mu1 = rep["results"]["multipliers"][0]
    assert mu1["minimal_polynomial"] == "t^2 - 6" and mu1["interval"].startswith("[2.449489742")


def test_alpha_examples(capsys, cache_dir):
    _, rep, _ = run_json(capsys, "alpha", "p1_power_d2", "--cache-dir", cache_dir)
    assert rep["results"]["estimate"] == "2.000000000000"
    assert rep["results"]["classified"]["exact"] == "2"
    assert "density not verified" in rep["results"]["verdict"]
    _, rep, _ = run_json(capsys, "alpha", "identity_p1p1", "--cache-dir", cache_dir)
    assert rep["results"]["estimate"] == "1.000000000000" and rep["results"]["classified"]["exact"] == "1"
    _, rep, _ = run_json(capsys, "alpha", "swap_twist_23", "--cache-dir", cache_dir)
    assert rep["results"]["classified"]["minimal_polynomial"] == "t^2 - 6"
    assert abs(float(rep["results"]["estimate"]) - 6**0.5) < 0.02 * 6**0.5


def test_alpha_text_verdict_first(capsys, cache_dir):
    code, out, _ = run(capsys, "alpha", "p1_power_d3", "--format", "text", "--cache-dir", cache_dir, "--horizon", "8")
    assert code == 0 and out.splitlines()[0].startswith("alpha estimate 3.000000 classified as multiplier 3.000000")


def test_canonical_examples(capsys):
    _, rep, _ = run_json(capsys, "canonical", "p1_power_d2", "--point", "x", "--n-used", "10")
    ln2 = "0.693147180560"
    assert rep["results"]["values"] == [ln2]
    assert float(rep["results"]["functional_equation_residual"]) == 0
    _, rep, _ = run_json(capsys, "canonical", "p1_power_d2", "--point", "fixed")
    assert rep["results"]["values"] == ["0.000000000000"]
    sysdesc = load_corpus_system("split_22")
    assert sysdesc.points["y"] == ((2, 1), (2, 1))
    _, rep, _ = run_json(capsys, "canonical", "split_23", "--basis", "1,0;0,1", "--point", "x")
    assert rep["results"]["lambda"] == [["2", "0"], ["0", "3"]]


def test_canonical_precondition_is_reported(capsys):
    code, _, err = run(capsys, "canonical", "identity_p1p1")
    assert code == 1 and "modulus" in err


def test_dml_examples(capsys, tmp_path):
    sq = write_system(tmp_path, system_dict([["X0_0^2", "X0_1^2"]], points={"x": [[2, 1]]}, name="sq"), "sq.json")
    cu = write_system(tmp_path, system_dict([["X0_0^3", "X0_1^3"]], points={"x": [[2, 1]]}, name="cu"), "cu.json")
    code, rep, _ = run_json(capsys, "dml", sq, cu, "--horizon", "10")
    assert code == 0
    assert rep["results"]["return_set"] == [0] and rep["results"]["disjoint"] is True
    assert rep["results"]["crossover"] == 1 and rep["results"]["strictly_decreasing"] is True
    code, rep, _ = run_json(capsys, "dml", sq, sq, "--horizon", "6")
    assert rep["results"]["disjoint"] is False and rep["results"]["hypotheses_met"] is False
    sext = write_system(tmp_path, system_dict([["X0_0^6", "X0_1^6"]], points={"x": [[2, 1]]}, name="sx"), "sx.json")
    corr = tmp_path / "v.json"
    corr.write_text(json.dumps({"schema": 1, "space": [1, 1, 1], "equations": ["X0_0*X2_1 - X0_1*X2_0"]}))
    code, rep, _ = run_json(capsys, "dml", "swap_twist_23", sext, "--horizon", "6", "--correspondence", corr)
    assert code == 0 and rep["results"]["disjoint"] is True
    assert {c["f"]["minimal_polynomial"] for c in rep["results"]["comparisons"]} == {"t^2 - 6"}


def test_orbit_table(capsys, cache_dir):
    _, rep, _ = run_json(capsys, "orbit", "p1_power_d2", "--horizon", "3", "--cache-dir", cache_dir)
    assert rep["results"]["points"] == ["[2:1]", "[4:1]", "[16:1]", "[256:1]"]
    assert [r["digits"] for r in rep["results"]["table"]] == [[1], [1], [2], [3]]


# exit codes ---------------------------------------------------------------------------


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "check", "nonsense")[0] == 1
    assert run(capsys, "degrees", "no_such_system")[0] == 1
    assert run(capsys, "alpha", "split_23", "--point", "nope")[0] == 1


def test_parse_error_exit_code(capsys, tmp_path):
    p = write_system(tmp_path, system_dict([["X0_0^2", "X0_9"]]))
    code, _, err = run(capsys, "degrees", p)
    assert code == 1 and "unknown variable 'X0_9'" in err


def test_resultant_rejection_is_a_parse_level_error(capsys, tmp_path):
    p = write_system(tmp_path, system_dict([["X0_0*X0_1", "X0_0^2"]], points={"x": [[1, 0]]}))
    code, _, err = run(capsys, "orbit", p, "--no-cache")
    assert code == 1 and "resultant" in err.lower()


def test_indeterminacy_exit_code(capsys, tmp_path):
    # P^2 blocks are only checked at evaluation time; [0:0:1] is a common zero
    bad = system_dict([["X0_0^2", "X0_1^2", "X0_0*X0_1"]], space=(2,), points={"x": [[1, 0, 1], [0, 0, 1]][1:]})
    p = write_system(tmp_path, bad)
    code, out, err = run(capsys, "orbit", p, "--no-cache")
    assert code == 2 and "indetermin" in err.lower()
    rep = json.loads(out)
    assert rep["results"]["error"] == "indeterminacy" and rep["results"]["index"] == 0
    assert rep["results"]["partial_points"] == ["[0:0:1]"]


def test_budget_exit_code_writes_partial_report(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, _, _ = run(capsys, "alpha", "p1_power_d2", "--digit-budget", "3", "--no-cache", "-o", out_file)
    assert code == 3
    rep = json.loads(out_file.read_text())
    assert rep["results"]["stop_reason"] == "budget" and rep["results"]["orbit_length"] == 4


# caching ----------------------------------------------------------------------------------


def test_cache_round_trip_with_side_files(tmp_path):
    f = power_map([1], [3])
    rec = iterate(f, ProjPoint.of([3, 2]), 9)
    cache = OrbitCache(tmp_path)
    cache.store(rec)
    back = cache.load(rec.system_digest, rec.points[0])
    assert back == rec
    assert any(decimal_digits(c) > INLINE_DIGITS for c in rec.points[-1].coords[0])
    assert list((tmp_path / "blobs").glob("*.bin"))
    lines = cache.path(rec.system_digest, rec.points[0]).read_text().splitlines()
    assert json.loads(lines[-1])["footer"] and len(lines) == len(rec) + 1


def test_cache_serves_truncated_requests(tmp_path):
    f = power_map([1], [2])
    cache = OrbitCache(tmp_path)
    x = ProjPoint.of([3, 1])
    cold, hit = cache.orbit(f, x, 10, 10**6)
    assert not hit
    warm, hit = cache.orbit(f, x, 6, 10**6)
    assert hit and warm == iterate(f, x, 6, 10**6)
    tight, hit = cache.orbit(f, x, 10, 20)
    assert hit and tight == iterate(f, x, 10, 20)
    longer, hit = cache.orbit(f, x, 12, 10**6)
    assert not hit and longer == iterate(f, x, 12, 10**6)


def test_corrupt_cache_is_ignored(tmp_path):
    f = power_map([1], [2])
    cache = OrbitCache(tmp_path)
    x = ProjPoint.of([3, 1])
    rec, _ = cache.orbit(f, x, 5, 10**6)
    cache.path(rec.system_digest, x).write_text("{not json\n")
    again, hit = cache.orbit(f, x, 5, 10**6)
    assert not hit and again == rec


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 40), st.integers(1, 40), st.integers(2, 4), st.integers(1, 9))
def test_cached_orbit_equals_cold_orbit(tmp_path_factory, a, b, d, n):
    f = power_map([1], [d])
    x = ProjPoint.of([a, b])
    cache = OrbitCache(tmp_path_factory.mktemp("c"))
    first, _ = cache.orbit(f, x, 9, 5000)
    second, hit = cache.orbit(f, x, n, 5000)
    assert hit and second == iterate(f, x, n, 5000)


@pytest.mark.parametrize("verb", ["alpha", "orbit"])
def test_cached_report_matches_cold_report(capsys, cache_dir, verb):
    args = [verb, "swap_twist_23", "--horizon", "12", "--cache-dir", cache_dir]
    cold = run(capsys, *args)[1]
    warm = run(capsys, *args)[1]
    nocache = run(capsys, verb, "swap_twist_23", "--horizon", "12", "--no-cache")[1]
    assert strip_timings(cold) == strip_timings(warm) == strip_timings(nocache)
    assert list(Path(cache_dir, "orbits").iterdir())


def test_cache_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ARITHDEG_CACHE_DIR", str(tmp_path / "env"))
    assert run(capsys, "orbit", "p1_power_d2", "--horizon", "4")[0] == 0
    assert list((tmp_path / "env" / "orbits").iterdir())


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "arithdeg", "degrees", "p1_power_d2", "--format", "csv", "--horizon", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("key,value")
