import csv
import io
import json

import mpmath

from canheight import cli

from oracles import chebyshev_height, hp_log


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_height_example(capsys):
    code, out, _ = run(capsys, "height", "--alpha", "3", "--c", "-2", "--d", "2", "--eps", "1e-6", "--format", "json")
    assert code == 0
    h = json.loads(out)["height"]
    lo, hi = mpmath.mpf(h["lo"]), mpmath.mpf(h["hi"])
    with mpmath.workdps(40):
        ref = chebyshev_height(3)
        assert lo <= ref <= hi and hi - lo <= 1e-6
    assert abs(float(ref) - 0.962424) < 1e-6


def test_height_json_round_trip_is_byte_identical(capsys):
    _, out, _ = run(capsys, "height", "--alpha", "1/3", "--c", "-2", "--eps", "1e-8", "--decompose", "--format", "json")
    assert cli.dump_json(json.loads(out)) == out
    _, again, _ = run(capsys, "height", "--alpha", "1/3", "--c", "-2", "--eps", "1e-8", "--decompose", "--format", "json")
    assert again == out


def test_classify_example(capsys):
    code, out, _ = run(capsys, "classify", "--c", "1/3", "--d", "2")
    assert code == 0 and "3: TypeI" in out and "s: 0" in out
    _, out, _ = run(capsys, "classify", "--c", "1/9", "--format", "json")
    body = json.loads(out)
    assert body["bad_primes"] == [{"p": 3, "type": "TypeII"}] and body["s"] == 1


def test_bound_example(capsys):
    code, out, _ = run(capsys, "bound", "--c", "-2", "--d", "2", "--format", "json")
    body = json.loads(out)
    assert code == 0
    rows = {b["name"]: b for b in body["bounds"]}
    assert rows["theorem2"]["vacuous"] is True and float(rows["theorem2"]["value"]["hi"]) < 0
    assert rows["integer_c"]["value"] == {"lo": "0.03125", "hi": "0.03125"}
    assert body["profile"]["N"] == 12


def test_negative_fractions_parse(capsys):
    code, out, _ = run(capsys, "orbit", "--alpha", "-1/2", "--c", "-3/4", "--steps", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["orbit"] == ["-1/2", "-1/2", "-1/2"]


def test_orbit_and_preperiodic(capsys):
    _, out, _ = run(capsys, "orbit", "--alpha", "0", "--c", "-1", "--steps", "3", "--format", "json")
    assert json.loads(out)["orbit"] == ["0", "-1", "0", "-1"]
    code, out, _ = run(capsys, "preperiodic", "--alpha", "0", "--c", "-1", "--format", "json")
    assert code == 0 and json.loads(out)["verdict"]["status"] == "Preperiodic"


def test_families(capsys):
    _, out, _ = run(capsys, "families", "--m", "3", "--family", "fixed", "--format", "json")
    body = json.loads(out)
    assert body["c"] == "-2" and {p["point"] for p in body["points"]} == {"-2", "-1", "0", "1", "2"}
    _, out, _ = run(capsys, "families", "--c", "-3", "--format", "json")
    assert {p["point"] for p in json.loads(out)["points"]} == {"1", "-1", "2", "-2"}


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--alpha", "3", "--c", "-2", "--format", "json")
    assert code == 0 and json.loads(out)["kind"] == "SatisfiesBound"
    code, out, _ = run(capsys, "verify", "--alpha", "2", "--c", "-7", "--d", "3", "--format", "json")
    assert code == 4 and json.loads(out)["kind"] == "BoundViolation"


def test_domain_and_usage_errors_exit_two(capsys):
    assert run(capsys, "height", "--alpha", "3", "--c", "-2", "--d", "1")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "height", "--alpha", "3", "--c", "-2", "--nope")[0] == 2
    assert run(capsys, "height", "--alpha", "x/y", "--c", "-2")[0] == 2
    assert run(capsys, "families", "--m", "4", "--family", "fixed")[0] == 2


def test_resource_errors_exit_three(capsys):
    code, _, err = run(capsys, "orbit", "--alpha", "3", "--c", "-2", "--steps", "40")
    assert code == 3 and "ResourceError" in err
    code, out, _ = run(capsys, "preperiodic", "--alpha", "0", "--c", "-1", "--budget", "1", "--format", "json")
    assert code == 3 and json.loads(out)["verdict"]["status"] == "Undecided"


def test_precision_env_and_flag(capsys, monkeypatch):
    monkeypatch.setenv(cli.PREC_ENV, "20")
    assert run(capsys, "height", "--alpha", "3", "--c", "-2")[0] == 2
    assert run(capsys, "height", "--alpha", "3", "--c", "-2", "--prec", "64")[0] == 0
    monkeypatch.setenv(cli.PREC_ENV, "256")
    _, a, _ = run(capsys, "height", "--alpha", "3", "--c", "-2", "--format", "json")
    _, b, _ = run(capsys, "height", "--alpha", "3", "--c", "-2", "--prec", "256", "--format", "json")
    assert a == b


def test_survey_outputs(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    assert run(capsys, "survey", "--from", "-3", "--to", "-1", "--format", "csv", "--out", str(csv_path))[0] == 0
    text = csv_path.read_text()
    header = "c,min_height_lo,min_height_hi,argmin_num,argmin_den,ratio_lo,ratio_hi,candidates,preperiodic_excluded"
    assert text.splitlines()[0] == header
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["c"] for r in rows] == ["-3", "-2", "-1"]
    r2 = rows[1]
    assert (r2["argmin_num"], r2["argmin_den"]) == ("1", "2")
    assert set(r2["preperiodic_excluded"].split(";")) == {"0", "1", "-1", "2", "-2"}
    with mpmath.workdps(40):
        assert mpmath.mpf(r2["min_height_lo"]) <= hp_log(2) <= mpmath.mpf(r2["min_height_hi"])

    json_path = tmp_path / "rows.json"
    run(capsys, "survey", "--from", "-3", "--to", "-1", "--format", "json", "--out", str(json_path), "--jobs", "2")
    rows_json = json.loads(json_path.read_text())
    assert [r["c"] for r in rows_json] == [-3, -2, -1]
    assert rows_json[1]["argmin"] == "1/2"

    plot_path = tmp_path / "rows.dat"
    run(capsys, "survey", "--from", "-3", "--to", "-1", "--format", "plot", "--out", str(plot_path))
    lines = plot_path.read_text().splitlines()
    assert lines[0] == "# c ratio_mid" and len(lines) == 4
    assert lines[2].split()[0] == "-2" and abs(float(lines[2].split()[1]) - 1) < 1e-6

    again = tmp_path / "again.csv"
    run(capsys, "survey", "--from", "-3", "--to", "-1", "--format", "csv", "--out", str(again), "--jobs", "2")
    assert again.read_bytes() == csv_path.read_bytes()


def test_family_scan(capsys):
    code, out, _ = run(capsys, "family-scan", "--k-from", "2", "--k-to", "3", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and [r["c"] for r in rows] == [-5, -11]
