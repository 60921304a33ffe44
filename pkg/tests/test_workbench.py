import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nauslander.austransform import InvariantViolation
from nauslander.workbench import (DiskCache, InstanceError, Options, bundled_instances,
                                  canonical_json, content_key, corpus_path, emit_instance,
                                  instance_from_dict, main, parse_instance, render_text, run)


def _data(name="auslander_a2.json"):
    return json.loads(corpus_path(name).read_text())


def _write(tmp_path, data, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return path


def test_bundled_corpus_parses():
    names = bundled_instances()
    assert {"a2.json", "auslander_a2.json", "semisimple2.json", "a4_rad2.json"} <= set(names)
    for name in names:
        inst = parse_instance(corpus_path(name))
        assert inst.algebra.dimension() > 0


def test_auslander_instance_dimension():
    inst = parse_instance("auslander_a2.json")       # bare names fall back to the corpus
    assert inst.algebra.dimension() == 5
    assert [X.name for X in inst.subcategory_modules("ct2")] == ["S1", "S3", "P1", "P2"]


def test_emit_round_trip(tmp_path):
    for name in bundled_instances():
        inst = parse_instance(corpus_path(name))
        text = emit_instance(inst)
        again = parse_instance(_write(tmp_path, text))
        assert again.to_dict() == inst.to_dict()
        assert emit_instance(again) == text


@pytest.mark.parametrize("mutate,kind", [
    (lambda d: d.update(field={"p": 4}), "modulus"),
    (lambda d: d.update(field={"p": 1}), "modulus"),
    (lambda d: d.pop("quiver"), "schema"),
    (lambda d: d.update(schema="other/1"), "schema"),
    (lambda d: d.update(relations=[[[1, ["a"]]]]), "inadmissible-relation"),
    (lambda d: d.update(relations=[[[1, ["b", "a"]]]]), "inadmissible-relation"),
    (lambda d: d["quiver"]["arrows"].append({"name": "c", "source": "3", "target": "9"}), "quiver"),
    (lambda d: d["subcategories"].update(bad=["P:7"]), "reference"),
    (lambda d: d["subcategories"].update(bad=[{"dims": [1, 1, 1],
                                               "maps": {"a": [[1]], "b": [[1]]}}]),
     "relation-violation"),
    (lambda d: d["subcategories"].update(bad=[{"dims": [1, 1, 0],
                                               "maps": {"a": [[1, 0]]}}]), "shape"),
    (lambda d: d["subcategories"].update(bad=[{"dims": [1, 0, 0], "maps": {"z": [[1]]}}]),
     "shape"),
])
def test_instance_errors_have_distinct_kinds(mutate, kind):
    d = _data()
    mutate(d)
    with pytest.raises(InstanceError) as exc:
        instance_from_dict(d, "x.json")
    assert exc.value.kind == kind
    assert exc.value.location.startswith("x.json")


def test_cycle_without_nilpotency_is_a_quiver_error():
    d = _data("a2.json")
    d["quiver"]["arrows"].append({"name": "back", "source": "2", "target": "1"})
    with pytest.raises(InstanceError) as exc:
        instance_from_dict(d)
    assert exc.value.kind == "quiver"


def test_malformed_json_and_missing_file(tmp_path):
    bad = _write(tmp_path, '{"schema": "nauslander.instance/1",\n  "name": }')
    with pytest.raises(InstanceError) as exc:
        parse_instance(bad)
    assert exc.value.kind == "malformed-json"
    assert exc.value.location == "inst.json:2:11"
    with pytest.raises(InstanceError) as exc:
        parse_instance(tmp_path / "nope.json")
    assert exc.value.kind == "missing-file"


def test_dim_vector_reference_resolves():
    d = _data()
    d["subcategories"]["byvec"] = [{"dim_vector": [0, 1, 0]}]
    inst = instance_from_dict(d)
    assert inst.subcategory_modules("byvec")[0].dims == (0, 1, 0)


# -- command runs --------------------------------------------------------------------

def test_verify_a2_n1_passes():
    code, rep = run("verify-auslander", "a2.json", Options(n=1))
    assert code == 0 and rep["pass"]
    assert rep["theorem"]["summary"]["gamma_dimension"] == 5


def test_find_ct_auslander_a2():
    code, rep = run("find-ct", "auslander_a2.json", Options(n=2))
    assert code == 0 and rep["count"] == 1
    assert [m["name"] for m in rep["subcategories"][0]["members"]] == ["S1", "S3", "P1", "P2"]


def test_find_ct_none_exits_one():
    code, rep = run("find-ct", "a2.json", Options(n=2))
    assert code == 1 and rep["count"] == 0


def test_check_axioms_failure_has_witness():
    code, rep = run("check-axioms", "a2.json", Options(n=2, subcategory="all"))
    assert code == 1
    assert rep["axioms"]["failures"]
    code, rep = run("check-axioms", "auslander_a2.json", Options(subcategory="ct2_minus_s1"))
    assert code == 1


def test_check_axioms_auto_without_ct_reports_error():
    code, rep = run("check-axioms", "a2.json", Options(n=2))
    assert code == 1 and "no 2-cluster tilting" in rep["error"]


def test_report_semisimple_n3():
    code, rep = run("report", "semisimple2.json", Options(n=3))
    assert code == 0
    assert rep["verify_auslander"]["summary"]["effaceable_simples"] == 0


def test_invalid_instance_exits_two(tmp_path):
    d = _data()
    d["field"]["p"] = 4
    code, rep = run("verify-auslander", str(_write(tmp_path, d)), Options())
    assert code == 2 and rep["kind"] == "modulus"
    code, rep = run("verify-auslander", str(tmp_path / "missing.json"), Options())
    assert code == 2 and rep["kind"] == "missing-file"
    code, rep = run("check-axioms", "auslander_a2.json", Options(subcategory="nonexistent"))
    assert code == 2 and rep["kind"] == "reference"


def test_reports_are_deterministic_and_cache_independent(tmp_path):
    for cmd, inst in (("verify-auslander", "auslander_a2.json"), ("find-ct", "a4_rad2.json")):
        a = canonical_json(run(cmd, inst, Options(cache_dir=str(tmp_path)))[1])
        b = canonical_json(run(cmd, inst, Options(cache_dir=str(tmp_path)))[1])
        c = canonical_json(run(cmd, inst, Options(cache=False))[1])
        assert a == b == c


def test_text_rendering():
    code, rep = run("verify-auslander", "auslander_a2.json", Options())
    text = render_text(rep)
    assert "verdict: PASS" in text and "dim Γ = 7" in text
    err = render_text({"command": "find-ct", "error": "boom", "pass": False})
    assert "boom" in err and "FAIL" in err


def test_disk_cache_spot_check_detects_tampering(tmp_path):
    cache = DiskCache(tmp_path, spot_check=1.0)
    key = content_key("op", "x")
    assert cache.fetch(key, lambda: [1, 2]) == [1, 2]
    assert cache.fetch(key, lambda: [1, 2]) == [1, 2]
    assert cache.stats() == {"hits": 1, "misses": 1, "spot_checked": 1}
    cache.put(key, [9, 9])
    with pytest.raises(InvariantViolation):
        cache.fetch(key, lambda: [1, 2])
    assert DiskCache(tmp_path, spot_check=0.0).fetch(key, lambda: [1, 2]) == [9, 9]


def test_tampered_cache_exits_two(tmp_path):
    opts = Options(cache_dir=str(tmp_path))
    assert run("find-ct", "auslander_a2.json", opts)[0] == 0
    files = list(Path(tmp_path).rglob("*.json"))
    assert files
    for f in files:
        vals = json.loads(f.read_text())
        f.write_text(json.dumps([v + 1 for v in vals]))
    code, rep = run("find-ct", "auslander_a2.json",
                    Options(cache_dir=str(tmp_path), spot_check=1.0))
    assert code == 2 and rep["kind"] == "invariant-violation"


def test_main_writes_outputs(tmp_path, capsys):
    out = tmp_path / "rep"
    code = main(["find-ct", "auslander_a2.json", "--format", "json", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert json.loads(printed)["count"] == 1
    assert (tmp_path / "rep.json").read_text() == printed
    assert "verdict: PASS" in (tmp_path / "rep.txt").read_text()
    assert main(["find-ct", "auslander_a2.json", "--n", "0"]) == 2


def test_module_entry_point(tmp_path):
    env = dict(os.environ, NAUSLANDER_CACHE_DIR=str(tmp_path))
    proc = subprocess.run([sys.executable, "-m", "nauslander", "verify-auslander", "a2.json",
                           "--n", "1", "--format", "json"],
                          capture_output=True, text=True, env=env, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["pass"] is True
    proc = subprocess.run([sys.executable, "-m", "nauslander", "find-ct", "a2.json", "--n", "2"],
                          capture_output=True, text=True, env=env, timeout=120)
    assert proc.returncode == 1
