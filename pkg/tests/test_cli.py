import io
import json
import subprocess
import sys

import jsonschema
import pytest

from theta_scope.cli import EXIT_CONTRACT, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, load_schema, run


def invoke(*argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


CASES = {
    "eval": ["--q", "0.5", "--x-re", "1"],
    "deriv": ["--q", "0.5", "--x-re", "1", "--kind", "dxx"],
    "truncate": ["--q", "0.5", "--n", "3", "--x-re", "1"],
    "certify-disk": ["--q", "0.3"],
    "zeros": ["--q", "-0.4", "--n", "128", "--inside", "2.5"],
    "track": ["--q-start", "-0.05", "--q-end", "-0.4", "--seed-re", "19"],
    "ek-bound": ["--q", "0.5", "--n", "10"],
    "sqrt-disk": ["--q", "0.4"],
    "tail-budget": ["--q", "0.98", "--x-mod", "1.32", "--n", "100"],
    "triple-product": ["--q", "0.3", "--x-re", "2", "--x-im", "1"],
    "unity": ["--n", "8", "--k", "3", "--rho", "0.999"],
    "classify-image": ["--q", "-0.7"],
    "sample-image": ["--q", "0.3", "--format", "json", "--resolution", "64"],
    "nesting": ["--q-inner", "0.2", "--q-outer", "0.7"],
    "threshold": ["--feature", "self_intersection", "--q-lo", "-0.53", "--q-hi", "-0.7"],
    "hyperbola": ["--resolution", "1024"],
}


@pytest.mark.parametrize("cmd", sorted(CASES))
def test_schema_and_determinism(cmd):
    code, out, _ = invoke(cmd, *CASES[cmd])
    assert code == EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema(cmd))
    # identical argv gives byte-identical output
    assert invoke(cmd, *CASES[cmd])[1] == out
    # floats survive a parse/serialise round trip exactly
    assert json.dumps(doc) + "\n" == out


def test_eval_at_q_zero():
    code, out, _ = invoke("eval", "--q", "0", "--x-re", "3", "--x-im", "0")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == {"re": 1.0, "im": 0.0} and doc["tail_bound"] == 0.0


def test_certify_near_one():
    code, out, _ = invoke("certify-disk", "--q", "0.98", "--radius", "1")
    doc = json.loads(out)
    assert code == 0 and doc["winding"] == 0 and doc["status"] == "certified"


def test_zeros_contains_real_zero_near_196():
    doc = json.loads(invoke(*["zeros"], *CASES["zeros"])[1])
    assert any(abs(z["location"]["re"] - 1.96) < 0.01 and abs(z["location"]["im"]) < 1e-9 for z in doc["zeros"])


def test_larger_disk_is_not_a_contract_failure():
    code, out, _ = invoke("certify-disk", "--q", "-0.4", "--radius", "2")
    assert code == 0 and json.loads(out)["winding"] == 1


@pytest.mark.parametrize("argv", [
    ["certify-disk", "--q", "0"],
    ["zeros", "--q", "0"],
    ["eval", "--q", "1.5", "--x-re", "1"],
    ["eval", "--x-re", "1"],
    ["no-such-command"],
    ["unity", "--n", "6", "--k", "2"],
    ["threshold", "--feature", "cusp", "--q-lo", "-0.2", "--q-hi", "-0.3"],
    ["sweep", "--q-min", "-2", "--q-max", "0.5", "--q-steps", "3"],
])
def test_usage_errors(argv):
    code, out, err = invoke(*argv)
    assert code == EXIT_USAGE and out == "" and "usage error" in err


def test_precision_env(monkeypatch):
    monkeypatch.setenv("THETA_SCOPE_PRECISION", "extended")
    doc = json.loads(invoke("eval", "--q", "0.5", "--x-re", "1")[1])
    assert doc["precision"] == "extended"
    doc = json.loads(invoke("--precision", "standard", "eval", "--q", "0.5", "--x-re", "1")[1])
    assert doc["precision"] == "standard"
    monkeypatch.setenv("THETA_SCOPE_PRECISION", "bogus")
    assert invoke("eval", "--q", "0.5", "--x-re", "1")[0] == EXIT_USAGE


def test_out_path(tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = invoke("sqrt-disk", "--q", "0.4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["bound"] > 0.185


def test_sample_csv():
    code, out, _ = invoke("sample-image", "--q", "0.3", "--resolution", "64")
    assert code == 0
    assert out.splitlines()[0] == "phi,re,im,d_re,d_im,curvature"


def test_sweep_lines():
    code, out, _ = invoke("sweep", "--q-min", "-0.6", "--q-max", "0.6", "--q-steps", "5", "--workers", "2")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == EXIT_OK
    assert [l["q"] for l in lines] == [-0.6, -0.3, 0.3, 0.6]
    schema = load_schema("sweep")
    for l in lines:
        jsonschema.validate(l, schema)


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_CONTRACT, EXIT_INCONCLUSIVE, EXIT_USAGE) == (0, 2, 3, 64)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "theta_scope.cli", "ek-bound", "--q", "0.2", "--n", "50"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["bound"] == pytest.approx(5.0)


def _fake_certificate(winding, status):
    from theta_scope.zerofinder import CertificateStatus, DiskCertificate

    return DiskCertificate(q=0.3, radius=1.0, winding=winding, min_modulus_lb=0.1, samples=256,
                           status=CertificateStatus(status))


def test_contract_failure_exit(monkeypatch):
    from theta_scope import zerofinder

    monkeypatch.setattr(zerofinder, "certify_unit_disk", lambda q: _fake_certificate(1, "certified"))
    code, out, err = invoke("certify-disk", "--q", "0.3")
    assert code == EXIT_CONTRACT and json.loads(out)["winding"] == 1 and "contract" in err


def test_inconclusive_exit(monkeypatch):
    from theta_scope import zerofinder

    monkeypatch.setattr(zerofinder, "certify_unit_disk", lambda q: _fake_certificate(0, "inconclusive"))
    assert invoke("certify-disk", "--q", "0.3")[0] == EXIT_INCONCLUSIVE
