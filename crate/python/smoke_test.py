"""Smoke test for the Python bindings.

Build first (`cargo build -p tatezeta-py`), then run `python3 python/smoke_test.py`.
The script loads the freshly built shared library from target/.
"""

import importlib.util
import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [ROOT / "target" / profile / "libtatezeta_py.so" for profile in ("release", "debug")]
    built = [c for c in candidates if c.exists()]
    if not built:
        sys.exit("libtatezeta_py.so not found; run `cargo build -p tatezeta-py` first")
    lib = max(built, key=lambda p: p.stat().st_mtime)
    tmp = pathlib.Path(tempfile.mkdtemp()) / "tatezeta_py.so"
    shutil.copy(lib, tmp)
    spec = importlib.util.spec_from_file_location("tatezeta_py", tmp)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    tz = load_module()

    s = tz.Session(ell=3, e=1)
    assert json.loads(s.config())["M"] == 162

    rho = json.loads(s.rho())
    assert rho["equal"], rho
    assert rho["rho_closed"]["text"] == "(1 - λ^-1)/(1 - 1/3*λ)", rho["rho_closed"]["text"]

    # transform of the unit ball over Q_3(√3): q^{-1/2}·1_{𝔡^{-1}}
    s2 = tz.Session(ell=3, e=2)
    unit_ball = {"terms": [{"rep": {"digits": []}, "level": 0, "coeff": {"a": ["1"], "M": 162}}]}
    out = json.loads(s2.transform(json.dumps(unit_ball)))
    (term,) = out["terms"]
    assert term["level"] == -1 and term["coeff"]["b"] == ["1/3"], out
    back = json.loads(s2.transform(json.dumps(out), inverse=True))
    assert back == json.loads(json.dumps({"terms": [{"rep": {"digits": []}, "level": 0, "coeff": {"a": ["1"], "b": [], "M": 162}}]}))

    # h_2 against the level-2 characters: Z = q^{-2} over Q_3
    h2 = {
        "terms": [
            {"rep": {"digits": [[0, 1]]}, "level": 2, "coeff": {"a": ["1"], "M": 162}},
            {"rep": {"digits": [[0, 1]]}, "level": 1, "coeff": {"a": ["-1/3"], "M": 162}},
        ]
    }
    z = json.loads(s.zeta(json.dumps(h2), level=2, char_index=0))
    assert z["text"] == "1/9", z["text"]

    try:
        s.zeta(json.dumps(unit_ball))
    except ValueError as e:
        assert "SupportContainsZero" in str(e)
    else:
        raise AssertionError("expected SupportContainsZero")

    assert s.count_characters(2) == 4
    ctx = json.loads(s.padic_context())
    assert ctx["p"] == 5 and ctx["d"] == 54

    report = json.loads(tz.verify("inversion", cases=3, seed=1))
    assert report["pass"], report

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
