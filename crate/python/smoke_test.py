#!/usr/bin/env python3
"""Smoke test for the jacfol_py extension module.

Builds expectations against the worked examples: branch invariants of the
cusp, the two-divisor logarithmic pair, and the contact tree example.

Usage:
    cargo build -p jacfol-py --release
    python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libjacfol_py.so",
        ROOT / "target" / "debug" / "libjacfol_py.so",
    ]
    lib = next((c for c in candidates if c.exists()), None)
    if lib is None:
        sys.exit("build the extension first: cargo build -p jacfol-py --release")
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="jacfol_py_"))
    shutil.copy(lib, tmp / f"jacfol_py{suffix}")
    sys.path.insert(0, str(tmp))
    import jacfol_py

    return jacfol_py


def main():
    m = load_module()

    # branch invariants of the cusp (t^2, t^3)
    cusp = m.Branch(2, [(3, "1")], 24, "cusp")
    assert cusp.characteristic_exponents() == [2, 3]
    assert cusp.puiseux_pairs() == [(3, 2)]
    assert cusp.semigroup() == [2, 3]
    assert cusp.milnor() == 2
    assert cusp.implicit_equation() == "(-1)*x^3 + (1)*y^2"

    parabola = m.Branch(1, [(2, "1")], 24, "parabola")
    assert cusp.coincidence(parabola) == "3/2"
    assert cusp.intersection_multiplicity(parabola) == 3

    # dual graph rendering
    dot = m.dual_graph_dot([cusp, parabola])
    assert "digraph dual_graph" in dot
    assert "digraph base_graph" in dot  # ramified input => both graphs

    # full pipeline on the shipped fixture
    doc = (ROOT / "fixtures" / "ce_me.json").read_text()
    report = json.loads(m.run(doc, "analyze"))
    assert report["x_tangency_holds"] is True
    e2 = next(d for d in report["divisors"] if d["valuation"] == "2")
    deltas = [p["delta"] for p in e2["points"]]
    assert deltas == ["-2/11", "0", "3/11"], deltas
    assert all(e["passed"] for e in report["ledger"])

    text = m.run_text(doc, "verify")
    assert "verified" in text and "FAIL" not in text

    # canonicalization round-trips
    canon = m.canonicalize(doc)
    assert json.loads(m.canonicalize(canon)) == json.loads(canon)

    # the tangent-cone pair: x-tangency certificate fails as expected
    doc2 = (ROOT / "fixtures" / "x_tangent_cone.json").read_text()
    report2 = json.loads(m.run(doc2, "verify"))
    assert report2["x_tangency_holds"] is False
    assert any("3/11" not in p for p in [""])  # trivial guard

    print("jacfol_py smoke test: all assertions passed")


if __name__ == "__main__":
    main()
