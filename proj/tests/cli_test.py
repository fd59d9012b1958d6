#!/usr/bin/env python3
"""End-to-end checks of the thetabody command line: values, exit codes,
report schema, determinism and flag/env precedence.

usage: cli_test.py BINARY DATA_DIR SCHEMA
"""
import json
import math
import os
import subprocess
import sys
import tempfile

BIN, DATA, SCHEMA = sys.argv[1:4]

try:
    import jsonschema
    with open(SCHEMA) as fh:
        VALIDATOR = jsonschema.Draft202012Validator(json.load(fh))
except ImportError:
    VALIDATOR = None

failures = []
checks = 0


def check(ok, what):
    global checks
    checks += 1
    if not ok:
        failures.append(what)
        print("FAIL:", what)


def run(*args, env=None, expect=0):
    full_env = {k: v for k, v in os.environ.items() if not k.startswith("THETA_")}
    full_env.update(env or {})
    p = subprocess.run([BIN, "--quiet", *args], capture_output=True, text=True, env=full_env)
    check(p.returncode == expect, f"{' '.join(args)}: exit {p.returncode}, expected {expect}")
    report = None
    if p.stdout.strip():
        report = json.loads(p.stdout)
        if VALIDATOR is not None:
            errors = sorted(VALIDATOR.iter_errors(report), key=str)
            check(not errors, f"{' '.join(args)}: schema: {errors[0].message if errors else ''}")
    return report


def data(name):
    return os.path.join(DATA, name)


def near(a, b, tol):
    return a is not None and math.isclose(a, b, abs_tol=tol)


# theta on graph ideals
r = run("theta", "--model", "stable", "--graph", data("c5.col"), "--level", "1")
check(near(r["result"]["value"], math.sqrt(5), 1e-6), "theta C5 level 1 is sqrt 5")
check(r["result"]["status"] == "Optimal", "theta C5 level 1 optimal")
check(r["inputDigest"].startswith("sha256:"), "input digest present")
r = run("theta", "--model", "stable", "--graph", data("c5.col"), "--level", "2")
check(near(r["result"]["value"], 2.0, 1e-5), "theta C5 level 2 is 2")
r = run("theta", "--model", "stable", "--graph", data("c7.col"), "--level", "2")
check(near(r["result"]["value"], 3.0, 1e-5), "theta C7 level 2 is 3")
r = run("theta", "--model", "cut", "--graph", data("k3.col"), "--level", "1")
check(near(r["result"]["value"], 3.0, 1e-5), "cut K3 level 1 is 3")
r = run("theta", "--model", "cut", "--graph", data("k3.col"), "--level", "2")
check(near(r["result"]["value"], 2.0, 1e-5), "cut K3 level 2 is the max cut")

# exactness
r = run("exactness", "--points", data("cube.json"))
check(r["result"]["isTwoLevel"] is True and r["result"]["thetaRankUpperBound"] == 1, "cube is two-level")
r = run("exactness", "--points", data("ex56.json"))
check(r["result"]["isTwoLevel"] is False, "four points are not two-level")
r = run("exactness", "--points", data("c5-stablesets.json"))
check(r["result"]["thetaRankUpperBound"] == 2, "C5 stable sets rank bound 2")
r = run("exactness", "--points", data("cross3.json"))
check(r["result"]["isTwoLevel"] is True, "cross-polytope is two-level")

# classify01
r = run("classify01", "--dim", "2")
check(r["result"]["classCount"] == 2, "two non-degenerate classes in the square")
r = run("classify01", "--dim", "3", "--jobs", "2")
classes = r["result"]["classes"]
check(r["result"]["classCount"] == 8, "eight classes in the cube")
check(sum(1 for c in classes if c["exact"]) == 5, "five exact classes in the cube")
r1 = run("classify01", "--dim", "3", "--jobs", "1")
check(r1["result"] == r["result"], "classify01 independent of --jobs")

# th1
r = run("th1", "member", "--gens", data("ex55.json"), "--query", "1,0,0")
check(r["result"]["status"] == "Outside", "(1,0,0) outside TH1")
r = run("th1", "member", "--gens", data("ex55.json"), "--query", "0,0,1")
check(r["result"]["status"] == "Inside", "(0,0,1) inside TH1")
r = run("th1", "member", "--gens", data("empty-gens.json"), "--query", "5,-7,3")
check(r["result"]["status"] == "Inside", "empty ideal: every point inside")
r = run("th1", "convex", "--gens", data("ex55.json"))
check(r["result"]["exists"] is True, "convex quadric exists for x1^2 - x3, x2^2 - x3")
r = run("th1", "convex", "--points", data("ex56.json"), "--range", "1,1")
lo, hi = r["result"]["entryRange"]["min"], r["result"]["entryRange"]["max"]
check(near(lo, 0.5 - math.sqrt(3) / 4, 1e-6) and near(hi, 0.5 + math.sqrt(3) / 4, 1e-6), "A11 range")

# moment-dump
r = run("moment-dump", "--points", data("zero-one.json"), "--level", "1")
check(len(r["result"]["template"]["rows"]) == 2, "{0,1} level 1 is 2x2")
r = run("moment-dump", "--points", data("three-points.json"), "--level", "1")
cells = {tuple(c["cell"]): c["coeffs"] for c in r["result"]["template"]["cells"]}
check(cells[("x1", "x2")] == {}, "three points: x1*x2 cell is zero")
r = run("moment-dump", "--points", data("remark212.json"), "--level", "2")
check(r["result"]["template"]["rows"] == ["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"], "14 points: 6x6 rows")

# solve
r = run("solve", "--sdp", data("disk.json"))
check(r["result"]["status"] == "Optimal" and near(r["result"]["objective"], 1.0, 1e-6), "disk optimum 1")
r = run("solve", "--sdp", data("infeasible.json"))
check(r["result"]["status"] == "Infeasible", "infeasible LMI detected")
check(r["result"].get("infeasibilityCertificate") is not None, "certificate reported")

# exit codes
run("theta", "--graph", data("missing.col"), expect=2)
run("theta", "--graph", data("c5.col"), "--level", "0", expect=2)
run("exactness", "--points", data("c5.col"), expect=2)
r = run("theta", "--graph", data("c5.col"), "--enum-cap", "3", expect=3)
check(r["error"]["kind"] == "resource", "enumeration cap is a resource error")
r = run("theta", "--graph", data("c5.col"), "--max-iter", "1", expect=4)
check(r["result"]["status"] == "IterLimit", "iteration limit reported")
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
    fh.write("{ not json")
    broken = fh.name
try:
    r = run("solve", "--sdp", broken, expect=2)
    check(r["error"]["kind"] == "input", "malformed JSON is an input error")
finally:
    os.unlink(broken)

# determinism modulo wall time
def strip(report):
    report = dict(report)
    report.pop("wallTimeSeconds")
    return report


a = run("theta", "--graph", data("c5.col"), "--level", "2")
b = run("theta", "--graph", data("c5.col"), "--level", "2")
check(strip(a) == strip(b), "identical reports for identical invocations")
a = run("exactness", "--points", data("c5-stablesets.json"))
b = run("exactness", "--points", data("c5-stablesets.json"))
check(strip(a) == strip(b), "identical exactness reports")

# environment defaults, flags win
r = run("theta", "--graph", data("c5.col"), env={"THETA_MAX_ITER": "1"}, expect=4)
check(r["parameters"]["solver"]["maxIter"] == 1, "THETA_MAX_ITER applies")
r = run("theta", "--graph", data("c5.col"), "--max-iter", "200", env={"THETA_MAX_ITER": "1"})
check(r["parameters"]["solver"]["maxIter"] == 200, "flag overrides environment")
r = run("theta", "--graph", data("c5.col"), env={"THETA_LEVEL": "2"})
check(r["parameters"]["level"] == 2 and near(r["result"]["value"], 2.0, 1e-5), "THETA_LEVEL applies")

print(f"{checks - len(failures)}/{checks} checks passed"
      + ("" if VALIDATOR else " (jsonschema unavailable, schema not checked)"))
sys.exit(1 if failures else 0)
