#!/usr/bin/env python3
"""Exit codes and output shape of every shimura-gate subcommand."""

import json
import os
import subprocess
import sys
import tempfile

EXE = sys.argv[1]
ZETA31 = '{"type":"cyclotomic","n":31}'
QI = '{"type":"quadratic","D":-4}'
Q5 = '{"type":"quadratic","D":5}'
failures = []


def run(*args):
    p = subprocess.run([EXE, *args], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def expect(name, args, code, check=None):
    rc, out, err = run(*args)
    if rc != code:
        failures.append(f"{name}: exit {rc}, expected {code}; stderr: {err.strip()}")
        return
    if check is not None:
        try:
            ok = check(json.loads(out) if out.strip() else None)
        except Exception as e:  # noqa: BLE001
            ok = False
            err = str(e)
        if not ok:
            failures.append(f"{name}: unexpected output {out[:200]}")


expect("split", ["split", "--field", ZETA31, "--prime", "2"], 0, lambda j: (j["e"], j["f"], j["g"]) == (1, 5, 6))
expect("hilbert place", ["hilbert", "--a", "-1", "--b", "-1", "--place", "2"], 0, lambda j: j["symbol"] == -1)
expect("hilbert all", ["hilbert", "--a", "6", "--b", "5"], 0, lambda j: j["product"] == 1)
expect("quatsplit", ["quatsplit", "--field", ZETA31, "--disc", "6"], 0, lambda j: j["splits"] is False)
expect("quatsplit pair", ["quatsplit", "--field", ZETA31, "--a", "6", "--b", "5"], 0, lambda j: j["disc"] == 6)
expect("quatsplit definite", ["quatsplit", "--field", Q5, "--a", "-1", "--b", "-1"], 2)
expect("classgroup", ["classgroup", "--field", '{"type":"quadratic","D":-24}'], 0, lambda j: j["h"] == 2)
expect("classgroup cyclotomic", ["classgroup", "--field", ZETA31], 2)
expect("fr", ["fr", "--norm", "4"], 0, lambda j: j["size"] == 16)
expect("badprimes", ["badprimes", "--field", QI, "--threads", "2"], 0,
       lambda j: {"2", "3", "5"} <= set(j["N1"]) and j["complete"])
expect("badprimes budget", ["badprimes", "--field", QI, "--budget", "100"], 3)
expect("lemma-check", ["lemma-check", "--norm", "11", "--q", "11", "--prime", "47", "--disc", "6"], 0,
       lambda j: j["verdict"] == "contradiction_reached")
expect("conic", ["conic", "--r", "1", "--s", "1", "--t", "3", "--place", "3", "--degree", "1"], 0,
       lambda j: j["solvable"] is False)
expect("conic field", ["conic", "--r", "1", "--s", "1", "--t", "3", "--place", "3", "--field", ZETA31], 0,
       lambda j: j["solvable"] is True and j["local_degree"] == 30)
expect("certify symbolic", ["certify", "--field", ZETA31, "--disc", "6", "--allow-symbolic"], 0,
       lambda j: j["threshold"]["P0"] == "128" and j["schema_version"] == 1)
expect("certify withheld", ["certify", "--field", ZETA31, "--disc", "6"], 3)
expect("certify inapplicable", ["certify", "--field", QI, "--disc", "6"], 2, lambda j: j["status"] == "inapplicable")
expect("certify budget", ["certify", "--field", Q5, "--disc", "6", "--budget", "10"], 3)
expect("missing field", ["split", "--prime", "2"], 1)
expect("bad disc", ["certify", "--field", Q5, "--disc", "5"], 1)
expect("no subcommand", [], 1)

with tempfile.TemporaryDirectory() as tmp:
    a, b = os.path.join(tmp, "a.json"), os.path.join(tmp, "b.json")
    expect("certify --out", ["certify", "--field", Q5, "--disc", "6", "--threads", "1", "--out", a], 0)
    expect("certify --out again", ["certify", "--field", Q5, "--disc", "6", "--threads", "3", "--out", b], 0)
    if open(a).read() != open(b).read():
        failures.append("certificate bytes differ between runs")
    # Class data written by classgroup feeds back into badprimes.
    cd = os.path.join(tmp, "cd.json")
    expect("classgroup --out", ["classgroup", "--field", Q5, "--out", cd], 0)
    expect("badprimes --class-data", ["badprimes", "--field", Q5, "--class-data", cd], 0,
           lambda j: j["class_data"]["provenance"] == "ingested")

for f in failures:
    print("FAIL", f)
print(f"{len(failures)} CLI failures")
sys.exit(1 if failures else 0)
