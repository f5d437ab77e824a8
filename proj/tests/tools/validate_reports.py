#!/usr/bin/env python3
"""Runs the frv command-line tool on the fixtures and checks exit codes and JSON reports."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema


def main():
    if len(sys.argv) != 4:
        print("usage: validate_reports.py <frv> <schema.json> <fixtures-dir>", file=sys.stderr)
        return 2
    frv, schema_path, fixtures = sys.argv[1:]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    def fx(name):
        return os.path.join(fixtures, name)

    failures = []

    def check(label, args, want_code, want_verdict=None, want_engine=None):
        with tempfile.TemporaryDirectory() as tmp:
            report = os.path.join(tmp, "report.json")
            proc = subprocess.run([frv] + args + ["--json", report], capture_output=True, text=True)
            if proc.returncode != want_code:
                failures.append(f"{label}: exit {proc.returncode}, expected {want_code}\n{proc.stderr}")
                return
            if want_code == 2:
                if not proc.stderr.strip():
                    failures.append(f"{label}: no diagnostic on stderr")
                return
            with open(report) as f:
                doc = json.load(f)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors:
            failures.append(f"{label}: {'/'.join(map(str, e.path))}: {e.message}")
        if doc.get("verdict") != want_verdict:
            failures.append(f"{label}: verdict {doc.get('verdict')}, expected {want_verdict}")
        if doc.get("engine") != want_engine:
            failures.append(f"{label}: engine {doc.get('engine')}, expected {want_engine}")
        if (doc.get("counterexample") is None) != (want_verdict == "Resistant"):
            failures.append(f"{label}: counterexample presence does not match verdict")

    base = ["--config", fx("zeta_1_1_all_c.json")]
    checker = ["--config", fx("zeta_1_1_all_c_checker.json")]
    for engine, cmd in (("sat", "verify"), ("oracle", "oracle")):
        check(f"{cmd} rect_parity", [cmd, fx("rect_parity.nl")] + base, 1, "NotResistant", engine)
        check(f"{cmd} rect_revised", [cmd, fx("rect_revised.nl")] + base, 0, "Resistant", engine)
        check(f"{cmd} rect_revised checker", [cmd, fx("rect_revised.nl")] + checker, 0, "Resistant", engine)
        check(f"{cmd} missing netlist", [cmd, fx("missing.nl")] + base, 2)
    check("verify aggressive", ["verify", fx("rect_parity.nl")] + base + ["--aggressive"], 1, "NotResistant", "sat")
    check("verify external", ["verify", fx("rect_parity.nl")] + base + ["--solver", f"{frv} solve"], 1,
          "NotResistant", "sat")
    check("verify no reductions",
          ["verify", fx("rect_revised.nl")] + base + ["--no-reduce-types", "--no-reduce-gates"], 0, "Resistant", "sat")

    for line in failures:
        print("FAIL", line)
    print(f"{'PASS' if not failures else 'FAIL'}: report checks, {len(failures)} problem(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
