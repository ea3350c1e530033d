"""End-to-end checks of the krc binary: exit codes, stdin input and JSON schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema

KRC, ROOT = sys.argv[1], pathlib.Path(sys.argv[2])
DATA = ROOT / "data"
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())
validator = jsonschema.Draft202012Validator(SCHEMA)
FLOW = "flow states=1 letters=0\ndelta 0 0 0\nstate 0 {0:0}\n"
failures = []


def krc(*args, stdin=None):
    return subprocess.run([KRC, *args], input=stdin, capture_output=True, text=True)


def expect(args, code, stdin=None, check_json=True):
    r = krc(*args, stdin=stdin)
    if r.returncode != code:
        failures.append(f"{' '.join(args)}: exit {r.returncode}, wanted {code}\n{r.stdout}{r.stderr}")
        return None
    if check_json and "--format" in args:
        doc = json.loads(r.stdout)
        errs = sorted(validator.iter_errors(doc), key=str)
        if errs:
            failures.append(f"{' '.join(args)}: schema: {errs[0].message}")
        return doc
    return r


def main():
    flow = pathlib.Path(sys.argv[3]) / "z2.flow"
    flow.write_text(FLOW)
    cases = [
        (["green", "builtin:T2"], 0),
        (["bounds", "builtin:SIS3"], 0),
        (["complexity", str(DATA / "T3.sg")], 0),
        (["complexity", str(DATA / "flipflop.sg")], 0),
        (["complexity", str(DATA / "trivial.sg")], 0),
        (["complexity", "builtin:SIS3", "--budget-states", "3"], 2),
        (["eval", "builtin:T3", "--k", "0"], 0),
        (["eval", "builtin:SIS2"], 0),
        (["divides", "builtin:Z2", "builtin:S3"], 0),
        (["divides", "builtin:S3", "builtin:Z2"], 0),
        (["flow-verify", "builtin:Z2", str(flow)], 0),
        (["complexity", str(DATA / "bad_image.sg")], 1),
        (["green", "no/such/file"], 1),
        (["green", "builtin:nope"], 1),
    ]
    for args, code in cases:
        expect(args, code, check_json=False)
        doc = expect([*args, "--format", "json"], code)
        if doc is not None and code == 2 and doc["status"] != "bounds-only":
            failures.append(f"{args}: status {doc['status']}")
        if doc is not None and code == 1 and doc["status"] != "error":
            failures.append(f"{args}: status {doc['status']}")

    # Usage errors are hard errors.
    expect(["frobnicate"], 1, check_json=False)
    expect(["eval", "builtin:T2", "--format", "yaml"], 1, check_json=False)

    # stdin input matches the file.
    a = krc("complexity", "-", "--format", "json", stdin=(DATA / "SIS2.sg").read_text())
    b = krc("complexity", str(DATA / "SIS2.sg"), "--format", "json")
    if a.stdout != b.stdout:
        failures.append("stdin and file reports differ")

    # Same input twice gives byte-identical output.
    for fmt in ("text", "json"):
        x = krc("eval", "builtin:T3", "--format", fmt).stdout
        y = krc("eval", "builtin:T3", "--format", fmt).stdout
        if x != y:
            failures.append(f"eval output not deterministic ({fmt})")

    doc = json.loads(krc("eval", "builtin:T3", "--format", "json").stdout)
    if not any(im.get("contradiction") for im in doc["results"]["images"]):
        failures.append("T3 eval has no contradiction")

    for f in failures:
        print("FAIL:", f)
    print(f"{len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
