"""Validate the bundled fixtures and fresh CLI output against docs/*.schema.json.

Usage: python3 python/check_schemas.py   (needs `jsonschema`; builds the CLI)
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

ROOT = Path(__file__).resolve().parent.parent
DOCS = ROOT / "docs"
FIXTURES = ROOT / "fixtures"


def main() -> int:
    schemas = {p.name: json.loads(p.read_text()) for p in DOCS.glob("*.schema.json")}
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values()
    )

    def validate(schema: str, doc) -> None:
        jsonschema.Draft202012Validator(schemas[schema], registry=registry).validate(doc)

    subprocess.run(["cargo", "build", "-q", "-p", "lu-invar"], cwd=ROOT, check=True)
    cli = ROOT / "target" / "debug" / "lu-invar"

    def run(*args: str):
        out = subprocess.run([str(cli), *args], capture_output=True, text=True)
        return json.loads(out.stdout)

    for fixture in sorted(FIXTURES.glob("*.json")):
        validate("state_file.schema.json", json.loads(fixture.read_text()))
        validate("fingerprint.schema.json", run("compute", "--json", str(fixture)))
        print(f"{fixture.name}: state file and fingerprint valid")

    validate("report_file.schema.json", run("compare", "--json", str(FIXTURES / "rho1.json"), str(FIXTURES / "rho2.json")))
    with tempfile.TemporaryDirectory() as tmp:
        mixed = Path(tmp) / "mixed4.json"
        quarter = [[[0.25 if r == c else 0.0, 0.0] for c in range(4)] for r in range(4)]
        mixed.write_text(json.dumps({"dims": [4], "matrix": quarter}))
        validate("report_file.schema.json", run("compare", "--json", str(FIXTURES / "rho1.json"), str(mixed)))
    print("reports valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
