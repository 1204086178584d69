"""Corpus files validate against the published schema; invalid fixtures do not."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "schema" / "instance.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

failures = []
valid = sorted((root / "corpus").glob("*.json")) + sorted((root / "tests" / "data" / "rejected").glob("*.json"))
for path in valid:
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    if errors:
        failures.append(f"{path.name}: {errors[0].message}")
for path in sorted((root / "tests" / "data" / "invalid").glob("*.json")):
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError:
        continue
    if validator.is_valid(doc):
        failures.append(f"{path.name}: accepted by the schema")

for f in failures:
    print(f)
print(f"checked {len(valid)} valid files")
sys.exit(1 if failures else 0)
