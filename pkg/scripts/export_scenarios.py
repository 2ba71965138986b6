#!/usr/bin/env python3
"""Write the scenario catalog (seed-0 form) to scenarios/<id>.json."""
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from atsim.scenarios import catalog_entry

out = pathlib.Path(__file__).resolve().parents[1] / "scenarios"
out.mkdir(exist_ok=True)
for sid in range(1, 6):
    path = out / f"{sid}.json"
    path.write_text(json.dumps(catalog_entry(sid), indent=1, sort_keys=True) + "\n")
    print(path)
