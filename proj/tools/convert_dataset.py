#!/usr/bin/env python3
# Copyright 2026 The FairGNN Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Converts a tabular graph release into nodes.csv and edges.csv.

The column map (configs/datasets/*.toml) names the label and sensitive
columns, the values mapped to 1 and 0, and columns to drop. Every other
column becomes a numeric feature. Values outside both mappings are written
as unobserved.
"""

import argparse
import csv
import pathlib
import sys


def read_map(path):
    entries = {}
    for number, raw in enumerate(pathlib.Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            sys.exit(f"{path}:{number}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        entries[key] = value
    required = ["nodes", "edges", "label", "label_positive", "label_negative", "sensitive",
                "sensitive_positive", "sensitive_negative"]
    missing = [key for key in required if key not in entries]
    if missing:
        sys.exit(f"{path}: missing keys {', '.join(missing)}")
    entries["drop"] = [c.strip() for c in entries.get("drop", "").split(",") if c.strip()]
    return entries


def binary(value, positive, negative):
    value = value.strip()
    if value == positive:
        return "1"
    if value == negative:
        return "0"
    return ""


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--map", required=True, help="column map file")
    parser.add_argument("--source", required=True, help="directory holding the release files")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args()

    spec = read_map(args.map)
    source = pathlib.Path(args.source)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with open(source / spec["nodes"], newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        sys.exit(f"{spec['nodes']}: no rows")
    skip = {spec["label"], spec["sensitive"], *spec["drop"]}
    features = [c for c in rows[0].keys() if c not in skip]

    with open(out / "nodes.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["id", *(f"feat_{k}" for k in range(len(features))), "label", "sensitive"])
        for index, row in enumerate(rows):
            try:
                values = [repr(float(row[c])) for c in features]
            except ValueError as error:
                sys.exit(f"{spec['nodes']}: row {index + 2}: {error}")
            writer.writerow([index, *values,
                             binary(row[spec["label"]], spec["label_positive"], spec["label_negative"]),
                             binary(row[spec["sensitive"]], spec["sensitive_positive"],
                                    spec["sensitive_negative"])])

    with open(source / spec["edges"]) as f, open(out / "edges.csv", "w", newline="") as g:
        writer = csv.writer(g)
        writer.writerow(["src", "dst"])
        for number, line in enumerate(f, 1):
            parts = line.replace(",", " ").split()
            if not parts:
                continue
            if len(parts) != 2:
                sys.exit(f"{spec['edges']}:{number}: expected two node indices")
            writer.writerow([int(float(parts[0])), int(float(parts[1]))])

    print(f"{len(rows)} nodes, {len(features)} features -> {out}")


if __name__ == "__main__":
    main()
