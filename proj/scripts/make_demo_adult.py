#!/usr/bin/env python3
# Copyright 2026 The FALE Plots Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates data/adult_demo.csv and data/adult_schema.json.

The bundled demonstration dataset is fully synthetic. It mimics the shape
of the UCI census income data (age, education level, weekly hours, sex,
income bracket) with an outcome structure that favors the "Male" group,
so audits on it show the protected group at a disadvantage. Use
scripts/fetch_adult.sh to work with the real data instead.

The output is deterministic; rerunning this script must reproduce the
committed files byte for byte.
"""

import csv
import json
import math
import os
import random

SEED = 20260824
ROWS = 2400

SCHEMA = {
    "features": [
        {"name": "age", "kind": "numeric", "role": "feature"},
        {"name": "education_num", "kind": "numeric", "role": "feature"},
        {"name": "hours_per_week", "kind": "numeric", "role": "feature"},
        {
            "name": "sex",
            "kind": "categorical",
            "role": "protected",
            "category_order": ["Female", "Male"],
        },
        {"name": "income", "kind": "numeric", "role": "target"},
    ]
}


def clamp(v, lo, hi):
    return max(lo, min(hi, v))


def make_rows(rng):
    rows = []
    for _ in range(ROWS):
        male = rng.random() < 0.55
        age = clamp(int(rng.gauss(38.0, 12.0)), 17, 90)
        education = clamp(int(rng.gauss(10.3, 2.6)), 1, 16)
        hours = clamp(int(rng.gauss(42.0 if male else 36.0, 9.0)), 1, 99)
        # Log-odds of the favorable outcome; the direct group term plus the
        # hours gap makes "Male" the advantaged value.
        z = (
            -7.2
            + 0.045 * age
            + 0.32 * education
            + 0.04 * hours
            + (0.95 if male else 0.0)
        )
        p = 1.0 / (1.0 + math.exp(-z))
        income = 1 if rng.random() < p else 0
        rows.append([age, education, hours, "Male" if male else "Female",
                     income])
    return rows


def main():
    out_dir = os.path.join(os.path.dirname(__file__), os.pardir, "data")
    os.makedirs(out_dir, exist_ok=True)
    rng = random.Random(SEED)
    rows = make_rows(rng)

    csv_path = os.path.join(out_dir, "adult_demo.csv")
    with open(csv_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(
            ["age", "education_num", "hours_per_week", "sex", "income"])
        writer.writerows(rows)

    schema_path = os.path.join(out_dir, "adult_schema.json")
    with open(schema_path, "w") as f:
        json.dump(SCHEMA, f, indent=2)
        f.write("\n")

    positives = sum(r[4] for r in rows)
    by_sex = {"Male": [0, 0], "Female": [0, 0]}
    for r in rows:
        by_sex[r[3]][0] += 1
        by_sex[r[3]][1] += r[4]
    print(f"wrote {csv_path}: {len(rows)} rows, {positives} positive")
    for sex, (n, pos) in sorted(by_sex.items()):
        print(f"  {sex}: {n} rows, positive rate {pos / n:.3f}")


if __name__ == "__main__":
    main()
