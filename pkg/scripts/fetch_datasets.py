#!/usr/bin/env python3
"""Download the five small KEEL imbalanced datasets used by the desk-scale
benchmark into data/keel/ (network required).

The benchmark names map onto KEEL archive names as follows:

    Newthyroid1      -> new-thyroid1   (positive = hyperthyroid class)
    Newthyroid2      -> new-thyroid2   (positive = hypothyroid class)
    Glass-tableware  -> glass6         (positive = tableware glass)
    Yeast-me1        -> yeast5         (positive = ME1 localization)
    Ecoli-om         -> ecoli4         (positive = outer membrane)

Each zip holds a single <name>.dat KEEL file whose label column is "Class"
with values positive/negative. Run from the repository root:

    python scripts/fetch_datasets.py [--dest data/keel]
"""

import argparse
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

BASE_URLS = (
    "https://sci2s.ugr.es/keel/dataset/data/imbalanced/{name}.zip",
    "https://sci2s.ugr.es/keel/keel-dataset/datasets/imbalanced/"
    "imb_IRlowerThan9/{name}.zip",
    "https://sci2s.ugr.es/keel/keel-dataset/datasets/imbalanced/"
    "imb_IRhigherThan9p1/{name}.zip",
    "https://sci2s.ugr.es/keel/keel-dataset/datasets/imbalanced/"
    "imb_IRhigherThan9p2/{name}.zip",
)

DATASETS = ("new-thyroid1", "new-thyroid2", "glass6", "yeast5", "ecoli4")


def fetch(name: str, dest: Path) -> bool:
    target = dest / f"{name}.dat"
    if target.exists():
        print(f"{target} already present")
        return True
    last_error = None
    for template in BASE_URLS:
        url = template.format(name=name)
        try:
            with urllib.request.urlopen(url, timeout=30) as response:
                blob = response.read()
        except Exception as exc:  # try the next mirror path
            last_error = exc
            continue
        with zipfile.ZipFile(io.BytesIO(blob)) as zf:
            dat_names = [n for n in zf.namelist() if n.endswith(".dat")]
            if not dat_names:
                last_error = RuntimeError(f"{url}: zip holds no .dat file")
                continue
            # full-data file first; some archives also carry CV partitions
            dat_names.sort(key=len)
            target.write_bytes(zf.read(dat_names[0]))
        print(f"fetched {name} -> {target}")
        return True
    print(f"FAILED {name}: {last_error}", file=sys.stderr)
    return False


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data/keel", type=Path)
    args = parser.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)
    ok = all([fetch(name, args.dest) for name in DATASETS])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
