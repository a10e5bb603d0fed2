"""Run a study from an INI file, persist it, reload it and check the records.

The same thing from the shell:

    heavyband study semicircle --config demos/semicircle.ini --out runs/semi
"""

import pathlib
import tempfile

from heavyband.experiments import run_study
from heavyband.experiments.config import load_config
from heavyband.experiments.persist import load, persist, records_equal

here = pathlib.Path(__file__).parent
summary = run_study(load_config(here / "semicircle.ini"), workers=4)
for key, value in summary.aggregate.items():
    print(f"{key:>14} {value}")
for key, ok in summary.assertions.items():
    print(f"{'PASS' if ok else 'FAIL'} {key}")

with tempfile.TemporaryDirectory() as out:
    persist(summary, out)
    print("files:", sorted(p.name for p in pathlib.Path(out).iterdir()))
    print("reload identical:", records_equal(load(out).records, summary.records))
