"""Method-comparison table plus the file outputs the CLI produces.

Equivalent shell commands:

    sphereopt benchmark --methods spherical-lbfgs,penalty,auglag,force \
        --n-list 10,20 --starts 8 --seed 0 --out out/bench
    sphereopt solve --method auglag --n 20 --starts 8 --out out/auglag20
    sphereopt gradcheck --objective auglag --n 5 --seed 3
    sphereopt pack --n 6 --restarts 40
    sphereopt export --input out/auglag20/config.json --output points.csv

Run:  python demos/08_benchmark_cli.py
"""

import json
import pathlib
import tempfile

from sphereopt import benchmark
from sphereopt.harness import RunSpec, run

out = pathlib.Path(tempfile.mkdtemp(prefix="sphereopt_demo_"))

table = benchmark(
    ["spherical-lbfgs", "penalty", "auglag", "force"],
    [10, 20],
    starts=8,
    seed=0,
    out_dir=str(out / "bench"),
)
print(table.format_text())

result, code = run(RunSpec(method="auglag", n=20, k=3, starts=8, seed=0,
                           output_dir=str(out / "auglag20")), quiet=False)
report = json.loads((out / "auglag20" / "report.json").read_text())
print("\nreport.json keys:", sorted(report)[:6], "...")
print("exit code:", code)
print("files under", out, ":")
for p in sorted(out.rglob("*")):
    if p.is_file():
        print("  ", p.relative_to(out))
