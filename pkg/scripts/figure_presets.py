"""Write every figure preset as CSV (plus a metadata sidecar) into a directory.

    python3 scripts/figure_presets.py [outdir]
"""
import sys
from pathlib import Path

from probeline import cli


def main(outdir="presets_out"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(cli.PRESETS):
        path = out / f"{name}.csv"
        code = cli.run(["spectrum", "--preset", name, "--out", str(path)])
        print(f"{name}: exit {code} -> {path}")
    print(cli.PRESET_NOTE)


if __name__ == "__main__":
    main(*sys.argv[1:])
