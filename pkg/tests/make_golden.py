"""Regenerate the pinned CLI outputs: ``python3 tests/make_golden.py``."""
from pathlib import Path

from kep.cli import run

from golden_cases import CASES

HERE = Path(__file__).parent / "golden"

if __name__ == "__main__":
    for name, argv in CASES.items():
        code = run(argv + ["--output", str(HERE / name)])
        print(f"{code}  {name}")
