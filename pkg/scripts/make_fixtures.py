#!/usr/bin/env python3
"""Regenerate the bundled automaton fixture files from their builders."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from mealy.machines import FIXTURE_BUILDERS  # noqa: E402


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parents[1] / "fixtures"
    out_dir.mkdir(exist_ok=True)
    for name, builder in FIXTURE_BUILDERS.items():
        path = out_dir / f"{name}.json"
        path.write_text(builder().dumps(), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
