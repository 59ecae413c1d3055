#!/usr/bin/env python3
"""Rewrite tests/golden/reference.tseal from its deterministic recipe.

Run after an intentional wire-format change, then review the diff:

    python3 scripts/regen_golden.py
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

from goldenrecipe import reference_seal_bytes  # noqa: E402


def main() -> None:
    target = REPO / "tests" / "golden" / "reference.tseal"
    data = reference_seal_bytes()
    previous = target.read_bytes() if target.exists() else None
    target.write_bytes(data)
    if previous == data:
        print(f"{target}: unchanged ({len(data)} bytes)")
    else:
        print(f"{target}: rewritten ({len(data)} bytes)")


if __name__ == "__main__":
    main()
