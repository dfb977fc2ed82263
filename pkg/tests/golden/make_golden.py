"""Regenerate the golden baselines. Run once per intentional change:

    python tests/golden/make_golden.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE.parent))

import measurements as m  # noqa: E402

from omegacircle import __version__  # noqa: E402


def dump(name: str, doc: dict) -> None:
    doc = {"version": __version__, **doc}
    (HERE / name).write_text(json.dumps(doc, indent=1) + "\n")
    print("wrote", name)


def main() -> None:
    t, prefix, coeffs = m.setup()
    dump("local_accuracy.json", m.local_accuracy(t, prefix, coeffs))
    dump("series_truncation.json", m.series_truncation(t, coeffs))
    dump("main_term_trend.json", m.main_term_trend(t, prefix, coeffs))
    dump("u_window.json", m.u_window())
    dump("bound_scan.json", m.bound_scan(t, prefix))


if __name__ == "__main__":
    main()
