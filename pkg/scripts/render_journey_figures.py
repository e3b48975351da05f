#!/usr/bin/env python3
"""Render the built-in example journey as Graphviz DOT files.

Writes ``john-doe-journey.dot`` (patient, intake form, encounters, links)
and ``john-doe-full.dot`` (adds every clinical subrecord as its own node)
to the output directory, then prints the validation summary for the
bundle.  Render the files with ``dot -Tsvg`` if Graphviz is installed.
"""

import argparse
from pathlib import Path

from pjo import john_doe_bundle, parse_bundle, to_dot
from pjo.seed import JOHN_DOE_ID


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out-dir", default="out", help="directory for the .dot files (default: out)"
    )
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    result = parse_bundle(john_doe_bundle())
    assert result.ok, result.problems
    graph = result.graph
    report = graph.check_invariants()

    for detail in ("journey", "full"):
        path = out_dir / f"john-doe-{detail}.dot"
        path.write_text(to_dot(graph, JOHN_DOE_ID, detail=detail), encoding="utf-8")
        print(f"wrote {path}")

    print(
        f"validation: {len(report.errors)} errors, "
        f"{len(report.warnings)} warnings, "
        f"{len(graph.encounters)} encounters, {len(graph.edges)} links"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
