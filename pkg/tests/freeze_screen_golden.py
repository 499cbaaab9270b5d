"""Regenerate tests/golden/screen_*.json (run by hand).

The demo records are rebuilt with HFK tables, genus, fiberedness and
Alexander polynomials taken from the frozen brute-force oracle files rather
than from the grid engine, then screened.  The CLI output must match.
"""

import json
from pathlib import Path

from ribbonkit import reports, screen

GOLDEN = Path(__file__).parent / "golden"


def oracle_record(raw):
    data = dict(raw)
    grid = data.pop("grid", None)
    if grid is not None:
        tables = json.loads((GOLDEN / f"{data['name']}.json").read_text())
        hat = tables["hat"]
        top = max(a for _, a, _ in hat)
        top_dim = sum(d for _, a, d in hat if a == top)
        data.update(
            hfk=hat,
            hfk_source="engine",
            genus=top,
            fibered=top_dim == 1,
            alexander=tables["alexander_minesweeper"],
            arc_index=len(tables["xs"]),
        )
    return screen.record_from_dict(data)


def main():
    lines = screen.demo_database_path().read_text().splitlines()
    db = [oracle_record(json.loads(line)) for line in lines if line.strip()]
    for target in ("trefoil", "figure8"):
        K = next(r for r in db if r.name == target)
        payload = reports.screen_report(target, screen.screen_database(K, db))
        (GOLDEN / f"screen_{target}.json").write_text(reports.structured(payload))
        print(target, payload["summary"])


if __name__ == "__main__":
    main()
