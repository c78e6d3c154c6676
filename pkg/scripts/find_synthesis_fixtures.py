"""Search simple coupling menus for feasible two-pulse synthesis fixtures.

Scans a small family of coupling vectors for every direction and target
block label, keeps the problems whose search succeeds, and writes them
(plus a couple of deliberately infeasible ones) into fixtures/synthesis/.
Run from the repository root:

    python scripts/find_synthesis_fixtures.py [--write]
"""

from __future__ import annotations

import argparse
import json
import itertools
from pathlib import Path

from ising_teleport.synthesis import (
    SearchBounds,
    SynthesisProblem,
    gate_library,
    solve_two_pulse,
)

COUPLING_MENU = [
    (1.0, 2.0, 3.0),
    (2.0, 1.0, 3.0),
    (3.0, 1.0, 2.0),
    (1.0, 0.3, 2.0),
    (2.0, 0.4, 0.9),
    (0.8, 1.6, 2.4),
]

# modest box: enough for every menu entry while keeping runs quick
BOUNDS = SearchBounds(n_minus=(0, 3), np_minus=(0, 3), m_plus_n_abs_max=8,
                      n_alpha_abs_max=8, s_allowed=None)


def scan() -> list[dict]:
    found = []
    for h in (1, 2, 3):
        per_h = 0
        for J, j in itertools.product(COUPLING_MENU, (1, 2)):
            if per_h >= 3:
                break
            problem = SynthesisProblem(h=h, J=J, Jp=J, bounds=BOUNDS)
            target = gate_library(h, j)
            report = solve_two_pulse(problem, target)
            if not report.feasible:
                continue
            seq = report.sequence
            found.append({
                "name": f"h{h}_{chr(ord('a') + per_h)}",
                "problem": problem.to_dict(),
                "target": {"h": h, "j": j},
                "expect_feasible": True,
                "golden": {
                    "xi": seq.xi,
                    "chi": seq.chi,
                    "t1": seq.t1,
                    "t2": seq.t2,
                    "total_time": seq.total_time,
                    "integers": seq.integers.to_dict(),
                    "residual": report.residual,
                },
            })
            per_h += 1
            print(f"h={h} j={j} J={J}: xi={seq.xi:+.6f} chi={seq.chi:+.6f} "
                  f"t={seq.total_time:.4f} residual={report.residual:.2e}")
    return found


def infeasible_fixtures() -> list[dict]:
    # couplings that keep |A|, |B| < 1 for every integer tuple in a tiny
    # box: no real field ratio exists, the search must reason its way out
    tiny = SearchBounds(n_minus=(0, 0), np_minus=(0, 0), m_plus_n_abs_max=2,
                        n_alpha_abs_max=2, s_allowed=None)
    return [
        {
            "name": "infeasible_h1",
            "problem": SynthesisProblem(h=1, J=(0.05, 2.0, 3.0), Jp=(0.05, 2.0, 3.0), bounds=tiny).to_dict(),
            "target": {"h": 1, "j": 2},
            "expect_feasible": False,
        },
        {
            "name": "infeasible_h3",
            "problem": SynthesisProblem(h=3, J=(2.0, 3.0, 0.05), Jp=(2.0, 3.0, 0.05), bounds=tiny).to_dict(),
            "target": {"h": 3, "j": 1},
            "expect_feasible": False,
        },
    ]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--write", action="store_true", help="write fixtures/synthesis/*.json")
    parser.add_argument("--dest", default="fixtures/synthesis")
    args = parser.parse_args()

    fixtures = scan() + infeasible_fixtures()
    print(f"\n{len(fixtures)} fixtures")
    if args.write:
        dest = Path(args.dest)
        dest.mkdir(parents=True, exist_ok=True)
        for fixture in fixtures:
            name = fixture.pop("name")
            path = dest / f"{name}.json"
            path.write_text(json.dumps(fixture, indent=2, sort_keys=True) + "\n")
            print(f"wrote {path}")


if __name__ == "__main__":
    main()
