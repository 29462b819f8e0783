#!/usr/bin/env python3
"""Smoke test for the mcds_py extension module.

Builds are produced by cargo; this script locates the compiled cdylib,
stages it under the importable name, and exercises the main surface:

    cargo build --release -p mcds-python
    python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    candidates = []
    for profile in ("release", "debug"):
        for stem in ("libmcds_py.so", "mcds_py.dll", "libmcds_py.dylib"):
            p = REPO / "target" / profile / stem
            if p.exists():
                candidates.append(p)
    if not candidates:
        sys.exit(
            "mcds_py cdylib not found; run `cargo build --release -p mcds-python` first"
        )
    return max(candidates, key=lambda p: p.stat().st_mtime)


def main() -> None:
    lib = locate_cdylib()
    staging = Path(tempfile.mkdtemp(prefix="mcds-py-"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy2(lib, staging / f"mcds_py{suffix}")
    sys.path.insert(0, str(staging))

    import mcds_py

    checks = 0

    def check(cond, message):
        nonlocal checks
        if not cond:
            sys.exit(f"FAIL: {message}")
        checks += 1

    # Branching numbers.
    phi = mcds_py.branching_number([2, 2, 3])
    check(abs(phi - 1.6180339887498949) < 1e-9, f"branching_number = {phi}")
    check(mcds_py.step6_vector(3) == [3, 4, 4, 1], "step6_vector(3)")
    worst = mcds_py.branching_number([3, 4, 4, 1])
    check(abs(worst - 1.7254) < 1e-3, f"worst-case root = {worst}")

    # Complete bipartite K_{2,3}: six solutions, both engines agree.
    g = mcds_py.Graph(2, 3, [(1, 3), (1, 3)])
    fast = g.enumerate_mcds()
    slow = g.oracle_mcds()
    check(len(fast) == 6, f"K23 solutions = {len(fast)}")
    check(sorted(fast) == sorted(slow), "K23 engines disagree")
    check(g.is_minimal_cds(["u1", "w2"]), "K23 {u1, w2} minimality")
    check(not g.is_minimal_cds(["u1", "u2", "w2"]), "K23 non-minimal set")
    check(g.neighbors("w2") == ["u1", "u2"], "neighbors(w2)")
    check(g.check_structure(fast) == [], "structural checks on K23")

    # Lower-bound family: 3^k solutions, verified trace.
    lb = mcds_py.Graph.lower_bound(3)
    check(lb.n == 11, "lower_bound(3) size")
    sols, stats, trace = lb.enumerate_mcds_full(collect_trace=True)
    check(len(sols) == 27, f"lower_bound(3) solutions = {len(sols)}")
    check(stats["duplicates"] == 0, "duplicates")
    check(stats["measure_violations"] == 0, "measure violations")
    check(mcds_py.verify_trace(trace) == [], "trace verification")
    check(len(lb.oracle_mcds()) == 27, "oracle on lower_bound(3)")

    # Stars and validation.
    star = mcds_py.Graph(1, 5, [(1, 5)])
    report = star.validate()
    check(report["is_star"] and report["star_center"] == "u1", "star detection")
    check(star.enumerate_mcds() == [["u1"]], "star solution")
    check(star.cut_vertices() == ["u1"], "star cut vertex")

    # Text round-trip and seeded generation.
    rnd = mcds_py.Graph.random(5, 5, 42)
    again = mcds_py.Graph.from_text(rnd.to_text())
    check(again.to_text() == rnd.to_text(), "text round-trip")
    check(rnd.enumerate_mcds() == rnd.oracle_mcds(), "random instance differential")

    # Convex-ordering checks: a 6-cycle has no convex ordering.
    c6 = [[1, 3], [1, 2], [2, 3]]
    from itertools import permutations

    check(
        not any(mcds_py.is_convex_ordering(c6, 3, list(p)) for p in permutations([1, 2, 3])),
        "C6 must not admit a convex ordering",
    )
    check(mcds_py.is_convex_ordering([[1, 2, 3], [1, 2, 3]], 3, [1, 2, 3]), "K23 ordering")

    print(f"smoke test OK ({checks} checks)")


if __name__ == "__main__":
    main()
