#!/usr/bin/env python3
"""Smoke test for the colored_partitions_py extension module.

Builds nothing itself: it locates the cdylib produced by
`cargo build -p colored-partitions-py` (debug or release), exposes it under
the importable module name, and exercises the main types and operations.

Run from the repository root:

    cargo build -p colored-partitions-py
    python3 python/smoke_test.py
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("debug", "release")
        for name in (
            "libcolored_partitions_py.so",
            "libcolored_partitions_py.dylib",
            "colored_partitions_py.dll",
        )
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit(
            "extension module not found; run "
            "`cargo build -p colored-partitions-py` first"
        )
    return max(built, key=lambda p: p.stat().st_mtime)


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        shutil.copy(locate_cdylib(), Path(tmp) / "colored_partitions_py.so")
        sys.path.insert(0, tmp)
        import colored_partitions_py as cp

        # Forward machine on the small worked example.
        lam = cp.Partition(["5[b]", "3[d]", "2[a]", "1[d]", "1[c]", "1[b]", "1[a]"])
        assert lam.ground() == "O" and lam.size() == 14
        out, trace_json = lam.phi()
        assert str(out) == "5[b] 4[ad] 3[bc] 2[ad]"
        trace = json.loads(trace_json)
        assert len(trace["snapshots"]) == 4 and trace["theta"] is None

        # Backward machine inverts it, with a full crossing permutation.
        back, back_trace = out.psi()
        assert back == lam
        assert json.loads(back_trace)["theta"] is not None
        assert out.in_image()
        assert all(
            out.in_image_via(r) for r in ("cond2", "cond3", "roundtrip")
        )

        # Bridge report of the larger worked example.
        nu = cp.Partition(
            ["14[bd]", "11[a]", "10[ad]", "9[bc]", "8[ac]", "3[c]", "2[cd]", "2[ab]"]
        )
        report = json.loads(nu.bridge_json())
        assert report["I"] == [1, 4, 6, 8, 11, 13]
        assert report["J"] == [3, 10]
        assert report["TS"] == [4, 11]
        assert dict(map(tuple, report["Br"])) == {
            1: 3, 4: 8, 6: 8, 8: 8, 11: 11, 13: 13,
        }
        assert nu.motzkin_word() == "HUDUUDUDDHUDUD"
        assert nu.theta() == [2, 3, 1, 5, 6, 7, 8, 4, 9, 10, 11, 12, 13, 14]
        assert json.loads(nu.forest_json())["trees"]
        assert nu.forest_dot().startswith("digraph")

        # JSON wire format round trip.
        again = cp.Partition.from_json(nu.to_json())
        assert again == nu

        # Enumeration and counting.
        assert len(cp.enumerate_ground("O", 2, 3)) == 6
        assert cp.verify_identity(3, 8)
        assert cp.verify_inequality(4, 8)
        rows = json.loads(cp.count_report_json(2, 5))["rows"]
        assert all(r["u"] == r["w"] for r in rows)

        # Pattern mining: the four-color search finds only the two families.
        mined = cp.mine(4, 5, 12)
        assert mined and all(family is not None for _, _, family in mined)
        assert any(sym == "cd -> ab ->> c, k=1" for _, sym, _ in mined)
        assert cp.shortcuts(4, 4, 8) == []

        # The weight-12 specialization and its matching enumerations.
        assert cp.Partition(["3[ad]", "2[bc]", "1[a]"]).specialize12() == [27, 18, 4]
        first, second = cp.corollary12(49)
        assert len(first) == len(second) == 8
        assert [45, 4] in second

    print("smoke test passed")


if __name__ == "__main__":
    main()
