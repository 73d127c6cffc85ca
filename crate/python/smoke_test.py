#!/usr/bin/env python3
"""Smoke test for the groupevo_py extension module.

Builds the cdylib if needed, loads it, and pushes a small scripted
network through windowing, community detection, importance, event
classification and evaluation.

Usage: python3 python/smoke_test.py
"""
import shutil
import subprocess
import sys
import sysconfig
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module() -> None:
    target = ROOT / "target" / "release" / "libgroupevo_py.so"
    if not target.exists():
        subprocess.run(
            ["cargo", "build", "--release", "-p", "groupevo-py"],
            cwd=ROOT,
            check=True,
        )
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    dest = ROOT / "python" / f"groupevo_py{suffix}"
    if not dest.exists() or target.stat().st_mtime > dest.stat().st_mtime:
        shutil.copy2(target, dest)


def main() -> None:
    build_module()
    sys.path.insert(0, str(ROOT / "python"))
    import groupevo_py as gp

    assert gp.event_names() == [
        "continuing", "shrinking", "growing", "splitting", "merging",
        "dissolving", "forming",
    ]

    # inclusion identities: uniform importance squares the overlap fraction
    v = gp.inclusion(["a", "b", "c"], ["a", "b", "d"])
    assert abs(v - 4.0 / 9.0) < 1e-12, v
    v = gp.inclusion(["a", "b", "c"], ["a", "b", "d"], {"a": 0.5, "b": 0.5, "c": 4.0})
    assert abs(v - 2.0 / 15.0) < 1e-12, v

    # windowing: two one-day frames
    interactions = [
        ("a", "b", 10, 1.0),
        ("b", "c", 20, 1.0),
        ("a", "b", 86_400 + 10, 2.0),
    ]
    frames = gp.window(interactions, 86_400)
    assert len(frames) == 2, frames
    assert frames[0][3] == [("a", "b", 1.0), ("b", "c", 1.0)]

    # a 5-clique with a pendant edge is one community at k=3
    clique = [(f"n{i}", f"n{j}", 1.0) for i in range(5) for j in range(i + 1, 5)]
    comms = gp.cpm_communities(clique + [("n0", "x", 1.0)], k=3)
    assert comms == [[f"n{i}" for i in range(5)]], comms

    # symmetric graph: every social position is 1
    sp = gp.social_position(clique + [(t, s, w) for s, t, w in clique])
    assert all(abs(v - 1.0) < 1e-9 for v in sp.values()), sp

    # scripted growth shows up as a growing event
    script = "\n".join(
        ["frames 3", "frame 0: form g 6", "frame 1: grow g 3"]
    )
    planted, intended = gp.plant_script(script, seed=1)
    assert [e[2] for e in intended] == ["growing", "continuing"]
    members = [[m for _, m in frame] for frame in planted]
    events = gp.classify_events(members, alpha=0.5, beta=0.5)
    assert [e[2] for e in events] == ["growing", "continuing"], events

    # end-to-end evaluation on a larger script with a learnable cycle
    lines = ["frames 14"]
    for g in range(6):
        lines.append(f"frame 0: form g{g} 8")
    for f in range(1, 14):
        for g in range(6):
            m = (f + g) % 3
            if m == 0:
                lines.append(f"frame {f}: grow g{g} 4")
            elif m == 1:
                lines.append(f"frame {f}: shrink g{g} 4")
    planted, _ = gp.plant_script("\n".join(lines), seed=3)
    members = [[m for _, m in frame] for frame in planted]
    result = gp.evaluate(members, classifier="tree", seed=5)
    baseline = gp.evaluate(members, classifier="baseline", seed=5)
    assert result["instances"] >= 30
    assert result["weighted_f"] > baseline["weighted_f"] + 0.2, (
        result["weighted_f"], baseline["weighted_f"],
    )

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
