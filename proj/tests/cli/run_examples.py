#!/usr/bin/env python3
"""Run every `$ loctrans ...` line of the README from data/ and compare with stored output.

usage: run_examples.py LOCTRANS README DATA_DIR EXPECTED_DIR [--update]
"""
import json
import shlex
import subprocess
import sys
from pathlib import Path


def normalize(stdout):
    try:
        rep = json.loads(stdout)
    except json.JSONDecodeError:
        return stdout
    rep.pop("timing_ms", None)
    return rep


def main():
    exe, readme, data, expected = (Path(a).resolve() for a in sys.argv[1:5])
    update = "--update" in sys.argv[5:]
    lines = [l.strip()[2:] for l in readme.read_text().splitlines() if l.strip().startswith("$ loctrans ")]
    if not lines:
        print("no examples found")
        return 1
    expected.mkdir(parents=True, exist_ok=True)
    failed = 0
    for i, line in enumerate(lines, 1):
        args = shlex.split(line)[1:]
        p = subprocess.run([str(exe)] + args, cwd=data, capture_output=True, text=True, timeout=600)
        got = {"command": line, "exit": p.returncode, "stdout": normalize(p.stdout)}
        path = expected / f"{i:02d}.json"
        if update:
            path.write_text(json.dumps(got, indent=1) + "\n")
            print(f"wrote {path.name}: {line}")
            continue
        want = json.loads(path.read_text()) if path.exists() else None
        ok = want == got
        failed += not ok
        print(f"{'ok  ' if ok else 'DIFF'} {path.name} exit={p.returncode}  {line}")
        if not ok and want is not None:
            for k in ("command", "exit", "stdout"):
                if want.get(k) != got[k]:
                    print(f"     {k} differs")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
