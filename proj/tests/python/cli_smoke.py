#!/usr/bin/env python3
"""Drive the nvsyn binary end to end on the seed data: exit codes and JSON shapes."""
import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

failures = []


def run(cli, *args, code=0):
    p = subprocess.run([cli, *args], capture_output=True, text=True)
    if p.returncode != code:
        failures.append(f"{' '.join(args)}: exit {p.returncode}, wanted {code}: {p.stderr.strip()[:200]}")
    return p


def check(cond, what):
    if not cond:
        failures.append(what)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--seed-dir", required=True)
    a = ap.parse_args()
    cli, seed = a.cli, Path(a.seed_dir)
    corpus, dictionary = str(seed / "seed_corpus.jsonl"), str(seed / "dictionary.json")

    with tempfile.TemporaryDirectory() as tmp:
        fw = str(Path(tmp) / "fw.json")
        store = str(Path(tmp) / "sessions")

        p = run(cli, "ingest", corpus, "--json")
        if p.returncode == 0:
            check(json.loads(p.stdout)["stats"]["mappings"] == 6759, "ingest row count")
        run(cli, "build", corpus, "-d", dictionary, "-o", fw)

        p = run(cli, "query", "-f", fw, "--json", "pairs")
        if p.returncode == 0:
            pairs = json.loads(p.stdout)["pairs"]
            check(len(pairs) == 3, "three confusable pairs")

        p = run(cli, "infer", "-f", fw, "--json", "--cues", "furrowed brow;scratching head")
        if p.returncode == 0:
            r = json.loads(p.stdout)
            check(r["candidates"][0]["state"] == "confusion", "infer top candidate")

        run(cli, "infer", "-f", fw, "--cues", "definitely not a cue", code=1)
        run(cli, "query", "-f", fw, "state", "nosuchstate", code=1)
        run(cli, "query", "-f", str(Path(tmp) / "missing.json"), "states", code=2)

        p = run(cli, "session", "-f", fw, "--store", store, "--json", "new")
        if p.returncode == 0:
            sid = json.loads(p.stdout)["session_id"]
            run(cli, "session", "-f", fw, "--store", store, "add", sid, "--observed", "furrowed brow")
            p = run(cli, "session", "-f", fw, "--store", store, "--json", "show", sid)
            if p.returncode == 0:
                check(len(json.loads(p.stdout)["history"]) == 2, "session history after one update")

        p = run(cli, "fit-powerlaw", "-f", fw, "--json", "--bootstrap", "20", "--compare", "exponential")
        if p.returncode == 0:
            r = json.loads(p.stdout)
            check(r["fit"]["x_min"] >= 1 and r["fit"]["alpha"] > 1, "power-law fit fields")

    for f in failures:
        print("FAIL", f)
    print(f"cli smoke: {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
