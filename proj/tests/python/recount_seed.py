#!/usr/bin/env python3
"""Recount the seed corpus without the C++ engine and compare.

Folding, synonym lookup and AU decoding are redone here from the dictionary
file, then checked against seed_manifest.json and the CLI's own JSON.
"""
import argparse
import json
import re
import subprocess
import sys
import tempfile
from collections import defaultdict
from pathlib import Path

QUOTES = {"‘": "'", "’": "'", "‛": "'", "′": "'",
          "“": '"', "”": '"', "„": '"', "″": '"'}
AU_RE = re.compile(r"^\s*au\s*(\d+)((\s*\+\s*(au)?\s*\d+)*)\s*$", re.I)


def fold(s):
    s = "".join(QUOTES.get(ch, ch) for ch in s)
    s = " ".join(s.split()).casefold()
    return s.rstrip(".,;:! ")


def au_set(label):
    m = AU_RE.match(fold(label))
    if not m:
        return None
    codes = {int(x) for x in re.findall(r"\d+", label)}
    return "+".join(f"AU{c}" for c in sorted(codes))


def normalize(rows, d):
    states = {fold(k): v for k, v in d["state_synonyms"].items()}
    cues = {fold(k): v for k, v in d["cue_synonyms"].items()}
    # canonical targets map to themselves
    states.update({fold(v): v for v in list(states.values())})
    cues.update({fold(v): v for v in list(cues.values())})
    aus = d["au_decodings"]
    excl = [fold(x) for x in d["exclusions"]]
    out = []
    for r in rows:
        fc = fold(r["raw_cue"])
        if any(x in fc for x in excl):
            continue
        st = fold(r["raw_state"])
        st = fold(states.get(st, st))
        code = au_set(r["raw_cue"])
        if code is not None:
            parts = code.split("+")
            desc = aus.get(code) or " + ".join(aus.get(p, p) for p in parts)
            fc = fold(desc)
        cue = cues.get(fc, fc)
        out.append((r["paper_id"], st, cue))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed-dir", required=True)
    ap.add_argument("--cli", required=True)
    a = ap.parse_args()
    seed = Path(a.seed_dir)
    rows = [json.loads(l) for l in (seed / "seed_corpus.jsonl").read_text().splitlines() if l.strip()]
    d = json.loads((seed / "dictionary.json").read_text())
    manifest = json.loads((seed / "seed_manifest.json").read_text())

    norm = normalize(rows, d)
    papers = defaultdict(set)
    rel = defaultdict(set)
    for pid, st, cue in norm:
        papers[st].add(pid)
        rel[(st, cue)].add(pid)
    state_cues = defaultdict(set)
    for st, cue in rel:
        state_cues[st].add(cue)

    got = {
        "rows": len(rows),
        "rows_after_exclusion": len(norm),
        "distinct_papers": len({r["paper_id"] for r in rows}),
        "relationships": len(rel),
        "states": len(papers),
        "cues": len({c for _, c in rel}),
        "state_papers": {s: len(p) for s, p in papers.items()},
        "state_cues": {s: len(c) for s, c in state_cues.items()},
    }
    bad = []
    for k, v in manifest.items():
        if got.get(k) != v:
            bad.append(f"manifest {k}: expected {v}, recount {got.get(k)}")

    with tempfile.TemporaryDirectory() as tmp:
        fw = Path(tmp) / "fw.json"
        subprocess.run([a.cli, "build", str(seed / "seed_corpus.jsonl"), str(seed / "dictionary.json"),
                        "-o", str(fw)], check=True, capture_output=True)
        q = subprocess.run([a.cli, "query", "-f", str(fw), "--json", "states"], check=True,
                           capture_output=True, text=True)
        for c in json.loads(q.stdout)["states"]:
            s = c["state"]
            if c["paper_count"] != got["state_papers"].get(s):
                bad.append(f"cli {s}: papers {c['paper_count']} vs recount {got['state_papers'].get(s)}")
            if c["total_cue_relationships"] != got["state_cues"].get(s):
                bad.append(f"cli {s}: cues {c['total_cue_relationships']} vs recount {got['state_cues'].get(s)}")
        # relationship counts: spot-check through the per-state profile JSON
        q = subprocess.run([a.cli, "query", "-f", str(fw), "--json", "state", "confusion"], check=True,
                           capture_output=True, text=True)
        prof = json.loads(q.stdout)["profile"]
        for ch, cues in prof["signature"].items():
            for rc in cues:
                n = len(rel.get(("confusion", rc["cue"]), ()))
                if n != rc["count"]:
                    bad.append(f"confusion/{rc['cue']}: cli {rc['count']} vs recount {n}")

    for b in bad:
        print("MISMATCH", b)
    print(f"recount: {got['rows']} rows, {got['relationships']} relationships, {got['states']} states, "
          f"{got['cues']} cues; {len(bad)} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
