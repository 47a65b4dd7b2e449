#!/usr/bin/env python3
"""Regenerate the bundled seed corpus, normalization dictionary and manifest.

The seed is a desk-scale synthetic corpus: every documented cue-state link is
expanded into one row per synthetic paper, and per-state filler cues bring the
headline states up to their reported paper and cue totals.  Output is fully
deterministic; rerun after editing the tables below.

    python3 tools/make_seed.py [--out data/seed]
"""

import argparse
import collections
import json
import pathlib
import random

F, E, B, BH, V, H, G, P, M = CHANNELS = [
    "FacialExpressions", "EyeMovements", "BodyPosture", "Behavioral",
    "VoiceParalinguistic", "HeadMovements", "HandArmGestures", "Physiology",
    "Multimodal",
]
# Mapping share per channel across the full corpus; used to spread filler cues.
SHARE = {F: 36.1, E: 14.3, B: 13.8, BH: 12.9, V: 6.8, H: 6.0, G: 4.8, P: 4.7, M: 0.5}
SLUG = {F: "facial", E: "eye", B: "body", BH: "behavioral", V: "voice",
        H: "head", G: "gesture", P: "physiology", M: "multimodal"}

# state -> (papers, distinct cues, channel count) or explicit channel breakdown.
STATE_TARGETS = {
    "engagement": dict(papers=471, cues=1307, channels=9),
    "affective states (general)": dict(papers=360, cues=606, channels=9),
    "confusion": dict(papers=292, breakdown={F: 168, E: 88, B: 72, V: 45, BH: 74,
                                             H: 42, G: 35, P: 18}),
    "attention": dict(papers=281, cues=500, channels=9),
    "frustration": dict(papers=261, cues=401, channels=9),
    "boredom": dict(papers=242, cues=335, channels=8),
    "happiness": dict(papers=202, cues=134, channels=9),
    "learning": dict(papers=199, cues=406, channels=9),
    "surprise": dict(papers=150, cues=100, channels=8),
    "anger": dict(papers=148, cues=116, channels=9),
}

VERBAL_DONT = 'verbal: "I don\'t understand"'
VERBAL_WHY = 'verbal: "Why didn\'t it work?"'
VERBAL_STUPID = 'verbal: "This is stupid"'
VERBAL_BORING = 'verbal: "This is boring"'

NAMED = {
    "confusion": [
        ("AU4 brow lowerer", F, 35), ("AU7 lid tightener", F, 14),
        ("AU12 lip corner puller", F, 11), ("frown", F, 8),
        ("AU1 inner brow raiser", F, 7),
        ("repeated fixation on elements", E, 6), ("increased blink rate", E, 4),
        ("gaze toward material", E, 3), ("reduced eye contact", E, 2),
        ("head tilt (questioning)", H, 4), ("head shake", H, 3),
        ("forward lean", B, 3), ("stillness/pause", B, 3),
        ("scratching head", G, 5), ("self-touch", G, 3), ("hand to chin", G, 3),
        (VERBAL_DONT, V, 4), ("questioning intonation", V, 3), (VERBAL_WHY, V, 3),
        ("looking at classmate's work", BH, 3),
    ],
    "frustration": [
        ("AU4 brow lowerer", F, 15), ("frown", F, 12), ("tightened jaw", F, 8),
        ("AU23 lip tightener", F, 6),
        ("gaze away from task", E, 7), ("eye rolling", E, 3), ("reduced eye contact", E, 2),
        ("head shake", H, 4), ("head drop", H, 3),
        ("tense posture", B, 5), ("restlessness", B, 4), ("leaning back", B, 3),
        ("banging on keyboard", G, 5), ("pulling hair", G, 4), ("banging on mouse", G, 4),
        ("clenched fists", G, 3),
        ("sighing / deep sighing", V, 6), ("raised voice", V, 4), ("groaning", V, 3),
        (VERBAL_STUPID, V, 3),
    ],
    "boredom": [
        ("neutral/flat expression", F, 12), ("yawning", F, 8), ("drooping eyelids", F, 5),
        ("gaze wandering away", E, 9), ("looking at clock/door", E, 4), ("reduced fixation", E, 4),
        ("head resting on hand/palm", H, 4), ("head propping", H, 3),
        ("slouching", B, 10), ("slumped posture", B, 6), ("resting chin on palm", B, 4),
        ("fidgeting", G, 7), ("doodling", G, 3), ("playing with objects", G, 3),
        (VERBAL_BORING, V, 4), ("monotone voice", V, 3),
        ("decreased activity", BH, 4),
    ],
    "engagement": [
        ("smile", F, 18), ("AU4 brow lowerer", F, 13), ("raised eyebrows (interest)", F, 9),
        ("attentive expression", F, 7),
        ("eye contact with material", E, 12), ("focused gaze", E, 10), ("reduced blinking", E, 6),
        ("head nodding", H, 16), ("upright head position", H, 5),
        ("head orientation toward task", H, 4),
        ("forward lean", B, 9), ("upright posture", B, 7), ("oriented toward task", B, 6),
        ("taking notes", G, 8), ("hand raising", G, 6), ("gesturing while explaining", G, 4),
        ("asking questions", G, 3),
        ("active verbal participation", V, 8), ("questions", V, 5), ("discussion", V, 4),
    ],
    "attention": [
        ("forward lean", B, 3), ("head nodding", H, 4), ("leaning backward", B, 6),
        ("supporting head", H, 3), ("passive gaze", E, 3),
    ],
}

# Pairwise discriminator columns.  Every other cue with >= 3 papers on either
# side is also linked (1 paper) to the opposite state, so that each side's
# specific set contains exactly the listed cues at the R1-R4 level.
DISCRIMINATION_COLUMNS = [
    ("confusion", "frustration",
     ["scratching head", "head tilt (questioning)", VERBAL_WHY, "gaze toward material",
      "looking at classmate's work"],
     ["sighing / deep sighing", "banging on keyboard", "pulling hair", "banging on mouse",
      "raised voice"]),
    ("boredom", "confusion",
     ["slouching", "yawning", "resting chin on palm", "gaze wandering away",
      "decreased activity"],
     ["AU4 brow lowerer", "scratching head", "gaze toward material",
      "repeated fixation on elements", "self-touch"]),
]
CONFUSION_FRUSTRATION_SHARED = 125

# Cue-level paper totals; the shortfall after all state links is topped up on
# the named state.
CUE_TOTALS = [
    ("smile", F, 125, "happiness"), ("AU4 brow lowerer", F, 69, "concentration"),
    ("frown", F, 45, "affective states (general)"),
    ("body posture", B, 251, "affective states (general)"),
    ("slouching", B, 10, None), ("forward lean", B, 23, "interest"),
    ("eye gaze", E, 189, "affective states (general)"),
    ("fixation", E, 83, "affective states (general)"),
    ("blink", E, 83, "affective states (general)"),
    ("speech", V, 148, "affective states (general)"),
    ("voice", V, 123, "affective states (general)"),
    ("pitch", V, 46, "affective states (general)"),
    ("sighing / deep sighing", V, 6, None),
    ("gestures", G, 156, "affective states (general)"),
    ("hand raising", G, 14, "affective states (general)"),
    ("pointing", G, 70, "affective states (general)"),
    ("head pose", H, 171, "affective states (general)"),
    ("head nodding", H, 55, "learning"),
    ("head tilt", H, 37, "affective states (general)"),
    ("skin conductance", P, 115, "affective states (general)"),
    ("heart rate", P, 98, "affective states (general)"),
    ("EEG", P, 67, "affective states (general)"),
    # listed without a paper count
    ("response time", BH, 1, "affective states (general)"),
    ("mouse movements", BH, 1, "affective states (general)"),
    ("interaction patterns", BH, 1, "affective states (general)"),
]

STATE_SYNONYMS = {
    "engagement": ["Engaged Concentration", "engaged", "engaged attention",
                   "behavioral engagement", "cognitive engagement", "task engagement",
                   "deep engagement", "absorbed attention"],
    "confusion": ["confused", "state of confusion"],
    "frustration": ["frustrated"],
    "boredom": ["bored"],
    "attention": ["attentive", "attentiveness"],
    "affective states (general)": ["affective state", "general affect"],
    "happiness": ["happy", "joy"],
    "learning": ["learning gains"],
    "surprise": ["surprised"],
    "anger": ["angry"],
    "concentration": ["focused concentration"],
    "interest": ["interested"],
}

CUE_SYNONYMS = {
    "AU4 brow lowerer": ["furrowed brow", "brow lowerer", "brow lowering",
                         "corrugator activation", "furrowed brow / AU4"],
    "AU7 lid tightener": ["lid tightener", "squinting", "narrowed eyes"],
    "AU12 lip corner puller": ["lip corner puller", "lip corner pull"],
    "AU1 inner brow raiser": ["inner brow raiser"],
    "AU23 lip tightener": ["lip tightener"],
    "repeated fixation on elements": ["repeated fixation on same elements",
                                      "repeated fixation",
                                      "repeated looks at the same element",
                                      "repeated looks at the same interface element"],
    "forward lean": ["leaning forward", "postural orientation toward",
                     "leaning toward the screen", "leaning toward screen"],
    "self-touch": ["increased self-touch"],
    VERBAL_DONT: ['verbal: "I\'m confused"', '"I\'m confused"', '"I don\'t understand"'],
    VERBAL_WHY: ['“Why didn\'t it work?”', 'verbal: "Why?"', '"Why?"'],
    "head shake": ["head shake (negative)", "shaking head"],
    "head tilt (questioning)": ["questioning head tilt"],
    "sighing / deep sighing": ["sighing", "deep sighing"],
    "raised voice": ["clenched jaw / raised voice"],
    "head nodding": ["head nod", "nodding"],
    "decreased activity": ["reduced activity"],
    "resting chin on palm": ["chin resting on palm"],
    "gaze wandering away": ["wandering gaze"],
    "neutral/flat expression": ["flat expression", "neutral expression"],
    "smile": ["smiling"],
    "stillness/pause": ["stillness"],
    "scratching head": ["scratching or touching the head"],
}

# spellings that get a dictionary entry but never appear as raw rows
DICTIONARY_ONLY_SYNONYMS = {
    "sighing / deep sighing": ["sighing/deep sighing"],
}

# AU-coded raw variants used when emitting rows for AU cues.
AU_RAW = {
    "AU4 brow lowerer": ["AU4"], "AU7 lid tightener": ["AU7"],
    "AU12 lip corner puller": ["AU12"], "AU1 inner brow raiser": ["AU1"],
    "AU23 lip tightener": ["AU23"], "blink": ["AU45"],
}

AU_DECODINGS = {
    "AU1": "inner brow raiser", "AU2": "outer brow raiser",
    "AU1+AU2": "inner and outer brow raise", "AU4": "brow lowerer",
    "AU5": "upper lid raiser", "AU6": "cheek raiser", "AU7": "lid tightener",
    "AU9": "nose wrinkler", "AU10": "upper lip raiser", "AU12": "lip corner puller",
    "AU14": "dimpler", "AU15": "lip corner depressor", "AU17": "chin raiser",
    "AU20": "lip stretcher", "AU23": "lip tightener", "AU24": "lip pressor",
    "AU25": "lips part", "AU26": "jaw drop", "AU28": "lip suck",
    "AU43": "eyes closed", "AU45": "blink",
}

GENERAL_CUES = [
    "facial expressions", "body movement", "positive facial expression",
    "negative facial expression", "body posture", "gestures", "eye gaze", "head pose",
    "speech", "voice", "interaction patterns", "facial action units",
    "head movements", "eye movements",
]

EXCLUSIONS = ["bert embeddings", "text-based"]

ACTIONABILITY = {
    "HighlyActionable": [
        "AU4 brow lowerer", "AU7 lid tightener", "AU12 lip corner puller",
        "AU1 inner brow raiser", "AU23 lip tightener", "frown", "smile", "yawning",
        "scratching head", "sighing / deep sighing", "banging on keyboard",
        "banging on mouse", "pulling hair", "clenched fists", "groaning", "raised voice",
        "head nodding", "head shake", "head tilt (questioning)", "head drop",
        "eye rolling", "slouching", "slumped posture", "resting chin on palm",
        "head resting on hand/palm", "doodling", "hand raising", "taking notes",
        "tightened jaw", "drooping eyelids", "hand to chin", "looking at clock/door",
        "asking questions", "pointing", VERBAL_DONT, VERBAL_WHY, VERBAL_STUPID,
        VERBAL_BORING,
    ],
    "ModeratelyActionable": [
        "forward lean", "fidgeting", "leaning back", "leaning backward", "tense posture",
        "restlessness", "gaze toward material", "gaze away from task",
        "gaze wandering away", "repeated fixation on elements",
    ],
    "WeaklyActionable": ["body movement"],
    "NonActionable": ["facial expressions", "EEG"],
}

TEXT_STUDY_CUES = [
    "text sentiment (BERT embeddings)", "message length (BERT embeddings)",
    "lexical diversity (BERT embeddings)", "question phrasing (BERT embeddings)",
]


def allocate_channels(total, n_channels, named_per_channel):
    """Spread `total` distinct cues over channels: named cues first, then by share."""
    channels = CHANNELS[:n_channels] if n_channels == 9 else [c for c in CHANNELS if c != M]
    if n_channels < 8:
        raise ValueError("unsupported channel count")
    alloc = {c: max(named_per_channel.get(c, 0), 1) for c in channels}
    remaining = total - sum(alloc.values())
    if remaining < 0:
        raise ValueError("named cues exceed total")
    weight = sum(SHARE[c] for c in channels)
    quotas = {c: remaining * SHARE[c] / weight for c in channels}
    for c in channels:
        alloc[c] += int(quotas[c])
    left = total - sum(alloc.values())
    for c in sorted(channels, key=lambda c: (-(quotas[c] - int(quotas[c])), CHANNELS.index(c))):
        if left == 0:
            break
        alloc[c] += 1
        left -= 1
    return alloc


def build(out_dir):
    # (state, cue) -> [channel, count, origin]
    links = collections.OrderedDict()

    def link(state, cue, channel, count, origin):
        key = (state, cue)
        if key in links:
            raise ValueError(f"duplicate link {key}")
        links[key] = [channel, count, origin]

    for state, rows in NAMED.items():
        for cue, channel, count in rows:
            link(state, cue, channel, count, "named")

    def cues_of(state):
        return {c: v for (s, c), v in links.items() if s == state}

    for a, b, col_a, col_b in DISCRIMINATION_COLUMNS:
        for src, dst, col in ((a, b, col_a), (b, a, col_b)):
            dst_cues = cues_of(dst)
            for cue, (channel, count, _) in sorted(cues_of(src).items()):
                if count >= 3 and cue not in col and cue not in dst_cues:
                    link(dst, cue, channel, 1, "shared")

    for cue, channel, total, state in CUE_TOTALS:
        current = sum(v[1] for (s, c), v in links.items() if c == cue)
        if current > total:
            raise ValueError(f"{cue}: {current} links exceed total {total}")
        if current < total:
            link(state, cue, channel, total - current, "top-up")

    states = list(STATE_TARGETS) + [s for s in ("concentration", "interest")]
    targets = {}
    for state in states:
        named = collections.Counter(v[0] for v in cues_of(state).values())
        spec = STATE_TARGETS.get(state)
        if spec is None:
            targets[state] = dict(named)
        elif "breakdown" in spec:
            targets[state] = dict(spec["breakdown"])
        else:
            targets[state] = allocate_channels(spec["cues"], spec["channels"], named)
        for c, n in named.items():
            if targets[state].get(c, 0) < n:
                raise ValueError(f"{state}/{c}: target below named count")

    capacity = {s: {c: targets[s].get(c, 0) - sum(1 for v in cues_of(s).values() if v[0] == c)
                    for c in CHANNELS} for s in states}

    shared_now = set(cues_of("confusion")) & set(cues_of("frustration"))
    need = CONFUSION_FRUSTRATION_SHARED - len(shared_now)
    serial = collections.Counter()
    while need > 0:
        progressed = False
        for c in CHANNELS:
            if need == 0:
                break
            if capacity["confusion"][c] > 0 and capacity["frustration"][c] > 0:
                serial["shared", c] += 1
                cue = f"shared {SLUG[c]} variant {serial['shared', c]:03d}"
                link("confusion", cue, c, 1, "filler")
                link("frustration", cue, c, 1, "filler")
                capacity["confusion"][c] -= 1
                capacity["frustration"][c] -= 1
                need -= 1
                progressed = True
        if not progressed:
            raise ValueError("not enough channel capacity for shared fillers")

    for state in states:
        papers = STATE_TARGETS.get(state, {}).get("papers")
        fillers = []
        for c in CHANNELS:
            for i in range(capacity[state][c]):
                fillers.append((f"{state} {SLUG[c]} variant {i + 1:03d}", c))
        base = sum(v[1] for v in cues_of(state).values()) + len(fillers)
        if papers is None:
            papers = max(v[1] for v in cues_of(state).values())
        twos = max(0, papers - base)
        if twos > len(fillers):
            raise ValueError(f"{state}: cannot reach {papers} papers")
        for i, (cue, c) in enumerate(fillers):
            link(state, cue, c, 2 if i < twos else 1, "filler")
        targets[state]["papers"] = papers

    rng = random.Random(20250101)
    rows = []
    paper_years = {}

    def year_for(pid):
        if pid not in paper_years:
            paper_years[pid] = rng.randint(2020, 2025) if rng.random() < 0.568 else rng.randint(1966, 2019)
        return paper_years[pid]

    state_variant_cycle = {s: [s] + STATE_SYNONYMS.get(s, []) for s in states}
    for state in states:
        n_papers = targets[state]["papers"]
        slug = state.split(" (")[0].replace(" ", "-")
        pool = [f"seed-{slug}-P{i + 1:03d}" for i in range(n_papers)]
        cursor = 0
        row_index = 0
        for (s, cue), (channel, count, origin) in links.items():
            if s != state:
                continue
            cue_variants = [cue] + AU_RAW.get(cue, []) + CUE_SYNONYMS.get(cue, [])
            for k in range(count):
                pid = pool[(cursor + k) % n_papers]
                if state == "engagement" and cue == "AU4 brow lowerer":
                    raw_state = "Engaged Concentration"
                else:
                    variants = state_variant_cycle[state]
                    raw_state = variants[row_index % len(variants)]
                rows.append(dict(paper_id=pid, year=year_for(pid), raw_state=raw_state,
                                 raw_cue=cue_variants[k % len(cue_variants)],
                                 channel=channel, context=f"seed:{origin}"))
                row_index += 1
            cursor = (cursor + count) % n_papers
    for cue in TEXT_STUDY_CUES:
        rows.append(dict(paper_id="seed-textstudy-P001", year=2021, raw_state="engagement",
                         raw_cue=cue, channel=BH, context="seed:excluded"))

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "seed_corpus.jsonl", "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")

    cue_channels = {}
    for (s, cue), (channel, count, origin) in links.items():
        if origin != "filler":
            cue_channels.setdefault(cue, channel)
    dictionary = dict(
        schema_version=1,
        state_synonyms={raw: canon for canon, raws in STATE_SYNONYMS.items() for raw in raws},
        cue_synonyms={raw: canon for table in (CUE_SYNONYMS, DICTIONARY_ONLY_SYNONYMS)
                      for canon, raws in table.items() for raw in raws},
        au_decodings=AU_DECODINGS,
        specificity={c: "General" for c in GENERAL_CUES},
        exclusions=EXCLUSIONS,
        cue_channels=dict(sorted(cue_channels.items())),
        actionability=dict(
            levels={cue: level for level, cues in ACTIONABILITY.items() for cue in cues},
            general_level="WeaklyActionable",
            instrumental_level="NonActionable",
            default_level="ModeratelyActionable",
        ),
        state_descriptions={},
    )
    with open(out_dir / "dictionary.json", "w", encoding="utf-8") as fh:
        json.dump(dictionary, fh, indent=2, ensure_ascii=False)
        fh.write("\n")

    kept = [r for r in rows if r["context"] != "seed:excluded"]
    manifest = dict(
        rows=len(rows),
        rows_after_exclusion=len(kept),
        distinct_papers=len({r["paper_id"] for r in rows}),
        relationships=len(links),
        states=len(states),
        cues=len({c for (_, c) in links}),
        state_papers={s: targets[s]["papers"] for s in states},
        state_cues={s: len(cues_of(s)) for s in states},
    )
    with open(out_dir / "seed_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    return manifest


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "seed"))
    args = parser.parse_args()
    manifest = build(pathlib.Path(args.out))
    print(json.dumps({k: v for k, v in manifest.items() if not isinstance(v, dict)}))


if __name__ == "__main__":
    main()
