#!/usr/bin/env python3
"""Writes data/corpora/synthetic.vert: ~50k tokens of templated English with
Penn tags, drawn from a fixed seed so the output never changes."""

import random
import sys
from pathlib import Path

NOUNS = [
    "bone", "tooth", "joint", "muscle", "skull", "spine", "tissue", "marrow",
    "river", "stone", "bridge", "garden", "window", "engine", "wheel", "road",
    "city", "village", "forest", "tree", "leaf", "branch", "root", "flower",
    "dog", "cat", "horse", "bird", "fish", "wolf", "sheep", "goat",
    "book", "page", "letter", "word", "story", "song", "poem", "voice",
    "house", "roof", "door", "wall", "floor", "kitchen", "table", "chair",
]
ADJS = [
    "old", "new", "small", "large", "red", "green", "dark", "bright",
    "strong", "weak", "quiet", "loud", "brittle", "bare", "heavy", "light",
    "cold", "warm", "wild", "gentle", "broken", "famous", "hidden", "empty",
]
VERBS = [
    ("break", "breaks"), ("build", "builds"), ("see", "sees"), ("find", "finds"),
    ("carry", "carries"), ("hold", "holds"), ("move", "moves"), ("open", "opens"),
    ("close", "closes"), ("paint", "paints"), ("read", "reads"), ("write", "writes"),
    ("heal", "heals"), ("grow", "grows"), ("fall", "falls"), ("shine", "shines"),
]
ADVS = ["slowly", "quickly", "quietly", "often", "rarely", "gently", "suddenly"]
PREPS = ["with", "in", "on", "under", "near", "from"]
DETS = ["the", "a", "this", "every"]


def plural(n):
    if n.endswith(("s", "sh", "ch")):
        return n + "es"
    if n.endswith("y") and n[-2] not in "aeiou":
        return n[:-1] + "ies"
    if n.endswith("f"):
        return n[:-1] + "ves"
    if n == "tooth":
        return "teeth"
    if n in ("sheep", "fish"):
        return n
    return n + "s"


def zipf(rng, items, s=1.1):
    weights = [1.0 / (i + 1) ** s for i in range(len(items))]
    return rng.choices(items, weights=weights, k=1)[0]


def np_(rng):
    toks = []
    n = zipf(rng, NOUNS)
    if rng.random() < 0.3:
        toks.append(("the", "the", "DT"))
        if rng.random() < 0.5:
            a = zipf(rng, ADJS)
            toks.append((a, a, "JJ"))
        toks.append((plural(n), n, "NNS"))
    else:
        d = rng.choice(DETS)
        toks.append((d, d, "DT"))
        if rng.random() < 0.5:
            a = zipf(rng, ADJS)
            toks.append((a, a, "JJ"))
        toks.append((n, n, "NN"))
    return toks


def verb(rng, third):
    lemma, s3 = zipf(rng, VERBS)
    return (s3, lemma, "VBZ") if third else (lemma, lemma, "VBP")


def sentence(rng):
    kind = rng.random()
    subj = np_(rng)
    third = subj[-1][2] == "NN"
    out = list(subj)
    if kind < 0.12:
        # coordination
        out += [(rng.choice(["and", "or"]), None, "CC")] + np_(rng)
        third = False
        out.append(verb(rng, third))
    elif kind < 0.2:
        be = ("is", "be", "VBZ") if third else ("are", "be", "VBP")
        a = zipf(rng, ADJS)
        out += [be, (a, a, "JJ")]
        if rng.random() < 0.3:
            b = zipf(rng, ADJS)
            out += [(",", ",", ","), ("not", "not", "RB"), (b, b, "JJ")]
    elif kind < 0.28:
        h = ("has", "have", "VBZ") if third else ("have", "have", "VBP")
        out += [h] + np_(rng)
    elif kind < 0.34:
        out += [("such", "such", "JJ"), ("as", "as", "IN")] + np_(rng)
        out.append(verb(rng, False))
    else:
        if rng.random() < 0.1:
            m = rng.choice(["can", "will", "must"])
            out += [(m, m, "MD"), verb(rng, False)]
        else:
            out.append(verb(rng, third))
        if rng.random() < 0.7:
            out += np_(rng)
        if rng.random() < 0.3:
            a = rng.choice(ADVS)
            out.append((a, a, "RB"))
        if rng.random() < 0.4:
            p = rng.choice(PREPS)
            out += [(p, p, "IN")] + np_(rng)
        if rng.random() < 0.2:
            out += [("of", "of", "IN")] + np_(rng)
    out.append((".", ".", "."))
    return [(w, l if l is not None else w, t) for w, l, t in out]


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "corpora" / "synthetic.vert"
    rng = random.Random(20240611)
    lines, tokens, doc = [], 0, 0
    while tokens < 50000:
        if tokens // 5000 >= doc:
            if doc:
                lines.append("</doc>")
            doc += 1
            lines.append(f'<doc id="d{doc}">')
        s = sentence(rng)
        lines.append("<s>")
        lines.extend(f"{w}\t{l}\t{t}" for w, l, t in s)
        lines.append("</s>")
        tokens += len(s)
    lines.append("</doc>")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
