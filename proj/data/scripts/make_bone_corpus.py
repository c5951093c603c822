#!/usr/bin/env python3
"""Writes data/corpora/bone.vert, the hand-seeded fixture corpus.

Each entry is (count, sentence). Tokens are "word/TAG" or "word/lemma/TAG".
Counts are chosen so that, with data/grammars/en_noun_verb_adj.sg and the
default configuration, the word sketches of "bone" rank the intended
collocates first, and so that "dead" and "heal" have explainable data.
"""

import sys
from pathlib import Path

SENTENCES = [
    # coordination
    (9, "the/DT bone/NN and/CC tooth/NN ache/VBP ./."),
    (7, "the/DT bone/NN and/CC joint/NN ache/VBP ./."),
    (5, "the/DT bone/NN and/CC muscle/NN ache/VBP ./."),
    (2, "the/DT bone/NN or/CC cartilage/NN ./."),
    # hypernyms: "X such as bone"
    (9, "a/DT tissue/NN such/JJ as/IN bone/NN ./."),
    (7, "a/DT fracture/NN such/JJ as/IN bone/NN ./."),
    (5, "a/DT calcium/NN such/JJ as/IN bone/NN ./."),
    (2, "a/DT structure/NN such/JJ as/IN bone/NN ./."),
    # hyponyms: "bone such as X"
    (6, "a/DT bone/NN such/JJ as/IN the/DT femur/NN ./."),
    (4, "a/DT bone/NN such/JJ as/IN the/DT vertebra/NN ./."),
    # meronyms
    (8, "the/DT bone/NN has/have/VBZ marrow/NN ./."),
    (6, "the/DT bone/NN has/have/VBZ a/DT skull/NN ./."),
    (4, "the/DT bone/NN has/have/VBZ a/DT joint/NN ./."),
    (8, "the/DT bone/NN contains/contain/VBZ a/DT skull/NN ./."),
    (6, "the/DT bone/NN contains/contain/VBZ a/DT tooth/NN ./."),
    (4, "the/DT bone/NN contains/contain/VBZ marrow/NN ./."),
    # holonyms
    (7, "the/DT tissue/NN contains/contain/VBZ bone/NN ./."),
    (5, "osteoporosis/NN has/have/VBZ the/DT bone/NN ./."),
    # adjective modifiers
    (9, "the/DT bare/JJ bone/NN ./."),
    (7, "the/DT pubic/JJ bone/NN ./."),
    (5, "the/DT brittle/JJ bone/NN ./."),
    (2, "the/DT human/JJ bone/NN ./."),
    # subject of verbs
    (9, "the/DT bone/NN fragments/fragment/VBZ ./."),
    (7, "the/DT bone/NN heals/heal/VBZ ./."),
    (5, "the/DT bone/NN fractures/fracture/VBZ ./."),
    (2, "the/DT bone/NN aches/ache/VBZ ./."),
    # object of verbs
    (9, "they/PRP break/VBP the/DT bone/NN ./."),
    (7, "they/PRP strengthen/VBP the/DT bone/NN ./."),
    (5, "they/PRP fracture/VBP the/DT bone/NN ./."),
    (2, "they/PRP scan/VBP the/DT bone/NN ./."),
    # genitive "of"
    (9, "a/DT bone/NN of/IN contention/NN ./."),
    (7, "a/DT bone/NN of/IN the/DT skull/NN ./."),
    (5, "a/DT bone/NN of/IN the/DT spine/NN ./."),
    # "with"
    (9, "a/DT bone/NN with/IN flesh/NN ./."),
    (7, "a/DT bone/NN with/IN marrow/NN ./."),
    (5, "a/DT bone/NN with/IN meat/NN ./."),
    # distributional neighbours of bone
    (4, "the/DT brittle/JJ osteoporosis/NN ./."),
    (4, "the/DT human/JJ osteoporosis/NN ./."),
    (4, "they/PRP scan/VBP the/DT osteoporosis/NN ./."),
    (4, "the/DT osteoporosis/NN heals/heal/VBZ ./."),
    (4, "the/DT human/JJ skull/NN ./."),
    (4, "the/DT bare/JJ skull/NN ./."),
    (4, "they/PRP scan/VBP the/DT skull/NN ./."),
    (4, "the/DT skull/NN heals/heal/VBZ ./."),
    (3, "the/DT human/JJ spine/NN ./."),
    (3, "they/PRP break/VBP the/DT spine/NN ./."),
    (3, "the/DT spine/NN aches/ache/VBZ ./."),
    (3, "the/DT human/JJ injury/NN ./."),
    (3, "the/DT injury/NN heals/heal/VBZ ./."),
    (3, "the/DT human/JJ remain/NN ./."),
    (3, "they/PRP scan/VBP the/DT remain/NN ./."),
    # adjective "dead"
    (4, "he/PRP is/be/VBZ dead/JJ ,/, not/RB alive/JJ ./."),
    (3, "it/PRP is/be/VBZ dead/JJ rather/RB than/IN living/JJ ./."),
    (3, "as/IN dead/JJ as/IN a/DT doornail/NN ./."),
    (3, "the/DT dead/JJ man/NN ./."),
    # verb "heal"
    (4, "wounds/wound/NNS heal/VBP slowly/RB ./."),
    (3, "they/PRP heal/VBP the/DT wound/NN ./."),
    (2, "a/DT wound/NN can/MD heal/VB ./."),
    (3, "the/DT skin/NN heals/heal/VBZ with/IN time/NN ./."),
]


def token_line(tok: str) -> str:
    parts = tok.split("/")
    if len(parts) == 2:
        word, tag = parts
        lemma = word.lower()
    elif len(parts) == 3:
        word, lemma, tag = parts
    else:
        raise ValueError(tok)
    return f"{word}\t{lemma}\t{tag}"


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "corpora" / "bone.vert"
    lines = ['<doc id="bone">']
    for count, sentence in SENTENCES:
        for _ in range(count):
            lines.append("<s>")
            lines.extend(token_line(t) for t in sentence.split())
            lines.append("</s>")
    lines.append("</doc>")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
