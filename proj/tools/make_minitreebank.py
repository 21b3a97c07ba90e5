#!/usr/bin/env python3
"""Writes the bundled mini-treebank (NEGRA export format 3).

Sentences come from a handful of English and German templates with random
word choices; about half of them contain a discontinuous constituent.
Output: data/mini.export (all), data/mini-train.export, data/mini-dev.export,
data/example.export, data/poschain.export.
"""
import argparse
import pathlib
import random

# A tree is (label, [children]); a child is a subtree or an int (word index).

N_EN = [("hearing", "plan"), ("meeting", "vote"), ("trial", "case"), ("debate", "bill"), ("review", "report")]
V_EN = ["scheduled", "planned", "expected", "held"]
DET_EN = ["A", "The"]
SUBJ_EN = [("man", "NN"), ("woman", "NN"), ("company", "NN"), ("committee", "NN")]
OBJ_EN = [("book", "NN"), ("car", "NN"), ("house", "NN"), ("plan", "NN")]
ADJ_EN = ["new", "old", "big", "small"]
TV_EN = [("bought", "buy"), ("sold", "sell"), ("liked", "like"), ("saw", "see")]

N_DE = [("Buch", "Das", "das"), ("Haus", "Das", "das"), ("Auto", "Das", "das"), ("Bild", "Das", "das")]
SUBJ_DE = [("Mann", "Der", "der"), ("Lehrer", "Der", "der"), ("Junge", "Der", "der")]
PART_DE = ["gelesen", "gekauft", "gesehen", "verkauft"]
ADV_DE = ["gestern", "heute", "oft"]
FIN_DE = ["liest", "kauft", "sieht", "malt"]
REL_DE = ["liebt", "kennt", "mag"]


def example(rng):
    words = [("A", "DT"), ("hearing", "NN"), ("is", "VBZ"), ("scheduled", "VBN"), ("on", "IN"),
             ("the", "DT"), ("issue", "NN"), ("today", "NN")]
    tree = ("VP", [2, ("VP", [3, ("NP", [("NP", [0, 1]), ("PP", [4, ("NP", [5, 6])])]), ("NP", [7])])])
    return words, [tree]


def extraposed_pp(rng):
    n1, n2 = rng.choice(N_EN)
    words = [(rng.choice(DET_EN), "DT"), (n1, "NN"), ("is", "VBZ"), (rng.choice(V_EN), "VBN"), ("for", "IN"),
             ("the", "DT"), (n2, "NN"), ("very", "RB"), (rng.choice(["soon", "early"]), "RB"), (".", ".")]
    tree = ("S", [("VP", [2, ("VP", [3, ("NP", [("NP", [0, 1]), ("PP", [4, ("NP", [5, 6])])]), ("ADVP", [7, 8])])]),
                  9])
    return words, [tree]


def wh_question(rng):
    obj = rng.choice(OBJ_EN)
    subj = rng.choice(SUBJ_EN)
    past, base = rng.choice(TV_EN)
    words = [("Which", "WDT"), (obj[0], "NN"), ("did", "VBD"), ("the", "DT"), (subj[0], "NN"), (base, "VB"), ("?", ".")]
    tree = ("SQ", [("VP", [("WHNP", [0, 1]), 5]), 2, ("NP", [3, 4]), 6])
    return words, [tree]


def transitive_en(rng):
    subj = rng.choice(SUBJ_EN)
    obj = rng.choice(OBJ_EN)
    past, _ = rng.choice(TV_EN)
    words = [("The", "DT"), (subj[0], "NN"), (past, "VBD"), ("a", "DT"), (rng.choice(ADJ_EN), "JJ"), (obj[0], "NN"),
             (".", ".")]
    tree = ("S", [("NP", [0, 1]), ("VP", [2, ("NP", [3, 4, 5])]), 6])
    return words, [tree]


def pp_en(rng):
    subj = rng.choice(SUBJ_EN)
    obj = rng.choice(OBJ_EN)
    past, _ = rng.choice(TV_EN)
    words = [("The", "DT"), (subj[0], "NN"), (past, "VBD"), ("the", "DT"), (obj[0], "NN"), ("in", "IN"), ("the", "DT"),
             ("city", "NN"), (".", ".")]
    tree = ("S", [("NP", [0, 1]), ("VP", [2, ("NP", [3, 4]), ("PP", [5, ("NP", [6, 7])])]), 8])
    return words, [tree]


def fronted_object_de(rng):
    n, det, _ = rng.choice(N_DE)
    s, sdet, sdet_lc = rng.choice(SUBJ_DE)
    words = [(det, "ART"), (n, "NN"), ("hat", "VAFIN"), (sdet_lc, "ART"), (s, "NN"), (rng.choice(ADV_DE), "ADV"),
             (rng.choice(PART_DE), "VVPP"), (".", "$.")]
    tree = ("S", [("VP", [("NP", [0, 1]), 5, 6]), 2, ("NP", [3, 4])])
    return words, [tree, 7]


def fronted_adverb_de(rng):
    n, _, det_lc = rng.choice(N_DE)
    s, _, sdet_lc = rng.choice(SUBJ_DE)
    adv = rng.choice(ADV_DE)
    words = [(adv.capitalize(), "ADV"), ("hat", "VAFIN"), (sdet_lc, "ART"), (s, "NN"), (det_lc, "ART"), (n, "NN"),
             (rng.choice(PART_DE), "VVPP"), (".", "$.")]
    tree = ("S", [0, 1, ("NP", [2, 3]), ("VP", [("NP", [4, 5]), 6])])
    return words, [tree, 7]


def extraposed_relative_de(rng):
    n, _, det_lc = rng.choice(N_DE)
    s, sdet, _ = rng.choice(SUBJ_DE)
    words = [(sdet, "ART"), (s, "NN"), ("hat", "VAFIN"), (det_lc, "ART"), (n, "NN"), (rng.choice(PART_DE), "VVPP"),
             (",", "$,"), ("das", "PRELS"), ("er", "PPER"), (rng.choice(REL_DE), "VVFIN"), (".", "$.")]
    tree = ("S", [("NP", [0, 1]), 2, ("VP", [("NP", [3, 4, ("S", [7, 8, 9])]), 5])])
    return words, [tree, 6, 10]


def simple_de(rng):
    n, _, _ = rng.choice(N_DE)
    s, sdet, _ = rng.choice(SUBJ_DE)
    words = [(sdet, "ART"), (s, "NN"), (rng.choice(FIN_DE), "VVFIN"), ("ein", "ART"), (n, "NN"), (".", "$.")]
    tree = ("S", [("NP", [0, 1]), 2, ("NP", [3, 4])])
    return words, [tree, 5]


TEMPLATES = [extraposed_pp, wh_question, transitive_en, pp_en, fronted_object_de, fronted_adverb_de,
             extraposed_relative_de, simple_de]


def pos_chain(rng):
    # NP over a single NN: the bare-POS heuristic loses the NP
    words = [("Students", "NNS"), ("read", "VBP"), ("books", "NNS"), (".", ".")]
    tree = ("S", [("NP", [0]), ("VP", [1, ("NP", [2])]), 3])
    return words, [tree]


def to_export(sid, words, top):
    lines = [f"#BOS {sid}"]
    parent = [0] * len(words)
    nodes = []

    def visit(t, up):
        if isinstance(t, int):
            parent[t] = up
            return
        label, kids = t
        nid = 500 + len(nodes)
        nodes.append([label, up])
        for k in kids:
            visit(k, nid)

    for t in top:
        visit(t, 0)
    for (w, tag), p in zip(words, parent):
        lines.append(f"{w}\t{tag}\t--\t--\t{p}")
    for i, (label, p) in enumerate(nodes):
        lines.append(f"#{500 + i}\t{label}\t--\t--\t{p}")
    lines.append(f"#EOS {sid}")
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--train", type=int, default=48)
    ap.add_argument("--dev", type=int, default=12)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    sents = [example(rng)]
    while len(sents) < args.train + args.dev:
        sents.append(TEMPLATES[len(sents) % len(TEMPLATES)](rng))
    blocks = [to_export(i + 1, w, t) for i, (w, t) in enumerate(sents)]
    header = "#FORMAT 3\n"
    (out / "mini.export").write_text(header + "".join(blocks))
    (out / "mini-train.export").write_text(header + "".join(blocks[: args.train]))
    (out / "mini-dev.export").write_text(header + "".join(blocks[args.train:]))
    (out / "example.export").write_text(header + blocks[0])
    (out / "poschain.export").write_text(header + to_export(1, *pos_chain(rng)) + blocks[1])


if __name__ == "__main__":
    main()
