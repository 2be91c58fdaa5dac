#!/usr/bin/env python3
"""Generate the bundled 50-d demo embedding.

The corpus is synthetic but structured: a fixed orthonormal frame carries a
primary and a secondary gender axis, a residual-bias axis that seed-word
methods cannot reach, a royalty axis, an occupation-type axis with a mild
gender tilt, and a set of semantic cluster axes.  Word vectors are exact
linear combinations of those axes plus noise confined to the complementary
subspace, so the planted geometry is measurable and the whole file
regenerates bit-identically from the fixed seed.

Usage:
    python3 scripts/make_bundled_embedding.py [--out PATH] [--report]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

DIM = 50
SEED = 20240711
OCC_SEED = 20242314

# ---------------------------------------------------------------------------
# Tunable geometry, calibrated against the package's own metrics so the demo
# workflows (baseline bias, projection, iterative refinement, nullspace
# iteration, graded rotation) behave like they do on real distributional
# embeddings.
# ---------------------------------------------------------------------------
GENDER_LOAD = (2.50, 0.85, 0.63)   # (primary, secondary, residual) for gendered pairs
PAIR_JITTER = (0.62, 1.38)
PAIR_NOISE = 0.85
PAIR_STEREO_WOBBLE = 0.50
PERSON_WEIGHT = 1.20

NAME_A_RANGE = (1.10, 1.90)        # primary-axis loading range for names
NAME_B_RANGE = (0.30, 2.20)        # secondary-axis loading range for names
NAME_NOISE = 0.90

OCC_CARRIER = (0.075, 0.12, 0.99)  # (in-plane stereotype, residual, own-axis) mix
OCC_TYPE_SCALE = (0.95, 1.25)      # per-occupation magnitude along that axis
OCC_PERSON_RANGE = (0.20, 2.60)
OCC_COMMON = 1.90
OCC_NOISE = 0.55

ADJ_CARRIER = (0.55, 0.835)        # (in-plane stereotype, residual) mix for adjectives
ADJ_BIAS_RANGE = (0.95, 1.25)
ADJ_COMMON = 1.10
ADJ_NOISE = 1.08

ROYAL_ADJ_LOAD = 1.30
FILLER_NOISE = 1.00
FILLER_GENDER_JITTER = 0.10

# (male, female) definitionally gendered pairs; members share their base
# vector and differ only in the gender loading.
GENDER_PAIRS = [
    ("man", "woman"), ("he", "she"), ("him", "her"), ("his", "hers"),
    ("boy", "girl"), ("guy", "gal"), ("grandpa", "grandma"),
    ("uncle", "aunt"), ("brother", "sister"), ("son", "daughter"),
    ("nephew", "niece"), ("mr", "mrs"), ("male", "female"),
    ("father", "mother"), ("dad", "mom"), ("husband", "wife"),
    ("king", "queen"), ("prince", "princess"), ("lord", "lady"),
    ("sir", "madam"), ("gentleman", "gentlewoman"),
]
ROYAL_PAIR_LOAD = {
    "king": 2.2, "queen": 2.2, "prince": 2.0, "princess": 2.0,
    "lord": 1.2, "lady": 1.2, "sir": 0.7, "madam": 0.7,
}

NAMES_MALE = [
    "jack", "john", "george", "paul", "mike", "steve", "bill", "frank",
    "tom", "peter", "bob", "james", "david", "mark", "jeff", "kevin",
    "brian", "scott", "eric", "adam",
]
NAMES_FEMALE = [
    "susan", "mary", "kate", "lisa", "anna", "emma", "sarah", "amy",
    "karen", "nancy", "laura", "julia", "emily", "rachel", "donna",
    "alice", "diane", "helen", "megan", "claire",
]

# occupation: (stereotype sign along the occupation-type axis, subcluster)
OCCUPATIONS = {
    "doctor": (-1.00, "tech"), "engineer": (-1.35, "tech"),
    "lawyer": (-1.05, "office"), "mathematician": (-1.25, "tech"),
    "banker": (-1.15, "office"), "scientist": (-1.30, "tech"),
    "programmer": (-1.28, "tech"), "architect": (-1.10, "tech"),
    "professor": (-0.90, "office"), "pilot": (-1.00, "tech"),
    "homemaker": (1.35, "care"), "receptionist": (1.20, "office"),
    "dancer": (0.95, "care"), "maid": (1.30, "care"),
    "nurse": (1.25, "care"), "secretary": (1.10, "office"),
    "librarian": (0.90, "office"), "nanny": (1.25, "care"),
    "stylist": (1.00, "care"), "waitress": (1.15, "care"),
}

# adjective: stereotype sign (negative = male-associated); a few also carry a
# royalty loading (positive = royal, negative = common).
ADJECTIVES = {
    "strong": -1.00, "intelligent": -0.95, "brave": -1.05, "important": -0.90,
    "arrogant": -0.85, "rational": -0.95, "dependable": -0.80,
    "pretty": 1.00, "beautiful": 0.95, "shy": 0.90, "homely": 1.00,
    "temperamental": 0.85, "excitable": 0.90, "gossip": 0.95,
    "considerate": 0.45, "attentive": 0.40,
    "obnoxious": -0.35, "plain": 0.10, "fancy": 0.05, "majestic": 0.00,
}
ROYAL_ADJ = {
    "majestic": 1.6, "fancy": 1.2, "important": 0.8,
    "obnoxious": -1.1, "plain": -1.2, "considerate": -0.9, "attentive": -1.0,
}

FILLER_CLUSTERS = {
    "animals": """dog cat horse cow sheep goat pig chicken duck goose rabbit deer bear wolf
        fox lion tiger elephant monkey mouse rat squirrel owl eagle hawk crow robin snake
        frog fish whale dolphin shark crab spider ant bee wasp moth butterfly worm bat""",
    "food": """bread butter cheese milk cream egg meat beef pork ham bacon sausage soup rice
        bean corn wheat flour sugar salt pepper honey jam cake pie cookie candy chocolate
        apple orange banana grape lemon peach pear plum cherry berry melon tomato potato
        onion carrot cabbage lettuce spinach garlic tea coffee juice wine beer pasta""",
    "nature": """tree leaf branch root bark flower grass moss fern bush forest wood meadow
        field hill mountain valley cliff rock stone sand soil mud river stream lake pond
        ocean sea wave beach island desert cave sky cloud rain snow ice frost wind storm
        thunder lightning fog mist sunrise sunset moon star planet""",
    "household": """house home room kitchen bedroom bathroom cellar attic roof wall floor
        ceiling door window stair table chair bench sofa bed blanket pillow lamp candle
        mirror clock shelf drawer cupboard closet carpet curtain sink oven stove kettle
        plate bowl cup glass spoon fork knife bucket broom soap towel""",
    "body": """head face eye ear nose mouth lip tooth tongue chin cheek neck shoulder arm
        elbow wrist hand finger thumb chest back waist hip leg knee ankle foot toe skin
        hair bone muscle heart lung stomach brain blood voice breath""",
    "clothing": """shirt coat jacket dress skirt trousers pants sock shoe boot hat cap glove
        scarf belt button pocket sleeve collar sweater vest uniform costume ribbon""",
    "vehicles": """car truck bus train tram ship boat ferry canoe bicycle wagon cart sled
        airplane helicopter rocket engine wheel tire brake motor road street bridge tunnel
        harbor station airport runway""",
    "school": """school class lesson teacher student pupil book page paper pencil pen ink
        chalk board desk exam test grade homework library science history grammar algebra
        geometry physics chemistry biology language word sentence story poem essay""",
    "work": """office factory shop store market business company trade job task duty wage
        salary money price cost profit loss tax bill debt account budget contract meeting
        report letter mail package tool hammer nail saw drill ladder rope wire machine""",
    "time": """day night morning evening noon midnight hour minute second week month year
        spring summer autumn winter today tomorrow yesterday season moment period century
        decade calendar schedule""",
    "abstract": """idea thought reason cause effect question answer problem solution truth
        fact doubt belief hope fear joy sorrow anger peace war law rule order chaos freedom
        justice honor courage wisdom knowledge memory dream wish luck chance fate purpose
        meaning value virtue habit custom culture history future past""",
    "actions": """walk run jump climb swim fly ride drive carry lift push pull throw catch
        hold drop open close build break cut join fold bend stretch turn spin roll slide
        stand sit lie sleep wake eat drink cook bake wash clean sweep dig plant grow pick
        gather hunt fish sew knit weave paint draw write read speak listen watch look""",
    "music": """music song tune melody rhythm drum flute violin piano guitar trumpet horn
        harp bell choir concert opera dance theater stage painting sculpture museum""",
    "sports": """game sport ball bat racket goal score team player coach race marathon
        tennis soccer baseball basketball hockey golf boxing wrestling swimming rowing""",
    "places": """city town village country nation state province region border coast port
        capital castle palace tower church temple cathedral monastery farm barn mill inn
        hotel hospital prison court park garden square plaza fountain monument""",
    "weather_misc": """number letter symbol sign mark line circle square triangle corner
        edge center middle top bottom side front rear north south east west left right
        inside outside above below near far big small tall short wide narrow deep shallow
        heavy light fast slow loud quiet bright dark warm cold wet dry new old young""",
}


def build_vocab_vectors():
    # Independent streams per word group: tuning one group's parameters must
    # not reshuffle another group's draws.
    rng_frame = np.random.default_rng(SEED)
    rng_pairs = np.random.default_rng(SEED + 1)
    rng_names = np.random.default_rng(SEED + 2)
    rng_occ = np.random.default_rng(OCC_SEED)
    rng_adj = np.random.default_rng(SEED + 4)
    rng_fill = np.random.default_rng(SEED + 5)
    basis = np.linalg.qr(rng_frame.standard_normal((DIM, DIM)))[0]
    g, h, b2, roy, occ_common, occ_fresh = (basis[:, i] for i in range(6))
    cluster_dirs = {}
    cluster_names = [
        "person", "name", "tech", "care", "office", "adjective",
        *FILLER_CLUSTERS.keys(),
    ]
    for i, cname in enumerate(cluster_names):
        cluster_dirs[cname] = basis[:, 6 + i]
    free = basis[:, 6 + len(cluster_names):]
    # Names get a private noise block: directions reachable from name convex
    # hulls must stay orthogonal to every other word's noise, otherwise
    # hull optimization can exploit noise overlaps instead of the planted
    # gender structure.
    name_noise_basis = free[:, :6]
    noise_basis = free[:, 6:]
    n_noise = noise_basis.shape[1]

    def noise(rng, scale):
        return noise_basis @ rng.standard_normal(n_noise) * scale

    def name_noise(rng, scale):
        return name_noise_basis @ rng.standard_normal(name_noise_basis.shape[1]) * scale

    gender_axis = GENDER_LOAD[0] * g + GENDER_LOAD[1] * h + GENDER_LOAD[2] * b2
    # In-plane stereotype direction: where gendered words actually point.
    stereo_mix = GENDER_LOAD[0] * g + GENDER_LOAD[1] * h
    stereo_mix = stereo_mix / np.linalg.norm(stereo_mix)
    # Occupation-type axis: mostly its own dimension, mildly gender-tilted,
    # with a residual-axis share so post-projection bias has a stable floor.
    occ_type = OCC_CARRIER[0] * stereo_mix + OCC_CARRIER[1] * b2 + OCC_CARRIER[2] * occ_fresh
    occ_type = occ_type / np.linalg.norm(occ_type)
    # Adjective stereotype carrier: in-plane part parallel to the gendered
    # words, the rest along the residual axis that seed words cannot reach.
    adj_carrier = ADJ_CARRIER[0] * stereo_mix + ADJ_CARRIER[1] * b2
    adj_carrier = adj_carrier / np.linalg.norm(adj_carrier)

    vectors: dict[str, np.ndarray] = {}

    def put(token, vec):
        if token in vectors:
            raise SystemExit(f"duplicate token in generator: {token}")
        vectors[token] = vec

    # Definitionally gendered pairs: shared base, opposite gender loading.
    for m_tok, f_tok in GENDER_PAIRS:
        base = PERSON_WEIGHT * cluster_dirs["person"] + noise(rng_pairs, PAIR_NOISE)
        royal = ROYAL_PAIR_LOAD.get(m_tok, 0.0)
        if royal:
            base = base + royal * roy
        jitter = rng_pairs.uniform(*PAIR_JITTER)
        # Independent per-word in-plane stereotype wobble: keeps the
        # association-score spread realistic instead of a clean two-cluster
        # split, while staying removable by in-plane projection.
        wob_m = rng_pairs.normal(0.0, PAIR_STEREO_WOBBLE)
        wob_f = rng_pairs.normal(0.0, PAIR_STEREO_WOBBLE)
        put(m_tok, base - jitter * gender_axis + wob_m * stereo_mix)
        put(f_tok, base + jitter * gender_axis + wob_f * stereo_mix)

    # Statistically gendered names: in-plane gender mix only (no residual
    # component), heterogeneous mixes so convex combinations can re-aim.
    for toks, sign in ((NAMES_MALE, -1.0), (NAMES_FEMALE, 1.0)):
        for tok in toks:
            a = rng_names.uniform(*NAME_A_RANGE)
            b = rng_names.uniform(*NAME_B_RANGE)
            vec = sign * (a * g + b * h)
            vec = vec + 1.2 * cluster_dirs["name"] + name_noise(rng_names, NAME_NOISE)
            put(tok, vec)

    # Occupations: shared occupation component, a person weight (visible to
    # the gendered means, giving both rankings common structure), a
    # subcluster, and the signed type loading.
    for tok, (t, sub) in OCCUPATIONS.items():
        scale = rng_occ.uniform(*OCC_TYPE_SCALE)
        person_w = rng_occ.uniform(*OCC_PERSON_RANGE)
        vec = (
            OCC_COMMON * occ_common
            + person_w * cluster_dirs["person"]
            + 0.90 * cluster_dirs[sub]
            + t * scale * occ_type
            + noise(rng_occ, OCC_NOISE)
        )
        put(tok, vec)

    # Adjectives: adjective cluster plus signed stereotype loading; a few also
    # carry a royalty association.
    for tok, t in ADJECTIVES.items():
        scale = rng_adj.uniform(*ADJ_BIAS_RANGE)
        vec = (
            ADJ_COMMON * cluster_dirs["adjective"]
            + t * scale * adj_carrier
            + noise(rng_adj, ADJ_NOISE)
        )
        if tok in ROYAL_ADJ:
            vec = vec + ROYAL_ADJ[tok] * ROYAL_ADJ_LOAD / 1.3 * roy
        put(tok, vec)

    # Filler: cluster identity, free noise, and a whiff of in-plane gender.
    for cname, blob in FILLER_CLUSTERS.items():
        for tok in blob.split():
            if tok in vectors:
                continue
            vec = (
                1.30 * cluster_dirs[cname]
                + noise(rng_fill, FILLER_NOISE)
                + rng_fill.normal(0.0, FILLER_GENDER_JITTER) * g
                + rng_fill.normal(0.0, FILLER_GENDER_JITTER) * h
            )
            put(tok, vec)

    return vectors


def write_glove(vectors: dict[str, np.ndarray], path: Path):
    with path.open("w", encoding="utf-8") as fh:
        for tok, vec in vectors.items():
            comps = " ".join("%.6f" % x for x in vec)
            fh.write(f"{tok} {comps}\n")


def report(path: Path):
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
    from debiaskit import (
        IterativeConfig,
        identify_classifier_normal,
        identify_iterative,
        identify_pca,
        identify_two_means,
        inlp,
        linear_projection,
        load_embedding,
        oscar,
        ect,
        weat,
    )
    from debiaskit import wordlists as wl

    snap = load_embedding(path.read_text(), "glove_text")
    print(f"vocab = {len(snap)}, dim = {snap.dim}")

    def table_row(name, s):
        e = ect(s, wl.WEAT_MALE, wl.WEAT_FEMALE, wl.OCCUPATIONS_ALL)
        w = weat(s, wl.ADJECTIVE_WEAT)
        print(f"{name:24s} ECT = {e:7.4f}   WEAT(adj) = {w:7.4f}")
        return e, w

    table_row("baseline", snap)
    for name, fn in (
        ("pca", lambda: identify_pca(snap, wl.NAMES_MALE.tokens + wl.NAMES_FEMALE.tokens)),
        ("two-means", lambda: identify_two_means(snap, wl.NAMES_FEMALE, wl.NAMES_MALE)),
        ("classifier (1 step)", lambda: identify_classifier_normal(snap, wl.NAMES_FEMALE, wl.NAMES_MALE)),
        ("iterative", lambda: identify_iterative(
            snap, wl.NAMES_FEMALE, wl.NAMES_MALE,
            IterativeConfig(weat_sets=wl.DEFAULT_WEAT))),
    ):
        v = fn()
        table_row(name, linear_projection(snap, v).output)

    res = inlp(snap, wl.INLP_FEMALE, wl.INLP_MALE)
    accs = [s.info.get("accuracy") for s in res.steps]
    print(f"inlp rounds = {sum(1 for s in res.steps if s.info.get('projected'))}, "
          f"accuracies = {['%.3f' % a if a is not None else '-' for a in accs]}")

    v1 = identify_pca(snap, wl.ROTATION_GENDER_SEEDS, label="gender")
    v2 = identify_pca(snap, wl.ROTATION_OCCUPATION_SEEDS, label="occupation")
    print(f"oscar initial <v1,v2> = {float(v1.v @ v2.v):.4f}")
    rotated = oscar(snap, v1, v2).output
    v2_new = identify_pca(rotated, wl.ROTATION_OCCUPATION_SEEDS)
    print(f"oscar recomputed <v1,v2''> = {float(v1.v @ v2_new.v):.4f}")

    vroyal = identify_two_means(snap, wl.ROYALTY_SEEDS_ROYAL, wl.ROYALTY_SEEDS_COMMON)
    after = linear_projection(snap, vroyal).output
    import numpy as _np
    f = _np.mean([after.vector("woman"), after.vector("queen")], axis=0)
    m = _np.mean([after.vector("man"), after.vector("king")], axis=0)
    print(f"post-royalty gender norm = {float(_np.linalg.norm(f - m)):.4f}")

    vtm = identify_two_means(snap, wl.TWO_MEANS_F, wl.TWO_MEANS_M)
    print(f"<nurse,v> = {float(snap.vector('nurse') @ vtm.v):.4f}  "
          f"<engineer,v> = {float(snap.vector('engineer') @ vtm.v):.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    default_out = Path(__file__).resolve().parents[1] / "src/debiaskit/data/default_embedding_50d.txt"
    ap.add_argument("--out", type=Path, default=default_out)
    ap.add_argument("--report", action="store_true", help="print calibration metrics")
    args = ap.parse_args()
    vectors = build_vocab_vectors()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_glove(vectors, args.out)
    print(f"wrote {len(vectors)} vectors to {args.out}")
    if args.report:
        report(args.out)


if __name__ == "__main__":
    main()
