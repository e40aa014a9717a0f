"""Smatch: aligning variables between two graphs to count shared triples."""

import random

from mbse import SearchConfig, corpus_smatch, exact_smatch, parse_penman, smatch_pair, transform
from mbse.synthetic import perturb, random_graph

boy = parse_penman("(w / want-01 :ARG0 (b / boy))")
girl = parse_penman("(x / want-01 :ARG0 (y / girl))")

score, alignment = smatch_pair(boy, girl)
print(f"matched={score.matched} of {score.total_pred}/{score.total_gold}  f1={score.f1:.4f}")
print("alignment:", alignment)

# small graphs can be scored by trying every variable mapping
print("exact:", exact_smatch(boy, girl))

# hill climbing against the exact optimum on random graphs
rng = random.Random(0)
misses = 0
for seed in range(200):
    g1 = random_graph(rng, rng.randint(2, 6), prefix="p", max_triples=10)
    g2 = perturb(g1, rng, 0.4)
    hc = smatch_pair(g1, g2, SearchConfig(restarts=8, seed=seed))[0].matched
    misses += hc != exact_smatch(g1, g2).matched
print("hill-climb misses on 200 pairs:", misses)

# corpus score is a micro average over summed counts
print("corpus f1:", corpus_smatch([(boy, boy), (boy, girl)]).f1)

# label-free and sense-free views of the same pair
g1 = parse_penman("(s / say-01 :ARG0 (b / boy) :ARG1 (g / go-02))")
g2 = parse_penman("(s / say-02 :ARG1 (b / boy) :ARG1 (g / go-01))")
for mode in (None, "unlabeled", "nowsd"):
    a, b = (g1, g2) if mode is None else (transform(g1, mode), transform(g2, mode))
    print(f"{mode or 'standard':>10}: {smatch_pair(a, b)[0].f1:.4f}")
