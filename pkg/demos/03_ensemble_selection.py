"""Picking one graph per sentence from several parsers' outputs."""

import numpy as np

from mbse import CandidateSet, average_select, greedy_select, majority_select, pairwise_matrix, parse_penman

outputs = {
    "parser_a": "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))",
    "parser_b": "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-01 :ARG0 b))",
    "parser_c": "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02))",
    "parser_d": "(w / wish-01 :ARG0 (g / girl))",
}
cands = CandidateSet("s1", [(name, parse_penman(t)) for name, t in outputs.items()])

m = pairwise_matrix(cands)
np.set_printoptions(precision=3, suppress=True)
print(m)

# greedy: take the closest pair, keep whichever of the two agrees more with the rest
d = greedy_select(cands, m)
print("greedy ->", d.chosen_source, f"(best pair {d.max_pair_score:.3f})")

# with a threshold, sentences whose best pair is weak are skipped
print("greedy, theta=0.95 ->", greedy_select(cands, m, theta=0.95).discarded_by_threshold)

# average: highest mean agreement with every other candidate
print("average ->", average_select(cands, m).chosen_source)

# majority: the largest group of graphs identical up to variable names
dup = CandidateSet("s2", [
    ("p0", parse_penman("(a / alpha :ARG0 (b / beta))")),
    ("p1", parse_penman("(z / gamma)")),
    ("p2", parse_penman("(x / alpha :ARG0 (y / beta))")),
])
print("majority ->", majority_select(dup).chosen_source)

# a hand-made matrix shows the tie rule: the first candidate wins
print("all equal ->", greedy_select(CandidateSet("s3", cands.candidates[:3]), np.ones((3, 3))).chosen_index)
