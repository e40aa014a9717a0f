import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from mbse.amr import AmrGraph, extract_triples, parse_penman
from mbse.smatch import (
    SearchConfig,
    SmatchScore,
    VariableLimitError,
    corpus_smatch,
    exact_smatch,
    smatch_pair,
    transform,
)
from mbse.synthetic import random_graph, rename_variables

p = parse_penman
WANT_BOY = "(w / want-01 :ARG0 (b / boy))"
WANT_GIRL = "(x / want-01 :ARG0 (y / girl))"


def small_pair(seed, max_vars=6, max_triples=10):
    rng = random.Random(seed)
    kw = dict(max_triples=max_triples, concepts="abc", roles=("r", "s"), connected=False)
    g1 = random_graph(rng, rng.randint(1, max_vars), prefix="p", **kw)
    g2 = random_graph(rng, rng.randint(1, max_vars), prefix="q", **kw)
    return g1, g2


def test_score_arithmetic():
    s = SmatchScore(3, 4, 4)
    assert (s.precision, s.recall, s.f1) == (0.75, 0.75, 0.75)
    assert SmatchScore(0, 3, 5).f1 == 0.0
    assert SmatchScore(2, 4, 6).f1 == pytest.approx(2 * 0.5 * (1 / 3) / (0.5 + 1 / 3))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(init="clever")


def test_identity(corpus):
    for g in corpus:
        score, alignment = smatch_pair(g, g)
        assert score.f1 == 1.0
        assert len(alignment) == len(g.nodes)


def test_want_boy_vs_girl():
    score, alignment = smatch_pair(p(WANT_BOY), p(WANT_GIRL))
    assert (score.matched, score.total_pred, score.total_gold) == (3, 4, 4)
    assert score.f1 == 0.75
    assert alignment == {"w": "x", "b": "y"}
    assert exact_smatch(p(WANT_BOY), p(WANT_GIRL)).matched == 3


def test_alpha_beta_only_top_matches():
    score, _ = smatch_pair(p("(a / alpha)"), p("(b / beta)"))
    assert score.matched == 1 and score.f1 == 0.5
    assert exact_smatch(p("(a / alpha)"), p("(b / beta)")).matched == 1


def test_exact_identity_three_vars():
    g = p("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))")
    s = exact_smatch(g, rename_variables(g, random.Random(0)))
    assert s.matched == len(extract_triples(g)) and s.f1 == 1.0


def test_exact_refuses_large():
    g = AmrGraph(root="v0", nodes={f"v{i}": "x" for i in range(9)})
    with pytest.raises(VariableLimitError, match="var_limit=8"):
        exact_smatch(g, g, var_limit=8)


def test_uneven_sizes_map_small_into_large():
    big = p("(a / alpha :ARG0 (b / beta) :ARG1 (c / gamma))")
    small = p("(x / beta)")
    s1, al1 = smatch_pair(big, small)
    s2, al2 = smatch_pair(small, big)
    assert s1.matched == s2.matched == exact_smatch(big, small).matched == 1
    assert (s1.total_pred, s1.total_gold) == (6, 2)
    assert al2 == {"x": "b"} and al1 == {"b": "x"}


def test_alignment_is_injective_and_consistent():
    for seed in range(50):
        g1, g2 = small_pair(seed)
        score, al = smatch_pair(g1, g2)
        assert set(al) <= set(g1.nodes) and set(al.values()) <= set(g2.nodes)
        assert len(set(al.values())) == len(al) == min(len(g1.nodes), len(g2.nodes))
        t2 = set(extract_triples(g2))
        hits = 0
        for t in extract_triples(g1):
            if t.arg1 not in al or (t.kind == "relation" and t.arg2 not in al):
                continue
            mapped = t._replace(arg1=al[t.arg1], arg2=al[t.arg2] if t.kind == "relation" else t.arg2)
            hits += mapped in t2
        assert hits == score.matched


def brute_force_matched(g1, g2):
    """Independent of exact_smatch: enumerate mappings both ways round."""
    if len(g1.nodes) > len(g2.nodes):
        return brute_force_matched(g2, g1)
    t1 = extract_triples(g1)
    t2 = {tuple(t) for t in extract_triples(g2)}
    best = 0
    for perm in itertools.permutations(list(g2.nodes), len(g1.nodes)):
        m = dict(zip(g1.nodes, perm))
        image = set()
        for kind, a1, rel, a2 in t1:
            image.add((kind, m[a1], rel, m[a2] if kind == "relation" else a2))
        best = max(best, len(image & t2))
    return best


def test_exact_matches_independent_enumeration():
    for seed in range(100):
        g1, g2 = small_pair(seed, max_vars=5)
        assert exact_smatch(g1, g2).matched == brute_force_matched(g1, g2)


def test_hill_climb_never_exceeds_exact():
    for seed in range(200):
        g1, g2 = small_pair(seed)
        assert smatch_pair(g1, g2, SearchConfig(seed=seed))[0].matched <= exact_smatch(g1, g2).matched


def test_random_init_mode():
    g1, g2 = p(WANT_BOY), p(WANT_GIRL)
    assert smatch_pair(g1, g2, SearchConfig(init="random", restarts=8))[0].matched == 3


def test_determinism():
    for seed in range(20):
        g1, g2 = small_pair(seed)
        cfg = SearchConfig(seed=seed, restarts=2)
        assert smatch_pair(g1, g2, cfg) == smatch_pair(g1, g2, cfg)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2**32), st.sampled_from(["smart", "random"]))
def test_monotone_in_restarts(pair_seed, search_seed, init):
    rng = random.Random(pair_seed)
    g1 = random_graph(rng, rng.randint(3, 12), prefix="p")
    g2 = random_graph(rng, rng.randint(3, 12), prefix="q")
    counts = [
        smatch_pair(g1, g2, SearchConfig(restarts=r, seed=search_seed, init=init))[0].matched
        for r in range(1, 7)
    ]
    assert counts == sorted(counts)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_exact_symmetry(seed):
    g1, g2 = small_pair(seed)
    a, b = exact_smatch(g1, g2), exact_smatch(g2, g1)
    assert a.matched == b.matched
    assert (a.precision, a.recall) == (b.recall, b.precision)
    assert abs(a.f1 - b.f1) <= 1e-12


def test_corpus_micro_average():
    perfect = (p(WANT_BOY), p(WANT_BOY))
    partial = (p(WANT_BOY), p(WANT_GIRL))
    s = corpus_smatch([perfect, partial])
    assert (s.matched, s.total_pred, s.total_gold) == (7, 8, 8)
    assert s.f1 == 0.875
    assert corpus_smatch([perfect, perfect]).f1 == 1.0


def test_corpus_errors():
    with pytest.raises(ValueError):
        corpus_smatch([])
    a = p("# ::id s1\n(a / alpha)")
    b = p("# ::id s2\n(a / alpha)")
    with pytest.raises(ValueError, match="id mismatch"):
        corpus_smatch([(a, b)])


def test_corpus_order_independent_and_parallel(corpus):
    rng = random.Random(3)
    pairs = [(g, rename_variables(g, rng)) for g in corpus]
    s = corpus_smatch(pairs)
    assert corpus_smatch(pairs[::-1]) == s
    assert corpus_smatch(pairs, jobs=2) == s
    assert s.f1 == 1.0


def test_nowsd():
    g = transform(p(WANT_BOY), "nowsd")
    assert sorted(g.nodes.values()) == ["boy", "want"]
    assert transform(p("(b / boy)"), "nowsd").nodes == {"b": "boy"}


def test_unlabeled_equalizes_role_differences():
    g1 = p("(a / alpha :ARG0 (b / beta) :ARG1 (c / gamma) :polarity -)")
    g2 = p("(a / alpha :ARG1 (b / beta) :mod (c / gamma) :mode -)")
    assert exact_smatch(g1, g2).f1 < 1.0
    u1, u2 = transform(g1, "unlabeled"), transform(g2, "unlabeled")
    assert exact_smatch(u1, u2).f1 == 1.0
    assert smatch_pair(u1, u2)[0].f1 == 1.0
    top = [t for t in extract_triples(u1) if t.rel == "TOP"]
    assert top and all(t.kind != "relation" for t in top)


def test_transform_unknown_mode():
    with pytest.raises(ValueError):
        transform(p(WANT_BOY), "labeled")


def test_incremental_gains_match_recount():
    from mbse.smatch import _Problem

    rng = random.Random(2)
    for _ in range(40):
        g1 = random_graph(rng, rng.randint(2, 9), prefix="p", concepts="ab", roles=("r", "s"))
        g2 = random_graph(rng, rng.randint(len(g1.nodes), 10), prefix="q", concepts="ab", roles=("r", "s"))
        prob = _Problem(extract_triples(g1), extract_triples(g2))
        m = prob.initial(rng, smart=False)
        base = prob.score(m)
        for a in range(prob.na):
            for b in set(range(prob.nb)) - set(m):
                moved = list(m)
                moved[a] = b
                assert prob.move_gain(m, a, b) == prob.score(moved) - base
            for a2 in range(a + 1, prob.na):
                swapped = list(m)
                swapped[a], swapped[a2] = swapped[a2], swapped[a]
                assert prob.swap_gain(m, a, a2) == prob.score(swapped) - base
        climbed, count = prob.climb(list(m), 1000)
        assert count == prob.score(climbed)
