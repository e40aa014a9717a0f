"""Random AMR-like graphs for tests, benchmarks and the demo scripts.

Everything takes an explicit :class:`random.Random` so corpora are
reproducible from a seed.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .amr import AmrGraph

CONCEPTS = ("want-01", "go-02", "boy", "girl", "city", "name", "person", "see-01", "thing", "say-01")
ROLES = ("ARG0", "ARG1", "ARG2", "mod", "location", "name")
ATTRIBUTES = (("polarity", "-"), ("quant", "3"), ("op1", '"York"'), ("mode", "imperative"))


def random_graph(
    rng: random.Random,
    n_vars: int,
    max_triples: Optional[int] = None,
    concepts: Sequence[str] = CONCEPTS,
    roles: Sequence[str] = ROLES,
    connected: bool = True,
    prefix: str = "v",
) -> AmrGraph:
    """Draw a graph with ``n_vars`` variables.

    With ``connected`` a random spanning tree is laid down first; extra edges
    and attributes are then added while the triple count stays within
    ``max_triples`` (V + E + A + 1).
    """
    names = [f"{prefix}{i}" for i in range(n_vars)]
    nodes = {v: rng.choice(concepts) for v in names}
    limit = max_triples if max_triples is not None else n_vars * 3
    budget = limit - n_vars - 1
    edges: list[tuple[str, str, str]] = []
    attributes: list[tuple[str, str, str]] = []
    if connected:
        for i in range(1, n_vars):
            if budget <= 0:
                break
            edges.append((names[rng.randrange(i)], rng.choice(roles), names[i]))
            budget -= 1
    extra = rng.randint(0, max(budget, 0))
    for _ in range(extra):
        if rng.random() < 0.7 and n_vars > 1:
            s, t = rng.sample(names, 2)
            e = (s, rng.choice(roles), t)
            if e not in edges:
                edges.append(e)
        else:
            role, value = rng.choice(ATTRIBUTES)
            a = (rng.choice(names), role, value)
            if a not in attributes:
                attributes.append(a)
    return AmrGraph(root=names[0], nodes=nodes, edges=edges, attributes=attributes)


def rename_variables(graph: AmrGraph, rng: random.Random, prefix: str = "x") -> AmrGraph:
    """Same graph under a random bijective renaming of its variables."""
    old = list(graph.nodes)
    fresh = [f"{prefix}{i}" for i in range(len(old))]
    rng.shuffle(fresh)
    m = dict(zip(old, fresh))
    nodes = {m[v]: graph.nodes[v] for v in rng.sample(old, len(old))}
    return AmrGraph(
        root=m[graph.root],
        nodes=nodes,
        edges=[(m[s], r, m[t]) for s, r, t in graph.edges],
        attributes=[(m[s], r, v) for s, r, v in graph.attributes],
        metadata=dict(graph.metadata),
    )


def perturb(
    graph: AmrGraph,
    rng: random.Random,
    rate: float = 0.15,
    concepts: Sequence[str] = CONCEPTS,
    roles: Sequence[str] = ROLES,
) -> AmrGraph:
    """Corrupt a graph the way a imperfect parser might.

    Each concept is relabeled, each edge relabeled or re-attached, and each
    attribute dropped, independently with probability ``rate``. The spanning
    structure is kept, so a connected input stays connected.
    """
    nodes = {v: (rng.choice(concepts) if rng.random() < rate else c) for v, c in graph.nodes.items()}
    names = list(nodes)
    edges = []
    for s, r, t in graph.edges:
        x = rng.random()
        if x < rate / 2:
            r = rng.choice(roles)
        elif x < rate:
            s = rng.choice([n for n in names if n != t] or [s])
        edges.append((s, r, t))
    attributes = [a for a in graph.attributes if rng.random() >= rate]
    return AmrGraph(
        root=graph.root,
        nodes=nodes,
        edges=list(dict.fromkeys(edges)),
        attributes=attributes,
        metadata=dict(graph.metadata),
    )
