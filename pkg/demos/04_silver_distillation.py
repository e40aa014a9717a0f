"""Building a silver training corpus from three parsers' outputs."""

import json
import random
import tempfile
from pathlib import Path

from mbse import align_parser_outputs, distill, mix_corpora, write_amr_file
from mbse.pipeline import selection_distribution
from mbse.synthetic import perturb, random_graph

rng = random.Random(1)
work = Path(tempfile.mkdtemp())

# three noisy parsers over the same 40 sentences
golds = [random_graph(rng, rng.randint(3, 7), prefix="g").copy(metadata={"id": f"s{i}", "snt": f"sentence {i}"})
         for i in range(40)]
files = []
for name in ("apt", "spring", "sbart"):
    path = work / f"{name}.amr"
    write_amr_file(path, [perturb(g, rng, 0.2) for g in golds])
    files.append(path)

# one record with a broken byte, as happens with real parser dumps
raw = files[1].read_bytes().replace(b"sentence 7\n", b"sentence \xff7\n", 1)
files[1].write_bytes(raw)

sets, dropped = align_parser_outputs(files)
print(len(sets), "sentences,", len(dropped), "unreadable records")

result = distill(sets, method="greedy", theta=0.5)
s = result.stats
print(f"selected={s.n_selected} discarded={s.discarded} dropped={s.dropped} total={s.total}")
print(json.dumps(s.distribution(), indent=2))

silver = [r.to_graph() for r in result.records]
print(silver[0].metadata)
assert selection_distribution(silver) == s.distribution()

# gold and silver together; a seeded sample keeps runs repeatable
gold = golds[:5]
print("concat:", len(mix_corpora(gold, silver)))
print("ratio 0.5:", len(mix_corpora(gold, silver, "ratio", ratio=0.5, seed=3)))
print("random 50:50:", len(mix_corpora([], (silver, golds), "random-equal", seed=3)))
