"""Regenerate genpairs.tsv: 100 original/generated sentence pairs with BLEU spread over [0, 1]."""

import random
from pathlib import Path

WORDS = (
    "the a boy girl dog cat wants to go see eat runs quickly house city river old new big small "
    "and but with from over under yesterday today tomorrow said believes teacher student book"
).split()


def main():
    rng = random.Random(20231015)
    rows = []
    for i in range(100):
        orig = [rng.choice(WORDS) for _ in range(rng.randint(4, 18))]
        rate = i / 99
        gen = []
        for tok in orig:
            r = rng.random()
            if r < rate * 0.6:
                gen.append(rng.choice(WORDS))
            elif r < rate * 0.8:
                continue
            else:
                gen.append(tok)
            if rng.random() < rate * 0.2:
                gen.append(rng.choice(WORDS))
        if not gen or i >= 85:
            # unrelated output
            gen = [rng.choice(WORDS) for _ in range(rng.randint(3, 12))]
        if i % 17 == 0:
            gen = [w.capitalize() if rng.random() < 0.5 else w for w in gen]
        rows.append(f"g{i:03d}\t{' '.join(orig)}\t{' '.join(gen)}\n")
    Path(__file__).with_name("genpairs.tsv").write_text("".join(rows), encoding="utf-8")


if __name__ == "__main__":
    main()
