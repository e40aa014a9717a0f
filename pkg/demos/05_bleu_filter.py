"""Filtering generated sentences by BLEU against their originals."""

from mbse.bleu import GenPair, filter_generated, sentence_bleu

original = "the boy wants the girl to believe him"
outputs = [
    "the boy wants the girl to believe him",   # copy
    "the boy wants the girl to trust him",     # paraphrase
    "a boy would like the girl to believe him",
    "rain fell over paris",                    # unrelated
]
pairs = [GenPair.scored(original, o, id=str(i)) for i, o in enumerate(outputs)]
for p in pairs:
    print(f"{p.bleu:.4f}  {p.generated_text}")

# keep 0.1 <= BLEU <= 0.9: near copies add nothing and unrelated text is noise
kept = filter_generated(pairs, low=0.1, high=0.9)
print("kept:", [p.id for p in kept])

# without smoothing a missing 4-gram zeroes the score
print(sentence_bleu("a b c d e", "a b x d e"), sentence_bleu("a b c d e", "a b x d e", smoothing="none"))
