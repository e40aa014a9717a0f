"""NLTK-backed reference BLEU used to cross-check mbse.bleu."""

import warnings

from nltk.translate.bleu_score import sentence_bleu as nltk_bleu


def _add_one(p_n, references, hypothesis, hyp_len=None, **kwargs):
    # zero counts at order n >= 2 become 1 / (ngrams in hypothesis + 1)
    out = []
    for i, p in enumerate(p_n):
        if i > 0 and p.numerator == 0:
            out.append(1 / (max(0, hyp_len - i) + 1))
        else:
            out.append(p)
    return out


def reference_bleu(reference: str, hypothesis: str) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return float(
            nltk_bleu([reference.lower().split()], hypothesis.lower().split(), smoothing_function=_add_one)
        )
