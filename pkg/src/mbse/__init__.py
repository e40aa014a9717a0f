"""
mbse - Smatch-consensus selection among AMR parser outputs
==========================================================

Modules
-------

    amr        Penman reading/writing, triples, validation
    smatch     hill-climbing Smatch, exact oracle, Unlabeled/NoWSD transforms
    ensemble   greedy-select, average-Smatch and majority selection
    bleu       sentence BLEU and the generated-text filter
    pipeline   corpus alignment, distillation, mixing and diagnostics
    synthetic  random graphs for tests and demos
    cli        the ``mbse`` command
"""

__version__ = "0.1.0"

from .amr import (  # noqa: F401
    AmrGraph,
    PenmanError,
    Triple,
    ValidationReport,
    extract_triples,
    parse_penman,
    read_amr_file,
    serialize_penman,
    validate,
    write_amr_file,
)
from .bleu import GenPair, filter_generated, sentence_bleu  # noqa: F401
from .ensemble import (  # noqa: F401
    CandidateSet,
    EnsembleDecision,
    average_select,
    greedy_select,
    majority_select,
    pairwise_matrix,
    select,
)
from .pipeline import (  # noqa: F401
    CorpusStats,
    SelectionStats,
    SilverRecord,
    align_parser_outputs,
    corpus_stats,
    distill,
    mix_corpora,
    ne_type_oov,
)
from .smatch import SearchConfig, SmatchScore, corpus_smatch, exact_smatch, smatch_pair, transform  # noqa: F401
