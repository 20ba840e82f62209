"""Seed-guided, label-supervised non-negative matrix factorization.

A text corpus becomes a tf-idf term-document matrix, which is factorized
with multiplicative updates under optional seed-word guidance and
document-label supervision; the results are scored with Macro F1 and a
co-occurrence coherence measure. The ``gssnmf`` command line wires the
pieces together, including (lambda, mu) grid sweeps.
"""

from .cli import SweepSpec
from .evaluation import (
    EvalReport,
    avg_coherence,
    coherence,
    load_report,
    macro_f1,
    save_report,
    threshold_predictions,
    topics_table,
)
from .factorization import (
    FactorizationError,
    FactorizationResult,
    ModelConfig,
    fit,
    initial_factors,
    load_result,
    objective,
    objective_gradients,
    save_result,
    top_keywords,
    update_step,
)
from .linalg import (
    DEFAULT_EPS,
    Matrix,
    SvdSpectrum,
    as_matrix,
    frobenius_sq,
    hadamard,
    matmul,
    safe_divide,
    singular_values,
)
from .stemmer import porter_stem
from .supervision import (
    LabelMatrix,
    MaskMatrix,
    SeedMatrix,
    build_label_matrix,
    build_seed_matrix,
    load_label_assignments,
    load_mask,
    load_seed_words,
    save_mask,
    split_mask,
)
from .textpipe import (
    CorpusFormatError,
    CorpusMatrix,
    PipelineParams,
    Vocabulary,
    build_corpus,
    default_stopwords,
    doc_token_sets,
    load_corpus,
    load_stopwords,
    read_corpus_dir,
    save_corpus,
    stem,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPS",
    "CorpusFormatError",
    "CorpusMatrix",
    "EvalReport",
    "FactorizationError",
    "FactorizationResult",
    "LabelMatrix",
    "MaskMatrix",
    "Matrix",
    "ModelConfig",
    "PipelineParams",
    "SeedMatrix",
    "SvdSpectrum",
    "SweepSpec",
    "Vocabulary",
    "as_matrix",
    "avg_coherence",
    "build_corpus",
    "build_label_matrix",
    "build_seed_matrix",
    "coherence",
    "default_stopwords",
    "doc_token_sets",
    "fit",
    "frobenius_sq",
    "hadamard",
    "initial_factors",
    "load_corpus",
    "load_label_assignments",
    "load_mask",
    "load_report",
    "load_result",
    "load_seed_words",
    "load_stopwords",
    "macro_f1",
    "matmul",
    "objective",
    "objective_gradients",
    "porter_stem",
    "read_corpus_dir",
    "save_corpus",
    "save_mask",
    "save_report",
    "save_result",
    "safe_divide",
    "singular_values",
    "split_mask",
    "stem",
    "threshold_predictions",
    "tokenize",
    "top_keywords",
    "topics_table",
    "update_step",
]
