"""Seed, label, and mask construction plus random train/test splits.

The seed matrix pins user-chosen words to vocabulary rows, the label
matrix binary-encodes per-document class sets, and the mask matrix zeroes
the label term on held-out columns so supervision only acts on training
documents.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import Matrix, as_matrix
from .stemmer import porter_stem
from .textpipe import Vocabulary, tokenize


@dataclass
class SeedMatrix:
    """Binary terms-by-seeds matrix; one unit column per matched seed word.

    ``seed_words`` holds the stemmed form matched in the vocabulary, one
    entry per column. ``dropped`` records stems that were requested but do
    not occur in the vocabulary.
    """

    y: Matrix
    seed_words: list[str]
    dropped: list[str] = field(default_factory=list)


@dataclass
class LabelMatrix:
    """Binary classes-by-documents matrix with sorted class names."""

    z: Matrix
    label_names: list[str]


@dataclass
class MaskMatrix:
    """All-ones columns on training documents, all-zeros on test documents."""

    l: Matrix
    train_ids: list[int]
    test_ids: list[int]


def build_seed_matrix(seed_words: list[str], vocab: Vocabulary) -> SeedMatrix:
    """One unit column per seed word found in the vocabulary.

    Each entry is tokenized and stemmed with the corpus stemmer before
    lookup, so multi-word entries contribute one column per constituent
    word that the vocabulary contains. Missing words are collected in
    ``dropped`` rather than raising, unless nothing at all matches.
    """
    matched: list[str] = []
    columns: list[int] = []
    dropped: list[str] = []
    for entry in seed_words:
        for token in tokenize(entry):
            stemmed = porter_stem(token)
            if stemmed in vocab:
                matched.append(stemmed)
                columns.append(vocab.index(stemmed))
            else:
                dropped.append(stemmed)
    if not matched:
        raise ValueError("no seed word in vocabulary")
    y = np.zeros((len(vocab), len(matched)))
    for col, row in enumerate(columns):
        y[row, col] = 1.0
    return SeedMatrix(as_matrix(y), matched, dropped)


def build_label_matrix(assignments: dict, doc_ids: list[str]) -> LabelMatrix:
    """Binary class-by-document encoding in corpus document order.

    ``assignments`` maps every document id to its non-empty set of class
    names; the class universe is their sorted union.
    """
    unknown = sorted(set(assignments) - set(doc_ids))
    if unknown:
        raise ValueError(f"unknown document id '{unknown[0]}' in label assignments")
    classes: set[str] = set()
    for doc_id in doc_ids:
        if doc_id not in assignments:
            raise ValueError(f"document '{doc_id}' has no label assignment")
        labels = set(assignments[doc_id])
        if not labels:
            raise ValueError(f"document '{doc_id}' has an empty class set")
        classes.update(labels)
    label_names = sorted(classes)
    row = {name: i for i, name in enumerate(label_names)}
    z = np.zeros((len(label_names), len(doc_ids)))
    for j, doc_id in enumerate(doc_ids):
        for name in assignments[doc_id]:
            z[row[name], j] = 1.0
    return LabelMatrix(as_matrix(z), label_names)


def split_mask(
    n_docs: int, train_fraction: float, rng_seed: int, n_classes: int
) -> MaskMatrix:
    """Uniform random train/test split over ``n_docs`` columns.

    The training set has ``ceil(train_fraction * n_docs)`` columns, capped
    at ``n_docs - 1`` so a test set always exists. Deterministic given
    ``rng_seed``.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if n_docs < 2:
        raise ValueError(f"need at least 2 documents to split, got {n_docs}")
    if n_classes < 1:
        raise ValueError(f"n_classes must be >= 1, got {n_classes}")
    # round() guards the ceiling against float dust in the product
    # (e.g. fraction * n landing a hair above an exact integer).
    n_train = min(math.ceil(round(train_fraction * n_docs, 9)), n_docs - 1)
    perm = np.random.default_rng(rng_seed).permutation(n_docs)
    train_ids = sorted(int(i) for i in perm[:n_train])
    test_ids = sorted(int(i) for i in perm[n_train:])
    l = np.zeros((n_classes, n_docs))
    l[:, train_ids] = 1.0
    return MaskMatrix(as_matrix(l), train_ids, test_ids)


# ---------------------------------------------------------------------------
# File formats: label assignments CSV, seed word list, mask JSON.
# ---------------------------------------------------------------------------

def load_label_assignments(path) -> dict:
    """Parse a ``doc_id,class1;class2;...`` CSV into an assignments dict."""
    assignments: dict[str, set[str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "," not in line:
                raise ValueError(f"{path}:{lineno}: expected 'doc_id,classes' row")
            doc_id, _, classes_field = line.partition(",")
            doc_id = doc_id.strip()
            classes = {c.strip() for c in classes_field.split(";") if c.strip()}
            if not doc_id or not classes:
                raise ValueError(f"{path}:{lineno}: missing document id or classes")
            if doc_id in assignments:
                raise ValueError(f"{path}:{lineno}: duplicate document id '{doc_id}'")
            assignments[doc_id] = classes
    if not assignments:
        raise ValueError(f"{path}: no label assignments found")
    return assignments


def load_seed_words(path) -> list[str]:
    """Read a seed word file: one word or phrase per line, '#' comments."""
    words = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            entry = line.strip()
            if entry and not entry.startswith("#"):
                words.append(entry)
    if not words:
        raise ValueError(f"{path}: no seed words found")
    return words


def save_mask(mask: MaskMatrix, path) -> None:
    obj = {
        "n_classes": int(mask.l.shape[0]),
        "n_docs": int(mask.l.shape[1]),
        "train_ids": mask.train_ids,
        "test_ids": mask.test_ids,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, separators=(",", ":"))
        fh.write("\n")


def load_mask(path) -> MaskMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{exc.lineno}: invalid mask file: {exc.msg}") from None
    try:
        n_classes = int(obj["n_classes"])
        n_docs = int(obj["n_docs"])
        train_ids = [int(i) for i in obj["train_ids"]]
        test_ids = [int(i) for i in obj["test_ids"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed mask file: {exc}") from None
    if sorted(train_ids + test_ids) != list(range(n_docs)):
        raise ValueError(f"{path}: train and test ids do not partition 0..{n_docs - 1}")
    l = np.zeros((n_classes, n_docs))
    l[:, train_ids] = 1.0
    return MaskMatrix(as_matrix(l), sorted(train_ids), sorted(test_ids))
