"""Multinomial naive Bayes over fault/enhancement free text.

One classifier instance serves one labelling task (kind, severity, or
story-point size class); training is plain counting with Laplace smoothing,
so results are exactly reproducible.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from swphm.errors import NotTrainedError, ValidationError

_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")
_MIN_TOKEN_LEN = 2


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop tokens shorter than 2.

    No stemming, no stop-word removal; empty input yields an empty list.
    """
    return [t for t in _TOKEN_SPLIT.split(text.lower()) if len(t) >= _MIN_TOKEN_LEN]


@dataclass(frozen=True)
class NbModel:
    """Trained classifier: class priors and per-class word likelihoods.

    Probabilities are the stored representation (they serialize exactly);
    log variants are derived once on first use. ``classes`` is sorted
    lexicographically, which makes argmax ties resolve to the
    lexicographically first label.
    """

    classes: tuple[str, ...]
    priors: tuple[float, ...]
    vocabulary: tuple[str, ...]
    likelihoods: tuple[tuple[float, ...], ...]  # [class][word]
    alpha: float

    @cached_property
    def word_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.vocabulary)}

    @cached_property
    def log_priors(self) -> tuple[float, ...]:
        return tuple(math.log(p) for p in self.priors)

    @cached_property
    def log_likelihoods(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(math.log(v) for v in row) for row in self.likelihoods)


@dataclass(frozen=True)
class NbResult:
    label: str
    posteriors: dict[str, float]
    no_evidence: bool = False


def train_nb(
    docs: list[tuple[list[str], str]],
    alpha: float = 1.0,
    labels: list[str] | None = None,
) -> NbModel:
    """Fit multinomial NB with Laplace smoothing.

    likelihood(w|c) = (count(w,c) + alpha) / (tokens(c) + alpha * |V|);
    priors are document-count fractions. Requires at least two labels, at
    least one document per label, and a non-empty vocabulary.
    """
    if not alpha > 0:
        raise ValidationError(f"alpha must be > 0, got {alpha!r}", code="invalid-alpha")
    if labels is None:
        labels = sorted({label for _, label in docs})
    else:
        labels = sorted(labels)
    if len(labels) < 2:
        raise ValidationError("need at least 2 labels to train", code="too-few-labels")

    doc_counts = {c: 0 for c in labels}
    word_counts: dict[str, dict[str, int]] = {c: {} for c in labels}
    token_totals = {c: 0 for c in labels}
    vocab: set[str] = set()
    for tokens, label in docs:
        if label not in doc_counts:
            raise ValidationError(
                f"document labelled {label!r} outside label set", code="unknown-label"
            )
        doc_counts[label] += 1
        for tok in tokens:
            if not tok:
                raise ValidationError("empty token in training document", code="empty-token")
            vocab.add(tok)
            word_counts[label][tok] = word_counts[label].get(tok, 0) + 1
            token_totals[label] += 1

    for label in labels:
        if doc_counts[label] == 0:
            raise ValidationError(f"label {label!r} has zero documents", code="empty-class")
    if not vocab:
        raise ValidationError("empty vocabulary", code="empty-vocabulary")

    vocabulary = tuple(sorted(vocab))
    n_docs = len(docs)
    priors = tuple(doc_counts[c] / n_docs for c in labels)
    likelihoods = []
    for label in labels:
        denom = token_totals[label] + alpha * len(vocabulary)
        likelihoods.append(
            tuple((word_counts[label].get(w, 0) + alpha) / denom for w in vocabulary)
        )
    return NbModel(
        classes=tuple(labels),
        priors=priors,
        vocabulary=vocabulary,
        likelihoods=tuple(likelihoods),
        alpha=alpha,
    )


def classify_nb(model: NbModel, doc: list[str]) -> NbResult:
    """Argmax of log prior plus summed token log likelihoods.

    Out-of-vocabulary tokens are ignored. Posteriors are renormalized to sum
    to 1. A document with no in-vocabulary tokens falls back to the prior
    argmax with ``no_evidence=True``.
    """
    if not isinstance(model, NbModel):
        raise NotTrainedError("classify_nb requires a trained NbModel")
    index = model.word_index
    in_vocab = [index[t] for t in doc if t in index]
    scores = list(model.log_priors)
    for word_idx in in_vocab:
        for class_idx in range(len(model.classes)):
            scores[class_idx] += model.log_likelihoods[class_idx][word_idx]
    # Log-sum-exp normalization; max() returns the first of tied scores, and
    # classes are sorted, so ties break lexicographically.
    peak = max(scores)
    weights = [math.exp(s - peak) for s in scores]
    total = sum(weights)
    posteriors = {c: w / total for c, w in zip(model.classes, weights)}
    best = model.classes[scores.index(peak)]
    return NbResult(label=best, posteriors=posteriors, no_evidence=not in_vocab)


def save_nb(model: NbModel, path: str | Path) -> None:
    payload = {
        "classes": list(model.classes),
        "priors": list(model.priors),
        "vocabulary": list(model.vocabulary),
        "likelihoods": [list(row) for row in model.likelihoods],
        "alpha": model.alpha,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_nb(path: str | Path) -> NbModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return NbModel(
            classes=tuple(payload["classes"]),
            priors=tuple(float(p) for p in payload["priors"]),
            vocabulary=tuple(payload["vocabulary"]),
            likelihoods=tuple(tuple(float(v) for v in row) for row in payload["likelihoods"]),
            alpha=float(payload["alpha"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: bad classifier file: {exc}", code="malformed-file") from exc
