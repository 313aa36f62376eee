"""Adversarial QA toolkit: corpus I/O, metrics, attacks, mixing and losses."""

import json

from ._core import (
    AdvqaError,
    Dataset,
    adversarial_gap,
    analyze_errors,
    classify_question,
    contrastive_loss,
    entity_type_of,
    evaluate,
    exact_match,
    f1_score,
    format_pct,
    gap_closure,
    load_dataset,
    loss_self_checks,
    mine_negatives,
    normalize_answer,
    parse_predictions,
    parse_squad,
    qa_ce_loss,
    read_jsonl,
    render_report,
)
from . import _core


def augment(dataset, preset="suite", seed=0, rate=None, attacks=None, threads=1):
    """Returns (augmented dataset, report dict)."""
    out, report = _core.augment(dataset, preset, seed, rate, attacks, threads)
    return out, json.loads(report)


def mix(clean, adversarial, ratio="80-20", total=None, seed=0, with_replacement=False):
    """Returns (mixed dataset, stats dict)."""
    out, stats = _core.mix(clean, adversarial, ratio, total, seed, with_replacement)
    return out, json.loads(stats)


def toy_train(alpha=0.5, seed=0, epochs=20, n_train=600, n_eval=300):
    return json.loads(_core.toy_train(alpha, seed, epochs, n_train, n_eval))


__all__ = [
    "AdvqaError",
    "Dataset",
    "adversarial_gap",
    "analyze_errors",
    "augment",
    "classify_question",
    "contrastive_loss",
    "entity_type_of",
    "evaluate",
    "exact_match",
    "f1_score",
    "format_pct",
    "gap_closure",
    "load_dataset",
    "loss_self_checks",
    "mine_negatives",
    "mix",
    "normalize_answer",
    "parse_predictions",
    "parse_squad",
    "qa_ce_loss",
    "read_jsonl",
    "render_report",
    "toy_train",
]
