"""Deterministic train/validation/test splitting."""

from __future__ import annotations

import math
import random
from typing import Sequence

from ecoqa.errors import DatasetError
from ecoqa.qa.pairs import QAPair

DEFAULT_RATIOS = (0.70, 0.15, 0.15)


def split_dataset(
    pairs: Sequence[QAPair],
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> tuple[list[QAPair], list[QAPair], list[QAPair]]:
    """Shuffle under the seed and partition into train/validation/test.

    Validation and test take floor(n * ratio) pairs each; the remainder
    goes to train.  The split label is written onto each pair, and pairs
    that already carry one are refused (a split is assigned at most once).
    """
    if len(ratios) != 3 or any(r < 0 for r in ratios):
        raise DatasetError(f"ratios must be three non-negative numbers, got {ratios!r}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise DatasetError(f"ratios must sum to 1, got {sum(ratios)!r}")
    if len(pairs) < 3:
        raise DatasetError(f"need at least 3 pairs to split, got {len(pairs)}")
    already = [p for p in pairs if p.split is not None]
    if already:
        raise DatasetError(f"{len(already)} pairs already carry a split label")

    order = list(pairs)
    random.Random(seed).shuffle(order)
    n = len(order)
    n_validation = math.floor(n * ratios[1])
    n_test = math.floor(n * ratios[2])
    n_train = n - n_validation - n_test

    train = order[:n_train]
    validation = order[n_train:n_train + n_validation]
    test = order[n_train + n_validation:]
    for pair in train:
        pair.split = "train"
    for pair in validation:
        pair.split = "validation"
    for pair in test:
        pair.split = "test"
    return train, validation, test
