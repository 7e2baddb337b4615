"""Toy-scale fine-tuning of the seq2seq reader.

The training spec carries the standard hyperparameter names with fixed
defaults (30 epochs, batch size 16, weight decay 0.01, learning rate
2e-5); AdamW owns the learning rate and weight decay.
Inputs are truncated to the entry-token budget before encoding.  Loss is
written per optimizer step as CSV so trends stay inspectable.
"""

from __future__ import annotations

import csv
import json
import logging
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path

import torch
from torch import nn

from reader_service.model import BOS, EOS, PAD, Seq2SeqGRU, Vocab, load_checkpoint, save_checkpoint

logger = logging.getLogger(__name__)


class TrainError(ValueError):
    pass


@dataclass
class TrainSpec:
    train_file: str
    validation_file: str | None = None
    epochs: int = 30
    batch_size: int = 16
    weight_decay: float = 0.01
    learning_rate: float = 2e-5
    budget: int = 512
    model: str = "tiny-gru"
    seed: int = 13
    embedding_dim: int = 64
    hidden_dim: int = 128
    max_target_tokens: int = 32

    def validate(self) -> None:
        for name in ("epochs", "batch_size", "weight_decay", "learning_rate", "budget"):
            value = getattr(self, name)
            if value <= 0:
                raise TrainError(f"{name} must be positive, got {value}")
        if not self.train_file:
            raise TrainError("train_file is required")

    @classmethod
    def from_json(cls, path: str | Path) -> "TrainSpec":
        with open(path, "r", encoding="utf-8") as handle:
            spec = cls(**json.load(handle))
        spec.validate()
        return spec

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class FinetuneResult:
    checkpoint_path: Path
    loss_curve_path: Path
    step_losses: list[float] = field(default_factory=list)

    def smoothed(self, window: int = 5) -> tuple[float, float]:
        """Mean of the first and last ``window`` step losses."""
        window = min(window, len(self.step_losses))
        head = sum(self.step_losses[:window]) / window
        tail = sum(self.step_losses[-window:]) / window
        return head, tail


def _load_examples(path: str | Path) -> list[tuple[str, str]]:
    examples = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if not record.get("input") or not record.get("target"):
                continue
            examples.append((record["input"], record["target"]))
    return examples


def _pad_batch(sequences: list[list[int]]) -> torch.Tensor:
    width = max(len(seq) for seq in sequences)
    return torch.tensor([seq + [PAD] * (width - len(seq)) for seq in sequences], dtype=torch.long)


def finetune(spec: TrainSpec, out_dir: str | Path) -> FinetuneResult:
    """Run the recipe and write checkpoint plus per-step loss curve."""
    spec.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    examples = _load_examples(spec.train_file)
    if not examples:
        raise TrainError(f"training file {spec.train_file} holds no usable examples")

    torch.manual_seed(spec.seed)
    rng = random.Random(spec.seed)

    if spec.model != "tiny-gru" and Path(spec.model).exists():
        model, vocab, _ = load_checkpoint(spec.model)
        logger.info("continuing from checkpoint %s", spec.model)
    else:
        vocab = Vocab.from_texts([text for pair in examples for text in pair])
        model = Seq2SeqGRU(len(vocab), spec.embedding_dim, spec.hidden_dim)

    encoded = [
        (
            vocab.encode(source, limit=spec.budget),
            vocab.encode(target, limit=spec.max_target_tokens),
        )
        for source, target in examples
    ]

    optimizer = torch.optim.AdamW(
        model.parameters(), lr=spec.learning_rate, weight_decay=spec.weight_decay
    )
    loss_fn = nn.CrossEntropyLoss(ignore_index=PAD)

    model.train()
    step_losses: list[float] = []
    loss_curve_path = out_dir / "loss_curve.csv"
    with open(loss_curve_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["step", "loss"])
        step = 0
        for _ in range(spec.epochs):
            order = list(range(len(encoded)))
            rng.shuffle(order)
            for start in range(0, len(order), spec.batch_size):
                batch = [encoded[i] for i in order[start:start + spec.batch_size]]
                src = _pad_batch([source for source, _ in batch])
                src_lengths = torch.tensor([max(len(source), 1) for source, _ in batch])
                tgt_in = _pad_batch([[BOS] + target for _, target in batch])
                tgt_out = _pad_batch([target + [EOS] for _, target in batch])
                logits = model(src, src_lengths, tgt_in)
                loss = loss_fn(logits.reshape(-1, logits.size(-1)), tgt_out.reshape(-1))
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
                step += 1
                step_losses.append(float(loss.item()))
                writer.writerow([step, f"{loss.item():.6f}"])

    if spec.validation_file:
        validation = _load_examples(spec.validation_file)
        if validation:
            logger.info("validation loss: %.6f", _evaluate_loss(model, vocab, validation, spec))

    checkpoint_path = out_dir / "checkpoint.pt"
    save_checkpoint(checkpoint_path, model, vocab, metadata={"train_spec": spec.to_dict()})
    result = FinetuneResult(checkpoint_path, loss_curve_path, step_losses)
    head, tail = result.smoothed()
    logger.info("trained %d steps; smoothed loss %.4f -> %.4f", len(step_losses), head, tail)
    return result


@torch.no_grad()
def _evaluate_loss(model: Seq2SeqGRU, vocab: Vocab, examples, spec: TrainSpec) -> float:
    model.eval()
    loss_fn = nn.CrossEntropyLoss(ignore_index=PAD)
    total = 0.0
    for source, target in examples:
        src_ids = vocab.encode(source, limit=spec.budget)
        tgt_ids = vocab.encode(target, limit=spec.max_target_tokens)
        src = _pad_batch([src_ids])
        logits = model(src, torch.tensor([max(len(src_ids), 1)]), _pad_batch([[BOS] + tgt_ids]))
        total += float(loss_fn(logits.reshape(-1, logits.size(-1)),
                               _pad_batch([tgt_ids + [EOS]]).reshape(-1)).item())
    model.train()
    return total / len(examples)
