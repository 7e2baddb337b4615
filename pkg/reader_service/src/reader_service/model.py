"""Tiny word-level seq2seq: vocabulary, network, and checkpoint I/O.

The network is a GRU encoder-decoder small enough to fine-tune on a
laptop CPU in seconds; any checkpoint produced by the trainer can be
served in model mode.  Tokens are whitespace words over a vocabulary
built from the training file, so the entry-token budget is enforced by
simple id truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

PAD, BOS, EOS, UNK = 0, 1, 2, 3
_SPECIALS = ("<pad>", "<bos>", "<eos>", "<unk>")


@dataclass
class Vocab:
    tokens: list[str]

    def __post_init__(self):
        self.index = {token: i for i, token in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_texts(cls, texts: list[str], max_size: int = 8000) -> "Vocab":
        counts: dict[str, int] = {}
        for text in texts:
            for word in text.split():
                counts[word] = counts.get(word, 0) + 1
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        return cls(list(_SPECIALS) + [word for word, _ in ranked[: max_size - len(_SPECIALS)]])

    def encode(self, text: str, limit: int | None = None) -> list[int]:
        ids = [self.index.get(word, UNK) for word in text.split()]
        return ids[:limit] if limit is not None else ids

    def decode(self, ids: list[int]) -> str:
        words = []
        for token_id in ids:
            if token_id in (PAD, BOS, EOS):
                continue
            words.append(self.tokens[token_id] if token_id < len(self.tokens) else "<unk>")
        return " ".join(words)


class Seq2SeqGRU(nn.Module):
    def __init__(self, vocab_size: int, embedding_dim: int = 64, hidden_dim: int = 128):
        super().__init__()
        self.embedding = nn.Embedding(vocab_size, embedding_dim, padding_idx=PAD)
        self.encoder = nn.GRU(embedding_dim, hidden_dim, batch_first=True)
        self.decoder = nn.GRU(embedding_dim, hidden_dim, batch_first=True)
        self.head = nn.Linear(hidden_dim, vocab_size)
        self.embedding_dim = embedding_dim
        self.hidden_dim = hidden_dim

    def _encode(self, src: torch.Tensor, src_lengths: torch.Tensor) -> torch.Tensor:
        embedded = self.embedding(src)
        packed = nn.utils.rnn.pack_padded_sequence(
            embedded, src_lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        _, hidden = self.encoder(packed)
        return hidden

    def forward(self, src: torch.Tensor, src_lengths: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        hidden = self._encode(src, src_lengths)
        outputs, _ = self.decoder(self.embedding(tgt_in), hidden)
        return self.head(outputs)

    @torch.no_grad()
    def greedy_generate(self, src_ids: list[int], max_new_tokens: int = 32) -> list[int]:
        self.eval()
        src = torch.tensor([src_ids or [UNK]], dtype=torch.long)
        lengths = torch.tensor([len(src_ids) or 1])
        hidden = self._encode(src, lengths)
        token = torch.tensor([[BOS]], dtype=torch.long)
        generated: list[int] = []
        for _ in range(max_new_tokens):
            output, hidden = self.decoder(self.embedding(token), hidden)
            next_id = int(self.head(output[:, -1]).argmax(dim=-1).item())
            if next_id == EOS:
                break
            generated.append(next_id)
            token = torch.tensor([[next_id]], dtype=torch.long)
        return generated


def save_checkpoint(path: str | Path, model: Seq2SeqGRU, vocab: Vocab, metadata: dict) -> None:
    torch.save(
        {
            "model_state": model.state_dict(),
            "vocab": vocab.tokens,
            "dims": {"embedding_dim": model.embedding_dim, "hidden_dim": model.hidden_dim},
            "metadata": metadata,
        },
        str(path),
    )


def load_checkpoint(path: str | Path) -> tuple[Seq2SeqGRU, Vocab, dict]:
    payload = torch.load(str(path), map_location="cpu", weights_only=False)
    vocab = Vocab(payload["vocab"])
    model = Seq2SeqGRU(len(vocab), **payload["dims"])
    model.load_state_dict(payload["model_state"])
    model.eval()
    return model, vocab, payload.get("metadata", {})
