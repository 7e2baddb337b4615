"""Toy-scale fine-tuning: recipe defaults, loss trend, checkpoint metadata."""

import csv
import time

import pytest
from fastapi.testclient import TestClient

from reader_service.app import create_app
from reader_service.train import TrainError, TrainSpec, finetune


def test_spec_defaults_match_the_recipe():
    spec = TrainSpec(train_file="x.jsonl")
    assert spec.epochs == 30
    assert spec.batch_size == 16
    assert spec.weight_decay == 0.01
    assert spec.learning_rate == 2e-5
    assert spec.budget in (512, 1024)


def test_zero_epochs_rejected():
    with pytest.raises(TrainError):
        TrainSpec(train_file="x.jsonl", epochs=0).validate()


def test_empty_training_file_rejected(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(TrainError):
        finetune(TrainSpec(train_file=str(empty)), tmp_path / "run")


@pytest.fixture(scope="module")
def finetune_run(tmp_path_factory, train_fixture_path):
    out_dir = tmp_path_factory.mktemp("run")
    started = time.monotonic()
    spec = TrainSpec(train_file=str(train_fixture_path))
    result = finetune(spec, out_dir)
    elapsed = time.monotonic() - started
    return spec, result, elapsed


def test_smoothed_loss_strictly_decreases_on_fixture(finetune_run):
    _, result, elapsed = finetune_run
    head, tail = result.smoothed()
    assert tail < head, (head, tail)
    assert elapsed < 600  # well inside the ten-minute envelope


def test_loss_curve_written_per_step(finetune_run):
    spec, result, _ = finetune_run
    with open(result.loss_curve_path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["step", "loss"]
    # 20 examples, batch 16 -> 2 steps per epoch
    assert len(rows) - 1 == spec.epochs * 2
    assert [int(row[0]) for row in rows[1:]] == list(range(1, len(rows)))
    assert all(float(row[1]) > 0 for row in rows[1:])


def test_checkpoint_metadata_echoes_the_spec(finetune_run):
    spec, result, _ = finetune_run
    from reader_service.model import load_checkpoint

    _, _, metadata = load_checkpoint(result.checkpoint_path)
    assert metadata["train_spec"] == spec.to_dict()


def test_trained_checkpoint_serves_in_model_mode(finetune_run):
    _, result, _ = finetune_run
    client = TestClient(create_app(mode="model", checkpoint=str(result.checkpoint_path)))
    health = client.get("/health").json()
    assert health["mode"] == "model"
    response = client.post("/generate", json={
        "question": "Qual é a maior floresta tropical do mundo?",
        "passages": ["A maior floresta tropical do mundo é a Amazônia."],
        "budget": 512,
    })
    assert response.status_code == 200
    body = response.json()
    assert isinstance(body["answer"], str)
    assert body["model"] == "tiny-gru"
    # greedy decoding is deterministic
    again = client.post("/generate", json={
        "question": "Qual é a maior floresta tropical do mundo?",
        "passages": ["A maior floresta tropical do mundo é a Amazônia."],
        "budget": 512,
    })
    assert again.content == response.content


def test_model_mode_enforces_budget_flag(finetune_run):
    _, result, _ = finetune_run
    client = TestClient(create_app(mode="model", checkpoint=str(result.checkpoint_path)))
    long_passage = " ".join(f"w{i}" for i in range(700))
    response = client.post("/generate", json={
        "question": "pergunta?", "passages": [long_passage], "budget": 512,
    })
    assert response.json()["truncated"] is True
