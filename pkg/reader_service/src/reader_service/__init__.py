"""Generative reader microservice with a deterministic stub mode and a
toy-scale fine-tuning command."""

__version__ = "0.1.0"

from reader_service.app import create_app
from reader_service.stub import StubGenerator
from reader_service.train import FinetuneResult, TrainError, TrainSpec, finetune

__all__ = [
    "__version__",
    "create_app",
    "StubGenerator",
    "FinetuneResult",
    "TrainError",
    "TrainSpec",
    "finetune",
]
