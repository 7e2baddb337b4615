"""HTTP surface: POST /generate and GET /health.

Wire contract: request {"question": str, "passages": [str], "budget":
int}; response {"answer": str, "model": str, "truncated": bool}; errors
are {"error": str} with a non-2xx status (400 malformed request, 500
generation failure).
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from reader_service.budget import SEPARATOR
from reader_service.model import load_checkpoint
from reader_service.stub import StubGenerator

logger = logging.getLogger(__name__)

DEFAULT_MAX_NEW_TOKENS = 32


class GenerateRequest(BaseModel):
    question: str
    passages: list[str] = Field(default_factory=list)
    budget: int = Field(gt=0)


class ModelGenerator:
    """Greedy decoding over a trained checkpoint (decoding is a config
    choice; greedy is the default)."""

    def __init__(self, checkpoint_path: str, max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS):
        self.model, self.vocab, metadata = load_checkpoint(checkpoint_path)
        self.max_new_tokens = max_new_tokens
        spec = metadata.get("train_spec", {})
        self.model_name = spec.get("model", "tiny-gru")

    def generate(self, question: str, passages: list[str], budget: int) -> tuple[str, bool]:
        rendered = SEPARATOR.join([question] + passages) if passages else question
        ids = self.vocab.encode(rendered)
        truncated = len(ids) > budget
        # the model never sees more than `budget` vocabulary tokens
        answer = self.vocab.decode(self.model.greedy_generate(ids[:budget], self.max_new_tokens))
        return answer, truncated


def create_app(mode: str = "stub", checkpoint: str | None = None,
               max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS) -> FastAPI:
    if mode == "stub":
        generator = StubGenerator()
    elif mode == "model":
        if not checkpoint:
            raise ValueError("model mode requires a checkpoint path")
        generator = ModelGenerator(checkpoint, max_new_tokens)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'stub' or 'model'")

    app = FastAPI(title="reader-service", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors())})

    @app.get("/health")
    def health():
        return {"status": "ok", "mode": mode, "model": generator.model_name}

    @app.post("/generate")
    def generate(request: GenerateRequest):
        try:
            answer, truncated = generator.generate(request.question, request.passages, request.budget)
        except Exception as exc:  # surfaced as a 500 per the contract
            logger.exception("generation failed")
            return JSONResponse(status_code=500, content={"error": str(exc)})
        return {"answer": answer, "model": generator.model_name, "truncated": truncated}

    return app
