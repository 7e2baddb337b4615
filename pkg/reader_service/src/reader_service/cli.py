"""Service commands: serve the reader, or fine-tune a checkpoint."""

from __future__ import annotations

import argparse
import logging
import sys

logger = logging.getLogger("reader_service")


def _cmd_serve(args) -> int:
    import uvicorn

    from reader_service.app import create_app

    app = create_app(mode=args.mode, checkpoint=args.checkpoint,
                     max_new_tokens=args.max_new_tokens)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_finetune(args) -> int:
    from reader_service.train import TrainError, TrainSpec, finetune

    try:
        spec = TrainSpec.from_json(args.spec)
        result = finetune(spec, args.out_dir)
    except TrainError as exc:
        logger.error("%s", exc)
        return 2
    head, tail = result.smoothed()
    print(f"checkpoint: {result.checkpoint_path}")
    print(f"loss curve: {result.loss_curve_path}")
    print(f"smoothed loss: {head:.4f} -> {tail:.4f}")
    if tail >= head:
        logger.error("training loss did not decrease (%.4f -> %.4f); flagged for investigation",
                     head, tail)
        return 3
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="reader-service")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8109)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--mode", choices=["stub", "model"], default="stub")
    p.add_argument("--checkpoint", help="checkpoint path (model mode)")
    p.add_argument("--max-new-tokens", type=int, default=32)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("finetune", help="fine-tune on {input, target} JSONL")
    p.add_argument("--spec", required=True, help="TrainSpec JSON file")
    p.add_argument("--out-dir", default="runs/latest")
    p.set_defaults(func=_cmd_finetune)

    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
