"""Single command-line entry point for every pipeline.

Subcommands map one-to-one onto the library operations.  Structured logs
go to standard error; data goes to files or standard output.  Exit codes:
0 success, 2 usage, and one distinct code per error class (3 corpus,
4 dataset, 5 retriever, 6 reader, 7 remote reader, 8 configuration).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from ecoqa import __version__
from ecoqa.corpus import (
    chunk_documents,
    ingest_news_documents,
    ingest_wiki_documents,
    load_keyword_rules,
    load_passages,
    save_documents,
    save_passages,
)
from ecoqa.corpus.news import MIN_NEWS_DATE
from ecoqa.corpus.wiki import load_graph, load_id_title_map, parse_categorylinks
from ecoqa.errors import ConfigError, EcoQAError
from ecoqa.evaluator import (
    ExperimentConfig,
    KnowledgeBase,
    canonical_grid,
    evaluate,
    render_results_table,
    run_experiment_grid,
    system_for_config,
)
from ecoqa.jsonl import write_jsonl
from ecoqa.qa import (
    DictionaryProvider,
    FilterReport,
    IdentityProvider,
    KeywordRuleSet,
    filter_dataset,
    load_qa_pairs,
    read_qa_pairs,
    save_qa_pairs,
    split_dataset,
)
from ecoqa.reader import ReaderConfig, answer
from ecoqa.retriever import BM25Params, build_index, load_index, retrieve, save_index

logger = logging.getLogger("ecoqa")

ENDPOINT_ENV_VAR = "ECOQA_READER_ENDPOINT"


def _load_app_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            config = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return config


def _setting(args, config: dict, name: str, default=None):
    """Flag value if given, else config value, else default."""
    value = getattr(args, name.replace("-", "_"), None)
    if value is not None:
        return value
    return config.get(name, default)


def _require_path(path: str | Path, what: str) -> Path:
    resolved = Path(path)
    if not resolved.exists():
        raise ConfigError(f"{what} not found: {resolved}")
    return resolved


def _write_json(path: str | Path, payload) -> None:
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def _passage_text_map(path: str | Path) -> dict[int, str]:
    return {p.passage_id: p.text for p in load_passages(_require_path(path, "passages file"))}


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_ingest_wiki(args, config) -> int:
    if args.graph:
        graph = load_graph(_require_path(args.graph, "graph file"))
    else:
        if not args.categorylinks or not args.id_map:
            raise ConfigError("ingest-wiki needs either --graph or both --categorylinks and --id-map")
        titles = load_id_title_map(_require_path(args.id_map, "id map"))
        with open(_require_path(args.categorylinks, "category-links dump"), "r", encoding="utf-8") as handle:
            graph, report = parse_categorylinks(handle, titles)
        logger.info("parsed category links: %s", report.to_dict())
    articles = {}
    for record in (json.loads(line) for line in open(_require_path(args.articles, "articles file"), encoding="utf-8") if line.strip()):
        articles[int(record["id"])] = record
    docs = ingest_wiki_documents(graph, articles, args.root, args.limit, start_id=args.start_id)
    save_documents(args.out_documents, docs)
    logger.info("wrote %d wiki documents to %s", len(docs), args.out_documents)
    if args.out_passages:
        count = save_passages(
            args.out_passages,
            chunk_documents(docs, args.passage_size, first_passage_id=args.passage_start_id),
        )
        logger.info("wrote %d passages to %s", count, args.out_passages)
    return 0


def _cmd_ingest_news(args, config) -> int:
    keyword_rules = load_keyword_rules(_require_path(args.keywords, "keywords file"))
    records = (json.loads(line) for line in open(_require_path(args.input, "news file"), encoding="utf-8") if line.strip())
    from datetime import date

    min_date = date.fromisoformat(args.min_date) if args.min_date else MIN_NEWS_DATE
    docs, tally = ingest_news_documents(
        records,
        keywords=list(keyword_rules),
        exclusions=keyword_rules,
        min_date=min_date,
        start_id=args.start_id,
    )
    save_documents(args.out_documents, docs)
    logger.info("kept %d news documents; keyword tally: %s", len(docs), dict(sorted(tally.items())))
    if args.out_passages:
        count = save_passages(
            args.out_passages,
            chunk_documents(docs, args.passage_size, first_passage_id=args.passage_start_id),
        )
        logger.info("wrote %d passages to %s", count, args.out_passages)
    if args.report:
        _write_json(args.report, {"kept": len(docs), "keyword_counts": tally})
    return 0


def _cmd_filter_qa(args, config) -> int:
    rules = KeywordRuleSet.from_json(_require_path(args.rules, "rules file"))
    report = FilterReport()
    pairs = read_qa_pairs(_require_path(args.input, "QA input"), origin=args.origin, report=report)
    selected, report = filter_dataset(pairs, rules, report)
    count = save_qa_pairs(args.out, selected)
    logger.info("selected %d of %d pairs (rate %.6f)", report.selected, report.scanned, report.rate)
    if args.report:
        _write_json(args.report, report.to_dict())
    return 0


def _cmd_translate_qa(args, config) -> int:
    if args.provider == "identity":
        provider = IdentityProvider()
    else:
        if not args.dictionary:
            raise ConfigError("--provider dictionary requires --dictionary FILE")
        provider = DictionaryProvider.from_json(
            _require_path(args.dictionary, "dictionary file"),
            target_language=args.target_language,
            strict=args.strict,
        )
    pairs = load_qa_pairs(_require_path(args.input, "QA input"))
    rejects: list[dict] = []

    def on_reject(pair, error):
        rejects.append({"pair": pair.to_dict(), "error": str(error)})

    from ecoqa.qa import translate_pairs

    translated = list(translate_pairs(pairs, provider, retries=args.retries, on_reject=on_reject))
    save_qa_pairs(args.out, translated)
    write_jsonl(args.rejects, rejects)
    logger.info("translated %d pairs; %d rejected", len(translated), len(rejects))
    if rejects:
        logger.error("%d pairs failed translation; see %s", len(rejects), args.rejects)
        return 4
    return 0


def _cmd_split_qa(args, config) -> int:
    pairs = load_qa_pairs(_require_path(args.input, "QA input"))
    seed = int(_setting(args, config, "seed", 0) or 0)
    ratios = tuple(float(r) for r in args.ratios.split(",")) if args.ratios else (0.70, 0.15, 0.15)
    train, validation, test = split_dataset(pairs, ratios=ratios, seed=seed)
    prefix = Path(args.out_prefix)
    for name, subset in (("train", train), ("validation", validation), ("test", test)):
        path = prefix.with_name(prefix.name + f".{name}.jsonl")
        save_qa_pairs(path, subset)
        logger.info("wrote %d %s pairs to %s", len(subset), name, path)
    return 0


def _cmd_build_index(args, config) -> int:
    k1 = float(_setting(args, config, "k1", 1.2))
    b = float(_setting(args, config, "b", 0.75))
    passages = list(load_passages(_require_path(args.passages, "passages file")))
    index = build_index(passages, BM25Params(k1=k1, b=b))
    save_index(index, args.out)
    logger.info(
        "indexed %d passages (avg length %.2f, k1=%s, b=%s) into %s",
        index.passage_count, index.avg_length, k1, b, args.out,
    )
    return 0


def _cmd_retrieve(args, config) -> int:
    index = load_index(_require_path(args.index, "index file"))
    results = retrieve(index, args.query, args.k)
    for result in results:
        print(json.dumps({"rank": result.rank, "passage_id": result.passage_id, "score": result.score}))
    logger.info("%d results for %r", len(results), args.query)
    return 0


def _cmd_ask(args, config) -> int:
    endpoint = _setting(args, config, "endpoint") or os.environ.get(ENDPOINT_ENV_VAR)
    cfg = ReaderConfig(
        mode=args.mode,
        reader_kind="remote_generative" if args.reader == "remote" else "extractive",
        k=args.k,
        token_budget=int(_setting(args, config, "budget", 512)),
        endpoint=endpoint,
    )
    index = None
    passage_texts = None
    if args.mode == "retriever_reader":
        if not args.index or not args.passages:
            raise ConfigError("retriever_reader mode requires --index and --passages")
        index = load_index(_require_path(args.index, "index file"))
        passage_texts = _passage_text_map(args.passages)
    result = answer(args.question, cfg, index=index, passage_texts=passage_texts)
    print(json.dumps(
        {
            "answer": result.answer,
            "passages_used": result.passages_used,
            "truncated": result.truncated,
            "low_confidence": result.low_confidence,
        },
        ensure_ascii=False,
    ))
    return 0


def _load_kbs(args, config) -> dict[str, KnowledgeBase]:
    kbs: dict[str, KnowledgeBase] = {}
    for kb_name in ("wiki", "news", "wiki_news"):
        index_path = getattr(args, f"index_{kb_name}", None)
        passages_path = getattr(args, f"passages_{kb_name}", None)
        if index_path and passages_path:
            kbs[kb_name] = KnowledgeBase(
                index=load_index(_require_path(index_path, f"{kb_name} index")),
                passage_texts=_passage_text_map(passages_path),
            )
    return kbs


def _cmd_evaluate(args, config) -> int:
    test_pairs = load_qa_pairs(_require_path(args.test, "test pairs"))
    with open(_require_path(args.exp_config, "experiment config"), "r", encoding="utf-8") as handle:
        exp = ExperimentConfig.from_dict(json.load(handle))
    endpoint = _setting(args, config, "endpoint") or os.environ.get(ENDPOINT_ENV_VAR)
    kbs: dict[str, KnowledgeBase] = {}
    if exp.kb != "none":
        if not args.index or not args.passages:
            raise ConfigError(f"kb={exp.kb} requires --index and --passages")
        kbs[exp.kb] = KnowledgeBase(
            index=load_index(_require_path(args.index, "index file")),
            passage_texts=_passage_text_map(args.passages),
        )
    report = evaluate(test_pairs, system_for_config(exp, kbs, endpoint), exp)
    report.save(args.out)
    logger.info("aggregates: %s", {k: round(v, 2) for k, v in report.aggregates.items()})
    return 0


def _cmd_run_grid(args, config) -> int:
    test_pairs = load_qa_pairs(_require_path(args.test, "test pairs"))
    if args.grid:
        with open(_require_path(args.grid, "grid file"), "r", encoding="utf-8") as handle:
            grid = [ExperimentConfig.from_dict(record) for record in json.load(handle)]
    else:
        grid = canonical_grid()
    endpoint = _setting(args, config, "endpoint") or os.environ.get(ENDPOINT_ENV_VAR)
    rows = run_experiment_grid(grid, test_pairs, _load_kbs(args, config), endpoint)
    table = render_results_table(rows)
    if args.out_json:
        _write_json(args.out_json, rows)
    if args.out_table:
        Path(args.out_table).write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecoqa",
        description="Retrieval-augmented QA pipelines: ingest, mine, index, ask, evaluate.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON config file; flags override config values")
    parser.add_argument("--verbose", action="store_true", help="debug-level logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-wiki", help="collect articles from a category graph into documents")
    p.add_argument("--categorylinks", help="category-links SQL dump")
    p.add_argument("--id-map", help="TSV mapping category page ids to titles")
    p.add_argument("--graph", help="pre-built category graph JSONL (alternative input)")
    p.add_argument("--articles", required=True, help="JSONL of {id, title, text} article bodies")
    p.add_argument("--root", required=True, help="root category title")
    p.add_argument("--limit", type=int, required=True, help="number of articles to collect")
    p.add_argument("--start-id", type=int, default=0)
    p.add_argument("--passage-start-id", type=int, default=0)
    p.add_argument("--passage-size", type=int, default=100)
    p.add_argument("--out-documents", required=True)
    p.add_argument("--out-passages")
    p.set_defaults(func=_cmd_ingest_wiki)

    p = sub.add_parser("ingest-news", help="screen pre-fetched news by keyword and date")
    p.add_argument("--in", dest="input", required=True, help="raw news JSONL")
    p.add_argument("--keywords", required=True, help="JSON map {keyword: [exclusion words]}")
    p.add_argument("--min-date", help="ISO date; default 2018-01-01")
    p.add_argument("--start-id", type=int, default=0)
    p.add_argument("--passage-start-id", type=int, default=0)
    p.add_argument("--passage-size", type=int, default=100)
    p.add_argument("--out-documents", required=True)
    p.add_argument("--out-passages")
    p.add_argument("--report", help="write the keyword tally as JSON")
    p.set_defaults(func=_cmd_ingest_news)

    p = sub.add_parser("filter-qa", help="mine domain QA pairs with the keyword rule sets")
    p.add_argument("--rules", required=True, help='rules JSON {"M": [...], "G": [...], "U": [...], "E": [...]}')
    p.add_argument("--in", dest="input", required=True, help="QA pairs (TSV or JSONL, auto-detected)")
    p.add_argument("--origin", default="paq", choices=["paq", "msmarco", "fixture"])
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write the filter report as JSON")
    p.set_defaults(func=_cmd_filter_qa)

    p = sub.add_parser("translate-qa", help="translate QA pairs through a provider")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rejects", default="rejects.jsonl")
    p.add_argument("--provider", default="identity", choices=["identity", "dictionary"])
    p.add_argument("--dictionary", help="JSON word map for the dictionary provider")
    p.add_argument("--target-language", default="pt")
    p.add_argument("--strict", action="store_true", help="dictionary provider fails on unknown words")
    p.add_argument("--retries", type=int, default=2)
    p.set_defaults(func=_cmd_translate_qa)

    p = sub.add_parser("split-qa", help="deterministic train/validation/test split")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-prefix", required=True, help="writes PREFIX.{train,validation,test}.jsonl")
    p.add_argument("--ratios", help="comma list, default 0.70,0.15,0.15")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_split_qa)

    p = sub.add_parser("build-index", help="build the BM25 inverted index")
    p.add_argument("--passages", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k1", type=float)
    p.add_argument("--b", type=float)
    p.set_defaults(func=_cmd_build_index)

    p = sub.add_parser("retrieve", help="top-k passages for a query")
    p.add_argument("--index", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--k", type=int, default=10)
    p.set_defaults(func=_cmd_retrieve)

    p = sub.add_parser("ask", help="answer a question through the configured pipeline")
    p.add_argument("--question", required=True)
    p.add_argument("--mode", default="retriever_reader", choices=["reader_only", "retriever_reader"])
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--reader", default="extractive", choices=["extractive", "remote"])
    p.add_argument("--index")
    p.add_argument("--passages")
    p.add_argument("--budget", type=int)
    p.add_argument("--endpoint", help=f"remote reader base URL (or set {ENDPOINT_ENV_VAR})")
    p.set_defaults(func=_cmd_ask)

    p = sub.add_parser("evaluate", help="score a configured system on the test split")
    p.add_argument("--test", required=True)
    p.add_argument("--exp-config", "--config-exp", dest="exp_config", required=True,
                   help="experiment config JSON {kb, k, budget, reader_kind, seed}")
    p.add_argument("--index")
    p.add_argument("--passages")
    p.add_argument("--endpoint")
    p.add_argument("--out", default="report.json")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("run-grid", help="run the experiment grid and render the results table")
    p.add_argument("--test", required=True)
    p.add_argument("--grid", help="JSON list of experiment configs; omit for the canonical grid")
    for kb_name in ("wiki", "news", "wiki_news"):
        p.add_argument(f"--index-{kb_name.replace('_', '-')}", dest=f"index_{kb_name}")
        p.add_argument(f"--passages-{kb_name.replace('_', '-')}", dest=f"passages_{kb_name}")
    p.add_argument("--endpoint")
    p.add_argument("--out-json")
    p.add_argument("--out-table")
    p.set_defaults(func=_cmd_run_grid)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _load_app_config(args.config)
        return args.func(args, config)
    except EcoQAError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
