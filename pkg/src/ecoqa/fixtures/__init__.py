"""Bundled mini-fixtures: a 60-passage corpus and 20 QA pairs.

The corpus is materialized by running the real ingestion pipelines over
bundled raw inputs (a category-links dump plus article texts, and raw
news records screened by the default keyword file), so every loader call
exercises the same code paths production data would.
"""

from __future__ import annotations

import json
import shutil
from importlib import resources
from pathlib import Path

from ecoqa.corpus import (
    Document,
    Passage,
    chunk_documents,
    ingest_news_documents,
    ingest_wiki_documents,
    load_keyword_rules,
    parse_categorylinks,
)
from ecoqa.corpus.wiki import load_id_title_map
from ecoqa.qa.pairs import QAPair, iter_qa_pairs

ROOT_CATEGORY = "Meio_ambiente_do_Brasil"
WIKI_ARTICLE_LIMIT = 30

TABLE2_QUESTION = "Quando Fernando de Noronha se tornou um Patrimônio Mundial da UNESCO?"
TABLE2_ANSWER = "2001"
TABLE2_PASSAGE_TITLE = "Fernando de Noronha"

# Titles of the 30 distractor documents surrounding the archipelago
# passage in the distractor-retrieval fixture.
_TABLE2_DISTRACTOR_TITLES = (
    "Educação ambiental",
    "Mata ciliar",
    "Restinga",
    "Manguezal",
    "Pampa",
    "Mata Atlântica",
    "Zonas úmidas",
    "Polinizadores do Cerrado",
    "Campos rupestres",
    "Aquífero Guarani",
    "Nascentes urbanas",
    "Bacia do Tocantins",
    "Rios voadores",
    "Visitação em unidades de conservação",
    "Jardins botânicos",
    "Manchas de óleo no litoral",
    "Enchentes urbanas",
    "Deslizamentos de encosta",
    "Estiagem no sertão",
    "Incêndios florestais",
    "Terras públicas viram alvo de fraudes",
    "Mercúrio contamina igarapés em área de garimpo",
    "Fogo avança sobre reservas no coração do país",
    "Municípios ampliam a reciclagem porta a porta",
    "Mortandade de polinizadores preocupa apicultores",
    "Verba nova recupera berçários marinhos",
    "Temporada de desova bate recorde no litoral",
    "Recifes perdem cor em ritmo acelerado",
    "Telhados geram eletricidade em escala inédita",
    "Pedaladas substituem carros no trajeto diário",
)

_RAW_FILES = (
    "wiki_categorylinks.sql",
    "wiki_page_titles.tsv",
    "wiki_articles.jsonl",
    "news_raw.jsonl",
    "keywords.json",
    "rules.json",
    "mini_qa.jsonl",
)


def _data(name: str):
    return resources.files("ecoqa.fixtures").joinpath("data").joinpath(name)


def read_data_text(name: str) -> str:
    return _data(name).read_text(encoding="utf-8")


def export_raw_inputs(dest: str | Path) -> dict[str, Path]:
    """Copy the bundled raw inputs into a directory; returns name -> path."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    exported: dict[str, Path] = {}
    for name in _RAW_FILES:
        target = dest / name
        with resources.as_file(_data(name)) as source:
            shutil.copyfile(source, target)
        exported[name] = target
    return exported


def mini_documents() -> list[Document]:
    """Ingest the bundled raw inputs: 30 wiki + 30 screened news documents."""
    dump_lines = read_data_text("wiki_categorylinks.sql").splitlines()
    with resources.as_file(_data("wiki_page_titles.tsv")) as path:
        titles = load_id_title_map(path)
    graph, _ = parse_categorylinks(dump_lines, titles)
    articles = {
        record["id"]: record
        for record in (json.loads(line) for line in read_data_text("wiki_articles.jsonl").splitlines() if line)
    }
    wiki_docs = ingest_wiki_documents(graph, articles, ROOT_CATEGORY, WIKI_ARTICLE_LIMIT)

    with resources.as_file(_data("keywords.json")) as path:
        keyword_rules = load_keyword_rules(path)
    news_records = [json.loads(line) for line in read_data_text("news_raw.jsonl").splitlines() if line]
    news_docs, _ = ingest_news_documents(
        news_records,
        keywords=list(keyword_rules),
        exclusions=keyword_rules,
        start_id=len(wiki_docs),
    )
    return wiki_docs + news_docs


def mini_corpus() -> tuple[list[Document], list[Passage]]:
    docs = mini_documents()
    return docs, list(chunk_documents(docs))


def mini_qa_pairs() -> list[QAPair]:
    return list(iter_qa_pairs(read_data_text("mini_qa.jsonl").splitlines()))


def table2_corpus() -> tuple[list[Document], list[Passage]]:
    """The archipelago passage surrounded by 30 distractor passages."""
    docs = mini_documents()
    wanted = {TABLE2_PASSAGE_TITLE, *_TABLE2_DISTRACTOR_TITLES}
    selected = [doc for doc in docs if doc.title in wanted]
    missing = wanted - {doc.title for doc in selected}
    if missing:
        raise RuntimeError(f"fixture documents missing: {sorted(missing)}")
    return selected, list(chunk_documents(selected))
