"""Corpus ingestion: man-page sources in, populated knowledge base out.

Each page is processed section by section: NAME and SYNOPSIS feed the
registries, prose sections are tokenized with the page's registry, parsed,
filtered, disambiguated, and every surviving interpretation's facts asserted.
Sentences the grammar rejects stay retrievable through keyword search; a file
that is not a man page is counted as a failure and never aborts the run.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from pathlib import Path

from .docmodel import MalformedSource, build_registries, parse_man_page, read_overrides
from .kb import KnowledgeBase, Thesaurus
from .lexicon import Lexicon, default_lexicon
from .logform import derive_facts
from .parser import AssociationModel, apply_filter_rules, disambiguate_pp, parse
from .tokenizer import Registry, tokenize

log = logging.getLogger("manswer.ingest")

REGISTRY_SECTIONS = {"NAME", "SYNOPSIS"}


@dataclass
class IndexSummary:
    pages: int = 0
    sentences: int = 0
    facts: int = 0
    failures: int = 0
    keyword_only: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def process_page(source: str, name: str, kb: KnowledgeBase, summary: IndexSummary,
                 lexicon: Lexicon, model: AssociationModel | None,
                 overrides: Registry | None = None) -> None:
    page = parse_man_page(source, name=name)
    registry = build_registries(page)
    if overrides is not None:
        registry = registry.merged(overrides)
    kb.pages[page.name] = [(s.name, s.body) for s in page.sections]
    kb.global_registry = kb.global_registry.merged(registry)

    for section in page.sections:
        prefix = f"{page.name}/{section.name}"
        for sentence in tokenize(section.body, registry, section.faces, prefix, lexicon):
            kb.register_sentence(sentence, page.name)
            summary.sentences += 1
            if section.name in REGISTRY_SECTIONS:
                continue
            forest = disambiguate_pp(
                apply_filter_rules(parse(sentence, lexicon)), model)
            if not forest.parsed:
                summary.keyword_only += 1
                continue
            for tag, analysis in enumerate(forest.parses, start=1):
                facts = derive_facts(analysis, sentence, lexicon)
                kb.assert_sentence(facts, tag)
                summary.facts += len(facts)
    summary.pages += 1


def index_corpus(corpus_dir: Path, thesaurus: Thesaurus | None = None,
                 model: AssociationModel | None = None,
                 lexicon: Lexicon | None = None,
                 overrides_path: Path | None = None
                 ) -> tuple[KnowledgeBase, IndexSummary]:
    """Ingest every file of a corpus directory; per-file errors are logged
    and counted, never fatal."""
    lexicon = lexicon or default_lexicon()
    kb = KnowledgeBase(thesaurus)
    summary = IndexSummary()
    overrides = read_overrides(overrides_path) if overrides_path else None

    for path in sorted(Path(corpus_dir).iterdir()):
        if not path.is_file():
            continue
        try:
            source = path.read_text(encoding="utf-8", errors="replace")
            process_page(source, path.name, kb, summary, lexicon, model, overrides)
        except MalformedSource as exc:
            log.warning("skipping %s: %s", path.name, exc)
            summary.failures += 1
        except Exception:
            log.exception("failed to index %s", path.name)
            summary.failures += 1
    return kb, summary
