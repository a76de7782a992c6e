"""Turning proofs into graded highlights and rendered views.

A word's intensity is the number of proofs of its sentence that cover it, so
material shared by every interpretation comes out brightest: unambiguity read
as relevance.  Terminal rendering quantizes intensities onto a small color
ramp; structured output keeps the raw counts so clients pick their own scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import Level, QueryResult
from .kb import KnowledgeBase
from .tokenizer import TokenKind

PALETTE_SIZE = 4
_ANSI_RESET = "\x1b[0m"


class UnknownPage(Exception):
    """The requested page is not in the knowledge base."""


@dataclass
class HighlightedSentence:
    sentence_id: str
    words: tuple[tuple[str, int], ...]  # (surface, intensity)
    max_intensity: int


def compute_intensities(result: QueryResult, kb: KnowledgeBase) -> HighlightedSentence:
    """Per-word proof-coverage counts for one retrieved sentence."""
    info = kb.sentences.get(result.sentence_id)
    if info is None:
        raise UnknownPage(result.sentence_id)
    tokens = info.sentence.tokens
    counts = [0] * len(tokens)
    for proof in result.proofs:
        for sid, index in proof.covered_words:
            if sid == result.sentence_id and 0 <= index < len(counts):
                counts[index] += 1
    words = tuple((t.surface, counts[i]) for i, t in enumerate(tokens))
    return HighlightedSentence(result.sentence_id, words, max(counts, default=0))


def quantize(intensity: int, palette_size: int, max_intensity: int) -> int:
    """Bucket an intensity into 0..palette_size; monotone, 0 stays 0."""
    if intensity <= 0 or max_intensity <= 0:
        return 0
    return math.ceil(intensity * palette_size / max_intensity)


def _ramp_color(bucket: int, palette_size: int) -> str:
    # 256-color yellows, dimmest for bucket 1 up to 226 for the top bucket
    return f"\x1b[38;5;{max(16, 226 - (palette_size - bucket) * 6)}m"


_NO_SPACE_BEFORE = {".", ",", ";", ":", "?", "!", ")", "]", "}"}
_NO_SPACE_AFTER = {"(", "[", "{"}


def render_terminal(highlighted: HighlightedSentence, palette_size: int = PALETTE_SIZE,
                    color: bool = True) -> str:
    """One-line rendering with ANSI colors, injective per bucket."""
    if palette_size < 2:
        raise ValueError("palette_size must be >= 2")
    parts: list[str] = []
    previous = ""
    for surface, intensity in highlighted.words:
        if parts and surface not in _NO_SPACE_BEFORE and previous not in _NO_SPACE_AFTER:
            parts.append(" ")
        bucket = quantize(intensity, palette_size, highlighted.max_intensity)
        if bucket > 0 and color:
            parts.append(f"{_ramp_color(bucket, palette_size)}{surface}{_ANSI_RESET}")
        else:
            parts.append(surface)
        previous = surface
    return "".join(parts)


def result_record(question: str, results: list[QueryResult], kb: KnowledgeBase,
                  executed_level: Level) -> dict:
    """The structured result record consumed by the web UI."""
    entries = []
    for result in results:
        highlighted = compute_intensities(result, kb)
        info = kb.sentences[result.sentence_id]
        entries.append({
            "sentenceId": result.sentence_id,
            "page": info.page,
            "words": [{"surface": s, "intensity": i} for s, i in highlighted.words],
            "score": result.score,
            "proofCount": result.proof_count,
            "level": result.level.short,
        })
    return {"question": question, "level": executed_level.short, "results": entries}


def render_page(page_name: str, results: list[QueryResult], kb: KnowledgeBase) -> dict:
    """Full-page view with highlight spans for every hit sentence on the page.

    Sentence and word offsets refer to the section body text, so the client
    can paint the page and anchor deep links on sentence ids."""
    if page_name not in kb.pages:
        raise UnknownPage(page_name)
    hits = {r.sentence_id: r for r in results
            if kb.sentences.get(r.sentence_id) and kb.sentences[r.sentence_id].page == page_name}

    sections = []
    for section_name, body in kb.pages[page_name]:
        sentence_entries = []
        prefix = f"{page_name}/{section_name}/"
        for sid, result in sorted(hits.items()):
            if not sid.startswith(prefix):
                continue
            highlighted = compute_intensities(result, kb)
            tokens = kb.sentences[sid].sentence.tokens
            words = [
                {
                    "surface": t.surface,
                    "start": t.char_span[0],
                    "end": t.char_span[1],
                    "intensity": highlighted.words[i][1],
                }
                for i, t in enumerate(tokens)
            ]
            sentence_entries.append({
                "sentenceId": sid,
                "start": min(t.char_span[0] for t in tokens),
                "end": max(t.char_span[1] for t in tokens),
                "words": words,
                "score": result.score,
                "proofCount": result.proof_count,
                "level": result.level.short,
            })
        sentence_entries.sort(key=lambda e: e["start"])
        sections.append({
            "name": section_name,
            "text": body,
            "sentences": sentence_entries,
        })
    return {"page": page_name, "sections": sections}
