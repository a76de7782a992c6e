// Pure rendering: structured records in, HTML strings out.
//
// The UI never recomputes intensities; it maps the server's raw counts onto
// a four-step brightness ramp (the terminal palette's ceil-quantization) and
// keeps the counts visible on hover.

import type { PageView, ResultEntry, ResultRecord, WordIntensity } from "./types.js";

export const RAMP_STEPS = 4;

const NO_SPACE_BEFORE = new Set([".", ",", ";", ":", "?", "!", ")", "]", "}"]);
const NO_SPACE_AFTER = new Set(["(", "[", "{"]);

export function bucketFor(intensity: number, maxIntensity: number,
                          steps: number = RAMP_STEPS): number {
  if (intensity <= 0 || maxIntensity <= 0) {
    return 0;
  }
  return Math.ceil((intensity * steps) / maxIntensity);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function validateQuestion(question: string): boolean {
  return question.trim().length > 0;
}

function renderWords(words: WordIntensity[], maxIntensity: number): string {
  const parts: string[] = [];
  let previous = "";
  for (const word of words) {
    if (parts.length > 0 && !NO_SPACE_BEFORE.has(word.surface) && !NO_SPACE_AFTER.has(previous)) {
      parts.push(" ");
    }
    const bucket = bucketFor(word.intensity, maxIntensity);
    const surface = escapeHtml(word.surface);
    if (bucket > 0) {
      parts.push(
        `<span class="hl hl-${bucket}" title="covered by ${word.intensity} proof${word.intensity === 1 ? "" : "s"}">${surface}</span>`,
      );
    } else {
      parts.push(surface);
    }
    previous = word.surface;
  }
  return parts.join("");
}

function maxIntensityOf(words: WordIntensity[]): number {
  return words.reduce((acc, w) => Math.max(acc, w.intensity), 0);
}

export interface RenderedResults {
  html: string;
  items: Array<{ sentenceId: string; page: string; intensities: number[] }>;
}

export function renderResults(record: ResultRecord): RenderedResults {
  if (record.results.length === 0) {
    return { html: '<p class="empty">No answers found.</p>', items: [] };
  }
  const items: RenderedResults["items"] = [];
  const rows = record.results.map((entry: ResultEntry) => {
    items.push({
      sentenceId: entry.sentenceId,
      page: entry.page,
      intensities: entry.words.map((w) => w.intensity),
    });
    const sentence = renderWords(entry.words, maxIntensityOf(entry.words));
    const meta = `${entry.level} · score ${entry.score} · ${entry.proofCount} proof${entry.proofCount === 1 ? "" : "s"}`;
    return (
      `<li class="hit" data-sentence-id="${escapeHtml(entry.sentenceId)}">` +
      `<a href="#" class="page-link" data-page="${escapeHtml(entry.page)}" ` +
      `data-sentence-id="${escapeHtml(entry.sentenceId)}">${escapeHtml(entry.sentenceId)}</a>` +
      `<span class="sentence">${sentence}</span>` +
      `<span class="meta">${escapeHtml(meta)}</span></li>`
    );
  });
  return { html: `<ol class="hits">${rows.join("")}</ol>`, items };
}

export interface RenderedPage {
  html: string;
  firstHitId: string | null;
}

export function anchorId(sentenceId: string): string {
  return `s-${sentenceId.replace(/[^A-Za-z0-9_.-]/g, "-")}`;
}

export function renderPageView(view: PageView): RenderedPage {
  const sectionsHtml: string[] = [];
  let firstHit: { id: string; start: number } | null = null;

  for (const section of view.sections) {
    const pieces: string[] = [];
    let cursor = 0;
    const sentences = [...section.sentences].sort((a, b) => a.start - b.start);
    for (const sentence of sentences) {
      pieces.push(escapeHtml(section.text.slice(cursor, sentence.start)));
      const maxIntensity = Math.max(0, ...sentence.words.map((w) => w.intensity));
      const words: string[] = [];
      let wordCursor = sentence.start;
      for (const word of sentence.words) {
        words.push(escapeHtml(section.text.slice(wordCursor, word.start)));
        const bucket = bucketFor(word.intensity, maxIntensity);
        const surface = escapeHtml(section.text.slice(word.start, word.end));
        words.push(
          bucket > 0
            ? `<span class="hl hl-${bucket}" title="covered by ${word.intensity} proof${word.intensity === 1 ? "" : "s"}">${surface}</span>`
            : surface,
        );
        wordCursor = word.end;
      }
      words.push(escapeHtml(section.text.slice(wordCursor, sentence.end)));
      const id = anchorId(sentence.sentenceId);
      pieces.push(`<mark id="${id}" class="hit-sentence">${words.join("")}</mark>`);
      cursor = sentence.end;
      if (firstHit === null || sentence.start < firstHit.start) {
        firstHit = { id, start: sentence.start };
      }
    }
    pieces.push(escapeHtml(section.text.slice(cursor)));
    sectionsHtml.push(
      `<section><h3>${escapeHtml(section.name)}</h3><pre>${pieces.join("")}</pre></section>`,
    );
  }
  return {
    html: `<article class="page"><h2>${escapeHtml(view.page)}</h2>${sectionsHtml.join("")}</article>`,
    firstHitId: firstHit === null ? null : firstHit.id,
  };
}

// Parity helper: what the rendered view claims, for snapshot comparison
// against the structured record.
export function extractParity(rendered: RenderedResults): Array<[string, number[]]> {
  return rendered.items.map((item) => [item.sentenceId, item.intensities]);
}
