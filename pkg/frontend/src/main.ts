// DOM glue: one in-flight query at a time (latest wins), inline errors that
// never clobber the typed question, and click-through from a hit to the full
// page view scrolled to the first highlighted sentence.

import { fetchPage, submitQuery } from "./api.js";
import { renderPageView, renderResults, validateQuestion } from "./render.js";

let requestSeq = 0;
let lastQuestion = "";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing element #${id}`);
  return found as T;
}

function showError(message: string): void {
  const banner = el<HTMLDivElement>("error");
  banner.textContent = message;
  banner.hidden = false;
}

function clearError(): void {
  el<HTMLDivElement>("error").hidden = true;
}

async function runQuery(): Promise<void> {
  const input = el<HTMLInputElement>("question");
  const question = input.value;
  if (!validateQuestion(question)) {
    showError("Type a question first.");
    return;
  }
  clearError();
  const seq = ++requestSeq;
  lastQuestion = question.trim();
  el<HTMLDivElement>("page-view").innerHTML = "";
  el<HTMLDivElement>("results").innerHTML = '<p class="empty">Searching…</p>';
  try {
    const record = await submitQuery(lastQuestion);
    if (seq !== requestSeq) return; // a newer query superseded this one
    el<HTMLDivElement>("results").innerHTML = renderResults(record).html;
  } catch (err) {
    if (seq !== requestSeq) return;
    el<HTMLDivElement>("results").innerHTML = "";
    showError(err instanceof Error ? err.message : String(err));
  }
}

export async function openPage(page: string): Promise<void> {
  clearError();
  const container = el<HTMLDivElement>("page-view");
  container.innerHTML = '<p class="empty">Loading page…</p>';
  try {
    const view = await fetchPage(page, lastQuestion);
    const rendered = renderPageView(view);
    container.innerHTML = rendered.html;
    if (rendered.firstHitId !== null) {
      document.getElementById(rendered.firstHitId)?.scrollIntoView({ block: "center" });
    }
  } catch (err) {
    container.innerHTML = "";
    showError(err instanceof Error ? err.message : String(err));
  }
}

function wire(): void {
  el<HTMLFormElement>("query-form").addEventListener("submit", (event) => {
    event.preventDefault();
    void runQuery();
  });
  el<HTMLDivElement>("results").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLAnchorElement>(".page-link");
    if (target?.dataset.page) {
      event.preventDefault();
      void openPage(target.dataset.page);
    }
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  wire();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wire);
}
