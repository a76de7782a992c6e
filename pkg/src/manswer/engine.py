"""Question answering: all-proofs conjunctive search with a fall-back cascade.

Level 0 proves the goal conjunctively with synonym expansion, level 1 adds
hyponyms, level 2 breaks the logical dependencies between terms (each
conjunct matched independently within a sentence), and level 3 is bare
keyword matching over open-class lemmas.  Escalation stops as soon as enough
distinct sentences have answered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

from .lexicon import Lexicon, default_lexicon
from .logform import EmptyGoal, Goal, GoalConjunct, derive_goal
from .kb import KnowledgeBase, unify
from .parser import AssociationModel, apply_filter_rules, disambiguate_pp, \
    make_keyword_bag, parse
from .tokenizer import TokenKind, TokenizedSentence, tokenize


class Level(IntEnum):
    L0_synonyms = 0
    L1_hyponyms = 1
    L2_brokenDeps = 2
    L3_keywords = 3

    @property
    def short(self) -> str:
        return f"L{int(self)}"

    @classmethod
    def parse(cls, text: str | int) -> "Level":
        if isinstance(text, int):
            return cls(text)
        text = text.strip()
        for level in cls:
            if text in (level.name, level.short):
                return level
        raise ValueError(f"unknown level {text!r}")


@dataclass
class CascadeConfig:
    min_hits: int = 1  # "enough answers" threshold, distinct sentences
    max_level: Level = Level.L3_keywords
    forced_level: Level | None = None  # start the cascade here

    def __post_init__(self) -> None:
        if self.min_hits < 1:
            raise ValueError("min_hits must be >= 1")


@dataclass
class Proof:
    bindings: dict[str, str]
    matched_facts: tuple
    covered_words: frozenset[tuple[str, int]]  # (sentenceId, wordIndex)
    level: Level
    interpretation: int = 0


@dataclass
class QueryResult:
    sentence_id: str
    proofs: list[Proof]
    score: float
    level: Level

    @property
    def proof_count(self) -> int:
        return len(self.proofs)


def _expansion_lemmas(conjunct: GoalConjunct, kb: KnowledgeBase, mode: str) -> set[str]:
    if conjunct.functor == "rel":
        return {conjunct.lemma}
    return kb.expand(conjunct.lemma, mode)


def prove_conjunctive(goal: Goal, kb: KnowledgeBase, mode: str = "synonyms",
                      level: Level = Level.L0_synonyms) -> list[Proof]:
    """Enumerate every way to satisfy all conjuncts inside one stored
    interpretation of one sentence, complete with respect to brute force."""
    lemma_sets = [_expansion_lemmas(c, kb, mode) for c in goal.conjuncts]

    candidate_facts: list[dict[tuple[str, int], list]] = []
    for conjunct, lemmas in zip(goal.conjuncts, lemma_sets):
        per_scope: dict[tuple[str, int], list] = {}
        for lemma in sorted(lemmas):
            for fact, tag in kb.lookup(conjunct.functor, lemma):
                per_scope.setdefault((fact.sentence_id, tag), []).append(fact)
        candidate_facts.append(per_scope)

    scopes = None
    for per_scope in candidate_facts:
        keys = set(per_scope)
        scopes = keys if scopes is None else scopes & keys
    if not scopes:
        return []

    proofs: list[Proof] = []
    for scope in sorted(scopes):
        find = kb.entity_find(*scope)

        def backtrack(index: int, bindings: dict[str, str], chosen: list) -> None:
            if index == len(goal.conjuncts):
                covered = frozenset(
                    (f.sentence_id, w) for f in chosen for w in f.word_span
                )
                proofs.append(Proof(dict(bindings), tuple(chosen), covered,
                                    level, scope[1]))
                return
            for fact in candidate_facts[index][scope]:
                new = unify(goal.conjuncts[index], fact, bindings, find)
                if new is not None:
                    backtrack(index + 1, new, chosen + [fact])

        backtrack(0, {}, [])
    return proofs


def break_dependencies(goal: Goal, kb: KnowledgeBase) -> list[Proof]:
    """Match each conjunct independently: a sentence qualifies when every
    conjunct finds some fact of it, shared-variable constraints dropped."""
    lemma_sets = [_expansion_lemmas(c, kb, "synonymsAndHyponyms") for c in goal.conjuncts]

    per_conjunct: list[dict[str, list]] = []
    for conjunct, lemmas in zip(goal.conjuncts, lemma_sets):
        by_sentence: dict[str, list] = {}
        for lemma in sorted(lemmas):
            for fact, _tag in kb.lookup(conjunct.functor, lemma):
                by_sentence.setdefault(fact.sentence_id, []).append(fact)
        per_conjunct.append(by_sentence)

    qualifying = None
    for by_sentence in per_conjunct:
        keys = set(by_sentence)
        qualifying = keys if qualifying is None else qualifying & keys
    if not qualifying:
        return []

    proofs: list[Proof] = []
    for sid in sorted(qualifying):
        matched: list = []
        seen = set()
        for by_sentence in per_conjunct:
            for fact in by_sentence[sid]:
                if id(fact) not in seen:
                    seen.add(id(fact))
                    matched.append(fact)
        covered = frozenset((sid, w) for f in matched for w in f.word_span)
        proofs.append(Proof({}, tuple(matched), covered, Level.L2_brokenDeps))
    return proofs


def question_lemmas(sentence: TokenizedSentence, lexicon: Lexicon) -> set[str]:
    return {lemma for lemma, _ in make_keyword_bag(sentence, lexicon).lemmas}


def _sentence_lemma_sets(kb: KnowledgeBase, lexicon: Lexicon):
    """Per-token lemma sets for keyword matching, with tokenizer-derived
    enrichment: command tokens also count as "command", named variables also
    count as their type."""
    for sid, info in kb.sentences.items():
        token_lemmas: list[set[str]] = []
        for t in info.sentence.tokens:
            lemmas: set[str] = set()
            if t.kind is TokenKind.COMMAND:
                lemmas = {t.lemma, "command"}
            elif t.kind is TokenKind.VARNAME:
                lemmas = {t.lemma}
                var_type = lexicon.var_type(t.surface)
                if var_type:
                    lemmas.add(var_type)
            elif t.kind is TokenKind.PATH:
                lemmas = {t.lemma}
            elif t.kind is TokenKind.SPECIAL and any(c.isalnum() for c in t.surface):
                lemmas = {t.lemma}
            elif t.kind is TokenKind.WORD and lexicon.is_open_class(t.lemma):
                lemmas = {t.lemma}
            token_lemmas.append(lemmas)
        yield sid, token_lemmas


def keyword_search(question: TokenizedSentence, kb: KnowledgeBase,
                   lexicon: Lexicon | None = None) -> list[QueryResult]:
    """IR-style fall-back: score sentences by how many question lemmas they
    contain, all terms counted within a single sentence."""
    lexicon = lexicon or default_lexicon()
    q_lemmas = question_lemmas(question, lexicon)
    if not q_lemmas:
        return []
    results: list[QueryResult] = []
    for sid, token_lemmas in _sentence_lemma_sets(kb, lexicon):
        matched = {q for q in q_lemmas if any(q in tl for tl in token_lemmas)}
        if not matched:
            continue
        covered = frozenset(
            (sid, i) for i, tl in enumerate(token_lemmas) if tl & matched
        )
        proof = Proof({}, (), covered, Level.L3_keywords)
        results.append(QueryResult(sid, [proof], float(len(matched)),
                                   Level.L3_keywords))
    results.sort(key=lambda r: (-r.score, r.sentence_id))
    return results


def _question_parse_key(analysis):
    # Prefer the plainest reading for the goal: fewest noun-noun compounds,
    # then the canonical ordering.
    compounds = sum(
        1 for e in analysis.edges
        if e.label == "amod" and analysis.pos_of(e.dep) == "noun"
    )
    return (compounds, analysis.sort_key())


def select_question_parse(forest):
    """The analysis used for goal derivation on ambiguous questions."""
    return min(forest.parses, key=_question_parse_key)


def parse_question(question: str, kb: KnowledgeBase,
                   lexicon: Lexicon | None = None,
                   model: AssociationModel | None = None):
    """Tokenize and parse a question against the KB's merged registry.

    Returns (goal, sentence); goal is None when the question is unparseable
    and must be handled directly in keywords mode.
    """
    lexicon = lexicon or default_lexicon()
    sentences = tokenize(question, kb.global_registry, sentence_prefix="query/Q",
                         lexicon=lexicon)
    if not sentences:
        raise EmptyGoal("empty question")
    sentence = sentences[0]
    forest = disambiguate_pp(apply_filter_rules(parse(sentence, lexicon)), model)
    if forest.parsed:
        best = select_question_parse(forest)
        goal = derive_goal(best, sentence, kb.thesaurus, lexicon)
        return goal, sentence
    bag = forest.keyword_fallback
    if bag is None or not bag.lemmas:
        raise EmptyGoal(question)
    return None, sentence


def retrieve_at_level(level: Level, kb: KnowledgeBase, goal: Goal | None,
                      question: TokenizedSentence,
                      lexicon: Lexicon | None = None) -> list[QueryResult]:
    """Run one cascade level on its own and build per-sentence results."""
    lexicon = lexicon or default_lexicon()
    if level is Level.L3_keywords or goal is None:
        return keyword_search(question, kb, lexicon)
    if level is Level.L0_synonyms:
        proofs = prove_conjunctive(goal, kb, "synonyms", Level.L0_synonyms)
    elif level is Level.L1_hyponyms:
        proofs = prove_conjunctive(goal, kb, "synonymsAndHyponyms", Level.L1_hyponyms)
    else:
        proofs = break_dependencies(goal, kb)
    by_sentence: dict[str, list[Proof]] = {}
    for proof in proofs:
        sid = next(iter(proof.covered_words))[0] if proof.covered_words else None
        if sid is None and proof.matched_facts:
            sid = proof.matched_facts[0].sentence_id
        if sid is None:
            continue
        by_sentence.setdefault(sid, []).append(proof)
    score = float(len(goal.conjuncts))
    return [QueryResult(sid, plist, score, level)
            for sid, plist in sorted(by_sentence.items())]


def answer(question: str, kb: KnowledgeBase,
           config: CascadeConfig | None = None,
           lexicon: Lexicon | None = None,
           model: AssociationModel | None = None) -> list[QueryResult]:
    """Answer a free-form question, escalating through the cascade until the
    configured number of distinct sentences has been retrieved.

    Returns the union of all executed levels, ordered by
    (level, score desc, proof count desc, sentenceId)."""
    config = config or CascadeConfig()
    lexicon = lexicon or default_lexicon()
    goal, sentence = parse_question(question, kb, lexicon, model)

    start = config.forced_level if config.forced_level is not None else Level.L0_synonyms
    if goal is None:
        start = Level.L3_keywords
    stop = max(config.max_level, start)

    # A sentence keeps the proofs of the first (best) level that retrieved
    # it; re-derivations at weaker levels add nothing to its presentation.
    merged: dict[str, QueryResult] = {}
    for value in range(int(start), int(stop) + 1):
        level = Level(value)
        for result in retrieve_at_level(level, kb, goal, sentence, lexicon):
            merged.setdefault(result.sentence_id, result)
        if len(merged) >= config.min_hits:
            break

    results = list(merged.values())
    results.sort(key=lambda r: (int(r.level), -r.score, -r.proof_count, r.sentence_id))
    return results
