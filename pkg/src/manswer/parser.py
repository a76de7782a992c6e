"""All-parses dependency analysis for a controlled English subset.

Coverage (frozen): SVO declaratives with optional PPs, adjective/adverb and
noun-compound modification, "and/or" noun coordination, "if" subordinate
clauses, sentential negation with do-support, subject-gap relative clauses
with that/which, copula sentences, imperatives, and which/what/how questions
for the query side.

Every licensed analysis is enumerated; prepositional phrases may attach to
the verb or to any noun on the right frontier (non-crossing arcs).  Sentences
the grammar cannot consume fall back to a keyword bag, so parsing is total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .lexicon import Lexicon, default_lexicon
from .tokenizer import Token, TokenKind, TokenizedSentence

PARSE_CAP = 64
TIE_BAND = 0.1

_NOMINAL_KINDS = {TokenKind.COMMAND, TokenKind.VARNAME, TokenKind.PATH,
                  TokenKind.SPECIAL, TokenKind.NUMBER}


@dataclass(frozen=True)
class Edge:
    label: str  # subj obj iobj amod advmod prep conj cond neg rel
    head: int
    dep: int
    prep: str | None = None  # preposition lemma for label == "prep"


@dataclass(frozen=True)
class DependencyParse:
    edges: frozenset[Edge]
    root: int
    pos: tuple[tuple[int, str], ...]  # token index -> category chosen here

    def pos_of(self, index: int) -> str | None:
        for i, p in self.pos:
            if i == index:
                return p
        return None

    def sort_key(self):
        return (
            tuple(sorted((e.label, e.head, e.dep, e.prep or "") for e in self.edges)),
            self.root,
        )


@dataclass(frozen=True)
class KeywordBag:
    lemmas: tuple[tuple[str, int], ...]  # (lemma, word index), open-class only


@dataclass
class ParseForest:
    sentence: TokenizedSentence
    parses: list[DependencyParse] = field(default_factory=list)
    keyword_fallback: KeywordBag | None = None
    filter_flagged: bool = False

    @property
    def parsed(self) -> bool:
        return bool(self.parses)


class _Lex:
    """Per-sentence view of token categories."""

    def __init__(self, tokens: tuple[Token, ...], lexicon: Lexicon):
        self.tokens = tokens
        self.lexicon = lexicon

    def pos_set(self, i: int) -> frozenset[str]:
        t = self.tokens[i]
        if t.kind is TokenKind.WORD:
            return self.lexicon.pos(t.lemma)
        return frozenset()

    def nominal(self, i: int) -> bool:
        t = self.tokens[i]
        return t.kind in _NOMINAL_KINDS or "noun" in self.pos_set(i)

    def verbal(self, i: int) -> bool:
        t = self.tokens[i]
        if t.kind is TokenKind.COMMAND:
            # registry tagging adds the command reading, it does not take the
            # verb reading away ("How can I compress a file?")
            return "verb" in self.lexicon.pos(t.lemma)
        return "verb" in self.pos_set(i)

    def adj(self, i: int) -> bool:
        return "adj" in self.pos_set(i)

    def adv(self, i: int) -> bool:
        return "adv" in self.pos_set(i)

    def prep(self, i: int) -> bool:
        return "prep" in self.pos_set(i)

    def det(self, i: int) -> bool:
        return "det" in self.pos_set(i)

    def aux(self, i: int) -> bool:
        return "aux" in self.pos_set(i)

    def cop(self, i: int) -> bool:
        return "cop" in self.pos_set(i)

    def neg(self, i: int) -> bool:
        return "neg" in self.pos_set(i)

    def conj(self, i: int) -> bool:
        return "conj" in self.pos_set(i)

    def pron(self, i: int) -> bool:
        return "pron" in self.pos_set(i)

    def wh(self, i: int) -> bool:
        return "wh" in self.pos_set(i)

    def rel(self, i: int) -> bool:
        return "rel" in self.pos_set(i)

    def lemma(self, i: int) -> str:
        return self.tokens[i].lemma


@dataclass
class _A:
    """A clause analysis under construction."""

    edges: frozenset[Edge]
    root: int
    pos: dict[int, str]

    def merged(self, edges, pos, root=None) -> "_A":
        return _A(self.edges | frozenset(edges), self.root if root is None else root,
                  {**self.pos, **pos})


def _freeze(a: _A) -> DependencyParse:
    return DependencyParse(edges=a.edges, root=a.root, pos=tuple(sorted(a.pos.items())))


def make_keyword_bag(sentence: TokenizedSentence, lexicon: Lexicon | None = None) -> KeywordBag:
    """Open-class lemmas of a sentence, for IR-style fall-back."""
    lexicon = lexicon or default_lexicon()
    out: list[tuple[str, int]] = []
    for i, t in enumerate(sentence.tokens):
        if t.kind in (TokenKind.COMMAND, TokenKind.VARNAME, TokenKind.PATH):
            out.append((t.lemma, i))
        elif t.kind is TokenKind.SPECIAL and any(c.isalnum() for c in t.surface):
            out.append((t.lemma, i))
        elif t.kind is TokenKind.WORD and lexicon.is_open_class(t.lemma):
            out.append((t.lemma, i))
    return KeywordBag(lemmas=tuple(out))


def parse(sentence: TokenizedSentence, lexicon: Lexicon | None = None) -> ParseForest:
    """Enumerate every licensed analysis, or fall back to keywords."""
    lexicon = lexicon or default_lexicon()
    lex = _Lex(sentence.tokens, lexicon)

    work = list(range(len(sentence.tokens)))
    while work and sentence.tokens[work[-1]].kind is TokenKind.PUNCT \
            and sentence.tokens[work[-1]].surface in (".", "?", "!"):
        work.pop()

    analyses: list[_A] = []
    if work:
        analyses = _sentence_analyses(work, lex)

    unique: list[DependencyParse] = []
    seen = set()
    for a in analyses:
        parsed = _freeze(a)
        if parsed not in seen:
            seen.add(parsed)
            unique.append(parsed)
    unique.sort(key=DependencyParse.sort_key)

    if unique and len(unique) <= PARSE_CAP:
        return ParseForest(sentence=sentence, parses=unique)
    return ParseForest(sentence=sentence, keyword_fallback=make_keyword_bag(sentence, lexicon))


def _comma_positions(idxs: list[int], lex: _Lex) -> list[int]:
    return [k for k, i in enumerate(idxs)
            if lex.tokens[i].kind is TokenKind.PUNCT and lex.tokens[i].surface == ","]


def _sentence_analyses(idxs: list[int], lex: _Lex) -> list[_A]:
    commas = _comma_positions(idxs, lex)
    out: list[_A] = []

    # "If S1, S2" and "S2 if S1": both clauses must be verbal.
    if lex.tokens[idxs[0]].kind is TokenKind.WORD and lex.lemma(idxs[0]) == "if":
        for c in commas:
            ant, cons = idxs[1:c], idxs[c + 1:]
            if ant and cons:
                out.extend(_conditional(cons, ant, lex))
        return out
    for k, i in enumerate(idxs):
        if k > 0 and lex.tokens[i].kind is TokenKind.WORD and lex.lemma(i) == "if":
            cons = idxs[:k]
            if commas and idxs[commas[-1]] == cons[-1]:
                cons = cons[:-1]
            ant = idxs[k + 1:]
            if ant and cons:
                out.extend(_conditional(cons, ant, lex))
            return out

    if commas:
        return []  # commas licensed only around "if" clauses
    return _clause(idxs, lex)


def _conditional(cons: list[int], ant: list[int], lex: _Lex) -> list[_A]:
    out = []
    for a_cons in _clause(cons, lex):
        if a_cons.pos.get(a_cons.root) != "verb":
            continue
        for a_ant in _clause(ant, lex):
            if a_ant.pos.get(a_ant.root) != "verb":
                continue
            cond = Edge("cond", a_cons.root, a_ant.root)
            out.append(_A(a_cons.edges | a_ant.edges | {cond}, a_cons.root,
                          {**a_cons.pos, **a_ant.pos}))
    return out


def _clause(idxs: list[int], lex: _Lex) -> list[_A]:
    if not idxs:
        return []
    if any(lex.tokens[i].kind is TokenKind.PUNCT for i in idxs):
        return []
    out: list[_A] = []
    first = idxs[0]

    # "How can I <verb> ...?"
    if lex.wh(first) and lex.lemma(first) == "how" and len(idxs) >= 4 \
            and lex.aux(idxs[1]) and lex.pron(idxs[2]):
        pos = {first: "wh", idxs[1]: "aux", idxs[2]: "pron"}
        out.extend(_verb_phrase(idxs[3:], idxs[2], [], pos, lex))

    # "Which/What <NP> ...?" as subject or inverted object question.
    if lex.wh(first) and lex.lemma(first) in ("which", "what") and len(idxs) >= 3:
        for end in range(2, len(idxs)):
            sub = idxs[1:end]
            chunk = _np_chunk(sub, 0, lex)
            if chunk is None or chunk[0] != len(sub):
                continue
            _, wh_head, edges, pos = chunk
            pos = {**pos, first: "wh"}
            rest = idxs[end:]
            out.extend(_verb_phrase(rest, wh_head, edges, pos, lex))
            # object question with do-support: "Which file does cp copy?"
            if len(rest) >= 3 and lex.aux(rest[0]) and lex.verbal(rest[-1]):
                v = rest[-1]
                for s_edges, s_head, s_pos in _np_chain(rest[1:-1], lex):
                    out.append(_A(
                        frozenset(edges) | frozenset(s_edges)
                        | {Edge("subj", v, s_head), Edge("obj", v, wh_head)},
                        v,
                        {**pos, **s_pos, rest[0]: "aux", v: "verb"},
                    ))
        # "What is a hard link?"
        if lex.cop(idxs[1]):
            for a in _copula_pred(idxs[2:], first, [], {first: "pron"}, lex):
                out.append(a)

    # Imperative: bare verb first.
    if lex.verbal(first) and lex.tokens[first].normalized == lex.tokens[first].surface.lower():
        for comp_edges, comp_pos in _complements(first, idxs[1:], lex):
            out.append(_A(frozenset(comp_edges), first, {first: "verb", **comp_pos}))

    out.extend(_declaratives(idxs, lex))
    return out


def _verb_phrase(rest, subj_head, subj_edges, base_pos, lex) -> list[_A]:
    """AUX* (not)? V complements, with a known subject head."""
    out: list[_A] = []
    i = 0
    pos = dict(base_pos)
    while i < len(rest) and lex.aux(rest[i]):
        pos[rest[i]] = "aux"
        i += 1
    neg_at = None
    if i < len(rest) and lex.neg(rest[i]):
        neg_at = rest[i]
        pos[rest[i]] = "neg"
        i += 1
    if i >= len(rest) or not lex.verbal(rest[i]):
        return out
    v = rest[i]
    for comp_edges, comp_pos in _complements(v, rest[i + 1:], lex):
        edges = set(comp_edges) | set(subj_edges) | {Edge("subj", v, subj_head)}
        if neg_at is not None:
            edges.add(Edge("neg", v, neg_at))
        out.append(_A(frozenset(edges), v, {**pos, **comp_pos, v: "verb"}))
    return out


def _declaratives(idxs: list[int], lex: _Lex) -> list[_A]:
    out: list[_A] = []
    for k, v in enumerate(idxs):
        if lex.verbal(v):
            left = idxs[:k]
            pre_edges: list[Edge] = []
            pre_pos: dict[int, str] = {}
            j = len(left)
            while j > 0:
                t = left[j - 1]
                if lex.neg(t):
                    pre_edges.append(Edge("neg", v, t))
                    pre_pos[t] = "neg"
                elif lex.aux(t):
                    pre_pos[t] = "aux"
                elif lex.adv(t) and lex.tokens[t].kind is TokenKind.WORD:
                    pre_edges.append(Edge("advmod", v, t))
                    pre_pos[t] = "adv"
                else:
                    break
                j -= 1
            subject = left[:j]
            if not subject:
                continue
            for s_edges, s_head, s_pos in _np_chain(subject, lex):
                for comp_edges, comp_pos in _complements(v, idxs[k + 1:], lex):
                    edges = (frozenset(s_edges) | frozenset(comp_edges)
                             | frozenset(pre_edges) | {Edge("subj", v, s_head)})
                    out.append(_A(edges, v, {**s_pos, **comp_pos, **pre_pos, v: "verb"}))
        if lex.cop(v):
            left, right = idxs[:k], idxs[k + 1:]
            if not left or not right:
                continue
            for s_edges, s_head, s_pos in _np_chain(left, lex):
                out.extend(_copula_pred(right, s_head, s_edges, {**s_pos, v: "cop"}, lex))
    return out


def _copula_pred(right, s_head, s_edges, base_pos, lex) -> list[_A]:
    """Copula predicates: adjective, noun phrase, or bare PP sequence."""
    out: list[_A] = []
    if not right:
        return out
    if len(right) == 1 and lex.adj(right[0]):
        edges = frozenset(s_edges) | {Edge("subj", right[0], s_head)}
        out.append(_A(edges, right[0], {**base_pos, right[0]: "adj", s_head: base_pos.get(s_head, "noun")}))
        return out
    if lex.prep(right[0]):
        pp_edges: list[Edge] = []
        pos = dict(base_pos)
        i = 0
        while i < len(right):
            if not lex.prep(right[i]):
                return out
            chunk = _np_chunk(right, i + 1, lex)
            if chunk is None:
                return out
            end, head, edges, c_pos = chunk
            pp_edges.append(Edge("prep", s_head, head, prep=lex.lemma(right[i])))
            pp_edges.extend(edges)
            pos.update(c_pos)
            pos[right[i]] = "prep"
            i = end
        out.append(_A(frozenset(s_edges) | frozenset(pp_edges), s_head, pos))
        return out
    chunk = _np_chunk(right, 0, lex)
    if chunk is None:
        return out
    end, head, edges, c_pos = chunk
    for tail_edges, tail_pos in _chain_tail(right, end, [head], lex):
        all_edges = (frozenset(s_edges) | frozenset(edges) | frozenset(tail_edges)
                     | {Edge("subj", head, s_head)})
        out.append(_A(all_edges, head, {**base_pos, **c_pos, **tail_pos}))
    return out


def _np_chain(region: list[int], lex: _Lex):
    """An NP followed by PPs or a relative clause, consuming the region."""
    chunk = _np_chunk(region, 0, lex)
    if chunk is None:
        return []
    end, head, edges, pos = chunk
    results = []
    for tail_edges, tail_pos in _chain_tail(region, end, [head], lex):
        results.append((list(edges) + tail_edges, head, {**pos, **tail_pos}))
    return results


def _chain_tail(region, i, frontier, lex):
    """PP attachments over a noun-only frontier, plus a final relative clause."""
    if i == len(region):
        return [([], {})]
    t = region[i]
    out = []
    if lex.prep(t) and lex.tokens[t].kind is TokenKind.WORD:
        chunk = _np_chunk(region, i + 1, lex)
        if chunk is not None:
            end, head, edges, pos = chunk
            for site_i in range(len(frontier)):
                site = frontier[site_i]
                pp = Edge("prep", site, head, prep=lex.lemma(t))
                for tail_edges, tail_pos in _chain_tail(
                        region, end, frontier[: site_i + 1] + [head], lex):
                    out.append(
                        ([pp, *edges, *tail_edges], {**pos, **tail_pos, t: "prep"}))
    if lex.rel(t) and i + 1 < len(region) and lex.verbal(region[i + 1]):
        v = region[i + 1]
        for comp_edges, comp_pos in _complements(v, region[i + 2:], lex):
            rel = Edge("rel", frontier[-1], v)
            out.append(([rel, *comp_edges], {**comp_pos, v: "verb", t: "rel"}))
    return out


def _np_chunk(region: list[int], start: int, lex: _Lex):
    """One noun phrase: det? premod* head, with optional and/or coordination.

    Deterministic; returns (end, head, edges, pos) or None.
    """
    n = len(region)
    if start >= n:
        return None
    i = start
    pos: dict[int, str] = {}
    edges: list[Edge] = []
    if lex.pron(i_tok := region[i]) and not lex.det(i_tok):
        return _coordinate(region, i + 1, i_tok, [], {i_tok: "pron"}, lex)
    if lex.det(region[i]):
        pos[region[i]] = "det"
        i += 1
    run_start = i
    while i < n and (lex.adj(region[i]) or lex.nominal(region[i])):
        i += 1
    head = None
    for j in range(i - 1, run_start - 1, -1):
        if lex.nominal(region[j]):
            head = region[j]
            i = j + 1
            break
    if head is None:
        return None
    for j in range(run_start, i - 1):
        t = region[j]
        if lex.adj(t):
            pos[t] = "adj"
        else:
            pos[t] = "noun"
        edges.append(Edge("amod", head, t))
    pos[head] = "noun"
    return _coordinate(region, i, head, edges, pos, lex)


def _coordinate(region, i, head, edges, pos, lex):
    n = len(region)
    if i < n and lex.conj(region[i]) and lex.lemma(region[i]) in ("and", "or"):
        sub = _np_chunk(region, i + 1, lex)
        if sub is not None:
            end, head2, edges2, pos2 = sub
            return (
                end,
                head,
                [*edges, Edge("conj", head, head2), *edges2],
                {**pos, **pos2, region[i]: "conj"},
            )
    return (i, head, edges, pos)


def _complements(v: int, rest: list[int], lex: _Lex):
    """Post-verbal complements: up to two NPs, then PPs/adverbs, optionally a
    trailing relative clause on the last noun.  Returns (edges, pos) lists with
    every prepositional attachment alternative enumerated."""
    items_nps = []
    items_pps = []
    adv_edges: list[Edge] = []
    pos: dict[int, str] = {}
    rel_clause = None
    i = 0
    n = len(rest)
    while i < n:
        t = rest[i]
        if lex.tokens[t].kind is TokenKind.PUNCT:
            return []
        if lex.prep(t) and lex.tokens[t].kind is TokenKind.WORD:
            chunk = _np_chunk(rest, i + 1, lex)
            if chunk is None:
                return []
            end, head, edges, c_pos = chunk
            items_pps.append((lex.lemma(t), head, edges))
            pos.update(c_pos)
            pos[t] = "prep"
            i = end
            continue
        if lex.adv(t) and lex.tokens[t].kind is TokenKind.WORD and not lex.nominal(t):
            adv_edges.append(Edge("advmod", v, t))
            pos[t] = "adv"
            i += 1
            continue
        if lex.rel(t) and i + 1 < n and lex.verbal(rest[i + 1]) and (items_nps or items_pps):
            rel_clause = (t, rest[i + 1], rest[i + 2:])
            break
        chunk = _np_chunk(rest, i, lex)
        if chunk is None or items_pps or len(items_nps) >= 2:
            return []
        end, head, edges, c_pos = chunk
        items_nps.append((head, edges))
        pos.update(c_pos)
        i = end

    np_edges: list[Edge] = []
    frontier = [v]
    if len(items_nps) == 1:
        head, edges = items_nps[0]
        np_edges.append(Edge("obj", v, head))
        np_edges.extend(edges)
        frontier.append(head)
    elif len(items_nps) == 2:
        (io_head, io_edges), (o_head, o_edges) = items_nps
        np_edges.append(Edge("iobj", v, io_head))
        np_edges.append(Edge("obj", v, o_head))
        np_edges.extend(io_edges)
        np_edges.extend(o_edges)
        frontier.append(o_head)

    results = []
    for pp_edges, final_frontier in _attach_pps(items_pps, frontier):
        edges = [*np_edges, *adv_edges, *pp_edges]
        extra_pos: dict[int, str] = {}
        if rel_clause is not None:
            rel_t, rel_v, rel_rest = rel_clause
            anchor = final_frontier[-1] if len(final_frontier) > 1 else None
            if anchor is None:
                continue
            sub = _complements(rel_v, rel_rest, lex)
            for sub_edges, sub_pos in sub:
                results.append((
                    [*edges, Edge("rel", anchor, rel_v), *sub_edges],
                    {**pos, **sub_pos, rel_t: "rel", rel_v: "verb"},
                ))
            continue
        results.append((edges, {**pos, **extra_pos}))
    return results


def _attach_pps(pps, frontier):
    """Enumerate PP attachment sites over the right frontier (non-crossing)."""
    if not pps:
        return [([], list(frontier))]
    (prep_lemma, head, inner), *remaining = pps
    out = []
    for site_i in range(len(frontier)):
        site = frontier[site_i]
        edge = Edge("prep", site, head, prep=prep_lemma)
        out_frontier = list(frontier[: site_i + 1]) + [head]
        for rest_edges, fin in _attach_pps(remaining, out_frontier):
            out.append(([edge, *inner, *rest_edges], fin))
    return out


# --- filter rules ---------------------------------------------------------


def _of_rule(parse: DependencyParse, sentence: TokenizedSentence) -> bool:
    """A PP headed by "of" may attach only to the immediately preceding noun
    or noun coordination.  Returns True when the parse satisfies the rule."""
    pos = dict(parse.pos)
    conj_pairs = [(e.head, e.dep) for e in parse.edges if e.label == "conj"]

    def conj_class(node: int) -> set[int]:
        group = {node}
        changed = True
        while changed:
            changed = False
            for a, b in conj_pairs:
                if a in group and b not in group:
                    group.add(b)
                    changed = True
                if b in group and a not in group:
                    group.add(a)
                    changed = True
        return group

    for edge in parse.edges:
        if edge.label != "prep" or edge.prep != "of":
            continue
        prep_index = None
        for i in range(edge.dep - 1, -1, -1):
            if sentence.tokens[i].lemma == "of":
                prep_index = i
                break
        if prep_index is None:
            continue
        nearest = None
        for i in range(prep_index - 1, -1, -1):
            if pos.get(i) in ("noun", "pron"):
                nearest = i
                break
        if nearest is None:
            return False
        if edge.head not in conj_class(nearest):
            return False
    return True


FILTER_RULES = [("pp-of-attaches-to-preceding-noun", _of_rule)]


def apply_filter_rules(forest: ParseForest) -> ParseForest:
    """Drop parses violating any enabled rule; never empty the forest."""
    if not forest.parsed:
        return forest
    surviving = [
        p for p in forest.parses
        if all(rule(p, forest.sentence) for _, rule in FILTER_RULES)
    ]
    if not surviving:
        return ParseForest(forest.sentence, list(forest.parses),
                           forest.keyword_fallback, filter_flagged=True)
    return ParseForest(forest.sentence, surviving, forest.keyword_fallback,
                       forest.filter_flagged)


# --- prepositional-phrase disambiguation ----------------------------------


class AssociationModel:
    """(head lemma, preposition, object lemma) attachment counts.

    File format, tab separated:
        attach  verb|noun  headLemma  prep  objLemma  count
    """

    def __init__(self, counts: dict[tuple[str, str, str, str], int] | None = None):
        self.counts = counts or {}

    @classmethod
    def load(cls, path: Path) -> "AssociationModel":
        counts: dict[tuple[str, str, str, str], int] = {}
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tag, kind, head, prep, obj, count = line.split("\t")
            if tag != "attach":
                continue
            key = (kind, head, prep, obj)
            counts[key] = counts.get(key, 0) + int(count)
        return cls(counts)

    def __bool__(self) -> bool:
        return bool(self.counts)

    def count(self, kind: str, head: str, prep: str, obj: str) -> int:
        return (self.counts.get((kind, head, prep, obj), 0)
                + self.counts.get((kind, head, prep, "*"), 0))

    def verb_vs_noun(self, verb: str, noun: str, prep: str, obj: str) -> float:
        cv = self.count("verb", verb, prep, obj)
        cn = self.count("noun", noun, prep, obj)
        return math.log((cv + 0.5) / (cn + 0.5))


def disambiguate_pp(forest: ParseForest, model: AssociationModel | None) -> ParseForest:
    """Resolve PP attachment ambiguities with the association model.

    For each ambiguous PP the verb-vs-noun log ratio decides the winner;
    scores inside the tie band keep all alternatives.  A missing or empty
    model leaves the forest untouched.
    """
    if not forest.parsed or model is None or not model:
        return forest
    sentence = forest.sentence
    parses = list(forest.parses)

    attachments: dict[tuple[str | None, int], set[int]] = {}
    for p in parses:
        for e in p.edges:
            if e.label == "prep":
                attachments.setdefault((e.prep, e.dep), set()).add(e.head)

    for (prep, dep), heads in sorted(attachments.items(), key=lambda kv: (kv[0][0] or "", kv[0][1])):
        if len(heads) < 2 or prep is None:
            continue
        verb_heads = {h for h in heads if any(p.pos_of(h) == "verb" for p in parses)}
        noun_heads = heads - verb_heads
        if not verb_heads or not noun_heads:
            continue
        obj_lemma = sentence.tokens[dep].lemma
        verb_lemma = sentence.tokens[next(iter(verb_heads))].lemma
        best_noun = max(
            (model.count("noun", sentence.tokens[h].lemma, prep, obj_lemma), h)
            for h in sorted(noun_heads)
        )
        score = model.verb_vs_noun(verb_lemma, sentence.tokens[best_noun[1]].lemma,
                                   prep, obj_lemma)
        if score > TIE_BAND:
            keep_heads = verb_heads
        elif score < -TIE_BAND:
            keep_heads = noun_heads
        else:
            continue
        filtered = [
            p for p in parses
            if all(e.head in keep_heads for e in p.edges
                   if e.label == "prep" and e.prep == prep and e.dep == dep)
        ]
        if filtered:
            parses = filtered

    return ParseForest(sentence, parses, forest.keyword_fallback, forest.filter_flagged)
