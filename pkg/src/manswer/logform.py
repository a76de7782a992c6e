"""Ground logical facts and conjunctive goals from dependency analyses.

Verbs become evt facts over reified eventualities, nouns become object facts,
adjectives and adverbs become prop facts, prepositions and noun compounds
become binary relation facts, and "if"/"not" are stored as regular predicates
rather than logical connectives.  Eventualities that actually obtain are
marked with holds(e); anything inside a conditional or negated context is
left unmarked, however deeply nested.

Facts and goals come out of the same walker: deriving a goal just swaps fresh
identifiers for variables, which keeps question translation aligned with
sentence translation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .lexicon import Lexicon, default_lexicon
from .parser import DependencyParse, Edge
from .tokenizer import Token, TokenKind, TokenizedSentence

RESERVED_FUNCTORS = {"object", "evt", "prop", "if", "not", "holds"}
_PLAIN_PRONOUNS = {"i", "you", "he", "she", "it", "we", "they", "me", "him",
                   "her", "us", "them", "one", "something", "anything"}


class EmptyGoal(Exception):
    """The question contains no content words to search for."""


@dataclass(frozen=True)
class Fact:
    functor: str  # object | evt | prop | rel | if | not | holds
    lemma: str | None  # word lemma; relation name for rel; None for if/not/holds
    reified_id: str | None  # o-/e-/p- identifier where applicable
    args: tuple[str, ...]
    sentence_id: str
    word_span: tuple[int, ...]

    def render(self) -> str:
        if self.functor == "object":
            inner = f"object({self.lemma},{self.reified_id},{self.args[0]})"
        elif self.functor == "evt":
            inner = f"evt({self.lemma},{self.reified_id},[{','.join(self.args)}])"
        elif self.functor == "prop":
            inner = f"prop({self.lemma},{self.reified_id},{self.args[0]})"
        elif self.functor == "rel":
            inner = f"{self.lemma}({','.join(self.args)})"
        else:
            inner = f"{self.functor}({','.join(self.args)})"
        return f"{inner}/{self.sentence_id}"

    def dump_line(self) -> str:
        return f"{self.render()}\t{','.join(str(w) for w in self.word_span)}"


_FACT_LINE = re.compile(r"^([A-Za-z_][\w.\-]*)\((.*)\)/(.+?)\t(.*)$")


def parse_fact_line(line: str) -> Fact:
    m = _FACT_LINE.match(line)
    if m is None:
        raise ValueError(f"bad fact line: {line!r}")
    name, inner, sentence_id, span_text = m.groups()
    span = tuple(int(w) for w in span_text.split(",") if w != "")
    parts = _split_args(inner)
    if name == "object" or name == "prop":
        return Fact(name, parts[0], parts[1], (parts[2],), sentence_id, span)
    if name == "evt":
        arg_list = parts[2].strip("[]")
        args = tuple(a for a in arg_list.split(",") if a)
        return Fact("evt", parts[0], parts[1], args, sentence_id, span)
    if name in ("if", "not", "holds"):
        return Fact(name, None, None, tuple(parts), sentence_id, span)
    return Fact("rel", name, None, tuple(parts), sentence_id, span)


def _split_args(inner: str) -> list[str]:
    parts: list[str] = []
    depth = 0
    current = []
    for ch in inner:
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
            continue
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        current.append(ch)
    parts.append("".join(current))
    return parts


@dataclass(frozen=True)
class GoalConjunct:
    """One atom pattern of a conjunctive goal.

    For object/evt/prop the first arg slot stands for the reified identifier
    (usually the "_" wildcard, or the event variable for evt); the remaining
    args line up with the fact's argument list.  rel args map directly.
    """

    functor: str  # object | evt | prop | rel
    lemma: str
    alternatives: tuple[str, ...]  # thesaurus disjunct group, self included
    args: tuple[str, ...]  # variables, "_" wildcards, or ground ids

    def render(self) -> str:
        lemma = self.lemma if len(self.alternatives) <= 1 else "{" + "|".join(self.alternatives) + "}"
        if self.functor == "evt":
            return f"evt({lemma},{self.args[0]},[{','.join(self.args[1:])}])"
        if self.functor == "rel":
            return f"{lemma}({','.join(self.args)})"
        return f"{self.functor}({lemma},{self.args[0]},{self.args[1]})"


@dataclass(frozen=True)
class Goal:
    conjuncts: tuple[GoalConjunct, ...]
    answer_var: str

    def render(self) -> str:
        return " & ".join(c.render() for c in self.conjuncts)


class _Walker:
    """Shared translation core for sentences (facts) and questions (goals)."""

    def __init__(self, parse: DependencyParse, sentence: TokenizedSentence,
                 lexicon: Lexicon, goal_mode: bool):
        self.parse = parse
        self.sentence = sentence
        self.tokens = sentence.tokens
        self.lexicon = lexicon
        self.goal_mode = goal_mode
        self.pos = dict(parse.pos)
        self.edges = sorted(parse.edges, key=lambda e: (e.dep, e.head, e.label))
        self.entity: dict[int, str] = {}
        self.event: dict[int, str] = {}
        self.counters = {"x": 0, "e": 0, "o": 0, "p": 0, "var": 0, "evar": 0}

    # --- identifier allocation

    def _next(self, kind: str) -> str:
        self.counters[kind] += 1
        return f"{kind}{self.counters[kind]}"

    def _new_entity(self, index: int) -> str:
        if self.goal_mode:
            lemma = self.tokens[index].lemma
            if self.pos.get(index) == "pron" and lemma in _PLAIN_PRONOUNS:
                return "_"
            self.counters["var"] += 1
            return f"X{self.counters['var']}"
        return self._next("x")

    def _new_event(self) -> str:
        if self.goal_mode:
            self.counters["evar"] += 1
            return f"E{self.counters['evar']}"
        return self._next("e")

    # --- node classification

    def _copula_pred_root(self) -> int | None:
        root = self.parse.root
        if self.pos.get(root) in ("noun", "adj") and any(
            e.label == "subj" and e.head == root for e in self.edges
        ):
            return root
        return None

    def _subject_of(self, head: int) -> int | None:
        for e in self.edges:
            if e.label == "subj" and e.head == head:
                return e.dep
        return None

    def _assign_ids(self) -> None:
        pred_root = self._copula_pred_root()
        nodes = {self.parse.root}
        for e in self.edges:
            nodes.add(e.head)
            nodes.add(e.dep)
        for i in sorted(nodes):
            category = self.pos.get(i)
            if category == "verb":
                self.event[i] = self._new_event()
            elif category in ("noun", "pron"):
                if i == pred_root:
                    continue
                self.entity[i] = self._new_entity(i)
        if pred_root is not None and self.pos.get(pred_root) == "noun":
            subj = self._subject_of(pred_root)
            if subj is not None:
                self.entity[pred_root] = self.entity[subj]

    # --- emission

    def run(self) -> list[Fact] | list[GoalConjunct]:
        self._assign_ids()
        facts: list = []
        pred_root = self._copula_pred_root()
        suppressed = self._suppressed_events()

        if not self.goal_mode:
            for i in sorted(self.event):
                if i not in suppressed:
                    facts.append(self._fact("holds", None, None, (self.event[i],), (i,)))

        dep_nodes = {e.dep for e in self.edges}
        for i in sorted(set(self.entity) | set(self.event) | dep_nodes):
            token = self.tokens[i]
            if i in self.event:
                facts.append(self._evt_fact(i))
            elif self.pos.get(i) == "noun" and i in self.entity:
                entity = self.entity[i]
                if token.kind is not TokenKind.NUMBER:
                    facts.append(self._object(token.lemma, entity, i))
                if token.kind is TokenKind.COMMAND:
                    facts.append(self._object("command", entity, i))
                elif token.kind is TokenKind.VARNAME:
                    var_type = self.lexicon.var_type(token.surface)
                    if var_type:
                        facts.append(self._object(var_type, entity, i))
            self._emit_edges_for(i, facts)

        if pred_root is not None and self.pos.get(pred_root) == "adj":
            subj = self._subject_of(pred_root)
            if subj is not None:
                facts.append(self._prop(self.tokens[pred_root].lemma,
                                        self.entity[subj], pred_root))
        return facts

    def _emit_edges_for(self, dep: int, facts: list) -> None:
        for e in self.edges:
            if e.dep != dep:
                continue
            if e.label == "amod":
                head_ref = self.entity.get(e.head)
                if head_ref is None:
                    continue
                if self.pos.get(dep) == "adj":
                    facts.append(self._prop(self.tokens[dep].lemma, head_ref, dep))
                elif dep in self.entity:
                    facts.append(self._rel("nn", (head_ref, self.entity[dep]), (dep,)))
            elif e.label == "advmod" and e.head in self.event:
                facts.append(self._prop(self.tokens[dep].lemma, self.event[e.head], dep))
            elif e.label == "prep":
                head_ref = self.event.get(e.head) or self.entity.get(e.head)
                dep_ref = self.entity.get(dep)
                if head_ref and dep_ref:
                    span = self._prep_token(e, dep)
                    facts.append(self._rel(e.prep or "prep", (head_ref, dep_ref), span))
            elif e.label == "conj":
                head_ref = self.event.get(e.head) or self.entity.get(e.head)
                dep_ref = self.event.get(dep) or self.entity.get(dep)
                name, span = self._conj_token(e.head, dep)
                if head_ref and dep_ref:
                    facts.append(self._rel(name, (head_ref, dep_ref), span))
            elif e.label == "cond" and e.head in self.event and dep in self.event:
                facts.append(self._fact("if", None, None,
                                        (self.event[e.head], self.event[dep]),
                                        self._if_token_span()))
            elif e.label == "neg" and e.head in self.event:
                facts.append(self._fact("not", None, None, (self.event[e.head],), (dep,)))

    def _evt_fact(self, v: int):
        subj = obj = iobj = None
        for e in self.edges:
            if e.head != v:
                continue
            if e.label == "subj":
                subj = e.dep
            elif e.label == "obj":
                obj = e.dep
            elif e.label == "iobj":
                iobj = e.dep
        if subj is None:
            for e in self.edges:
                if e.label == "rel" and e.dep == v:
                    subj = e.head  # subject-gap relative clause
                    break
        args = []
        for node in (subj, obj, iobj):
            if node is not None and node in self.entity:
                args.append(self.entity[node])
        return self._fact("evt", self.tokens[v].lemma, None if self.goal_mode else None,
                          tuple(args), (v,), event=self.event[v])

    def _object(self, lemma: str, entity: str, index: int):
        return self._fact("object", lemma, None, (entity,), (index,))

    def _prop(self, lemma: str, ref: str, index: int):
        return self._fact("prop", lemma, None, (ref,), (index,))

    def _rel(self, name: str, args: tuple[str, ...], span: tuple[int, ...]):
        if self.goal_mode:
            return GoalConjunct("rel", name, (name,), args)
        return Fact("rel", name, None, args, self.sentence.sentence_id, span)

    def _fact(self, functor: str, lemma, _rid, args, span, event: str | None = None):
        if self.goal_mode:
            if functor in ("if", "not", "holds"):
                return None
            if functor == "evt":
                return GoalConjunct("evt", lemma, (lemma,), (event, *args))
            return GoalConjunct(functor, lemma, (lemma,), ("_", *args))
        if functor == "object":
            rid = self._next("o")
            return Fact("object", lemma, rid, args, self.sentence.sentence_id, span)
        if functor == "prop":
            rid = self._next("p")
            return Fact("prop", lemma, rid, args, self.sentence.sentence_id, span)
        if functor == "evt":
            return Fact("evt", lemma, event, args, self.sentence.sentence_id, span)
        return Fact(functor, None, None, args, self.sentence.sentence_id, span)

    # --- helpers

    def _prep_token(self, edge: Edge, dep: int) -> tuple[int, ...]:
        for i in range(dep - 1, -1, -1):
            if self.tokens[i].lemma == edge.prep:
                return (i,)
        return (dep,)

    def _conj_token(self, head: int, dep: int) -> tuple[str, tuple[int, ...]]:
        for i in range(dep - 1, head, -1):
            if self.tokens[i].lemma in ("and", "or"):
                return self.tokens[i].lemma, (i,)
        return "and", (dep,)

    def _if_token_span(self) -> tuple[int, ...]:
        for i, t in enumerate(self.tokens):
            if t.kind is TokenKind.WORD and t.lemma == "if":
                return (i,)
        return ()

    def _suppressed_events(self) -> set[int]:
        children: dict[int, list[int]] = {}
        for e in self.edges:
            children.setdefault(e.head, []).append(e.dep)
        seeds: set[int] = set()
        for e in self.edges:
            if e.label == "cond":
                seeds.add(e.head)
                seeds.add(e.dep)
            elif e.label == "neg":
                seeds.add(e.head)
        suppressed: set[int] = set()
        stack = list(seeds)
        while stack:
            node = stack.pop()
            if node in suppressed:
                continue
            suppressed.add(node)
            stack.extend(children.get(node, []))
        return suppressed


def derive_facts(parse: DependencyParse, sentence: TokenizedSentence,
                 lexicon: Lexicon | None = None) -> list[Fact]:
    """Translate one analysis of a declarative sentence into ground facts."""
    walker = _Walker(parse, sentence, lexicon or default_lexicon(), goal_mode=False)
    return [f for f in walker.run() if f is not None]


def derive_goal(parse: DependencyParse, sentence: TokenizedSentence,
                thesaurus=None, lexicon: Lexicon | None = None) -> Goal:
    """Translate a parsed question into a conjunctive goal.

    Content words pick up their synonym sets as disjunct groups; the answer
    variable is the wh-marked entity (or the main event for how-questions).

    Raises EmptyGoal when no content conjunct survives.
    """
    lexicon = lexicon or default_lexicon()
    walker = _Walker(parse, sentence, lexicon, goal_mode=True)
    raw = [c for c in walker.run() if c is not None]
    if not raw:
        raise EmptyGoal(sentence.sentence_id)

    conjuncts = []
    for c in raw:
        alternatives = (c.lemma,)
        if thesaurus is not None and c.functor in ("object", "evt", "prop"):
            alternatives = tuple(sorted(thesaurus.expand(c.lemma, "synonyms")))
        conjuncts.append(GoalConjunct(c.functor, c.lemma, alternatives, c.args))

    answer = _answer_variable(walker, conjuncts)
    return Goal(conjuncts=tuple(conjuncts), answer_var=answer)


def _answer_variable(walker: _Walker, conjuncts) -> str:
    tokens = walker.tokens
    wh_lemma = None
    wh_index = None
    for i, t in enumerate(tokens):
        if t.kind is TokenKind.WORD and "wh" in walker.lexicon.pos(t.lemma):
            wh_lemma, wh_index = t.lemma, i
            break
    if wh_lemma == "how":
        for i in sorted(walker.event):
            return walker.event[i]
    if wh_index is not None:
        if wh_index in walker.entity and walker.entity[wh_index] != "_":
            return walker.entity[wh_index]
        for i in sorted(walker.entity):
            if i > wh_index and walker.entity[i] != "_":
                return walker.entity[i]
    for c in conjuncts:
        for a in c.args:
            if a.startswith("X"):
                return a
    for c in conjuncts:
        for a in c.args:
            if a.startswith("E"):
                return a
    return "_"
