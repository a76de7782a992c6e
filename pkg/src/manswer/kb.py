"""Ground-fact knowledge base with provenance, thesaurus, and persistence.

Facts are stored per (sentence, interpretation) and indexed by functor and
lemma; all surviving interpretations of an ambiguous sentence are kept, so
the same sentence can be retrieved through several proof paths.  The store
is written once during ingestion and queried as an immutable snapshot.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .logform import Fact, GoalConjunct, parse_fact_line
from .tokenizer import Registry, Token, TokenKind, TokenizedSentence

KB_FORMAT_HEADER = "#manswer-kb 1"
THESAURUS_HEADER = "# manswer thesaurus 1"

# Relations whose linked entities count as interchangeable during proof
# search: "of" gives the partitive reading (copying the contents of a file
# involves the file) and "and"/"or" give conjunction distributivity.
BRIDGING_RELATIONS = {"of", "and", "or"}


class DuplicateInterpretation(Exception):
    """The same (sentenceId, interpretation) was asserted twice."""


class Thesaurus:
    """Synonym sets and an acyclic hyponym relation over lemmas."""

    def __init__(self, synsets: list[frozenset[str]] | None = None,
                 hypernym_edges: list[tuple[str, str]] | None = None):
        self.synsets = synsets or []
        self.hypernym_edges = hypernym_edges or []  # (child, parent)
        self._synset_of: dict[str, frozenset[str]] = {}
        seen: set[str] = set()
        for synset in self.synsets:
            if synset & seen:
                raise ValueError(f"synsets are not disjoint: {sorted(synset & seen)}")
            seen |= synset
            for lemma in synset:
                self._synset_of[lemma] = synset
        self._children: dict[str, set[str]] = {}
        for child, parent in self.hypernym_edges:
            self._children.setdefault(parent, set()).add(child)
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        state: dict[str, int] = {}

        def visit(node: str) -> None:
            state[node] = 1
            for child in self._children.get(node, ()):
                if state.get(child) == 1:
                    raise ValueError(f"hyponym cycle through {child!r}")
                if child not in state:
                    visit(child)
            state[node] = 2

        for parent in list(self._children):
            if parent not in state:
                visit(parent)

    @classmethod
    def load(cls, path: Path) -> "Thesaurus":
        synsets: list[frozenset[str]] = []
        edges: list[tuple[str, str]] = []
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("syn:"):
                members = frozenset(w.strip() for w in line[4:].split(",") if w.strip())
                if members:
                    synsets.append(members)
            elif line.startswith("hyp:"):
                child, _, parent = line[4:].partition("<")
                if child.strip() and parent.strip():
                    edges.append((child.strip(), parent.strip()))
        return cls(synsets, edges)

    @classmethod
    def empty(cls) -> "Thesaurus":
        return cls()

    def synset(self, lemma: str) -> frozenset[str]:
        return self._synset_of.get(lemma, frozenset({lemma}))

    def expand(self, lemma: str, mode: str = "synonyms") -> set[str]:
        """Synonym set of a lemma, optionally closed under hyponymy."""
        base = set(self.synset(lemma)) | {lemma}
        if mode == "synonyms":
            return base
        if mode != "synonymsAndHyponyms":
            raise ValueError(f"unknown expansion mode {mode!r}")
        out = set(base)
        frontier = list(base)
        while frontier:
            parent = frontier.pop()
            for child in self._children.get(parent, ()):
                for member in self.synset(child) | {child}:
                    if member not in out:
                        out.add(member)
                        frontier.append(member)
        return out


@dataclass
class SentenceInfo:
    sentence: TokenizedSentence
    page: str
    parse_count: int = 0


class KnowledgeBase:
    def __init__(self, thesaurus: Thesaurus | None = None):
        self.sentences: dict[str, SentenceInfo] = {}
        self.pages: dict[str, list[tuple[str, str]]] = {}  # name -> [(section, body)]
        self.global_registry = Registry()
        self.thesaurus = thesaurus or Thesaurus.empty()
        self._interpretations: dict[tuple[str, int], list[Fact]] = {}
        self._index: dict[tuple[str, str | None], list[tuple[Fact, int]]] = {}
        self._compat_cache: dict[tuple[str, int], dict[str, str]] = {}

    # --- ingestion

    def register_sentence(self, sentence: TokenizedSentence, page: str) -> None:
        self.sentences[sentence.sentence_id] = SentenceInfo(sentence, page)

    def assert_sentence(self, facts: list[Fact], interpretation: int) -> None:
        """Store one interpretation's facts and index them.

        All facts must share one sentenceId; re-asserting the same
        (sentenceId, interpretation) raises DuplicateInterpretation.
        """
        if not facts:
            return
        sids = {f.sentence_id for f in facts}
        if len(sids) != 1:
            raise ValueError(f"facts span several sentences: {sorted(sids)}")
        sid = sids.pop()
        key = (sid, interpretation)
        if key in self._interpretations:
            raise DuplicateInterpretation(f"{sid} interpretation {interpretation}")
        self._interpretations[key] = list(facts)
        for fact in facts:
            self._index.setdefault((fact.functor, fact.lemma), []).append(
                (fact, interpretation))
        info = self.sentences.get(sid)
        if info is not None:
            info.parse_count += 1
        self._compat_cache.pop(key, None)

    # --- queries

    def lookup(self, functor: str, lemma: str | None) -> list[tuple[Fact, int]]:
        """Exact index lookup: facts with this functor and lemma."""
        return list(self._index.get((functor, lemma), ()))

    def match(self, pattern: GoalConjunct, lemmas: set[str] | None = None
              ) -> list[tuple[Fact, dict[str, str]]]:
        """All stored facts unifiable with the pattern, with their bindings."""
        lemma_set = lemmas if lemmas is not None else set(pattern.alternatives)
        out: list[tuple[Fact, dict[str, str]]] = []
        for lemma in sorted(lemma_set):
            for fact, _tag in self.lookup(pattern.functor, lemma):
                bindings = unify(pattern, fact, {}, lambda x: x)
                if bindings is not None:
                    out.append((fact, bindings))
        return out

    def expand(self, lemma: str, mode: str = "synonyms") -> set[str]:
        return self.thesaurus.expand(lemma, mode)

    def interpretations(self, sid: str) -> list[int]:
        return sorted(tag for (s, tag) in self._interpretations if s == sid)

    def facts_of(self, sid: str, interpretation: int) -> list[Fact]:
        return list(self._interpretations.get((sid, interpretation), ()))

    def all_facts(self) -> list[tuple[Fact, int]]:
        return [(f, tag) for (sid, tag), facts in sorted(self._interpretations.items())
                for f in facts]

    def fact_count(self) -> int:
        return sum(len(v) for v in self._interpretations.values())

    def entity_find(self, sid: str, interpretation: int):
        """Union-find over bridged entities of one interpretation scope."""
        key = (sid, interpretation)
        roots = self._compat_cache.get(key)
        if roots is None:
            parent: dict[str, str] = {}

            def find(x: str) -> str:
                while parent.get(x, x) != x:
                    parent[x] = parent.get(parent[x], parent[x])
                    x = parent[x]
                return x

            for fact in self._interpretations.get(key, ()):
                if fact.functor == "rel" and fact.lemma in BRIDGING_RELATIONS:
                    a, b = find(fact.args[0]), find(fact.args[1])
                    if a != b:
                        parent[a] = b
            roots = {x: find(x) for x in parent}
            self._compat_cache[key] = roots
        mapping = roots
        return lambda x: mapping.get(x, x)

    # --- persistence

    def save(self, path: Path) -> None:
        lines = [KB_FORMAT_HEADER]
        for name in sorted(self.global_registry.commands):
            lines.append(f"reg\tcmd\t{name}")
        for name in sorted(self.global_registry.argument_names):
            lines.append(f"reg\targ\t{name}")
        for page, sections in sorted(self.pages.items()):
            lines.append(f"page\t{page}\t{json.dumps(sections, ensure_ascii=False)}")
        for sid, info in sorted(self.sentences.items()):
            tokens = [[t.surface, t.kind.value, t.normalized, t.char_span[0], t.char_span[1]]
                      for t in info.sentence.tokens]
            lines.append(f"sent\t{sid}\t{info.page}\t{json.dumps(tokens, ensure_ascii=False)}")
        for (sid, tag), facts in sorted(self._interpretations.items()):
            lines.append(f"interp\t{sid}\t{tag}")
            for fact in facts:
                lines.append(fact.dump_line())
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path, thesaurus: Thesaurus | None = None) -> "KnowledgeBase":
        text = Path(path).read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines or lines[0] != KB_FORMAT_HEADER:
            raise ValueError(f"{path}: not a manswer knowledge base")
        kb = cls(thesaurus)
        pending: list[Fact] = []
        pending_key: tuple[str, int] | None = None

        def flush() -> None:
            nonlocal pending, pending_key
            if pending_key is not None and pending:
                kb.assert_sentence(pending, pending_key[1])
            pending, pending_key = [], None

        for line in lines[1:]:
            if not line.strip():
                continue
            tag_field = line.split("\t", 1)[0]
            if tag_field == "reg":
                _, kind, name = line.split("\t")
                if kind == "cmd":
                    kb.global_registry.commands.add(name)
                else:
                    kb.global_registry.argument_names.add(name)
            elif tag_field == "page":
                _, name, payload = line.split("\t", 2)
                kb.pages[name] = [tuple(pair) for pair in json.loads(payload)]
            elif tag_field == "sent":
                _, sid, page, payload = line.split("\t", 3)
                raw = json.loads(payload)
                tokens = tuple(
                    Token(surface=s, normalized=n, kind=TokenKind(k),
                          typography=frozenset({"plain"}), pos=(0, i),
                          char_span=(start, end))
                    for i, (s, k, n, start, end) in enumerate(raw)
                )
                kb.register_sentence(TokenizedSentence(tokens, sid), page)
            elif tag_field == "interp":
                flush()
                _, sid, tag = line.split("\t")
                pending_key = (sid, int(tag))
            else:
                pending.append(parse_fact_line(line))
        flush()
        # rebuild the argument-name cache after direct set mutation
        kb.global_registry = Registry(kb.global_registry.commands,
                                      kb.global_registry.argument_names)
        return kb


def unify(pattern: GoalConjunct, fact: Fact, bindings: dict[str, str], find
          ) -> dict[str, str] | None:
    """Match one pattern against one fact under existing bindings.

    Pattern variables start with an uppercase letter; "_" matches anything.
    Two ground ids are compatible when `find` maps them to one root, which is
    how of/and/or bridging enters proof search.
    """
    if fact.functor != pattern.functor:
        return None
    if pattern.functor == "rel":
        pairs = list(zip(pattern.args, fact.args))
        if len(pattern.args) != len(fact.args):
            return None
    else:
        if len(pattern.args) - 1 != len(fact.args):
            return None
        pairs = [(pattern.args[0], fact.reified_id or "")]
        pairs.extend(zip(pattern.args[1:], fact.args))
    new = dict(bindings)
    for pv, fv in pairs:
        if pv == "_" or pv == "":
            continue
        if pv[0].isupper():
            if pv in new:
                if find(new[pv]) != find(fv):
                    return None
            else:
                new[pv] = fv
        elif find(pv) != find(fv):
            return None
    return new
