"""Word-level resources: part-of-speech table, lemmatizer, variable-type map.

The lemmatizer is a small exception lexicon plus suffix stripping; it is not
a morphological analyzer, just enough to make lemma matching work in the
man-page domain.  Its one hard contract is idempotence: lemmatize(lemmatize(w))
== lemmatize(w) for every input, which the suffix rules guarantee by iterating
to a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

OPEN_CLASS = frozenset({"noun", "verb", "adj", "adv"})

_SIBILANT_ENDINGS = ("ss", "sh", "ch", "x", "z")


def _data_text(name: str) -> str:
    return resources.files("manswer.data").joinpath(name).read_text(encoding="utf-8")


def _parse_table(text: str) -> dict[str, str]:
    table: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("\t")
        table[key.strip()] = value.strip()
    return table


@dataclass
class Lexicon:
    """POS table keyed by lemma, irregular-form map, and variable-type map."""

    pos_table: dict[str, frozenset[str]]
    lemma_exceptions: dict[str, str]
    var_types: dict[str, str]

    @classmethod
    def load(
        cls,
        lexicon_path: Path | None = None,
        exceptions_path: Path | None = None,
        vartypes_path: Path | None = None,
    ) -> "Lexicon":
        lex_text = lexicon_path.read_text() if lexicon_path else _data_text("lexicon.txt")
        exc_text = exceptions_path.read_text() if exceptions_path else _data_text("lemma_exceptions.txt")
        var_text = vartypes_path.read_text() if vartypes_path else _data_text("vartypes.txt")
        pos_table = {
            lemma: frozenset(p.strip() for p in poses.split(","))
            for lemma, poses in _parse_table(lex_text).items()
        }
        return cls(
            pos_table=pos_table,
            lemma_exceptions=_parse_table(exc_text),
            var_types=_parse_table(var_text),
        )

    def pos(self, lemma: str) -> frozenset[str]:
        """POS set for a lemma; unknown open-class words default to noun."""
        return self.pos_table.get(lemma.lower(), frozenset({"noun"}))

    def is_open_class(self, lemma: str) -> bool:
        return bool(self.pos(lemma) & OPEN_CLASS)

    def lemmatize(self, surface: str) -> str:
        word = surface.lower()
        for _ in range(4):
            stripped = self._strip_once(word)
            if stripped == word:
                return word
            word = stripped
        return word

    def _strip_once(self, word: str) -> str:
        if word in self.lemma_exceptions:
            return self.lemma_exceptions[word]
        if word in self.pos_table:
            return word
        if len(word) <= 3:
            return word
        if word.endswith("ies") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith("s") and not word.endswith(("ss", "us", "is")):
            if word.endswith("es"):
                stem = word[:-2]
                if stem.endswith(_SIBILANT_ENDINGS):
                    return stem
                if stem in self.pos_table:
                    return stem
            return word[:-1]
        if word.endswith("ied"):
            return word[:-3] + "y"
        if word.endswith("ed") and len(word) > 4:
            return self._restore_stem(word[:-2])
        if word.endswith("ing") and len(word) > 5:
            return self._restore_stem(word[:-3])
        return word

    def _restore_stem(self, stem: str) -> str:
        # "creat" -> "create", "stripp" -> "strip"; prefer lexicon evidence.
        if stem in self.pos_table:
            return stem
        if stem + "e" in self.pos_table:
            return stem + "e"
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
            return stem[:-1]
        return stem

    def var_type(self, surface: str) -> str | None:
        """Entity type denoted by a named variable, e.g. filename1 -> file."""
        stem = surface.lower().rstrip("0123456789")
        mapped = self.var_types.get(stem)
        if mapped and mapped != surface.lower():
            return mapped
        return None


_default: Lexicon | None = None


def default_lexicon() -> Lexicon:
    global _default
    if _default is None:
        _default = Lexicon.load()
    return _default
