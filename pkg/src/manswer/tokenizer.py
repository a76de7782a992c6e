"""Tokenization and normalization of man-page section text.

Technical prose is full of things a plain word tokenizer mangles: path names
with internal periods, command options, %-escapes, named variables, tokens
like C++ or name@domain.  The scanner here works on maximal non-space runs,
peels genuine sentence punctuation off the end of a run, and only then decides
what the core is.  Classification priority is registry match > typography >
pattern > word, so a known command name is recognized even when the source
formatting is wrong.

Every non-whitespace character ends up inside exactly one token span, and the
original text can be rebuilt byte-for-byte from spans plus the whitespace
between them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum

from .lexicon import Lexicon, default_lexicon


class TokenKind(str, Enum):
    WORD = "word"
    COMMAND = "command"
    OPTION = "option"
    PATH = "path"
    VARNAME = "varname"
    SPECIAL = "special"
    PUNCT = "punct"
    NUMBER = "number"


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    kind: TokenKind
    typography: frozenset[str]
    pos: tuple[int, int]  # (sentence index, word index), 0-based
    char_span: tuple[int, int]  # byte offsets into the section source

    @property
    def lemma(self) -> str:
        """Content lemma used by logical forms: the .com/.arg suffix is a
        parser-level marker and is not part of the word's meaning."""
        if self.kind is TokenKind.COMMAND and self.normalized.endswith(".com"):
            return self.normalized[:-4]
        if self.kind is TokenKind.VARNAME and self.normalized.endswith(".arg"):
            return self.normalized[:-4]
        return self.normalized


@dataclass(frozen=True)
class TokenizedSentence:
    tokens: tuple[Token, ...]
    sentence_id: str  # e.g. "install.1/DESCRIPTION/1"

    @property
    def page(self) -> str:
        return self.sentence_id.split("/", 1)[0]


_PATH_RE = re.compile(r"/?[\w.+\-?*~]+(?:/[\w.+\-?*~]*)+/?$")
_OPTION_RE = re.compile(r"-[A-Za-z0-9][A-Za-z0-9\-]*$")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)*[A-Za-z]*$")
_ELLIPSIS_RE = re.compile(r"\.{3,}$")
_ANGLE_RE = re.compile(r"<[^<>]+>$")
_ALLCAPS_RE = re.compile(r"[A-Z][A-Z0-9+\-]+$")
_DOTWORD_RE = re.compile(r"\.?[A-Za-z0-9_+\-]+(?:\.[A-Za-z0-9_+\-]+)*\.?$")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9'\-]*$")
_SPECIAL_CHARS = set("@!^_%?=\\|$&*#")
_PUNCT_CHARS = set("()[]{}<>\"'`.,;:?!")
_STRIPPABLE = set(".,;:?!")


def _is_path(core: str) -> bool:
    return "/" in core and bool(_PATH_RE.fullmatch(core))


def _is_special_shape(core: str) -> bool:
    if _ELLIPSIS_RE.fullmatch(core) or _ANGLE_RE.fullmatch(core):
        return True
    if any(c in _SPECIAL_CHARS for c in core) or "++" in core:
        return True
    if len(core) >= 2 and _ALLCAPS_RE.fullmatch(core):
        return True
    if "." in core and _DOTWORD_RE.fullmatch(core) and not _NUMBER_RE.fullmatch(core):
        return True
    return False


def _segment_core(text: str, start: int, end: int) -> list[tuple[int, int]]:
    """Split a punctuation-stripped core into token spans."""
    core = text[start:end]
    if not core:
        return []
    if (
        _is_path(core)
        or _OPTION_RE.fullmatch(core)
        or _NUMBER_RE.fullmatch(core)
        or _is_special_shape(core)
        or _WORD_RE.fullmatch(core)
        or len(core) == 1
    ):
        return [(start, end)]
    # Mixed run such as "tar(1)" or "files]": break at punctuation characters,
    # keeping "..." groups together, and segment the remaining stretches.
    spans: list[tuple[int, int]] = []
    i = start
    while i < end:
        ch = text[i]
        if ch == "." and text[i : i + 3] == "...":
            j = i
            while j < end and text[j] == ".":
                j += 1
            spans.append((i, j))
            i = j
        elif ch in _PUNCT_CHARS:
            spans.append((i, i + 1))
            i += 1
        else:
            j = i
            while j < end and text[j] not in _PUNCT_CHARS:
                j += 1
            spans.append((i, j))
            i = j
    return spans


def _strip_trailing_punct(text: str, start: int, end: int) -> tuple[int, list[int]]:
    """Peel sentence punctuation off the end of a run.

    Returns the new core end plus positions of stripped single-char tokens.
    A "?" or "!" stays inside the token when it follows a word character and
    is itself followed by a lowercase continuation (the "cat? or fmt?" cases).
    """
    stripped: list[int] = []
    core_end = end
    while core_end > start:
        ch = text[core_end - 1]
        if ch not in _STRIPPABLE:
            break
        if ch in "?!":
            prev = text[core_end - 2] if core_end - 1 > start else ""
            nxt1 = text[core_end] if core_end < len(text) else ""
            nxt2 = text[core_end + 1] if core_end + 1 < len(text) else ""
            attaches = (prev.isalnum()) and (
                (nxt1 == " " and nxt2.islower()) or (nxt1 != "" and nxt1 in ".,;")
            )
            if attaches:
                break
        if ch == "." and core_end - 2 >= start and text[core_end - 2] == ".":
            break  # ellipsis, handled by the core segmentation
        stripped.append(core_end - 1)
        core_end -= 1
    return core_end, stripped


class Registry:
    """Command and argument names harvested from NAME/SYNOPSIS sections.

    Command matching is case-sensitive, argument-name matching is not.
    Defined here so the tokenizer has no import cycle with the doc model.
    """

    def __init__(self, commands: set[str] | None = None, argument_names: set[str] | None = None):
        self.commands: set[str] = set(commands or ())
        self.argument_names: set[str] = set(argument_names or ())
        self._args_lower = {a.lower() for a in self.argument_names}

    def is_command(self, surface: str) -> bool:
        return surface in self.commands

    def is_argument(self, surface: str) -> bool:
        return surface.lower() in self._args_lower

    def merged(self, other: "Registry") -> "Registry":
        return Registry(self.commands | other.commands, self.argument_names | other.argument_names)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Registry)
            and self.commands == other.commands
            and self.argument_names == other.argument_names
        )

    def __repr__(self) -> str:
        return f"Registry(commands={sorted(self.commands)!r}, argument_names={sorted(self.argument_names)!r})"


def _faces_over(faces, start: int, end: int) -> frozenset[str]:
    found = set()
    covered = 0
    for f_start, f_end, face in faces:
        lo, hi = max(start, f_start), min(end, f_end)
        if lo < hi:
            found.add(face)
            covered += hi - lo
    if covered < end - start:
        found.add("plain")
    return frozenset(found or {"plain"})


def _fully(faces, start: int, end: int, face: str) -> bool:
    for f_start, f_end, f in faces:
        if f == face and f_start <= start and end <= f_end:
            return True
    return False


def normalize_token(surface: str, kind: TokenKind, lexicon: Lexicon | None = None) -> str:
    """Normalized form for a classified surface; idempotent for every kind."""
    lexicon = lexicon or default_lexicon()
    if kind is TokenKind.COMMAND:
        return surface if surface.endswith(".com") else surface + ".com"
    if kind is TokenKind.VARNAME:
        return surface if surface.endswith(".arg") else surface + ".arg"
    if kind is TokenKind.WORD:
        return lexicon.lemmatize(surface)
    return surface


def _classify(
    core: str,
    span: tuple[int, int],
    registry: Registry,
    faces,
    prev: tuple[TokenKind, str] | None,
) -> TokenKind:
    if len(core) == 1 and core in _PUNCT_CHARS:
        return TokenKind.PUNCT
    wordlike = bool(_WORD_RE.fullmatch(core))
    if registry.is_command(core):
        return TokenKind.COMMAND
    if registry.is_argument(core) and wordlike:
        return TokenKind.VARNAME
    if wordlike and _fully(faces, span[0], span[1], "bold"):
        return TokenKind.COMMAND
    if wordlike and _fully(faces, span[0], span[1], "italic"):
        return TokenKind.VARNAME
    if _is_path(core):
        return TokenKind.PATH
    if _OPTION_RE.fullmatch(core):
        # A dash-prefixed token is an option only at the start of a bracketed
        # synopsis group or right after a command or another option.
        if prev is not None and (prev[0] in (TokenKind.COMMAND, TokenKind.OPTION) or prev[1] == "["):
            return TokenKind.OPTION
        return TokenKind.SPECIAL
    if _NUMBER_RE.fullmatch(core):
        return TokenKind.NUMBER
    if _is_special_shape(core):
        return TokenKind.SPECIAL
    if wordlike:
        return TokenKind.WORD
    return TokenKind.SPECIAL


def split_sentences(tokens: list[Token]) -> list[list[Token]]:
    """Group a flat classified token stream into sentences.

    Splits only at sentence-final punct tokens; periods living inside path or
    special tokens never split.  Every token lands in exactly one sentence.
    """
    sentences: list[list[Token]] = []
    buffer: list[Token] = []
    for token in tokens:
        buffer.append(token)
        if token.kind is TokenKind.PUNCT and token.surface in (".", "?", "!"):
            if any(t.kind is not TokenKind.PUNCT for t in buffer):
                sentences.append(buffer)
            elif sentences:
                sentences[-1].extend(buffer)
            else:
                sentences.append(buffer)
            buffer = []
    if buffer:
        if any(t.kind is not TokenKind.PUNCT for t in buffer) or not sentences:
            sentences.append(buffer)
        else:
            sentences[-1].extend(buffer)
    return sentences


def tokenize(
    section_text: str,
    registry: Registry | None = None,
    faces: list[tuple[int, int, str]] | None = None,
    sentence_prefix: str = "adhoc/TEXT",
    lexicon: Lexicon | None = None,
) -> list[TokenizedSentence]:
    """Tokenize one section's text into classified, normalized sentences."""
    registry = registry or Registry()
    faces = faces or []
    lexicon = lexicon or default_lexicon()

    raw: list[Token] = []
    prev: tuple[TokenKind, str] | None = None
    n = len(section_text)
    i = 0
    while i < n:
        if section_text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not section_text[j].isspace():
            j += 1
        core_end, stripped_punct = _strip_trailing_punct(section_text, i, j)
        spans = _segment_core(section_text, i, core_end)
        spans.extend((p, p + 1) for p in sorted(stripped_punct))
        for start, end in spans:
            core = section_text[start:end]
            kind = _classify(core, (start, end), registry, faces, prev)
            token = Token(
                surface=core,
                normalized=normalize_token(core, kind, lexicon),
                kind=kind,
                typography=_faces_over(faces, start, end),
                pos=(0, 0),
                char_span=(start, end),
            )
            raw.append(token)
            prev = (kind, core)
        i = j

    sentences: list[TokenizedSentence] = []
    for s_index, group in enumerate(split_sentences(raw)):
        placed = tuple(
            replace(token, pos=(s_index, w_index)) for w_index, token in enumerate(group)
        )
        sentences.append(
            TokenizedSentence(tokens=placed, sentence_id=f"{sentence_prefix}/{s_index + 1}")
        )
    return sentences


# --- annotated-token dump: one token per line, used by corpus regression tests


def dump_tokens(sentences: list[TokenizedSentence]) -> str:
    lines: list[str] = []
    for sentence in sentences:
        lines.append(f"# {sentence.sentence_id}")
        for t in sentence.tokens:
            lines.append(
                f"{t.surface}\t{t.kind.value}\t{t.normalized}\t{t.char_span[0]}:{t.char_span[1]}"
            )
    return "\n".join(lines) + ("\n" if lines else "")


def parse_token_dump(text: str) -> list[TokenizedSentence]:
    sentences: list[TokenizedSentence] = []
    current: list[Token] = []
    current_id: str | None = None

    def flush() -> None:
        nonlocal current, current_id
        if current_id is not None:
            sentences.append(TokenizedSentence(tokens=tuple(current), sentence_id=current_id))
        current = []

    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("# "):
            flush()
            current_id = line[2:].strip()
            continue
        surface, kind, normalized, span = line.split("\t")
        start, _, end = span.partition(":")
        current.append(
            Token(
                surface=surface,
                normalized=normalized,
                kind=TokenKind(kind),
                typography=frozenset({"plain"}),
                pos=(len(sentences), len(current)),
                char_span=(int(start), int(end)),
            )
        )
    flush()
    return sentences
