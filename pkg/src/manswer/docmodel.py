"""Man-page source parsing: section segmentation, typography, registries.

Supports a frozen troff macro subset: .TH, .SH section heads, .B/.I whole-line
faces, and inline \\fB/\\fI/\\fR/\\fP font switches.  Formatting in real pages
is used unsystematically, so anything outside the subset degrades to plain
text rather than failing; the NAME/SYNOPSIS registries then repair tokens that
were formatted incorrectly in the body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .tokenizer import Registry, TokenKind, tokenize

__all__ = ["Face", "Section", "ManPage", "Registry", "MalformedSource", "parse_man_page",
           "build_registries", "read_overrides"]

Face = tuple[int, int, str]  # (start, end, "bold" | "italic") over the section body


class MalformedSource(Exception):
    """Raised when a source file contains no section macro at all."""


@dataclass
class Section:
    name: str
    body: str
    faces: list[Face] = field(default_factory=list)


@dataclass
class ManPage:
    name: str  # display name, e.g. "install.1"
    sections: list[Section]
    source_path: str = ""

    def section(self, name: str) -> Section | None:
        for s in self.sections:
            if s.name == name:
                return s
        return None


_FONT_SWITCH = re.compile(r"\\f([BIRP])")
_FACE_BY_LETTER = {"B": "bold", "I": "italic"}
_PARAGRAPH_MACROS = {"PP", "LP", "P", "br", "sp"}
_FACE_MACROS = {"B": "bold", "I": "italic"}


def _unescape(chunk: str) -> str:
    return chunk.replace("\\-", "-").replace("\\&", "").replace("\\\\", "\\")


class _BodyBuilder:
    def __init__(self) -> None:
        self.parts: list[str] = []
        self.length = 0
        self.faces: list[Face] = []

    def add(self, text: str, face: str | None = None) -> None:
        if not text:
            return
        start = self.length
        self.parts.append(text)
        self.length += len(text)
        if face in ("bold", "italic"):
            self.faces.append((start, self.length, face))

    def add_inline(self, line: str) -> None:
        """Append a text line, honoring \\fB/\\fI/\\fR/\\fP switches."""
        pos = 0
        face: str | None = None
        previous: str | None = None
        for m in _FONT_SWITCH.finditer(line):
            self.add(_unescape(line[pos : m.start()]), face)
            letter = m.group(1)
            if letter == "P":
                face, previous = previous, face
            else:
                previous = face
                face = _FACE_BY_LETTER.get(letter)
            pos = m.end()
        self.add(_unescape(line[pos:]), face)

    def newline(self) -> None:
        if self.length:
            self.parts.append("\n")
            self.length += 1

    def finish(self) -> tuple[str, list[Face]]:
        return "".join(self.parts), self.faces


def parse_man_page(source: str, name: str = "page.1", source_path: str = "") -> ManPage:
    """Parse man-page source into named sections with typography spans."""
    sections: list[Section] = []
    current_name: str | None = None
    builder = _BodyBuilder()

    def flush() -> None:
        nonlocal builder
        if current_name is not None:
            body, faces = builder.finish()
            sections.append(Section(current_name, body, faces))
        builder = _BodyBuilder()

    for line in source.splitlines():
        if line.startswith(".\\\""):
            continue
        if line.startswith("."):
            macro, _, rest = line[1:].partition(" ")
            rest = rest.strip()
            if macro == "TH":
                continue
            if macro == "SH":
                flush()
                current_name = rest.strip('"').upper() or "UNNAMED"
                continue
            if current_name is None:
                continue
            if macro in _FACE_MACROS:
                builder.newline()
                builder.add(_unescape(rest.strip('"')), _FACE_MACROS[macro])
                continue
            if macro in _PARAGRAPH_MACROS:
                builder.newline()
                continue
            # Unsupported macro: drop it, keep its argument text as plain.
            if rest:
                builder.newline()
                builder.add(_unescape(rest))
            continue
        if current_name is None:
            continue
        builder.newline()
        builder.add_inline(line)

    flush()
    if not sections:
        raise MalformedSource(f"{name}: no section macro found")
    return ManPage(name=name, sections=sections, source_path=source_path)


_NAME_SEPARATORS = re.compile(r"\s+[-—–]{1,2}\s+|\s+\\-\s+")


def _name_headwords(body: str) -> list[str]:
    head = _NAME_SEPARATORS.split(body, maxsplit=1)[0]
    words = [w.strip() for w in head.replace(",", " ").split()]
    return [w for w in words if w and re.fullmatch(r"[A-Za-z][\w.+\-]*", w)]


def build_registries(page: ManPage) -> Registry:
    """Collect command and argument names from NAME and SYNOPSIS.

    Commands are the NAME headwords plus every bold token of SYNOPSIS;
    argument names are the italic tokens of SYNOPSIS.
    """
    commands: set[str] = set()
    argument_names: set[str] = set()

    name_section = page.section("NAME")
    if name_section is not None:
        commands.update(_name_headwords(name_section.body))

    synopsis = page.section("SYNOPSIS")
    if synopsis is not None:
        for sentence in tokenize(synopsis.body, Registry(), synopsis.faces):
            for token in sentence.tokens:
                if token.kind is TokenKind.COMMAND:
                    commands.add(token.surface)
                elif token.kind is TokenKind.VARNAME:
                    argument_names.add(token.surface)
    return Registry(commands, argument_names)


def read_overrides(path: Path) -> Registry:
    """Manual registry additions, one per line: ``cmd: name`` or ``arg: name``."""
    commands: set[str] = set()
    argument_names: set[str] = set()
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        prefix, _, value = line.partition(":")
        value = value.strip()
        if prefix.strip() == "cmd" and value:
            commands.add(value)
        elif prefix.strip() == "arg" and value:
            argument_names.add(value)
    return Registry(commands, argument_names)
