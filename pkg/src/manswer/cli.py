"""Operator entry points: index a corpus, query a KB, interactive loop, serve.

Exit codes for `query`: 0 with at least one hit, 1 with none, 2 when the
knowledge base is missing or unreadable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .engine import CascadeConfig, Level, answer
from .ingest import index_corpus
from .kb import KnowledgeBase, Thesaurus
from .lexicon import default_lexicon
from .logform import EmptyGoal
from .parser import AssociationModel
from .presenter import compute_intensities, result_record
from .server import make_server


@dataclass
class RunConfig:
    corpus_dir: str | None = None
    kb_path: str | None = None
    thesaurus_path: str | None = None
    model_path: str | None = None
    overrides_path: str | None = None
    min_hits: int = 1
    max_level: str = "L3"
    forced_level: str | None = None
    port: int = 8080
    static_dir: str | None = None
    color: bool = True

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        config = cls()
        for key, value in data.items():
            attr = key if hasattr(config, key) else _camel_to_snake(key)
            if hasattr(config, attr):
                setattr(config, attr, value)
        return config

    def cascade(self) -> CascadeConfig:
        return CascadeConfig(
            min_hits=self.min_hits,
            max_level=Level.parse(self.max_level),
            forced_level=Level.parse(self.forced_level) if self.forced_level else None,
        )


def _camel_to_snake(name: str) -> str:
    out = []
    for ch in name:
        if ch.isupper():
            out.append("_")
            out.append(ch.lower())
        else:
            out.append(ch)
    return "".join(out)


def _default_data(name: str) -> Path:
    return Path(str(resources.files("manswer.data").joinpath(name)))


def _load_thesaurus(config: RunConfig) -> Thesaurus:
    path = Path(config.thesaurus_path) if config.thesaurus_path else _default_data("thesaurus.txt")
    return Thesaurus.load(path)


def _load_model(config: RunConfig) -> AssociationModel:
    path = Path(config.model_path) if config.model_path else _default_data("assoc_model.txt")
    return AssociationModel.load(path)


def _load_kb(config: RunConfig) -> KnowledgeBase:
    path = Path(config.kb_path or "")
    if not path.is_file():
        print(f"error: knowledge base not found: {path}", file=sys.stderr)
        raise SystemExit(2)
    try:
        return KnowledgeBase.load(path, _load_thesaurus(config))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def cmd_index(config: RunConfig) -> int:
    kb, summary = index_corpus(
        Path(config.corpus_dir),
        thesaurus=_load_thesaurus(config),
        model=_load_model(config),
        overrides_path=Path(config.overrides_path) if config.overrides_path else None,
    )
    kb.save(Path(config.kb_path))
    print(
        "indexed {pages} pages, {sentences} sentences, {facts} facts "
        "({keyword_only} keyword-only sentences, {failures} failed files)".format(
            **summary.as_dict())
    )
    print(f"knowledge base written to {config.kb_path}")
    return 0


def _run_query(kb: KnowledgeBase, question: str, config: RunConfig,
               as_json: bool) -> int:
    lexicon = default_lexicon()
    model = _load_model(config)
    try:
        results = answer(question, kb, config.cascade(), lexicon, model)
    except EmptyGoal:
        print("no content words in question", file=sys.stderr)
        return 1
    executed = max((r.level for r in results),
                   default=config.cascade().forced_level or Level.L0_synonyms)
    if as_json:
        print(json.dumps(result_record(question, results, kb, executed),
                         ensure_ascii=False, indent=2))
    else:
        from .presenter import render_terminal
        for result in results:
            highlighted = compute_intensities(result, kb)
            rendered = render_terminal(highlighted, color=config.color)
            print(f"{result.sentence_id}\t[{result.level.short} "
                  f"score={result.score:g} proofs={result.proof_count}]\t{rendered}")
    return 0 if results else 1


def cmd_query(config: RunConfig, question: str, as_json: bool) -> int:
    kb = _load_kb(config)
    return _run_query(kb, question, config, as_json)


def cmd_repl(config: RunConfig) -> int:
    kb = _load_kb(config)
    print("manswer interactive query loop; :quit to exit")
    while True:
        try:
            line = input("? ").strip()
        except EOFError:
            print()
            return 0
        if line in (":quit", ":q", "exit"):
            return 0
        if not line:
            continue
        _run_query(kb, line, config, as_json=False)


def cmd_serve(config: RunConfig) -> int:
    kb = _load_kb(config)
    static_dir = Path(config.static_dir) if config.static_dir else None
    server = make_server(kb, port=config.port, config=config.cascade(),
                         model=_load_model(config), static_dir=static_dir)
    print(f"serving on http://127.0.0.1:{server.server_address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manswer",
        description="Answer plain-English questions about Unix man pages.",
    )
    parser.add_argument("--config", type=Path, help="JSON config file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="ingest a corpus directory into a KB file")
    p_index.add_argument("--corpus", required=True)
    p_index.add_argument("--out", required=True)
    p_index.add_argument("--thesaurus")
    p_index.add_argument("--model")
    p_index.add_argument("--overrides")

    p_query = sub.add_parser("query", help="answer one question")
    p_query.add_argument("kb")
    p_query.add_argument("question")
    p_query.add_argument("--json", action="store_true")
    p_query.add_argument("--min-hits", type=int)
    p_query.add_argument("--max-level")
    p_query.add_argument("--forced-level")
    p_query.add_argument("--thesaurus")
    p_query.add_argument("--model")
    p_query.add_argument("--no-color", action="store_true")

    p_repl = sub.add_parser("repl", help="interactive query loop")
    p_repl.add_argument("kb")
    p_repl.add_argument("--thesaurus")
    p_repl.add_argument("--model")
    p_repl.add_argument("--no-color", action="store_true")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("kb")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--thesaurus")
    p_serve.add_argument("--model")
    p_serve.add_argument("--static-dir")
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    mapping = {
        "corpus": "corpus_dir",
        "out": "kb_path",
        "kb": "kb_path",
        "thesaurus": "thesaurus_path",
        "model": "model_path",
        "overrides": "overrides_path",
        "min_hits": "min_hits",
        "max_level": "max_level",
        "forced_level": "forced_level",
        "port": "port",
        "static_dir": "static_dir",
    }
    for arg_name, attr in mapping.items():
        value = getattr(args, arg_name, None)
        if value is not None:
            setattr(config, attr, value)
    if getattr(args, "no_color", False):
        config.color = False
    return config


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_arg_parser().parse_args(argv)
    config = _merge_config(args)
    if args.command == "index":
        return cmd_index(config)
    if args.command == "query":
        return cmd_query(config, args.question, args.json)
    if args.command == "repl":
        return cmd_repl(config)
    if args.command == "serve":
        return cmd_serve(config)
    return 2


if __name__ == "__main__":
    sys.exit(main())
