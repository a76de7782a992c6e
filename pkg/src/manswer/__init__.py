"""manswer: answer extraction over Unix man pages.

Sentences are parsed into ground logical facts with provenance; questions
become conjunctive goals answered by all-proofs search with a graceful
fall-back cascade, and hits come back as the exact sentences with graded,
proof-derived highlighting.
"""

from .docmodel import ManPage, MalformedSource, build_registries, parse_man_page
from .engine import CascadeConfig, Level, Proof, QueryResult, answer, \
    break_dependencies, keyword_search, prove_conjunctive
from .ingest import IndexSummary, index_corpus
from .kb import DuplicateInterpretation, KnowledgeBase, Thesaurus
from .lexicon import Lexicon, default_lexicon
from .logform import EmptyGoal, Fact, Goal, derive_facts, derive_goal
from .parser import AssociationModel, DependencyParse, KeywordBag, ParseForest, \
    apply_filter_rules, disambiguate_pp, parse
from .presenter import HighlightedSentence, UnknownPage, compute_intensities, \
    render_page, render_terminal, result_record
from .tokenizer import Registry, Token, TokenKind, TokenizedSentence, \
    normalize_token, split_sentences, tokenize

__version__ = "0.1.0"
