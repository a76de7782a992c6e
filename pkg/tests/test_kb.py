import pytest
from hypothesis import given, settings, strategies as st

from manswer.kb import DuplicateInterpretation, KnowledgeBase, Thesaurus, unify
from manswer.logform import GoalConjunct, derive_facts
from manswer.parser import AssociationModel, apply_filter_rules, disambiguate_pp, parse
from manswer.tokenizer import Registry, tokenize

COPY_MODEL = AssociationModel({("verb", "copy", "onto", "*"): 9,
                               ("noun", "filename1", "onto", "*"): 1})


def example_1():
    [s] = tokenize("cp copies the contents of filename1 onto filename2.",
                   Registry({"cp"}, {"filename1", "filename2"}),
                   sentence_prefix="cp.1/DESCRIPTION")
    forest = disambiguate_pp(apply_filter_rules(parse(s)), COPY_MODEL)
    return s, derive_facts(forest.parses[0], s)


def fresh_kb():
    kb = KnowledgeBase()
    sentence, facts = example_1()
    kb.register_sentence(sentence, "cp.1")
    kb.assert_sentence(facts, 1)
    return kb, sentence, facts


def test_assert_and_lookup():
    kb, _, _ = fresh_kb()
    assert len(kb.lookup("object", "cp")) == 1
    assert kb.sentences["cp.1/DESCRIPTION/1"].parse_count == 1


def test_duplicate_interpretation_rejected():
    kb, _, facts = fresh_kb()
    with pytest.raises(DuplicateInterpretation):
        kb.assert_sentence(facts, 1)


def test_two_interpretations_counted():
    kb, _, facts = fresh_kb()
    kb.assert_sentence(facts, 2)
    assert kb.sentences["cp.1/DESCRIPTION/1"].parse_count == 2
    assert kb.interpretations("cp.1/DESCRIPTION/1") == [1, 2]


def test_match_single_hit_with_bindings():
    kb, _, _ = fresh_kb()
    pattern = GoalConjunct("evt", "copy", ("copy",), ("E", "X", "Y"))
    hits = kb.match(pattern)
    assert len(hits) == 1
    fact, bindings = hits[0]
    assert bindings == {"E": "e1", "X": "x1", "Y": "x2"}


def test_match_union_over_missing_branch():
    kb, _, _ = fresh_kb()
    pattern = GoalConjunct("evt", "copy", ("copy", "duplicate"), ("E", "X", "Y"))
    assert len(kb.match(pattern, {"copy", "duplicate"})) == 1


def test_match_on_empty_kb():
    kb = KnowledgeBase()
    pattern = GoalConjunct("object", "directory", ("directory",), ("_", "D"))
    assert kb.match(pattern) == []


def test_match_agrees_with_linear_scan(kb):
    patterns = [
        GoalConjunct("object", "file", ("file",), ("_", "X")),
        GoalConjunct("evt", "create", ("create",), ("E", "X", "Y")),
        GoalConjunct("rel", "of", ("of",), ("A", "B")),
        GoalConjunct("object", "directory", ("directory",), ("_", "D")),
    ]
    for pattern in patterns:
        got = {(id(f)) for f, _ in kb.match(pattern, set(pattern.alternatives))}
        scan = {
            id(f) for f, _tag in kb.all_facts()
            if unify(pattern, f, {}, lambda x: x) is not None
            and f.lemma in pattern.alternatives
        }
        assert got == scan


def test_every_fact_bearing_sentence_has_interpretations(kb):
    fact_sids = {f.sentence_id for f, _ in kb.all_facts()}
    for sid in fact_sids:
        assert kb.sentences[sid].parse_count >= 1
        assert kb.interpretations(sid)


def test_index_is_exact(kb):
    for (functor, lemma), entries in list(kb._index.items())[:50]:
        for fact, _tag in entries:
            assert fact.functor == functor and fact.lemma == lemma
    for fact, tag in kb.all_facts():
        assert (fact, tag) in kb._index[(fact.functor, fact.lemma)]


# --- thesaurus ---------------------------------------------------------------


def make_thesaurus():
    return Thesaurus(
        [frozenset({"copy", "duplicate"}), frozenset({"directory", "folder"})],
        [("directory", "file"), ("link", "file"), ("symlink", "link")],
    )


def test_expand_synonyms_includes_self():
    th = make_thesaurus()
    assert th.expand("copy", "synonyms") == {"copy", "duplicate"}
    assert th.expand("frobnicate", "synonyms") == {"frobnicate"}


def test_expand_hyponyms_transitive():
    th = make_thesaurus()
    expanded = th.expand("file", "synonymsAndHyponyms")
    # independent transitive closure over the declared edges
    parents = {"directory": "file", "link": "file", "symlink": "link"}
    closure = {"file"}
    changed = True
    while changed:
        changed = False
        for child, parent in parents.items():
            if parent in closure and child not in closure:
                closure.add(child)
                changed = True
    closure |= {"folder"}  # synset member of a hyponym
    assert expanded == closure


def test_expand_monotone():
    th = make_thesaurus()
    for lemma in ["file", "copy", "directory", "unknown"]:
        assert th.expand(lemma, "synonyms") <= th.expand(lemma, "synonymsAndHyponyms")


def test_overlapping_synsets_rejected():
    with pytest.raises(ValueError):
        Thesaurus([frozenset({"a", "b"}), frozenset({"b", "c"})], [])


def test_hyponym_cycle_rejected():
    with pytest.raises(ValueError):
        Thesaurus([], [("a", "b"), ("b", "c"), ("c", "a")])


def test_thesaurus_file_round_trip(tmp_path):
    path = tmp_path / "th.txt"
    path.write_text("# manswer thesaurus 1\nsyn: copy, duplicate\nhyp: directory < file\n")
    th = Thesaurus.load(path)
    assert th.expand("copy") == {"copy", "duplicate"}
    assert "directory" in th.expand("file", "synonymsAndHyponyms")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("abcdef"), st.sampled_from("abcdef")),
                max_size=8))
def test_expand_monotone_property(edges):
    edges = [(c, p) for c, p in edges if c != p]
    try:
        th = Thesaurus([], edges)
    except ValueError:
        return  # cyclic draw, rejected by validation
    for lemma in "abcdef":
        assert th.expand(lemma, "synonyms") <= th.expand(lemma, "synonymsAndHyponyms")


# --- persistence -------------------------------------------------------------


def test_save_load_round_trip(kb, tmp_path, default_thesaurus):
    path = tmp_path / "kb.txt"
    kb.save(path)
    loaded = KnowledgeBase.load(path, default_thesaurus)

    assert sorted(f.dump_line() for f, _ in kb.all_facts()) == \
           sorted(f.dump_line() for f, _ in loaded.all_facts())
    assert {sid: info.parse_count for sid, info in kb.sentences.items()} == \
           {sid: info.parse_count for sid, info in loaded.sentences.items()}
    assert kb.pages == loaded.pages
    assert kb.global_registry == loaded.global_registry
    for functor, lemma in [("object", "file"), ("evt", "create"), ("rel", "of")]:
        assert [f.dump_line() for f, _ in kb.lookup(functor, lemma)] == \
               [f.dump_line() for f, _ in loaded.lookup(functor, lemma)]


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / "junk.txt"
    path.write_text("not a kb\n")
    with pytest.raises(ValueError):
        KnowledgeBase.load(path)
