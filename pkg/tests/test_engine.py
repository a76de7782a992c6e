import random

import pytest

from manswer.engine import CascadeConfig, Level, answer, break_dependencies, \
    keyword_search, parse_question, prove_conjunctive, retrieve_at_level
from manswer.ingest import index_corpus
from manswer.kb import KnowledgeBase, Thesaurus
from manswer.logform import EmptyGoal

from oracles import brute_force_proofs, engine_proof_keys

VERB_FORMS = [
    ("copy", "copies"), ("create", "creates"), ("remove", "removes"),
    ("move", "moves"), ("display", "displays"), ("print", "prints"),
    ("make", "makes"), ("change", "changes"), ("list", "lists"),
    ("archive", "archives"), ("compress", "compresses"),
]
NOUNS = ["file", "directory", "link", "message", "permission", "mode",
         "name", "tape", "data", "time", "entry"]


def generated_questions(count=50, seed=42):
    rng = random.Random(seed)
    questions = []
    for _ in range(count):
        base, third = rng.choice(VERB_FORMS)
        noun = rng.choice(NOUNS)
        if rng.random() < 0.5:
            questions.append(f"Which command {third} a {noun}?")
        else:
            questions.append(f"How can I {base} a {noun}?")
    return questions


def test_prove_conjunctive_single_proof_for_reference_query(kb):
    goal, _ = parse_question("Which command copies files?", kb)
    proofs = [p for p in prove_conjunctive(goal, kb, "synonyms")
              if p.matched_facts[0].sentence_id == "cp.1/DESCRIPTION/1"]
    assert len(proofs) == 1
    proof = proofs[0]
    assert len(proof.matched_facts) == len(goal.conjuncts)
    cp_fact = next(f for f, _ in kb.lookup("object", "cp"))
    assert proof.bindings[goal.answer_var] == cp_fact.args[0]


def test_two_interpretations_give_two_proofs(kb):
    goal, _ = parse_question("How can I create a directory?", kb)
    proofs = [p for p in prove_conjunctive(goal, kb, "synonyms")
              if p.matched_facts[0].sentence_id == "install.1/DESCRIPTION/1"]
    assert len(proofs) == 3  # one per stored interpretation
    assert sorted({p.interpretation for p in proofs}) == [1, 2, 3]


def test_unsatisfiable_goal_yields_nothing(kb):
    goal, _ = parse_question("Which command erases a tape?", kb)
    assert prove_conjunctive(goal, kb, "synonyms") == []


def test_prove_conjunctive_matches_brute_force(kb):
    for question in ["Which command copies files?",
                     "How can I create a directory?",
                     "Which command removes a directory?",
                     "How can I display the contents of a directory?"]:
        goal, _ = parse_question(question, kb)
        for mode in ("synonyms", "synonymsAndHyponyms"):
            got = engine_proof_keys(prove_conjunctive(goal, kb, mode))
            want = brute_force_proofs(goal, kb, mode)
            assert got == want, (question, mode)


def test_break_dependencies_retrieves_mkdir(kb):
    goal, _ = parse_question("How can I create a directory?", kb)
    sids = {p.matched_facts[0].sentence_id for p in break_dependencies(goal, kb)}
    assert "mkdir.1/DESCRIPTION/1" in sids


def test_break_dependencies_requires_every_conjunct(kb):
    goal, _ = parse_question("Which command erases a tape?", kb)
    # nothing in the corpus mentions erasing, so no sentence qualifies
    assert break_dependencies(goal, kb) == []


def test_break_dependencies_is_superset_of_conjunctive(kb):
    for question in generated_questions(20, seed=7):
        goal, _ = parse_question(question, kb)
        l0 = {p.matched_facts[0].sentence_id
              for p in prove_conjunctive(goal, kb, "synonyms")}
        l2 = {p.matched_facts[0].sentence_id for p in break_dependencies(goal, kb)}
        assert l0 <= l2, question


def test_keyword_search_scores_by_matched_lemma_count(kb, lexicon):
    _, sentence = parse_question("How can I create a directory?", kb)
    results = {r.sentence_id: r for r in keyword_search(sentence, kb, lexicon)}
    assert results["ln.1/DESCRIPTION/1"].score == 2.0
    assert results["ln.1/DESCRIPTION/2"].score == 2.0
    assert "tar.1/DESCRIPTION/1" not in results


def test_keyword_search_uses_tokenizer_enrichment(kb, lexicon):
    _, sentence = parse_question("Which command copies files?", kb)
    results = {r.sentence_id: r for r in keyword_search(sentence, kb, lexicon)}
    # "command" matches cp via its command-token enrichment, "file" via the
    # filename1 named variable
    assert results["cp.1/DESCRIPTION/1"].score == 3.0


def test_keyword_proof_covers_matching_words(kb, lexicon):
    _, sentence = parse_question("What is a hard link?", kb)
    results = {r.sentence_id: r for r in keyword_search(sentence, kb, lexicon)}
    hit = results["ln.1/DESCRIPTION/2"]
    covered = {i for _, i in hit.proofs[0].covered_words}
    tokens = kb.sentences[hit.sentence_id].sentence.tokens
    assert {tokens[i].surface for i in covered} == {"hard", "link"}


def test_cascade_stops_at_first_productive_level(kb, default_model):
    results = answer("Which command copies files?", kb, CascadeConfig(), model=default_model)
    assert results
    assert all(r.level is Level.L0_synonyms for r in results)
    sids = [r.sentence_id for r in results]
    assert "cp.1/DESCRIPTION/1" in sids


def test_cascade_escalates_to_l2(tmp_path, corpus_dir):
    import shutil
    for name in ["mkdir.1", "ln.1"]:
        shutil.copy(corpus_dir / name, tmp_path / name)
    th = Thesaurus([], [("directory", "file")])
    kb, _ = index_corpus(tmp_path, thesaurus=th)
    results = answer("How can I create a directory?", kb, CascadeConfig())
    assert [(r.sentence_id, r.level) for r in results] == \
        [("mkdir.1/DESCRIPTION/1", Level.L2_brokenDeps)]


def test_hyponym_level_retrieves_subtype(tmp_path):
    (tmp_path / "prune.1").write_text(
        ".TH PRUNE 1\n.SH NAME\nprune \\- remove directories\n"
        ".SH SYNOPSIS\n\\fBprune\\fR \\fIdirname\\fR\n"
        ".SH DESCRIPTION\n\\fBprune\\fR removes the directory.\n")
    th = Thesaurus([], [("directory", "file")])
    kb, _ = index_corpus(tmp_path, thesaurus=th)
    # "file" expands to its hyponym "directory" only at L1
    results = answer("Which command removes a file?", kb, CascadeConfig())
    assert results
    assert results[0].sentence_id == "prune.1/DESCRIPTION/1"
    assert results[0].level is Level.L1_hyponyms


def test_forced_level_three_reproduces_keyword_mode(kb, default_model):
    config = CascadeConfig(forced_level=Level.L3_keywords)
    results = answer("How can I create a directory?", kb, config, model=default_model)
    assert results and all(r.level is Level.L3_keywords for r in results)
    sids = {r.sentence_id for r in results}
    assert {"ln.1/DESCRIPTION/1", "ln.1/DESCRIPTION/2"} <= sids


def test_max_level_caps_the_cascade(kb, default_model):
    config = CascadeConfig(max_level=Level.L1_hyponyms)
    results = answer("What is a hard link?", kb, config, model=default_model)
    assert results == []


def test_unparseable_question_goes_straight_to_keywords(kb, default_model):
    results = answer("See tar Bedeutung?", kb, CascadeConfig(), model=default_model)
    assert results
    assert all(r.level is Level.L3_keywords for r in results)


def test_empty_goal_raises(kb):
    with pytest.raises(EmptyGoal):
        answer("the the the?", kb, CascadeConfig())


def test_min_hits_validation():
    with pytest.raises(ValueError):
        CascadeConfig(min_hits=0)


def test_answer_is_deterministic(kb, default_model):
    runs = [answer("How can I create a directory?", kb, CascadeConfig(min_hits=3),
                   model=default_model) for _ in range(2)]
    keys = [[(r.sentence_id, int(r.level), r.score, r.proof_count) for r in run]
            for run in runs]
    assert keys[0] == keys[1]


def test_results_ordered_by_level_score_sid(kb, default_model):
    results = answer("How can I create a directory?", kb,
                     CascadeConfig(min_hits=50), model=default_model)
    keys = [(int(r.level), -r.score, -r.proof_count, r.sentence_id) for r in results]
    assert keys == sorted(keys)


def test_cumulative_levels_non_decreasing(kb):
    for question in generated_questions(15, seed=3):
        goal, sentence = parse_question(question, kb)
        cumulative = set()
        previous = set()
        for level in Level:
            hits = {r.sentence_id for r in retrieve_at_level(level, kb, goal, sentence)}
            cumulative |= hits
            assert previous <= cumulative
            previous = set(cumulative)
