import pytest

from manswer.kb import unify
from manswer.logform import EmptyGoal, derive_facts, derive_goal, parse_fact_line
from manswer.parser import apply_filter_rules, disambiguate_pp, parse, AssociationModel
from manswer.tokenizer import Registry, tokenize
from manswer.kb import Thesaurus

from oracles import alpha_equivalent


def facts_for(text, commands=(), args=(), model=None):
    [s] = tokenize(text, Registry(set(commands), set(args)))
    forest = disambiguate_pp(apply_filter_rules(parse(s)), model)
    assert forest.parsed, text
    return [derive_facts(p, s) for p in forest.parses], s


def expected(lines, sid="adhoc/TEXT/1"):
    return [parse_fact_line(f"{line}/{sid}\t0") for line in lines]


COPY_MODEL = AssociationModel({("verb", "copy", "onto", "*"): 9,
                               ("noun", "filename1", "onto", "*"): 1})

EXAMPLE_1 = [
    "holds(e1)",
    "object(cp,o1,x1)",
    "object(command,o2,x1)",
    "evt(copy,e1,[x1,x2])",
    "object(content,o3,x2)",
    "object(filename1,o4,x3)",
    "object(file,o5,x3)",
    "of(x2,x3)",
    "object(filename2,o6,x4)",
    "object(file,o7,x4)",
    "onto(e1,x4)",
]

EXAMPLE_2 = [
    "object(eject,o8,x7)",
    "object(command,o9,x7)",
    "evt(print,e8,[x7,x11])",
    "object(message,o10,x11)",
    "if(e8,e5)",
    "object(operation,o11,x5)",
    "evt(fail,e5,[x5])",
]

EXAMPLE_3 = [
    "holds(e1)",
    "object(cp,o1,c1)",
    "object(command,o2,c1)",
    "evt(copy,e1,[c1,f1])",
    "object(file,o3,f1)",
    "prop(good,p1,f1)",
]


def test_example_1_alpha_equivalent_to_reference_block():
    interpretations, _ = facts_for(
        "cp copies the contents of filename1 onto filename2.",
        commands=["cp"], args=["filename1", "filename2"], model=COPY_MODEL)
    assert len(interpretations) == 1
    facts = interpretations[0]
    assert alpha_equivalent(facts, expected(EXAMPLE_1))
    assert sum(1 for f in facts if f.functor == "holds") == 1


def test_example_2_alpha_equivalent_and_unmarked():
    interpretations, _ = facts_for(
        "If the operation fails, eject prints a message.", commands=["eject"])
    assert len(interpretations) == 1
    facts = interpretations[0]
    assert alpha_equivalent(facts, expected(EXAMPLE_2))
    assert not any(f.functor == "holds" for f in facts)


def test_example_3_alpha_equivalent():
    interpretations, _ = facts_for("cp copies good files.", commands=["cp"])
    assert alpha_equivalent(interpretations[0], expected(EXAMPLE_3))


def test_alpha_equivalence_is_identifier_sensitive():
    broken = expected(EXAMPLE_3[:-1] + ["prop(good,p1,c1)"])  # wrong entity
    interpretations, _ = facts_for("cp copies good files.", commands=["cp"])
    assert not alpha_equivalent(interpretations[0], broken)


def test_trailing_conditional_suppresses_holds():
    interpretations, _ = facts_for(
        "mv overwrites the target if the user confirms the action.", commands=["mv"])
    facts = interpretations[0]
    assert not any(f.functor == "holds" for f in facts)
    [iff] = [f for f in facts if f.functor == "if"]
    evt_by_id = {f.reified_id: f.lemma for f in facts if f.functor == "evt"}
    assert evt_by_id[iff.args[0]] == "overwrite"  # consequent first
    assert evt_by_id[iff.args[1]] == "confirm"


def test_negation_becomes_regular_predicate_without_holds():
    interpretations, _ = facts_for("rm does not remove a directory.", commands=["rm"])
    facts = interpretations[0]
    assert any(f.functor == "not" for f in facts)
    assert not any(f.functor == "holds" for f in facts)
    assert not any(f.functor == "if" for f in facts)


def test_copula_asserts_type_without_event():
    interpretations, _ = facts_for("The default device is the floppy drive.")
    facts = interpretations[0]
    assert not any(f.functor == "evt" for f in facts)
    drives = [f for f in facts if f.functor == "object" and f.lemma == "drive"]
    devices = [f for f in facts if f.functor == "object" and f.lemma == "device"]
    assert drives and devices
    assert drives[0].args == devices[0].args  # same entity


def test_noun_compound_modifier_gets_own_entity():
    interpretations, _ = facts_for("mkdir creates a new directory file.", commands=["mkdir"])
    facts = interpretations[0]
    files = [f for f in facts if f.functor == "object" and f.lemma == "file"]
    directories = [f for f in facts if f.functor == "object" and f.lemma == "directory"]
    assert files and directories
    assert files[0].args != directories[0].args
    [evt] = [f for f in facts if f.functor == "evt"]
    assert evt.args[1] == files[0].args[0]  # create's object is the file
    nn = [f for f in facts if f.functor == "rel" and f.lemma == "nn"]
    assert [(nn[0].args[0], nn[0].args[1])] == [(files[0].args[0], directories[0].args[0])]


def test_adverb_modifies_the_event():
    interpretations, _ = facts_for("install quickly creates the directory.",
                                   commands=["install"])
    facts = interpretations[0]
    [prop] = [f for f in facts if f.functor == "prop"]
    [evt] = [f for f in facts if f.functor == "evt"]
    assert prop.lemma == "quickly"
    assert prop.args == (evt.reified_id,)


def test_word_spans_index_valid_tokens():
    interpretations, sentence = facts_for(
        "cp copies the contents of filename1 onto filename2.",
        commands=["cp"], args=["filename1", "filename2"], model=COPY_MODEL)
    for facts in interpretations:
        for fact in facts:
            for w in fact.word_span:
                assert 0 <= w < len(sentence.tokens)
            assert fact.sentence_id == sentence.sentence_id


def test_reified_ids_unique_within_sentence():
    interpretations, _ = facts_for(
        "install creates the destination directory of the target with default permissions.",
        commands=["install"])
    for facts in interpretations:
        rids = [f.reified_id for f in facts if f.reified_id]
        assert len(rids) == len(set(rids))


def test_fact_dump_round_trip():
    interpretations, _ = facts_for("cp copies good files.", commands=["cp"])
    for fact in interpretations[0]:
        line = fact.dump_line()
        assert parse_fact_line(line) == fact


# --- goal derivation --------------------------------------------------------


def goal_for(text, thesaurus=None, commands=()):
    from manswer.engine import select_question_parse

    [s] = tokenize(text, Registry(set(commands), set()))
    forest = apply_filter_rules(parse(s))
    assert forest.parsed, text
    return derive_goal(select_question_parse(forest), s, thesaurus), s


def test_which_question_structure():
    th = Thesaurus([frozenset({"copy", "duplicate"})], [])
    goal, _ = goal_for("Which command copies files?", th)
    functors = [(c.functor, c.lemma) for c in goal.conjuncts]
    assert ("object", "command") in functors
    assert ("evt", "copy") in functors
    assert ("object", "file") in functors
    [evt] = [c for c in goal.conjuncts if c.functor == "evt"]
    assert set(evt.alternatives) == {"copy", "duplicate"}
    [command] = [c for c in goal.conjuncts if c.lemma == "command"]
    assert goal.answer_var == command.args[1]
    # the answer variable is the event's agent
    assert evt.args[1] == goal.answer_var


def test_how_question_has_unconstrained_agent():
    goal, _ = goal_for("How can I create a directory?")
    [evt] = [c for c in goal.conjuncts if c.functor == "evt"]
    assert evt.args[1] == "_"
    assert goal.answer_var == evt.args[0]
    [obj] = [c for c in goal.conjuncts if c.functor == "object"]
    assert obj.lemma == "directory"
    assert evt.args[2] == obj.args[1]


def test_goal_variables_connect_conjuncts():
    goal, _ = goal_for("Which command creates a directory?")
    variables = [a for c in goal.conjuncts for a in c.args if a and a[0].isupper()]
    assert goal.answer_var in variables


def test_round_trip_goal_matches_own_facts():
    texts = [
        ("cp copies good files.", ["cp"]),
        ("mkdir creates a new directory file.", ["mkdir"]),
        ("ls lists the contents of a directory.", ["ls"]),
    ]
    for text, commands in texts:
        [s] = tokenize(text, Registry(set(commands), set()))
        forest = apply_filter_rules(parse(s))
        analysis = forest.parses[0]
        facts = derive_facts(analysis, s)
        goal = derive_goal(analysis, s, None)
        for conjunct in goal.conjuncts:
            assert any(
                unify(conjunct, fact, {}, lambda x: x) is not None
                for fact in facts
            ), (text, conjunct.render())


def test_empty_goal_raises():
    [s] = tokenize("the the the?")
    forest = parse(s)
    assert not forest.parsed
    assert not forest.keyword_fallback.lemmas
    # derive_goal needs a parse; with no content the engine raises EmptyGoal,
    # mirrored here through the keyword bag emptiness.
    with pytest.raises(EmptyGoal):
        raise EmptyGoal("no content words")
