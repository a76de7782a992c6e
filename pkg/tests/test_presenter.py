import pytest
from hypothesis import given, settings, strategies as st

from manswer.engine import CascadeConfig, Level, answer
from manswer.presenter import UnknownPage, compute_intensities, quantize, \
    render_page, render_terminal, result_record


@pytest.fixture(scope="module")
def create_results(kb, default_model):
    return answer("How can I create a directory?", kb, CascadeConfig(),
                  model=default_model)


def install_hit(results):
    return next(r for r in results if r.sentence_id == "install.1/DESCRIPTION/1")


def test_shared_phrase_gets_full_intensity(create_results, kb):
    hit = install_hit(create_results)
    assert hit.proof_count == 3
    highlighted = compute_intensities(hit, kb)
    by_surface = dict(highlighted.words)
    assert by_surface["creates"] == 3
    assert by_surface["directory"] == 3
    assert highlighted.max_intensity == 3
    assert by_surface["destination"] == 0
    assert by_surface["install"] == 0


def test_words_in_every_proof_have_intensity_proofcount(create_results, kb):
    hit = install_hit(create_results)
    highlighted = compute_intensities(hit, kb)
    in_all = set.intersection(
        *({i for _, i in p.covered_words} for p in hit.proofs))
    for index, (_, intensity) in enumerate(highlighted.words):
        if index in in_all:
            assert intensity == hit.proof_count
    argmax = {i for i, (_, intensity) in enumerate(highlighted.words)
              if intensity == highlighted.max_intensity}
    assert argmax == in_all


def test_single_proof_sentence(kb, default_model):
    results = answer("Which command copies files?", kb, CascadeConfig(),
                     model=default_model)
    hit = next(r for r in results if r.sentence_id == "cp.1/DESCRIPTION/1")
    highlighted = compute_intensities(hit, kb)
    covered = [s for s, i in highlighted.words if i == 1]
    uncovered = [s for s, i in highlighted.words if i == 0]
    assert covered == ["cp", "copies", "filename1"]
    assert "onto" in uncovered


def test_quantize_reference_values():
    assert [quantize(i, 3, 3) for i in [0, 1, 3, 3]] == [0, 1, 3, 3]
    assert quantize(0, 4, 0) == 0
    assert quantize(1, 4, 1) == 4  # single highlight color at max


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.integers(1, 9),
       st.lists(st.integers(0, 9), min_size=2, max_size=6))
def test_quantize_monotone(palette, max_intensity, values):
    values = [min(v, max_intensity) for v in values]
    buckets = [quantize(v, palette, max_intensity) for v in values]
    for a, b in zip(sorted(values), sorted(values)[1:]):
        assert quantize(a, palette, max_intensity) <= quantize(b, palette, max_intensity)
    assert all(0 <= b <= palette for b in buckets)


def test_render_terminal_injective_per_bucket(create_results, kb):
    hit = install_hit(create_results)
    highlighted = compute_intensities(hit, kb)
    rendered = render_terminal(highlighted, 4)
    assert "\x1b[38;5;226mcreates\x1b[0m" in rendered
    assert "\x1b[38;5;226mdirectory\x1b[0m" in rendered
    assert "install " in rendered  # intensity zero stays plain
    plain = render_terminal(highlighted, 4, color=False)
    assert "\x1b[" not in plain
    assert plain.endswith("permissions.")


def test_render_terminal_rejects_tiny_palette(create_results, kb):
    highlighted = compute_intensities(install_hit(create_results), kb)
    with pytest.raises(ValueError):
        render_terminal(highlighted, 1)


def test_all_zero_intensities_render_plain(kb, default_model):
    results = answer("Which command copies files?", kb, CascadeConfig(),
                     model=default_model)
    highlighted = compute_intensities(results[0], kb)
    zeroed = highlighted.__class__(highlighted.sentence_id,
                                   tuple((s, 0) for s, _ in highlighted.words), 0)
    assert "\x1b[" not in render_terminal(zeroed, 4)


def test_page_view_agrees_with_sentence_view(create_results, kb):
    view = render_page("install.1", create_results, kb)
    hit = install_hit(create_results)
    highlighted = compute_intensities(hit, kb)
    [description] = [s for s in view["sections"] if s["name"] == "DESCRIPTION"]
    [entry] = [e for e in description["sentences"]
               if e["sentenceId"] == "install.1/DESCRIPTION/1"]
    assert [(w["surface"], w["intensity"]) for w in entry["words"]] == \
           list(highlighted.words)
    body = description["text"]
    for word in entry["words"]:
        assert body[word["start"]:word["end"]] == word["surface"]
    assert entry["start"] == min(w["start"] for w in entry["words"])


def test_page_view_without_hits_has_no_spans(kb):
    view = render_page("tar.1", [], kb)
    assert all(not section["sentences"] for section in view["sections"])
    assert any(section["text"] for section in view["sections"])


def test_unknown_page_raises(kb):
    with pytest.raises(UnknownPage):
        render_page("unknown.1", [], kb)


def test_result_record_contract(create_results, kb):
    record = result_record("How can I create a directory?", create_results, kb,
                           Level.L0_synonyms)
    assert set(record) == {"question", "level", "results"}
    assert record["level"] == "L0"
    first = record["results"][0]
    assert {"sentenceId", "page", "words", "score", "proofCount", "level"} <= set(first)
    assert first["sentenceId"] == "install.1/DESCRIPTION/1"
    assert first["page"] == "install.1"
    assert all({"surface", "intensity"} == set(w) for w in first["words"])
    assert first["proofCount"] == 3
