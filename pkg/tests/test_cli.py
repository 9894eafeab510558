"""Unit tests for interchange documents, the command runner and the corpus generator."""

import json

import pytest

from src.cli.corpus import (
    confirm,
    corpus,
    corpus_bounds,
    crossed_module_morphisms,
    group_extension,
    small_crossed_modules,
)
from src.cli.documents import Document, decode, dumps, load, load_value, parse_document, save, to_document
from src.cli.run import main, run
from src.errors import ParseError, SizeOutOfBounds, UnknownCommand, VersionMismatch
from src.groupoids.bibundles import bundlisation
from src.groupoids.categories import cyclic_group, poset_category
from src.groupoids.functors import identity_functor
from src.simplicial.iso import are_isomorphic
from src.simplicial.shapes import simplex


@pytest.fixture
def z2_nerve(tmp_path):
    path = tmp_path / "nz2.json"
    save(cyclic_group(2).as_groupoid().nerve(), path)
    return path


def test_saved_document_reloads_byte_for_byte(tmp_path):
    X = poset_category(2).nerve()
    path = tmp_path / "n1.json"
    save(X, path)
    text = path.read_text(encoding='utf-8')
    assert dumps(load(path)) == text
    assert are_isomorphic(load_value(path), X)


def test_parse_error_has_a_location():
    text = '{\n  "kind": "sset",\n  "format_version":\n}'
    with pytest.raises(ParseError) as excinfo:
        parse_document(text)
    assert excinfo.value.line == 4
    assert excinfo.value.code == 2


def test_missing_fields_rejected():
    with pytest.raises(ParseError):
        parse_document('{"kind": "sset", "payload": {}}')
    with pytest.raises(ParseError):
        parse_document('{"kind": "torus", "format_version": "0.2", "payload": {}}')


def test_version_checked():
    with pytest.raises(VersionMismatch) as excinfo:
        parse_document('{"kind": "sset", "format_version": "9.9", "payload": {}}')
    assert excinfo.value.witness['found'] == "9.9"


def test_kind_checked(z2_nerve):
    with pytest.raises(ParseError, match="expected a groupoid"):
        load_value(z2_nerve, expect=['groupoid'])


def test_bad_payload_is_a_parse_error():
    doc = to_document(simplex(1))
    payload = dict(doc.payload)
    payload['sizes'] = []
    with pytest.raises(ParseError):
        decode(Document(kind='sset', format_version=doc.format_version, payload=payload))


def test_unsupported_value():
    with pytest.raises(ParseError):
        to_document(object())


def test_run_classify(z2_nerve):
    code, report = run('classify', {'inputs': [str(z2_nerve)]})
    assert code == 0
    assert report.kind == 'report'
    assert report.payload['status'] == 'holds'
    assert report.payload['results']['profile'] == "1-groupoid"
    assert report.payload['results']['table'], "the scan table is reported"


def test_run_fill_horn_failure(tmp_path):
    path = tmp_path / "n1.json"
    save(poset_category(2).nerve(), path)
    code, report = run('fill-horn', {'inputs': [str(path)], 'horn': (2, 0)})
    assert code == 1
    assert report.payload['status'] == 'fails'
    assert report.payload['witness'] is not None


def test_run_from_nerve_returns_value(z2_nerve):
    code, report = run('from-nerve', {'inputs': [str(z2_nerve)]})
    assert code == 0
    assert report.payload['results']['objects'] == 1
    assert report.payload['results']['arrows'] == 2
    assert report.payload['value']['kind'] == 'groupoid'


def test_run_compose_decoded_bimodules(tmp_path):
    Z2 = cyclic_group(2).as_groupoid()
    P = bundlisation(identity_functor(Z2))
    for name in ("p.json", "q.json"):
        save(P, tmp_path / name)
    code, report = run('compose', {'inputs': [str(tmp_path / "p.json"), str(tmp_path / "q.json")]})
    assert code == 0, report.payload
    assert report.payload['results']['size'] == 2
    assert report.payload['results']['morita']


def test_run_jet(z2_nerve):
    code, report = run('jet', {'inputs': [str(z2_nerve)], 'points': 3})
    assert code == 0
    assert report.payload['results']['stabilized_at'] == 1
    code, report = run('jet', {'inputs': [str(z2_nerve)], 'points': 9})
    assert code == 2
    assert report.payload['witness']['error'] == 'SizeOutOfBounds'


def test_run_rejects_bad_arguments(z2_nerve):
    code, report = run('classify', {'inputs': [str(z2_nerve)], 'max_dim': -1})
    assert code == 2 and report.payload['status'] == 'error'
    code, _ = run('classify', {'inputs': []})
    assert code == 2
    with pytest.raises(UnknownCommand):
        run('frobnicate')


def test_main_exit_codes(z2_nerve, capsys):
    assert main(['classify', '--input', str(z2_nerve), '--json']) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['kind'] == 'report'
    assert report['payload']['command'] == 'classify'
    assert main(['frobnicate']) == 2


def test_corpus_is_deterministic():
    first = corpus(3)
    second = corpus(3)
    assert [(i.name, i.expected) for i in first] == [(i.name, i.expected) for i in second]
    assert {i.family for i in first} >= {'simplex', 'category', 'groupoid', 'functor', 'cograph'}


def test_corpus_bounds():
    assert corpus_bounds({'max_objects': 2})['max_objects'] == 2
    with pytest.raises(SizeOutOfBounds):
        corpus_bounds({'max_objects': 99})
    with pytest.raises(SizeOutOfBounds):
        corpus_bounds({'colours': 2})
    code, _ = run('corpus', {'sizes': {'max_objects': 99}})
    assert code == 2


def test_tags_confirmed_on_small_instances():
    instances = [i for i in corpus(0, {'max_objects': 2, 'max_group_order': 4})
                 if i.family in ('simplex', 'category', 'extension')]
    for inst in instances:
        verdict = confirm(inst)
        assert verdict['confirmed'], verdict['mismatches']


def test_group_extension():
    F = group_extension()
    assert (F.source.n_arrows, F.target.n_arrows) == (4, 2)


def test_crossed_module_morphisms_between_small_modules():
    modules = small_crossed_modules()
    maps = crossed_module_morphisms(modules)
    assert len(maps) == 21, f"expected 21 morphisms, got {len(maps)}"
    identities = [f for f in maps if f.source is f.target and f.is_bijective(3)]
    assert len(identities) >= len(modules), "every module has its identity"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
