"""
Interchange documents.

A document is a UTF-8 JSON object with three keys: ``kind``, ``format_version``
and ``payload``. Tables are arrays of arrays of indices, labels are JSON values
(tuples become arrays) and keys are sorted, so that saving a loaded document
reproduces it byte for byte.
"""

import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.bibundles.colored import ColoredSSet
from src.config import config_value
from src.errors import EngineError, ParseError, VersionMismatch
from src.extensions.filtrations import FiltrationCertificate
from src.groupoids.bibundles import Bimodule
from src.groupoids.categories import FinCategory, FinGroupoid
from src.groupoids.functors import Functor
from src.simplicial.core import SimplicialMap, TruncatedSSet, check_identities

logger = logging.getLogger(__name__)

DocumentKind = Literal['sset', 'smap', 'groupoid', 'functor', 'bimodule', 'colored', 'certificate', 'report']
KINDS = ('sset', 'smap', 'groupoid', 'functor', 'bimodule', 'colored', 'certificate', 'report')


class Document(BaseModel):
    """One serialized engine value."""

    kind: DocumentKind
    format_version: str
    payload: Dict[str, Any] = Field(default_factory=dict)
    model_config = ConfigDict(frozen=True, extra='forbid')


def engine_version() -> str:
    return str(config_value('format_version', '0.2'))


def _thaw(value: Any) -> Any:
    """Labels to JSON values."""
    if isinstance(value, (tuple, list)):
        return [_thaw(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return sorted((_thaw(v) for v in value), key=repr)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return None if np.isnan(value) else float(value)
    if isinstance(value, np.ndarray):
        return _thaw(value.tolist())
    if isinstance(value, dict):
        return {str(k): _thaw(v) for k, v in value.items()}
    return value


def _freeze(value: Any) -> Any:
    """JSON values back to hashable labels."""
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


# Encoders

def _sset_payload(X: TruncatedSSet) -> Dict[str, Any]:
    c = X.cosk_level
    return {
        'name': X.name,
        'cosk_level': c,
        'dimension': X.dimension,
        'vertex_labels': X.vertex_labels,
        'sizes': X.sizes(c),
        'faces': {str(m): X.face_table(m).tolist() for m in range(1, c + 1)},
        'degeneracies': {str(m): X.degeneracy_table(m).tolist() for m in range(c)},
        'labels': {str(m): _thaw(X.labels(m)) for m in range(c + 1) if X.has_labels(m)},
    }


def _smap_payload(f: SimplicialMap) -> Dict[str, Any]:
    top = max(f.source.cosk_level, f.target.cosk_level)
    return {
        'name': f.name,
        'source': _sset_payload(f.source),
        'target': _sset_payload(f.target),
        'components': [f.component(m).tolist() for m in range(min(top, f.source.cosk_level) + 1)],
    }


def _groupoid_payload(C: FinCategory) -> Dict[str, Any]:
    payload = {
        'name': C.name,
        'groupoid': isinstance(C, FinGroupoid),
        'objects': _thaw(C.objects),
        'arrows': _thaw(C.arrows),
        'source': C.source,
        'target': C.target,
        'unit': C.unit,
        'compose': sorted([g, f, h] for (g, f), h in C.compose.items()),
    }
    if isinstance(C, FinGroupoid):
        payload['inverse'] = C.inverse
    return payload


def _functor_payload(F: Functor) -> Dict[str, Any]:
    return {
        'name': F.name,
        'source': _groupoid_payload(F.source),
        'target': _groupoid_payload(F.target),
        'on_objects': F.on_objects,
        'on_arrows': F.on_arrows,
    }


def _bimodule_payload(P: Bimodule) -> Dict[str, Any]:
    return {
        'name': P.name,
        'left': _groupoid_payload(P.left),
        'right': _groupoid_payload(P.right),
        'carrier': _thaw(P.carrier),
        'left_moment': P.left_moment,
        'right_moment': P.right_moment,
        'left_act': sorted([p, g, q] for (p, g), q in P.left_action.act.items()),
        'right_act': sorted([p, h, q] for (p, h), q in P.right_action.act.items()),
    }


def _colored_payload(G: ColoredSSet) -> Dict[str, Any]:
    return {'name': G.name, 'total': _sset_payload(G.total), 'vertex_colours': G.vertex_colours}


def to_document(value: Any) -> Document:
    """
    Wrap an engine value in a document of the matching kind.

    Raises:
        ParseError: the value has no document kind
    """
    if isinstance(value, Document):
        return value
    if isinstance(value, ColoredSSet):
        kind, payload = 'colored', _colored_payload(value)
    elif isinstance(value, TruncatedSSet):
        kind, payload = 'sset', _sset_payload(value)
    elif isinstance(value, SimplicialMap):
        kind, payload = 'smap', _smap_payload(value)
    elif isinstance(value, Functor):
        kind, payload = 'functor', _functor_payload(value)
    elif isinstance(value, Bimodule):
        kind, payload = 'bimodule', _bimodule_payload(value)
    elif isinstance(value, FinCategory):
        kind, payload = 'groupoid', _groupoid_payload(value)
    elif isinstance(value, FiltrationCertificate):
        kind, payload = 'certificate', value.to_dict()
    else:
        raise ParseError(0, 0, f"no document kind for {type(value).__name__}")
    return Document(kind=kind, format_version=engine_version(), payload=payload)


def report_document(command: str, status: str, code: int, results: Optional[Dict[str, Any]] = None,
                    witness: Optional[Dict[str, Any]] = None, value: Optional[Document] = None) -> Document:
    payload = {
        'command': command,
        'status': status,
        'exit_code': code,
        'results': _thaw(results or {}),
        'witness': _thaw(witness) if witness else None,
    }
    if value is not None:
        payload['value'] = value.model_dump()
    return Document(kind='report', format_version=engine_version(), payload=payload)


# Decoders

def _int_table(rows: Any, shape: tuple, bound: int, what: str) -> np.ndarray:
    try:
        table = np.asarray(rows, dtype=np.int64)
    except (TypeError, ValueError):
        raise ValueError(f"{what} is not a rectangular integer table")
    if table.size == 0 and shape[-1] == 0:
        return table.reshape(shape)
    if table.shape != shape:
        raise ValueError(f"{what} has shape {list(table.shape)}, expected {list(shape)}")
    if table.size and (table.min() < 0 or table.max() >= bound):
        raise ValueError(f"{what} points outside 0..{bound - 1}")
    return table


def _sset_value(p: Dict[str, Any]) -> TruncatedSSet:
    c = int(p['cosk_level'])
    sizes = [int(n) for n in p['sizes']]
    if len(sizes) != c + 1:
        raise ValueError(f"expected {c + 1} level sizes, got {len(sizes)}")
    faces = {m: _int_table(p['faces'][str(m)], (m + 1, sizes[m]), sizes[m - 1], f"faces[{m}]")
             for m in range(1, c + 1)}
    degens = {m: _int_table(p['degeneracies'][str(m)], (m + 1, sizes[m]), sizes[m + 1], f"degeneracies[{m}]")
              for m in range(c)}
    check_identities(sizes, faces, degens, c)
    labels = {int(m): [_freeze(v) for v in level] for m, level in p.get('labels', {}).items()}
    return TruncatedSSet(sizes, faces, degens, c, labels=labels or None, dimension=p.get('dimension'),
                         name=p.get('name'), vertex_labels=bool(p.get('vertex_labels', False)))


def _smap_value(p: Dict[str, Any]) -> SimplicialMap:
    return SimplicialMap(_sset_value(p['source']), _sset_value(p['target']), p['components'],
                         name=p.get('name'))


def _groupoid_value(p: Dict[str, Any]) -> FinCategory:
    args = ([_freeze(v) for v in p['objects']], [_freeze(v) for v in p['arrows']],
            p['source'], p['target'], p['unit'], {(g, f): h for g, f, h in p['compose']})
    if p.get('groupoid'):
        return FinGroupoid(*args, inverse=p.get('inverse'), name=p.get('name'))
    return FinCategory(*args, name=p.get('name'))


def _functor_value(p: Dict[str, Any]) -> Functor:
    return Functor(_groupoid_value(p['source']), _groupoid_value(p['target']),
                   p['on_objects'], p['on_arrows'], name=p.get('name'))


def _bimodule_value(p: Dict[str, Any]) -> Bimodule:
    return Bimodule(_groupoid_value(p['left']), _groupoid_value(p['right']),
                    [_freeze(v) for v in p['carrier']], p['left_moment'], p['right_moment'],
                    {(a, g): q for a, g, q in p['left_act']},
                    {(a, h): q for a, h, q in p['right_act']},
                    name=p.get('name'))


def _colored_value(p: Dict[str, Any]) -> ColoredSSet:
    return ColoredSSet(_sset_value(p['total']), p['vertex_colours'], name=p.get('name'))


DECODERS = {
    'sset': _sset_value,
    'smap': _smap_value,
    'groupoid': _groupoid_value,
    'functor': _functor_value,
    'bimodule': _bimodule_value,
    'colored': _colored_value,
    'certificate': FiltrationCertificate.from_dict,
    'report': dict,
}


def _locate(text: str, key: Optional[str]) -> tuple:
    """1-based line and column of the first occurrence of a JSON key, or (1, 1)."""
    if key:
        offset = text.find(f'"{key}"')
        if offset >= 0:
            line = text.count('\n', 0, offset) + 1
            return line, offset - (text.rfind('\n', 0, offset) + 1) + 1
    return 1, 1


@contextmanager
def _located(text: str, key: Optional[str]) -> Iterator[None]:
    try:
        yield
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        where = exc.args[0] if isinstance(exc, KeyError) and exc.args else key
        line, column = _locate(text, str(where) if where is not None else key)
        raise ParseError(line, column, str(exc)) from exc


def _failing_key(message: str) -> Optional[str]:
    for key in ('faces', 'degeneracies', 'components', 'compose', 'sizes', 'left_act', 'right_act'):
        if key in message:
            return key
    return None


def parse_document(text: str) -> Document:
    """
    Parse and version-check a document.

    Raises:
        ParseError: malformed JSON or a document without the required fields
        VersionMismatch: the format version is not compatible with this engine
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from exc
    try:
        doc = Document.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = str(first['loc'][0]) if first['loc'] else None
        line, column = _locate(text, key)
        raise ParseError(line, column, f"{key}: {first['msg']}") from exc
    supported = [str(v) for v in config_value('compatible_versions', [engine_version()])]
    if doc.format_version not in supported:
        raise VersionMismatch(f"document version {doc.format_version} is not one of {supported}",
                              witness={'found': doc.format_version, 'supported': supported})
    return doc


def decode(doc: Document, text: Optional[str] = None) -> Any:
    """
    The engine value a document holds.

    Raises:
        ParseError: the payload does not describe a value of its kind
        EngineError: the value is structurally invalid (simplicial identities, axioms)
    """
    text = text if text is not None else dumps(doc)
    with _located(text, 'payload'):
        try:
            return DECODERS[doc.kind](doc.payload)
        except ValueError as exc:
            line, column = _locate(text, _failing_key(str(exc)))
            raise ParseError(line, column, str(exc)) from exc


def dumps(value: Any) -> str:
    """Canonical JSON text of a value or document."""
    doc = to_document(value)
    return json.dumps(doc.model_dump(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load(path: Union[str, Path]) -> Document:
    """
    Read a document from disk.

    Raises:
        ParseError: unreadable JSON or missing fields, with line and column
        VersionMismatch: incompatible format version
    """
    text = Path(path).read_text(encoding='utf-8')
    doc = parse_document(text)
    logger.debug(f"loaded {doc.kind} document from {path}")
    return doc


def load_value(path: Union[str, Path], expect: Optional[List[str]] = None) -> Any:
    """
    Read a document and decode its value.

    Args:
        path: Document file
        expect: Allowed kinds; other kinds raise ParseError
    """
    text = Path(path).read_text(encoding='utf-8')
    doc = parse_document(text)
    if expect is not None and doc.kind not in expect:
        line, column = _locate(text, 'kind')
        raise ParseError(line, column, f"expected a {' or '.join(expect)} document, got {doc.kind}")
    return decode(doc, text)


def save(value: Any, path: Union[str, Path]) -> None:
    """Write a value (or a document) as canonical JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(value), encoding='utf-8')
    logger.debug(f"saved {to_document(value).kind} document to {path}")


def describe(value: Any) -> Dict[str, Any]:
    """Short summary of a decoded value for reports."""
    if isinstance(value, ColoredSSet):
        return {'name': value.name, 'cells': {f"{i},{j}": n for (i, j), n in value.cell_sizes().items()}}
    if isinstance(value, TruncatedSSet):
        return {'name': value.name, 'cosk_level': value.cosk_level, 'sizes': value.sizes(value.cosk_level)}
    if isinstance(value, SimplicialMap):
        return {'name': value.name, 'source': value.source.name, 'target': value.target.name}
    if isinstance(value, FinCategory):
        return {'name': value.name, 'objects': value.n_objects, 'arrows': value.n_arrows,
                'groupoid': isinstance(value, FinGroupoid)}
    if isinstance(value, (Functor, Bimodule)):
        return {'name': value.name}
    if isinstance(value, FiltrationCertificate):
        return {'flavor': value.flavor, 'steps': len(value)}
    if isinstance(value, EngineError):
        return value.to_dict()
    return {}
