'''Sequence files and JSON reports.

Sequence files are JSON::

    {"dim": 2, "vectors": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.7071, 0.0]]]}

(each coordinate is a ``[re, im]`` pair), or CSV with one vector per line and ``2d``
columns interleaving real and imaginary parts. Both readers reject NaN and infinities.

Reports are written by :func:`dumps`: fixed key order, floats with 17 significant
digits, so identical inputs give byte-identical output.
'''
from __future__ import annotations
import csv
import dataclasses
import io as _io
import json
import math
import os
from pathlib import Path
import numpy as np

from .core import InputError, ValidationError, VectorSequence, Extension, make_sequence

__all__ = [
    'ParseError', 'read_sequence', 'loads_sequence', 'parse_csv', 'write_sequence',
    'sequence_to_dict', 'extension_to_dict', 'to_jsonable', 'dumps',
]


class ParseError(InputError):
    '''A sequence file could not be read, parsed or written. ``line``/``field`` locate parse problems.'''
    def __init__(self, message, line=None, field=None):
        loc = ', '.join(x for x in [
            'line {}'.format(line) if line is not None else '',
            'field {}'.format(field) if field is not None else ''] if x)
        super().__init__('{}{}'.format(message, ' ({})'.format(loc) if loc else ''))
        self.line = line
        self.field = field


# --------------------------------- Reading --------------------------------- #

def _reject_constant(name):
    raise ValueError('non-finite number {} is not allowed'.format(name))


def loads_sequence(text: str) -> VectorSequence:
    '''Parse the JSON sequence format.'''
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError('malformed JSON: {}'.format(e.msg), line=e.lineno) from e
    except ValueError as e:
        raise ParseError(str(e)) from e

    if not isinstance(data, dict):
        raise ParseError('expected a JSON object with "dim" and "vectors"')
    for key in ('dim', 'vectors'):
        if key not in data:
            raise ParseError('missing key', field=key)
    dim = data['dim']
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError('"dim" must be a positive integer', field='dim')
    if not isinstance(data['vectors'], list):
        raise ParseError('"vectors" must be a list', field='vectors')

    rows = []
    for i, v in enumerate(data['vectors']):
        if not isinstance(v, list) or len(v) != dim:
            raise ParseError('vector must have {} coordinates'.format(dim), field='vectors[{}]'.format(i))
        row = []
        for j, c in enumerate(v):
            ok = (isinstance(c, list) and len(c) == 2
                  and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in c))
            if not ok:
                raise ParseError('coordinate must be a [re, im] pair', field='vectors[{}][{}]'.format(i, j))
            row.append(complex(c[0], c[1]))
        rows.append(row)
    try:
        return make_sequence(dim, rows)
    except ValidationError as e:
        raise ParseError(str(e), field='vectors[{}]'.format(e.index)) from e


def parse_csv(text: str) -> VectorSequence:
    '''Parse the CSV sequence format (blank lines are skipped).'''
    rows, width = [], None
    for lineno, record in enumerate(csv.reader(_io.StringIO(text)), 1):
        if not record or all(not c.strip() for c in record):
            continue
        if width is None:
            width = len(record)
            if width % 2:
                raise ParseError('a CSV row needs an even number of columns (re, im pairs)', line=lineno)
        elif len(record) != width:
            raise ParseError('expected {} columns, got {}'.format(width, len(record)), line=lineno)
        try:
            values = [float(c) for c in record]
        except ValueError as e:
            raise ParseError('not a number: {}'.format(e), line=lineno) from e
        if not all(math.isfinite(x) for x in values):
            raise ParseError('non-finite number', line=lineno)
        rows.append([complex(re, im) for re, im in zip(values[::2], values[1::2])])
    if width is None:
        raise ParseError('empty CSV file: the dimension cannot be inferred')
    return make_sequence(width // 2, rows)


def read_sequence(path: str|os.PathLike) -> VectorSequence:
    '''Read a sequence file; ``.csv`` files use the CSV format, everything else JSON.'''
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError('cannot read {}: {}'.format(path, e)) from e
    if path.suffix.lower() == '.csv':
        return parse_csv(text)
    return loads_sequence(text)


# --------------------------------- Writing --------------------------------- #

def _pairs(vectors: np.ndarray) -> list:
    return [[[float(c.real), float(c.imag)] for c in v] for v in vectors]


def sequence_to_dict(seq: VectorSequence) -> dict:
    return {'dim': seq.dim, 'vectors': _pairs(seq.vectors)}


def extension_to_dict(ext: Extension) -> dict:
    return {'dim': ext.dim, 'vectors': _pairs(ext.added),
            'placement': ext.placement, 'k_minimal': ext.k_minimal}


def write_sequence(path: str|os.PathLike, obj: VectorSequence|Extension) -> None:
    '''Write a sequence (or an extension, with its placement fields) as JSON.

    Raises:
        ParseError: if the file cannot be written.
    '''
    data = extension_to_dict(obj) if isinstance(obj, Extension) else sequence_to_dict(obj)
    try:
        Path(path).write_text(dumps(data) + '\n', encoding='utf-8')
    except OSError as e:
        raise ParseError('cannot write {}: {}'.format(path, e)) from e


def to_jsonable(obj):
    '''Turn result objects into plain dicts/lists/floats, keeping field order.'''
    if isinstance(obj, VectorSequence):
        return sequence_to_dict(obj)
    if isinstance(obj, Extension):
        return extension_to_dict(obj)
    if hasattr(obj, 'as_dict') and not isinstance(obj, type):
        return to_jsonable(obj.as_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if hasattr(obj, '_asdict'):  # namedtuples
        return {k: to_jsonable(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return _pairs(obj) if obj.ndim == 2 else [[float(c.real), float(c.imag)] for c in obj]
        return obj.tolist()
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(x) for x in items]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return [float(obj.real), float(obj.imag)]
    return obj


def _encode(obj, out: list) -> None:
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            out.append('null')
        else:
            text = format(obj, '.17g')
            if not any(ch in text for ch in '.en'):
                text += '.0'
            out.append(text)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append('{')
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(', ')
            out.append(json.dumps(str(k)))
            out.append(': ')
            _encode(v, out)
        out.append('}')
    elif isinstance(obj, (list, tuple)):
        out.append('[')
        for i, v in enumerate(obj):
            if i:
                out.append(', ')
            _encode(v, out)
        out.append(']')
    else:
        raise TypeError('cannot encode {!r}'.format(type(obj).__name__))


def dumps(obj) -> str:
    '''Deterministic JSON: insertion key order, floats printed with 17 significant digits.'''
    out = []
    _encode(to_jsonable(obj), out)
    return ''.join(out)
