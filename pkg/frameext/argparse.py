'''Build an argparse parser from command functions.

The flags come from the function signature, their help text from the google-style
docstring, and a nested dict of functions becomes nested subcommands.

.. code-block:: python

    import frameext.argparse

    def series(path: str, /, *, schedule: str, out: str|None = None):
        """Partial sums of the defect series.

        Arguments:
            path: sequence file.
            schedule: comma-separated prefix lengths.
        """

    parser = frameext.argparse.from_any({'series': series})
    args = vars(parser.parse_args(['series', 'seq.json', '--schedule', '2,4']))
    names, func, kw = frameext.argparse.resolve(parser, args)
    assert names == ['series'] and kw == {'path': 'seq.json', 'schedule': '2,4', 'out': None}

A usage error raises :class:`UsageError` instead of exiting, so the caller decides what
a bad command line means.
'''
from __future__ import annotations
import argparse
import functools
import inspect
import types
from typing import Any, Callable, Literal, Union, get_args, get_origin, get_type_hints
import docstring_parser

from .core import InputError
from .signature import signature, POS_ONLY, VAR_POS, VAR_KW

__all__ = ['UsageError', 'ArgumentParser', 'from_any', 'from_func', 'resolve']

TYPE = type
DESC_SEP = ': '
COMMAND = '__command'


class UsageError(InputError):
    '''The command line could not be parsed.'''


class ArgumentParser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault('formatter_class', argparse.RawDescriptionHelpFormatter)
        super().__init__(*a, **kw)

    def error(self, message):
        raise UsageError('{}: {}'.format(self.prog, message))


def _dest(prefix: str) -> str:
    return '{}{}'.format(COMMAND, prefix)


def from_any(obj: Callable|dict, *, parser: argparse.ArgumentParser|None = None,
             subparsers=None, parser_name: str|None = None, description: str|None = None,
             _cmd_prefix: str = '', **kw) -> argparse.ArgumentParser:
    '''A parser for a function, or subcommands for a (nested) dict of functions.

    Dict keys may carry a description after ``': '``, e.g. ``'excess: Count removable vectors.'``.
    '''
    if callable(obj):
        return from_func(obj, parser=parser, subparsers=subparsers, parser_name=parser_name,
                         description=description, **kw)
    if not isinstance(obj, dict):
        raise TypeError("Object must be a function or a dict of functions.")

    if parser is None:
        if subparsers is not None:
            parser = subparsers.add_parser(parser_name, help=description or '', description=description)
        else:
            parser = ArgumentParser(description=description, **kw)
    sub = parser.add_subparsers(dest=_dest(_cmd_prefix), metavar='command', required=True)
    for name, obj_i in obj.items():
        desc = None
        if DESC_SEP in name:
            name, desc = name.split(DESC_SEP, 1)
        from_any(obj_i, subparsers=sub, parser_name=name, description=desc,
                 _cmd_prefix='{}:{}'.format(_cmd_prefix, name))
    parser._calling_object = obj
    return parser


def from_func(func: Callable, *, parser: argparse.ArgumentParser|None = None, subparsers=None,
              parser_name: str|None = None, description: str|None = None,
              args: dict[str, dict[str, Any]]|None = None, **kw) -> argparse.ArgumentParser:
    '''Create a parser (or a subparser) from a function.

    Arguments:
        func (callable): The command function.
        parser (argparse.ArgumentParser): Add the arguments to this parser instead.
        subparsers: Add a subcommand named ``parser_name`` to this subparsers action.
        description (str): Overrides the docstring description.
        args (dict): Extra ``add_argument`` keywords per parameter name.
    '''
    doc = docstring_parser.parse(func.__doc__ or '')
    desc = '\n\n'.join(x for x in [doc.short_description, doc.long_description] if x)
    helps = {p.arg_name: p.description for p in doc.params if p.description}
    for traced in getattr(func, '__traceto__', ()):
        for p in docstring_parser.parse(traced.__doc__ or '').params:
            if p.description:
                helps.setdefault(p.arg_name, p.description)

    if parser is None:
        if subparsers is not None:
            parser = subparsers.add_parser(
                parser_name, help=description or doc.short_description or '',
                description=description or desc)
        else:
            parser = ArgumentParser(description=description or desc, **kw)
    parser._calling_object = func

    params = signature(func).parameters
    type_hints = _type_hints(func, params)
    overrides = args or {}
    for name, p in params.items():
        if p.kind == VAR_KW:
            raise ValueError("Can't create arguments for **{}.".format(name))
        argnames, pkw = get_args_from_parameter(
            name, p, type_hints=type_hints, help=helps.get(name), **(overrides.get(name) or {}))
        parser.add_argument(*argnames, **pkw)
    return parser


def _type_hints(func: Callable, params) -> dict:
    '''Evaluate (possibly string) annotations in the namespace of the function that defined them.'''
    ann = {n: p.annotation for n, p in params.items() if p.annotation is not inspect.Parameter.empty}
    globalns = {}
    for f in [inspect.unwrap(func), *getattr(func, '__traceto__', ())]:
        globalns.update(getattr(inspect.unwrap(f), '__globals__', {}))
    return get_type_hints(TYPE(func.__name__, (object,), {'__annotations__': ann}), globalns=globalns)


def get_args_from_parameter(name: str, p: inspect.Parameter, *, type_hints=None, help=None, **pkw):
    '''``add_argument`` names and keywords for one parameter.

    Positional-only parameters become positional arguments, everything else a ``--flag``.
    Annotations pick the conversion (``int``, ``float``, ``X|None``), ``Literal`` gives the
    choices and ``bool`` a store-true flag.
    '''
    positional = p.kind in (POS_ONLY, VAR_POS)
    if p.kind == VAR_POS:
        pkw.setdefault('nargs', '*')

    default = pkw.get('default', p.default)
    if default is inspect.Parameter.empty:
        if not positional:
            pkw['required'] = True
            pkw.pop('default', None)
    else:
        if positional:
            pkw.setdefault('nargs', '?')
        pkw['default'] = default

    dtype = (type_hints or {}).get(name)
    if dtype is not None and _lenient_subclass(dtype, bool):
        pkw.setdefault('action', 'store_true')
    elif dtype is not None and get_origin(dtype) is Literal:
        pkw.setdefault('choices', get_args(dtype))
    elif dtype is not None and 'type' not in pkw:
        pkw['type'] = _type_checker(dtype)
    if pkw.get('action') in ('store_true', 'store_false'):
        pkw.pop('type', None)

    if help:
        pkw.setdefault('help', help)

    flag_name = name.replace('_', '-')
    if positional:
        return [name], pkw
    pkw.setdefault('dest', name)
    return ['--{}'.format(flag_name)], pkw


# type checkers

def _members(dtype) -> tuple:
    if get_origin(dtype) in (Union, types.UnionType):
        return tuple(t for t in get_args(dtype) if t is not type(None))
    return (dtype,)


def _lenient_subclass(obj, cls) -> bool:
    '''Check subclass, looking through ``X|None``.'''
    return all(isinstance(t, type) and issubclass(t, cls) for t in _members(obj))


def _type_check(dtype, x: str):
    for t in _members(dtype):
        try:
            return t(x)
        except (TypeError, ValueError):
            pass
    raise ValueError('{!r} could not be cast to {}'.format(x, _type_check_name(dtype)))


def _type_check_name(dtype) -> str:
    return '|'.join(getattr(t, '__name__', str(t)) for t in _members(dtype))


def _type_checker(dtype) -> Callable[[str], Any]:
    check = functools.partial(_type_check, dtype)
    check.__name__ = _type_check_name(dtype)  # argparse uses it in "invalid <name> value"
    return check


# calling the function

def resolve(parser: argparse.ArgumentParser, args: dict, _cmd_prefix: str = ''):
    '''Follow the chosen subcommands down to a function.

    Returns:
        ``(names, func, kwargs)``: the subcommand path, the function and its arguments.
    '''
    a = dict(args)
    cmd = a.pop(_dest(_cmd_prefix), None)
    if cmd is None:
        obj = getattr(parser, '_calling_object', None)
        if not callable(obj):
            raise RuntimeError('Parser missing function reference. {}'.format(parser))
        return [], obj, a

    sub = next(
        action._name_parser_map[cmd]
        for action in parser._subparsers._group_actions
        if cmd in action._name_parser_map)
    names, obj, a = resolve(sub, a, '{}:{}'.format(_cmd_prefix, cmd))
    return [cmd, *names], obj, a
