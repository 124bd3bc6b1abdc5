'''Signature plumbing for the command line.

Command functions take their tolerance flags as ``**kw`` and declare where those go with
:func:`traceto`; the parser generator then sees the flags in the signature, and the
command pulls them back out with :func:`divide`.

.. code-block:: python

    def tolerances(tol_rel=1e-10, tol_abs=1e-12):
        ...

    @traceto(tolerances)
    def analyze(path, /, **kw):
        (tol_kw,) = divide(kw, tolerances)
        ...

    assert list(signature(analyze).parameters) == ['path', 'tol_rel', 'tol_abs']
'''
from __future__ import annotations
import inspect
from functools import wraps as _builtin_wraps
from typing import Callable, Iterable
from inspect import Signature, signature as _builtin_signature

__all__ = ['signature', 'traceto', 'divide', 'as_args_kwargs']

POS_ONLY = inspect.Parameter.POSITIONAL_ONLY
KW_ONLY = inspect.Parameter.KEYWORD_ONLY
POS_KW = inspect.Parameter.POSITIONAL_OR_KEYWORD
VAR_POS = inspect.Parameter.VAR_POSITIONAL
VAR_KW = inspect.Parameter.VAR_KEYWORD

VAR = {VAR_POS, VAR_KW}
NOT_KW = {POS_ONLY, VAR_POS, VAR_KW}


def signature(f: Callable) -> Signature:
    '''``inspect.signature``, cached on ``f.__signature__``.'''
    try:
        return f.__signature__
    except AttributeError:
        s = _builtin_signature(f)
        try:
            f.__signature__ = s
        except AttributeError:
            pass
        return s


def _params(f: Callable|Iterable[Callable]) -> dict:
    if isinstance(f, (list, tuple)):
        return {k: p for fi in f for k, p in signature(fi).parameters.items()}
    return dict(signature(f).parameters)


def traceto(*funcs: Callable) -> Callable:
    '''Merge the keyword parameters of ``funcs`` into the decorated function's signature.

    The traced parameters become keyword-only and ``**kw`` is dropped from the visible
    signature (the decorated function still receives them through it). Parameters whose
    name starts with an underscore are skipped.

    .. code-block:: python

        def flags(verbose: bool = False): ...

        @traceto(flags)
        def run(path, **kw): ...

        p = signature(run).parameters
        assert list(p) == ['path', 'verbose'] and p['verbose'].kind == KW_ONLY
    '''
    traced = {
        p.name: p.replace(kind=KW_ONLY)
        for f in funcs for p in _params(f).values()
        if p.kind not in NOT_KW and not p.name.startswith('_')}

    def decorator(func):
        @_builtin_wraps(func)
        def f(*a, **kw):
            return func(*a, **kw)

        params = list(signature(func).parameters.values())
        own = [p for p in params if p.kind != VAR_KW]
        names = {p.name for p in own}
        f.__signature__ = signature(func).replace(
            parameters=own + [p for p in traced.values() if p.name not in names])
        f.__traceto__ = funcs
        return f
    return decorator


def divide(kw: dict, *funcs: Callable|Iterable[Callable], mode: str = 'strict') -> list:
    '''Split ``kw`` between functions by their signatures.

    Arguments:
        kw (dict): The keyword arguments to split. Not modified.
        *funcs (callable): The functions (or tuples of functions) to split between.
        mode (str): ``'strict'`` raises on arguments no function takes; ``'separate'``
            returns them as one more dict at the end.

    Returns:
        One dict per function, plus the leftovers if ``mode == 'separate'``.

    Raises:
        TypeError: in strict mode, if an argument matches no function.

    .. code-block:: python

        def a(x=0): ...
        def b(y=0): ...

        assert divide({'x': 1, 'y': 2, 'z': 3}, a, b, mode='separate') == [{'x': 1}, {'y': 2}, {'z': 3}]
    '''
    kws = []
    unused = dict(kw)
    for f in funcs:
        ps = _params(f)
        kws.append({
            name: kw[name] for name, p in ps.items()
            if name in kw and p.kind not in NOT_KW})
        for name in kws[-1]:
            unused.pop(name, None)

    if mode == 'separate':
        kws.append(unused)
    elif unused:
        raise TypeError('Got unexpected arguments: {}'.format(tuple(unused)))
    return kws


def as_args_kwargs(func: Callable, kw: dict):
    '''Pull out the leading arguments of ``kw`` that ``func`` takes positionally.

    .. code-block:: python

        def f(path, /, slots=None, *, out=None): ...

        a, kw = as_args_kwargs(f, {'path': 'x.json', 'slots': 3, 'out': None})
        assert a == ['x.json', 3] and kw == {'out': None}
    '''
    pos, kw = [], dict(kw)
    for name, p in signature(func).parameters.items():
        if p.kind == VAR_POS:
            pos.extend(kw.pop(name, ()))
            break
        if p.kind not in (POS_ONLY, POS_KW) or name not in kw:
            break
        pos.append(kw.pop(name))
    return pos, kw
