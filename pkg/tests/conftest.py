import json
import numpy as np
import pytest
from hypothesis import settings, strategies as st

import frameext as fx

settings.register_profile('frameext', max_examples=200, deadline=None)
settings.load_profile('frameext')


def _random(rng, n, d):
    return rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))


@st.composite
def frames(draw, max_dim=32, max_extra=32):
    '''Random complex frames: ``n >= d`` Gaussian vectors (spanning with probability one).'''
    d = draw(st.integers(1, max_dim))
    n = d + draw(st.integers(0, max_extra))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return fx.make_sequence(d, _random(rng, n, d))


@st.composite
def contractions(draw, max_dim=32, max_extra=32, spanning=True):
    '''Random sequences scaled so that the optimal upper bound is at most 1.

    With ``spanning=False`` the vectors live in a random proper subspace.
    '''
    d = draw(st.integers(1 if spanning else 2, max_dim))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    if spanning:
        F = _random(rng, d + draw(st.integers(0, max_extra)), d)
    else:
        r = draw(st.integers(1, d - 1))
        F = _random(rng, r + draw(st.integers(0, max_extra)), r) @ _random(rng, r, d)
    B = np.linalg.eigvalsh(F.T @ F.conj())[-1]
    scale = draw(st.floats(0.3, 1.0))
    return fx.make_sequence(d, F * np.sqrt(scale / B))


@pytest.fixture
def write_json(tmp_path):
    '''Write a sequence file from a list of real or complex vectors.'''
    def write(vectors, dim=None, name='seq.json'):
        vectors = [[complex(c) for c in v] for v in vectors]
        path = tmp_path / name
        path.write_text(json.dumps({
            'dim': dim if dim is not None else len(vectors[0]),
            'vectors': [[[c.real, c.imag] for c in v] for v in vectors],
        }))
        return str(path)
    return write
