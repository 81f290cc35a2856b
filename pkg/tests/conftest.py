import numpy as np
import pytest

from h3engine.honeycomb import enumerate_tiling


@pytest.fixture(scope="session")
def tiling2():
    return enumerate_tiling(2)


@pytest.fixture(scope="session")
def tiling3():
    return enumerate_tiling(3)


@pytest.fixture(scope="session")
def tiling4():
    return enumerate_tiling(4)


def rng(seed):
    return np.random.default_rng(seed)


def random_deltas(seed, count, max_norm):
    """Uniform directions with |dr| uniform in (0, max_norm)."""
    g = rng(seed)
    v = g.normal(size=(count, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * g.uniform(0.0, max_norm, size=(count, 1))


def series_exp_translation(d, terms=30):
    """Independent oracle: truncated series sum of M^n / n!."""
    d = np.asarray(d, dtype=float)
    m = np.zeros((4, 4))
    m[0, 3] = m[3, 0] = d[0]
    m[1, 3] = m[3, 1] = d[1]
    m[2, 3] = m[3, 2] = d[2]
    out = np.eye(4)
    acc = np.eye(4)
    for n in range(1, terms + 1):
        acc = acc @ m / n
        out = out + acc
    return out
