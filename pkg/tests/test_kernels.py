import random

import pytest

from torsionph import _pycore, kernels

BACKENDS = kernels.available_backends()


@pytest.fixture(params=BACKENDS)
def backend(request):
    previous = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


def _rand(rng, m, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def _mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def test_compiled_backend_is_built():
    # the package ships an optional extension; warn loudly if it went missing
    if "compiled" not in BACKENDS:
        pytest.skip("compiled extension not built in this environment")
    assert kernels.backend() in BACKENDS


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_snf_agrees_with_reference(backend):
    rng = random.Random(11)
    for _ in range(300):
        m, n = rng.randint(0, 7), rng.randint(0, 7)
        M = _rand(rng, m, n)
        U, D, V = kernels.snf(M, m, n)
        assert (U, D, V) == _pycore.snf(M, m, n)
        if m and n:
            assert _mul(_mul(U, M), V) == D


def test_snf_overflow_falls_back(backend):
    big = 2**62
    M = [[big, 3], [5, big - 1]]
    U, D, V = kernels.snf(M, 2, 2)
    assert _mul(_mul(U, M), V) == D


def test_rank_and_nullspace_mod_p(backend):
    rng = random.Random(12)
    for p in (2, 3, 5, 7, 101):
        for _ in range(60):
            m, n = rng.randint(0, 6), rng.randint(0, 6)
            M = _rand(rng, m, n)
            r = kernels.rank_mod_p(M, n, p)
            assert r == _pycore.rank_mod_p(M, n, p)
            basis = kernels.nullspace_mod_p(M, n, p)
            assert basis == _pycore.nullspace_mod_p(M, n, p)
            assert len(basis) == n - r
            assert all(0 <= x < p for x in sum(basis, []))
            for x in basis:
                assert all(sum(a * b for a, b in zip(row, x)) % p == 0 for row in M)


def test_column_reduction_mod_p(backend):
    rng = random.Random(13)
    for p in (2, 3, 7):
        for _ in range(60):
            nrows = rng.randint(1, 8)
            cols = []
            for _ in range(rng.randint(0, 8)):
                rows = sorted(rng.sample(range(nrows), rng.randint(0, min(3, nrows))))
                cols.append([(r, rng.randint(1, p - 1)) for r in rows])
            lows = kernels.reduce_columns_mod_p(cols, nrows, p)
            assert lows == _pycore.reduce_columns_mod_p(cols, nrows, p)
            nonzero = [x for x in lows if x >= 0]
            assert len(nonzero) == len(set(nonzero))
            dense = [[0] * len(cols) for _ in range(nrows)]
            for j, col in enumerate(cols):
                for r, c in col:
                    dense[r][j] = c
            assert len(nonzero) == _pycore.rank_mod_p(dense, len(cols), p)


def test_large_prime_falls_back(backend):
    p = 4294967311  # above the int64-safe modulus for dense products
    assert kernels.rank_mod_p([[1, 2], [2, 4]], 2, p) == 1
