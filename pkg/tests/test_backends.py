import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igcheck.backends import available_backends, get_backend
from igcheck.backends.dense import DenseBackend

HAVE_PACKED = "packed" in available_backends()

pytestmark = pytest.mark.skipif(
    not HAVE_PACKED, reason="compiled backend unavailable")


def _packed(n):
    return get_backend(n, "packed")


@st.composite
def _tables(draw, max_arity=3):
    n = draw(st.sampled_from([1, 2, 3, 5, 9, 65]))
    k = draw(st.integers(min_value=0, max_value=max_arity))
    if n ** k > 300_000:
        k = 2
    bits = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    rng = np.random.default_rng(bits)
    arr = rng.random((n,) * k) < draw(st.sampled_from([0.1, 0.5, 0.9]))
    return n, k, arr


@settings(max_examples=80, deadline=None)
@given(_tables())
def test_round_trip_and_pointwise_ops(t):
    n, k, arr = t
    d, p = DenseBackend(n), _packed(n)
    pd_, pp = d.from_dense(arr), p.from_dense(arr)
    assert np.array_equal(p.to_dense(pp, k), arr)
    assert np.array_equal(d.to_dense(pd_, k), arr)
    assert np.array_equal(p.to_dense(p.lnot(pp, k), k),
                          d.to_dense(d.lnot(pd_, k), k))
    assert p.popcount(pp, k) == d.popcount(pd_, k) == int(arr.sum())
    assert set(p.true_cells(pp, k)) == set(d.true_cells(pd_, k))


@settings(max_examples=80, deadline=None)
@given(_tables(), st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_binary_ops_agree(t, bits):
    n, k, a = t
    rng = np.random.default_rng(bits)
    b = rng.random((n,) * k) < 0.5
    d, p = DenseBackend(n), _packed(n)
    da, db = d.from_dense(a), d.from_dense(b)
    pa, pb = p.from_dense(a), p.from_dense(b)
    assert np.array_equal(p.to_dense(p.land(pa, pb, k), k), a & b)
    assert np.array_equal(p.to_dense(p.lor(pa, pb, k), k), a | b)
    assert np.array_equal(d.to_dense(d.land(da, db, k), k), a & b)
    assert p.eq(pa, pb, k) == d.eq(da, db, k) == np.array_equal(a, b)
    assert p.eq(pa, pa, k) and d.eq(da, da, k)
    want_subset = bool(np.all(~a | b))
    assert p.is_subset(pa, pb, k) == d.is_subset(da, db, k) == want_subset
    both = a & b
    assert p.is_subset(p.from_dense(both), pa, k)
    assert d.is_subset(d.from_dense(both), da, k)


@settings(max_examples=80, deadline=None)
@given(_tables(max_arity=2), st.data())
def test_structural_ops_agree(t, data):
    n, k, arr = t
    d, p = DenseBackend(n), _packed(n)
    pd_, pp = d.from_dense(arr), p.from_dense(arr)

    pos = data.draw(st.integers(min_value=0, max_value=k))
    want = np.broadcast_to(
        np.expand_dims(arr, pos), arr.shape[:pos] + (n,) + arr.shape[pos:])
    assert np.array_equal(p.to_dense(p.insert_axis(pp, k, pos), k + 1), want)
    assert np.array_equal(d.to_dense(d.insert_axis(pd_, k, pos), k + 1), want)

    if k >= 1:
        perm = data.draw(st.permutations(range(k)))
        perm = tuple(perm)
        want = np.transpose(arr, perm)
        assert np.array_equal(p.to_dense(p.transpose(pp, k, perm), k), want)
        assert np.array_equal(d.to_dense(d.transpose(pd_, k, perm), k), want)

        axis = data.draw(st.integers(min_value=0, max_value=k - 1))
        index = data.draw(st.integers(min_value=0, max_value=n - 1))
        want = np.take(arr, index, axis=axis)
        assert np.array_equal(
            p.to_dense(p.restrict(pp, k, axis, index), k - 1), want)
        assert np.array_equal(
            d.to_dense(d.restrict(pd_, k, axis, index), k - 1), want)

        assert np.array_equal(
            p.to_dense(p.reduce_any(pp, k, axis), k - 1), arr.any(axis=axis))
        assert np.array_equal(
            p.to_dense(p.reduce_all(pp, k, axis), k - 1), arr.all(axis=axis))
        assert np.array_equal(
            np.asarray(p.reduce_count(pp, k, axis)),
            arr.sum(axis=axis))
        assert np.array_equal(
            np.asarray(d.reduce_count(pd_, k, axis)),
            arr.sum(axis=axis))

        cell = tuple(data.draw(st.integers(min_value=0, max_value=n - 1))
                     for _ in range(k))
        assert p.get(pp, k, cell) == d.get(pd_, k, cell) == bool(arr[cell])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3, 5, 9, 65]),
       st.integers(min_value=0, max_value=2 ** 32 - 1),
       st.data())
def test_diagonal_agrees(n, bits, data):
    rng = np.random.default_rng(bits)
    k = data.draw(st.integers(min_value=2, max_value=3))
    if n ** k > 300_000:
        k = 2
    arr = rng.random((n,) * k) < 0.5
    ax1 = data.draw(st.integers(min_value=0, max_value=k - 2))
    ax2 = data.draw(st.integers(min_value=ax1 + 1, max_value=k - 1))
    tpos = data.draw(st.integers(min_value=0, max_value=k - 2))
    want = np.moveaxis(np.diagonal(arr, axis1=ax1, axis2=ax2), -1, tpos)
    d, p = DenseBackend(n), _packed(n)
    got_d = d.to_dense(d.diagonal(d.from_dense(arr), k, ax1, ax2, tpos), k - 1)
    got_p = p.to_dense(p.diagonal(p.from_dense(arr), k, ax1, ax2, tpos), k - 1)
    assert np.array_equal(got_d, want)
    assert np.array_equal(got_p, want)


def test_true_false_constants():
    for name in available_backends():
        be = get_backend(3, name)
        for k in range(3):
            assert be.popcount(be.false_(k), k) == 0
            assert be.popcount(be.true_(k), k) == 3 ** k
            assert be.eq(be.lnot(be.true_(k), k), be.false_(k), k)


def test_backend_selection():
    assert get_backend(4).name in available_backends()
    assert get_backend(4, "dense").name == "dense"
    with pytest.raises(Exception):
        get_backend(4, "bogus")
