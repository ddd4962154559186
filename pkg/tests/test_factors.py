import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ordscore as osc
from ordscore.errors import InvalidDegree


def make_factor(k, codes):
    return osc.OrderedFactor("f", tuple(f"lvl{i}" for i in range(k)), np.asarray(codes))


@pytest.mark.parametrize("k", [2, 3, 5])
def test_integer_scores(k):
    f = make_factor(k, np.arange(1, k + 1))
    assert np.array_equal(osc.integer_scores(f), np.arange(1, k + 1, dtype=float))


def test_polynomial_contrasts_k3_frozen():
    c = osc.polynomial_contrasts(3, 2)
    expected = np.array(
        [
            [-1 / np.sqrt(2), 1 / np.sqrt(6)],
            [0.0, -2 / np.sqrt(6)],
            [1 / np.sqrt(2), 1 / np.sqrt(6)],
        ]
    )
    assert np.allclose(c, expected, atol=1e-12)


def test_polynomial_contrasts_k2():
    c = osc.polynomial_contrasts(2, 1)
    assert np.allclose(c[:, 0], [-1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-12)


def _gram_schmidt_contrasts(k, degree):
    # Independent oracle: classical Gram-Schmidt on the centered Vandermonde
    # columns, same positive-at-top sign convention.
    x = np.arange(1.0, k + 1)
    vand = np.vander(x - x.mean(), degree + 1, increasing=True)
    q = np.zeros_like(vand)
    for j in range(degree + 1):
        v = vand[:, j].copy()
        for i in range(j):
            v = v - (q[:, i] @ vand[:, j]) * q[:, i]
        q[:, j] = v / np.linalg.norm(v)
    c = q[:, 1:]
    return c * np.where(c[-1, :] > 0, 1.0, -1.0)


@pytest.mark.parametrize("k", [3, 4, 5, 6, 8])
def test_contrasts_match_gram_schmidt_oracle(k):
    assert np.allclose(
        osc.polynomial_contrasts(k, k - 1), _gram_schmidt_contrasts(k, k - 1),
        atol=1e-8,
    )


@pytest.mark.parametrize("k", [3, 5, 9, 12])
def test_contrast_orthonormality(k):
    c = osc.polynomial_contrasts(k, k - 1)
    assert np.allclose(c.sum(axis=0), 0.0, atol=1e-10)
    assert np.allclose(c.T @ c, np.eye(k - 1), atol=1e-10)


def test_contrast_degree_validation():
    with pytest.raises(InvalidDegree):
        osc.polynomial_contrasts(4, 0)
    with pytest.raises(InvalidDegree):
        osc.polynomial_contrasts(4, 4)


def test_contrast_names():
    assert osc.contrast_names("color", 5) == [
        "color.L",
        "color.Q",
        "color.C",
        "color^4",
        "color^5",
    ]


def test_expand_scores_examples():
    f = make_factor(3, [1, 3, 2])
    assert np.array_equal(osc.expand_scores(f, np.array([1.0, 2.0, 3.0])), [1.0, 3.0, 2.0])
    f2 = make_factor(2, [2, 2])
    assert np.array_equal(osc.expand_scores(f2, np.array([0.0, 5.0])), [5.0, 5.0])
    f3 = make_factor(2, [1, 1, 1])
    assert np.array_equal(osc.expand_scores(f3, np.array([7.0, 9.0])), [7.0, 7.0, 7.0])


def test_expand_scores_length_check():
    with pytest.raises(ValueError):
        osc.expand_scores(make_factor(3, [1, 2]), np.array([1.0, 2.0]))


@settings(deadline=None)
@given(
    a=st.floats(-50, 50),
    b=st.floats(-50, 50),
    codes=st.lists(st.integers(1, 4), min_size=1, max_size=30),
)
def test_expand_scores_affine_equivariance(a, b, codes):
    f = make_factor(4, codes)
    scores = np.array([1.0, 2.5, 4.0, 8.0])
    lhs = osc.expand_scores(f, a + b * scores)
    rhs = a + b * osc.expand_scores(f, scores)
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_full_degree_contrasts_span_one_hot():
    rng = np.random.default_rng(5)
    k, n = 5, 60
    codes = rng.integers(1, k + 1, size=n)
    yv = rng.normal(size=n)
    contrasts = osc.polynomial_contrasts(k, k - 1)
    x_poly = np.column_stack(
        [np.ones(n)] + [contrasts[codes - 1, j] for j in range(k - 1)]
    )
    x_onehot = np.zeros((n, k))
    x_onehot[np.arange(n), codes - 1] = 1.0
    rss_poly = osc.fit_ols(x_poly, yv).criterion
    rss_onehot = osc.fit_ols(x_onehot, yv).criterion
    assert abs(rss_poly - rss_onehot) <= 1e-8 * rss_onehot


def test_ordered_factor_validation():
    with pytest.raises(ValueError):
        osc.OrderedFactor("f", ("only",), np.array([1]))
    with pytest.raises(ValueError):
        osc.OrderedFactor("f", ("a", "a"), np.array([1]))
    with pytest.raises(ValueError):
        osc.OrderedFactor("f", ("a", "b"), np.array([0]))
    with pytest.raises(ValueError):
        osc.OrderedFactor("f", ("a", "b"), np.array([3]))
    with pytest.raises(ValueError):
        osc.OrderedFactor.from_labels("f", ["a", "z"], ["a", "b"])


def test_from_labels_preserves_given_order():
    # order comes from the level list, not from sorting
    f = osc.OrderedFactor.from_labels("f", ["hi", "lo", "hi"], ["lo", "hi"])
    assert f.levels == ("lo", "hi")
    assert np.array_equal(f.codes, [2, 1, 2])
