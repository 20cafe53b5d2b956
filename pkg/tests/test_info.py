import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import rel_entr
from scipy.stats import entropy as scipy_entropy

from changcube import info
from changcube.info import DiscreteDistribution as DD

HALF = DD.flat([0.5, 0.5])
QUARTER = DD.flat([0.25, 0.75])

shapes = st.lists(st.integers(1, 4), min_size=1, max_size=3).map(tuple)
product_shapes = st.lists(st.integers(1, 4), min_size=2, max_size=3).map(tuple)
seeds = st.integers(0, 2**32 - 1)


def rand(shape, seed):
    return info.random_distribution(shape, np.random.default_rng(seed))


def rand_product(shape, seed):
    rng = np.random.default_rng(seed)
    return info.product_of([info.random_distribution((m,), rng) for m in shape])


# -- validation ---------------------------------------------------------------


@pytest.mark.parametrize(
    "shape, probs",
    [((2,), [0.5, 0.6]), ((2,), [1.1, -0.1]), ((3,), [0.5, 0.5]), ((), []), ((2,), [np.nan, 1])],
)
def test_distribution_rejects(shape, probs):
    with pytest.raises(ValueError):
        DD(shape, probs)


def test_distribution_clamps_roundoff():
    d = DD.flat([1.0, -1e-17])
    assert d.probs.tolist() == [1.0, 0.0]


def test_json_roundtrip():
    d = rand((2, 3), 0)
    back = DD.from_dict(d.to_dict())
    assert back.shape == (2, 3)
    np.testing.assert_array_equal(back.probs, d.probs)
    assert DD.from_dict('{"shape": [2], "probs": [0.25, 0.75]}').shape == (2,)


# -- entropy / divergence -------------------------------------------------------


def test_entropy_examples():
    assert info.entropy(DD.uniform((4,))) == pytest.approx(math.log(4), abs=1e-15)
    assert info.entropy(DD.flat([0, 1, 0])) == 0.0
    assert info.entropy(QUARTER) == pytest.approx(0.5623351, abs=1e-7)
    assert info.entropy(QUARTER) == pytest.approx(
        0.25 * math.log(4) + 0.75 * math.log(4 / 3), abs=1e-15
    )


def test_kl_examples():
    assert info.kl_divergence(QUARTER, QUARTER) == 0.0
    expected = 0.5 * math.log(2) + 0.5 * math.log(2 / 3)
    assert info.kl_divergence(HALF, QUARTER) == pytest.approx(expected, abs=1e-15)
    assert info.kl_divergence(HALF, QUARTER) == pytest.approx(0.1438410, abs=1e-7)


def test_kl_uniform_on_subset_is_log_inverse_density():
    p = DD.flat([0, 1 / 3, 1 / 3, 0, 1 / 3, 0, 0, 0])
    q = DD.uniform((8,))
    assert info.kl_divergence(p, q) == pytest.approx(math.log(8 / 3), abs=1e-15)


def test_kl_absolute_continuity():
    p, q = DD.flat([0.5, 0.5]), DD.flat([1.0, 0.0])
    with pytest.raises(info.AbsoluteContinuityViolation):
        info.kl_divergence(p, q)
    assert info.kl_divergence(p, q, allow_infinite=True) == math.inf
    # the reverse direction is fine
    assert info.kl_divergence(q, p) == pytest.approx(math.log(2))


def test_shape_mismatch():
    with pytest.raises(ValueError):
        info.kl_divergence(DD.uniform((4,)), DD.uniform((2, 2)))
    with pytest.raises(ValueError):
        info.l1_distance(DD.uniform((4,)), DD.uniform((2,)))


def test_l1_examples():
    assert info.l1_distance(QUARTER, QUARTER) == 0.0
    assert info.l1_distance(DD.flat([1, 0]), DD.flat([0, 1])) == 2.0
    assert info.l1_distance(DD.flat([1, 0]), HALF) == 1.0


def test_pinsker_slack_examples():
    assert info.pinsker_slack(QUARTER, QUARTER) == 0.0
    assert info.pinsker_slack(HALF, QUARTER) == pytest.approx(0.1438410 - 0.125, abs=1e-7)


@settings(max_examples=200, deadline=None)
@given(shapes, seeds)
def test_against_scipy(shape, seed):
    p, q = rand(shape, seed), rand(shape, seed + 1)
    assert info.entropy(p) == pytest.approx(scipy_entropy(p.probs), abs=1e-12)
    assert info.kl_divergence(p, q) == pytest.approx(np.sum(rel_entr(p.probs, q.probs)), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(shapes, seeds)
def test_gibbs_pinsker_uniform_identity(shape, seed):
    p, q = rand(shape, seed), rand(shape, seed ^ 0xABCDEF)
    assert info.kl_divergence(p, q) >= 0
    assert info.kl_divergence(p, p) == 0.0
    assert info.pinsker_slack(p, q) >= -1e-12
    u = DD.uniform(shape)
    assert abs(info.kl_divergence(p, u) - (math.log(p.size) - info.entropy(p))) <= 1e-12
    assert 0 <= info.entropy(p) <= math.log(p.size) + 1e-12


# -- marginals and products ------------------------------------------------------


def test_marginal_of_product():
    d = info.product_of([DD.flat([0.3, 0.7]), DD.flat([0.9, 0.1])])
    np.testing.assert_allclose(info.marginal(d, 0).probs, [0.3, 0.7], atol=1e-15)
    np.testing.assert_allclose(info.marginal(d, 1).probs, [0.9, 0.1], atol=1e-15)


def test_marginal_uniform_2x3():
    np.testing.assert_allclose(info.marginal(DD.uniform((2, 3)), 1).probs, [1 / 3] * 3, atol=1e-15)


def test_marginal_errors():
    with pytest.raises(ValueError):
        info.marginal(DD.uniform((4,)), 0)
    with pytest.raises(IndexError):
        info.marginal(DD.uniform((2, 2)), 2)


def test_product_examples():
    single = DD.flat([0.2, 0.8])
    assert info.product_of([single]).probs.tolist() == [0.2, 0.8]
    np.testing.assert_allclose(info.product_of([HALF, HALF]).probs, [0.25] * 4, atol=0)
    np.testing.assert_allclose(
        info.product_of([DD.flat([0.4, 0.6]), DD.flat([0.3, 0.7])]).probs,
        [0.12, 0.28, 0.18, 0.42],
        atol=1e-15,
    )
    with pytest.raises(ValueError):
        info.product_of([])
    with pytest.raises(ValueError):
        info.product_of([DD.uniform((2, 2))])


def test_is_product():
    assert info.is_product(rand_product((2, 3, 2), 1))
    assert not info.is_product(DD.from_array([[0.5, 0], [0, 0.5]]))


# -- chain rule, mutual information, breakdowns -----------------------------------


def test_conditional_divergence_examples():
    p = rand((2, 3), 4)
    assert info.conditional_divergence(p, p) == 0.0
    a, b = rand_product((3, 2), 5), rand_product((3, 2), 6)
    assert info.conditional_divergence(a, b) == pytest.approx(
        info.kl_divergence(info.marginal(a, 1), info.marginal(b, 1)), abs=1e-12
    )


def test_conditional_divergence_zero_rows_and_violation():
    p = DD.from_array([[0.0, 0.0], [0.5, 0.5]])
    q = DD.from_array([[0.5, 0.0], [0.25, 0.25]])
    assert info.conditional_divergence(p, q) == pytest.approx(0.0, abs=1e-15)
    bad_q = DD.from_array([[0.5, 0.5], [0.0, 0.0]])
    with pytest.raises(info.AbsoluteContinuityViolation):
        info.conditional_divergence(p, bad_q)
    p2 = DD.from_array([[0.25, 0.25], [0.25, 0.25]])
    q2 = DD.from_array([[0.5, 0.0], [0.25, 0.25]])
    with pytest.raises(info.AbsoluteContinuityViolation):
        info.conditional_divergence(p2, q2)


def test_conditional_divergence_needs_two_factors():
    with pytest.raises(ValueError):
        info.conditional_divergence(DD.uniform((2, 2, 2)), DD.uniform((2, 2, 2)))


def test_mutual_information_examples():
    assert info.mutual_information(rand_product((3, 4), 2)) == pytest.approx(0.0, abs=1e-12)
    diag = DD.from_array([[0.5, 0.0], [0.0, 0.5]])
    assert info.mutual_information(diag) == pytest.approx(math.log(2), abs=1e-15)
    assert info.mutual_information(DD.uniform((2, 2))) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.tuples(st.integers(1, 4), st.integers(1, 4)), seeds)
def test_chain_rule_and_gap_identity(shape, seed):
    p, q = rand(shape, seed), rand(shape, seed + 7)
    lhs = info.kl_divergence(p, q)
    rhs = info.kl_divergence(info.marginal(p, 0), info.marginal(q, 0)) + info.conditional_divergence(p, q)
    assert abs(lhs - rhs) <= 1e-12
    qp = rand_product(shape, seed + 9)
    bd = info.superadditivity_breakdown(p, qp)
    assert abs(bd.gap - info.mutual_information(p)) <= 1e-12
    assert info.mutual_information(p) >= -1e-12


@settings(max_examples=200, deadline=None)
@given(product_shapes, seeds)
def test_lemma_gap_nonnegative_for_product_q(shape, seed):
    p, q = rand(shape, seed), rand_product(shape, seed + 3)
    bd = info.superadditivity_breakdown(p, q)
    assert bd.gap >= -1e-9
    assert abs(bd.joint - (bd.marginal_sum + bd.gap)) <= 1e-12
    assert len(bd.per_coordinate) == len(shape)


@settings(max_examples=200, deadline=None)
@given(product_shapes, seeds)
def test_entropy_subadditivity(shape, seed):
    p = rand(shape, seed)
    assert info.entropy(p) <= sum(info.entropy(m) for m in info.marginals(p)) + 1e-12


def test_superadditivity_refuses_non_product():
    p, q = info.counterexample_pair(0.01)
    with pytest.raises(info.NotAProductDistribution):
        info.superadditivity_breakdown(p, q)


def test_breakdown_trivial_and_halfcube():
    q = DD.uniform((2, 2))
    bd = info.superadditivity_breakdown(q, q)
    assert (bd.joint, bd.marginal_sum, bd.gap) == (0.0, 0.0, 0.0)
    # uniform on {x_1 = +1} inside {-1,1}^2, axis 0 = x_1
    p = DD.from_array([[0.5, 0.5], [0.0, 0.0]])
    bd = info.superadditivity_breakdown(p, q)
    assert bd.joint == pytest.approx(math.log(2), abs=1e-15)
    assert bd.marginal_sum == pytest.approx(math.log(2), abs=1e-15)
    assert bd.gap == pytest.approx(0.0, abs=1e-15)


# -- the 2x2 counterexample family ------------------------------------------------


def test_counterexample_matrices():
    p, q = info.counterexample_pair(0.0)
    np.testing.assert_array_equal(p.probs, q.probs)
    _, q = info.counterexample_pair(0.01)
    np.testing.assert_allclose(q.array(), [[0.22, 0.26], [0.26, 0.26]], atol=1e-15)
    _, q = info.counterexample_pair(-0.2)
    np.testing.assert_allclose(q.array(), [[0.85, 0.05], [0.05, 0.05]], atol=1e-15)


@pytest.mark.parametrize("eps", [-0.25, 1 / 12, 0.2, -1.0])
def test_counterexample_range(eps):
    with pytest.raises(ValueError):
        info.counterexample_pair(eps)


def test_counterexample_marginals():
    eps = 0.03
    _, q = info.counterexample_pair(eps)
    for i in (0, 1):
        np.testing.assert_allclose(info.marginal(q, i).probs, [0.5 - 2 * eps, 0.5 + 2 * eps], atol=1e-15)


@pytest.mark.parametrize("eps", [-0.2, -0.1, 0.01, 0.05])
def test_counterexample_q_not_product(eps):
    _, q = info.counterexample_pair(eps)
    assert not info.is_product(q)
    assert info.is_product(info.counterexample_pair(0.0)[1])


def test_counterexample_values():
    p, q = info.counterexample_pair(0.01)
    bd = info.raw_breakdown(p, q)
    assert bd.joint == pytest.approx(0.0025, abs=5e-4)
    assert bd.marginal_sum == pytest.approx(0.0016, abs=2e-4)
    assert bd.gap > 0
    p, q = info.counterexample_pair(-0.2)
    bd = info.raw_breakdown(p, q)
    assert bd.joint == pytest.approx(0.90, abs=0.01)
    assert bd.marginal_sum == pytest.approx(1.02, abs=0.01)
    assert bd.gap < 0
    # p itself is a product
    assert info.mutual_information(p) == 0.0


def test_counterexample_closed_form():
    eps = -0.2
    p, q = info.counterexample_pair(eps)
    joint = 0.25 * (math.log(0.25 / (0.25 - 3 * eps)) + 3 * math.log(0.25 / (0.25 + eps)))
    marg = 2 * (0.5 * math.log(0.5 / (0.5 - 2 * eps)) + 0.5 * math.log(0.5 / (0.5 + 2 * eps)))
    bd = info.raw_breakdown(p, q)
    assert bd.joint == pytest.approx(joint, abs=1e-14)
    assert bd.marginal_sum == pytest.approx(marg, abs=1e-14)


def test_raw_breakdown_identity():
    q = rand((3, 3), 1)
    bd = info.raw_breakdown(q, q)
    assert (bd.joint, bd.marginal_sum, bd.gap) == (0.0, 0.0, 0.0)
    assert set(bd.to_dict()) == {"joint", "marginal_sum", "gap", "per_coordinate"}
