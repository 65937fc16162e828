import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrlab.errors import ContractError, InvalidInputError
from bohrlab.functionals import eval_functional
from bohrlab.multidim import (
    THEOREMS,
    CircularDomain,
    HomogeneousExpansion,
    compose_linear,
    defining_direction,
    homogeneous_expand,
    line_restrict,
    linear_power,
    normalize_direction,
    polydisk_bohr_sum,
    random_direction,
    random_test_function,
    sharpness_witness,
    theorem_constant,
    verify_homothetic,
)
from bohrlab.series import psi_coefficients, sup_norm_on_circle

BIDISK = CircularDomain(2, "polydisk")
Z1Z2 = homogeneous_expand({(1, 1): 1.0}, 2, 2)


def test_expand_examples():
    h = homogeneous_expand({(1, 0): 3.0, (1, 1): 1.0}, 2)
    assert set(h.parts) == {1, 2}
    assert h.parts[1][(1, 0)][0, 0] == 3 and h.parts[2][(1, 1)][0, 0] == 1
    h = homogeneous_expand({(0, 0): 0.5}, 2)
    assert set(h.parts) == {0}
    h = homogeneous_expand({(2, 0): 1.0, (0, 2): 1.0}, 2)
    assert list(h.parts) == [2] and len(h.parts[2]) == 2
    with pytest.raises(InvalidInputError):
        homogeneous_expand({(1,): 1.0}, 2)


def test_restrict_example():
    s = line_restrict(Z1Z2, [1, 1])
    assert np.allclose(s.coeffs[2], np.eye(2)) and not np.any(s.coeffs[:2])
    assert s.exact and s.schur_certified
    with pytest.raises(InvalidInputError):
        line_restrict(Z1Z2, [1, 1, 1])


def test_restrict_homogeneity(rng):
    h = random_test_function(CircularDomain(3, "ball"), 5)
    alpha = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    a = line_restrict(h, alpha, assume_schur=False).coeffs
    b = line_restrict(h, 2 * alpha, assume_schur=False).coeffs
    k = np.arange(a.shape[0])[:, None, None]
    assert np.allclose(b, a * 2.0**k, atol=1e-12)


def test_restrict_linear(rng):
    dom = CircularDomain(2, "polydisk")
    f, g = random_test_function(dom, 1), random_test_function(dom, 2)
    alpha = np.array([0.3 + 0.2j, -0.7])
    lhs = line_restrict(f + g.scaled(0.5), alpha, order=8, assume_schur=False).coeffs
    rhs = line_restrict(f, alpha, 8, False).coeffs + 0.5 * line_restrict(g, alpha, 8, False).coeffs
    assert np.allclose(lhs, rhs, atol=1e-14)


def test_witness_restricts_to_chi1():
    dom = CircularDomain(2, "functional", ((1.0, 1.0),))
    h = sharpness_witness("T1", dom, a=0.6, order=12)
    s = line_restrict(h, defining_direction(dom))
    k = np.arange(2, 13)
    c = s.coeffs[:, 0, 0].real
    assert c[1] == pytest.approx(0.6, abs=1e-14)
    assert np.allclose(c[2:], -(16 / 25) * 0.6 ** (k - 2), atol=1e-14)
    assert np.allclose(s.coeffs[5], c[5] * np.eye(2))


def test_witness_on_first_axis_is_one_variable():
    dom = CircularDomain(3, "functional", ((1.0, 0.0, 0.0),))
    h = sharpness_witness("T1", dom, a=0.6, order=10)
    assert all(beta[1] == beta[2] == 0 for beta, _ in h.terms())
    want = psi_coefficients(0.6, 10)
    for beta, a in h.terms():
        assert a[0, 0] == pytest.approx(want[beta[0]])


def test_witness_exceeds_one_beyond_three_fifths():
    dom = CircularDomain(2, "functional", ((0.5, 0.5j),))
    h = sharpness_witness("T1", dom, a=0.6, order=60)
    s = line_restrict(h, defining_direction(dom))
    assert eval_functional("G", s, 0.65).value > 1


def test_witness_needs_functional_domain():
    with pytest.raises(ContractError):
        sharpness_witness("T1", BIDISK)


def test_linear_power_multinomial():
    p = linear_power([2.0, 1j], 3)
    assert p[(3, 0)] == 8 and p[(2, 1)] == 12j and p[(1, 2)] == -6 and p[(0, 3)] == -1j


def test_bohr_sum_examples():
    assert polydisk_bohr_sum(Z1Z2, [0.6, 0.6]) == pytest.approx(0.36)
    zero = homogeneous_expand({}, 2, 2)
    assert polydisk_bohr_sum(zero, [0.5, 0.5]) == 0.0
    half = homogeneous_expand({(1, 0): 0.5, (0, 1): 0.5}, 2, 2)
    for r in (0.1, 0.5, 0.9):
        assert polydisk_bohr_sum(half, [r, r]) == pytest.approx(r)


@given(st.integers(0, 1000), st.floats(0, 0.9), st.floats(0, 0.9), st.floats(0, 0.09))
def test_bohr_sum_monotone(seed, x, y, dx):
    h = random_test_function(CircularDomain(2, "polydisk"), seed)
    assert polydisk_bohr_sum(h, [x + dx, y]) >= polydisk_bohr_sum(h, [x, y]) - 1e-15


def test_directions_touch_boundary(rng):
    doms = [
        CircularDomain(3, "polydisk"),
        CircularDomain(3, "ball"),
        CircularDomain(2, "functional", ((1, 1), (1, -2j))),
    ]
    for dom in doms:
        for _ in range(20):
            d = random_direction(dom, rng)
            assert dom.gauge(d.alpha) == pytest.approx(1.0, abs=1e-14)
    assert random_direction(doms[0], rng).normalization == "sup"
    assert random_direction(doms[1], rng).normalization == "l2"
    with pytest.raises(ContractError):
        normalize_direction([1, -1], CircularDomain(2, "functional", ((1, 1),)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["polydisk", "ball"]), st.sampled_from([2, 3]))
def test_restricted_test_function_is_schur(seed, shape, n):
    dom = CircularDomain(n, shape)
    h = random_test_function(dom, seed)
    d = random_direction(dom, np.random.default_rng(seed))
    s = line_restrict(h, d)
    for r in (0.3, 0.6, 0.9):
        assert sup_norm_on_circle(s, r, 512) <= 1 + 1e-9


def test_verify_examples():
    c4 = (5 - math.sqrt(17)) / 2
    assert verify_homothetic("T4", Z1Z2, BIDISK, c4, directions=64).ok
    s = line_restrict(Z1Z2, normalize_direction([1, 1], BIDISK))
    assert eval_functional("G", s, 0.6).value == pytest.approx(0.9, abs=1e-14)
    assert verify_homothetic("T1", Z1Z2, BIDISK, 0.6, directions=64).ok


def test_verify_witness_fails_at_062():
    dom = CircularDomain(2, "functional", ((1.0, 1.0),))
    h = sharpness_witness("T1", dom, a=0.6)
    rep = verify_homothetic("T1", h, dom, 0.62, directions=8, extra_directions=[defining_direction(dom)])
    assert any(v.trial == -1 for v in rep.violations)


def test_verify_requires_origin_zero():
    h = homogeneous_expand({(0, 0): 0.1, (1, 0): 0.5}, 2, 2)
    with pytest.raises(ContractError):
        verify_homothetic("T1", h, BIDISK, 0.5)
    with pytest.raises(ContractError):
        verify_homothetic("T1", Z1Z2, BIDISK, 1.0)
    with pytest.raises(InvalidInputError):
        verify_homothetic("T7", Z1Z2, BIDISK, 0.5)


def test_theorem_defaults():
    assert theorem_constant("T1") == pytest.approx(0.6)
    assert theorem_constant("t2") == pytest.approx(0.484063, abs=1e-6)
    assert [THEOREMS[t][0].value for t in sorted(THEOREMS)] == ["G", "G1", "G2", "H", "H1", "H2"]


def test_verify_reproducible():
    dom = CircularDomain(3, "ball")
    h = random_test_function(dom, 4)
    a = verify_homothetic("T2", h, dom, 0.6, 32, seed=3).to_json_dict()
    b = verify_homothetic("T2", h, dom, 0.6, 32, seed=3).to_json_dict()
    assert a == b


def test_json_formats():
    h = compose_linear([0, 0.5, -0.25j], [1, 2j], 2)
    g = HomogeneousExpansion.from_json_dict(h.to_json_dict())
    assert g.n == 2 and dict((b, a.tolist()) for b, a in g.terms()) == dict((b, a.tolist()) for b, a in h.terms())
    dom = CircularDomain.from_json_dict({"shape": "functional", "alphas": [[[1, 0], [0, 1]]]})
    assert dom.n == 2 and dom.functionals == ((1, 1j),)
    assert CircularDomain.from_json_dict({"shape": "euclidean-ball", "n": 3}).shape == "ball"
    with pytest.raises(InvalidInputError, match="coeffs"):
        HomogeneousExpansion.from_json_dict({"n": 2})
    with pytest.raises(InvalidInputError, match="shape"):
        CircularDomain.from_json_dict({"n": 2})
