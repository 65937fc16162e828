import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrlab.errors import ContractError, DomainError, InvalidInputError
from bohrlab.series import (
    MODES,
    FamilyParam,
    MatrixPowerSeries,
    blaschke_coefficients,
    certify_schur,
    diagonal_blaschke,
    eval_at,
    mobius_family,
    moebius_transform,
    psi_family,
    random_schur_matrix,
    scalar_embed,
    sup_norm_on_circle,
    tail_bound,
)

RADII = [round(0.1 * k, 1) for k in range(1, 10)]


def test_family_param_range():
    with pytest.raises(DomainError):
        FamilyParam(1.0)
    with pytest.raises(DomainError):
        FamilyParam(-0.1)


def test_eval_examples():
    s = psi_family(0.5)
    assert np.max(np.abs(eval_at(s, 0.5).data)) <= tail_bound(s, 0.5) + 1e-15
    assert eval_at(s, 0.0) == s.coefficient(0)
    m = eval_at(mobius_family(0.5), -0.5).data
    assert np.allclose(m, 0.8 * np.eye(2), atol=1e-15)
    with pytest.raises(DomainError):
        eval_at(s, 1.0)


def test_sup_norm_examples():
    assert sup_norm_on_circle(psi_family(0.5), 0.5) == pytest.approx(0.4, abs=1e-12)
    assert sup_norm_on_circle(scalar_embed([0.0, 0.0]), 0.7) == 0.0
    assert sup_norm_on_circle(scalar_embed([0.3 - 0.4j], dim=3), 0.7) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ContractError):
        sup_norm_on_circle(psi_family(0.5), 0.5, samples=4)


def test_sup_norm_monotone_under_refinement(rng):
    for seed in range(10):
        s = random_schur_matrix(2, 32, "diagonal-blaschke", seed)
        prev = 0.0
        for m in (16, 32, 64, 128, 256):
            cur = sup_norm_on_circle(s, 0.8, m)
            assert cur >= prev - 1e-15
            prev = cur


def test_tail_bound_examples():
    s = scalar_embed([0.0] * 11, schur_certified=True, exact=False)
    assert tail_bound(s, 0.5) == pytest.approx(2.0**-10, rel=1e-14)
    assert tail_bound(s, 0.0) == 0.0
    near = mobius_family(1 - 1e-9, order=10)
    assert tail_bound(near, 0.5) < 1e-8
    with pytest.raises(ContractError):
        tail_bound(scalar_embed([0.0, 1.0]).with_coeffs(np.zeros((2, 1, 1)), a0_scalar=None), 0.5)


@given(st.floats(0.0, 0.95), st.integers(2, 40))
def test_tail_bound_monotone(r, n):
    s = psi_family(0.5, order=n)
    t = tail_bound(s, r)
    assert tail_bound(s, min(r + 0.01, 0.99)) >= t
    assert tail_bound(psi_family(0.5, order=n + 1), r) <= t


def test_psi_examples():
    s = psi_family(0.0, order=8)
    c = s.coeffs[:, 0, 0]
    assert c[1] == 0 and c[2] == -1 and not np.any(c[3:])
    assert s.exact
    s = psi_family(0.6, order=12)
    c = s.coeffs[:, 0, 0].real
    assert c[1] == pytest.approx(0.6)
    k = np.arange(2, 13)
    assert np.allclose(c[2:], -(16 / 25) * 0.6 ** (k - 2), rtol=1e-14)
    assert np.allclose(s.coeffs[3], c[3] * np.eye(2))


def test_mobius_examples():
    c = mobius_family(0.0, order=5).coeffs[:, 0, 0]
    assert np.allclose(c, [0, -1, 0, 0, 0, 0])
    c = mobius_family(0.5, order=5).coeffs[:, 0, 0].real
    assert c[1] == pytest.approx(-0.75) and c[2] == pytest.approx(-0.375)
    assert c[3] == pytest.approx(-0.1875)
    for a in (0.0, 0.3, 0.9):
        m = mobius_family(a, order=20).coeffs
        p = psi_family(a, order=21).coeffs
        assert np.allclose(p[1:], m, atol=1e-15)


@pytest.mark.parametrize("a", [0.0, 0.2, 0.5, 0.8])
@pytest.mark.parametrize("r", [0.1, 0.5, 0.9])
def test_mobius_growth_equality(a, r):
    s = mobius_family(a)
    got = np.linalg.norm(eval_at(s, -r).data, 2)
    assert got == pytest.approx((a + r) / (1 + a * r), abs=1e-10 + tail_bound(s, r))


@pytest.mark.parametrize("a", [0.0, 0.3, 0.6, 0.9])
def test_psi_sup_norm(a):
    s = psi_family(a)
    for r in RADII:
        want = r * (a + r) / (1 + a * r)
        assert abs(sup_norm_on_circle(s, r) - want) <= 1e-6 + tail_bound(s, r)


def test_scalar_embed_examples():
    s = scalar_embed([0, 1])
    assert np.allclose(eval_at(s, 0.3).data, [[0.3]])
    assert scalar_embed([0.25]).order == 0
    m = mobius_family(0.5, order=6).coeffs[:, 0, 0]
    s = scalar_embed(m, exact=False, schur_certified=True)
    assert s.a0_scalar == pytest.approx(0.5)


def test_blaschke_coefficients():
    w = 0.3 + 0.4j
    c = blaschke_coefficients([w, -0.5j], 80)
    z = 0.2 - 0.1j
    want = (z - w) / (1 - np.conj(w) * z) * (z + 0.5j) / (1 - 0.5j * z)
    assert abs(np.polyval(c[::-1], z) - want) < 1e-14
    assert c[0] == pytest.approx(w * -0.5j)


def test_forced_diagonal_coefficients():
    s = diagonal_blaschke([[0.0], [0.0, 0.0, 0.0]], order=6)
    assert np.allclose(s.coeffs[1], np.diag([1, 0]))
    assert np.allclose(s.coeffs[3], np.diag([0, 1]))
    assert s.a0_scalar == 0 and s.exact


def test_moebius_constant_when_inner_zero():
    s = moebius_transform(0.4, MatrixPowerSeries(np.zeros((8, 2, 2))))
    assert np.allclose(s.coeffs[0], 0.4 * np.eye(2)) and not np.any(s.coeffs[1:])


def test_moebius_transform_matches_scalar():
    # h = z I gives (a0 + z)/(1 + a0 z)
    h = np.zeros((10, 1, 1))
    h[1] = 1
    c = moebius_transform(0.5, MatrixPowerSeries(h)).coeffs[:, 0, 0].real
    # (a0 + z)/(1 + a0 z) = a0 + (1 - a0^2) sum (-a0)^(k-1) z^k
    k = np.arange(1, 10)
    assert np.allclose(c[1:], 0.75 * (-0.5) ** (k - 1))
    assert c[0] == pytest.approx(0.5)


@pytest.mark.parametrize("mode", MODES)
def test_random_series_certified(mode):
    for seed in range(25):
        s = random_schur_matrix(2, 64, mode, seed)
        assert s.schur_certified
        assert certify_schur(s)
        if mode != "diagonal-blaschke":
            assert s.a0_scalar is not None
            assert np.all(s.norms()[1:] <= 1 - abs(s.a0_scalar) ** 2 + 1e-9)


def test_random_series_reproducible():
    for mode in MODES:
        a = random_schur_matrix(3, 20, mode, 7)
        b = random_schur_matrix(3, 20, mode, 7)
        assert np.array_equal(a.coeffs, b.coeffs) and a.descriptor == b.descriptor


def test_random_vanish_at_origin():
    for mode in MODES:
        s = random_schur_matrix(2, 20, mode, 3, vanish_at_origin=True)
        assert not np.any(np.abs(s.coeffs[0]) > 1e-15)


def test_scalar_type_replay_from_descriptor():
    s = random_schur_matrix(2, 30, "scalar-type", 11)
    d = s.descriptor
    zs = [complex(*w) for w in d["zeros"]]
    c = blaschke_coefficients(zs, 30, complex(*d["phase"]))
    assert np.allclose(s.coeffs[:, 0, 0], c)


def test_invariant_violations_rejected():
    with pytest.raises(InvalidInputError, match="a0_scalar"):
        MatrixPowerSeries(np.stack([np.diag([0.1, 0.2])] * 2), a0_scalar=0.1)
    with pytest.raises(InvalidInputError, match="n=1"):
        MatrixPowerSeries(np.stack([0.5 * np.eye(2), 0.9 * np.eye(2)]), schur_certified=True, a0_scalar=0.5)
    with pytest.raises(InvalidInputError):
        MatrixPowerSeries(np.zeros((3, 2, 3)))
    with pytest.raises(InvalidInputError):
        MatrixPowerSeries(np.full((3, 2, 2), np.inf))


def test_json_roundtrip():
    s = random_schur_matrix(2, 10, "moebius-conjugated", 5)
    t = MatrixPowerSeries.loads(s.dumps())
    assert np.array_equal(s.coeffs, t.coeffs)
    assert t.a0_scalar == s.a0_scalar and t.schur_certified
    obj = json.loads(s.dumps())
    del obj["order"]
    with pytest.raises(InvalidInputError, match="order"):
        MatrixPowerSeries.from_json_dict(obj)
    obj = json.loads(s.dumps())
    obj["coeffs"][0] = [[1, 2]]
    with pytest.raises(InvalidInputError, match="coeffs"):
        MatrixPowerSeries.from_json_dict(obj)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(MODES))
def test_certified_series_bounded_on_circles(seed, mode):
    s = random_schur_matrix(2, 48, mode, seed)
    for r in RADII:
        assert sup_norm_on_circle(s, r, 512) <= 1 + 1e-6
