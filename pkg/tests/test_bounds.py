import warnings

import numpy as np
import pytest

from bohrlab.bounds import (
    SCHWARZ_PICK_POINTS,
    check_growth,
    check_schwarz_pick,
    check_theorem_a,
    check_wiener_bounds,
    derivative_coefficient,
    explore_counterexamples,
    schwarz_pick_sides,
    sweep,
    trial_seed,
)
from bohrlab.errors import ContractError, InvalidInputError
from bohrlab.series import (
    MODES,
    diagonal_blaschke,
    eval_at,
    mobius_family,
    psi_family,
    random_schur_matrix,
    scalar_embed,
)


def test_schwarz_pick_mobius_equality():
    lhs, rhs = schwarz_pick_sides(mobius_family(0.5), 0.0, 1)
    assert lhs == pytest.approx(0.75, abs=1e-12) and rhs == pytest.approx(0.75, abs=1e-12)
    assert check_schwarz_pick(mobius_family(0.5), 0.0, 1)


def test_schwarz_pick_constant_series():
    s = scalar_embed([0.3, 0.0, 0.0], schur_certified=True)
    for n in (1, 2):
        assert schwarz_pick_sides(s, 0.4, n)[0] == 0.0
        assert check_schwarz_pick(s, 0.4, n)


@pytest.mark.parametrize("mode", ["scalar-type", "moebius-conjugated"])
def test_schwarz_pick_at_origin_is_coefficient_bound(mode):
    for seed in range(10):
        s = random_schur_matrix(2, 20, mode, seed)
        for n in range(1, 6):
            lhs, rhs = schwarz_pick_sides(s, 0.0, n)
            assert lhs == pytest.approx(np.linalg.norm(s.coeffs[n], 2), abs=1e-12)
            assert rhs == pytest.approx(1 - abs(s.a0_scalar) ** 2, abs=1e-12)


def test_derivative_matches_finite_difference():
    s = random_schur_matrix(2, 30, "moebius-conjugated", 4)
    a, h = 0.3 + 0.1j, 1e-5
    fd = (eval_at(s, a + h).data - eval_at(s, a - h).data) / (2 * h)
    assert np.allclose(derivative_coefficient(s, a, 1), fd, atol=1e-8)
    fd2 = (eval_at(s, a + h).data - 2 * eval_at(s, a).data + eval_at(s, a - h).data) / h**2 / 2
    assert np.allclose(derivative_coefficient(s, a, 2), fd2, atol=1e-4)


def test_schwarz_pick_requires_certificate():
    with pytest.raises(ContractError):
        check_schwarz_pick(scalar_embed([0.0, 0.5]), 0.0, 1)


def test_growth_examples():
    rep = check_growth(mobius_family(0.5), r_grid=[0.5])
    assert rep.ok
    from bohrlab.series import sup_norm_on_circle

    assert sup_norm_on_circle(mobius_family(0.5), 0.5) == pytest.approx(0.8, abs=1e-12)
    assert check_growth(scalar_embed([0.0, 0.0], schur_certified=True)).ok
    assert sup_norm_on_circle(psi_family(0.5), 0.5) == pytest.approx(0.4, abs=1e-12)
    assert check_growth(psi_family(0.5), r_grid=[0.5]).ok


def test_growth_on_inner_families():
    for a in (0.0, 0.3, 0.7, 0.95):
        assert check_growth(mobius_family(a)).ok
        assert check_growth(psi_family(a)).ok
    for seed in range(20):
        assert check_growth(random_schur_matrix(2, 64, "scalar-type", seed)).ok


def test_wiener_examples():
    for a in (0.0, 0.4, 0.8):
        rep = check_wiener_bounds(mobius_family(a))
        assert rep.ok
        assert np.linalg.norm(mobius_family(a).coeffs[1], 2) == pytest.approx(1 - a * a)
    assert check_wiener_bounds(scalar_embed([0.2, 0.0, 0.0, 0.0])).ok


def test_wiener_forced_violation():
    rep = check_wiener_bounds(diagonal_blaschke([[0.0], [0.0] * 3], order=8))
    v = [x for x in rep.violations if x.detail == "a:k=1"]
    assert len(v) == 1 and v[0].index == 3
    assert v[0].lhs == 1.0 and v[0].rhs == 0.0


def test_wiener_needs_scalar_a0():
    s = random_schur_matrix(2, 10, "diagonal-blaschke", 0)
    with pytest.raises(ContractError):
        check_wiener_bounds(s)


def test_theorem_a_examples():
    assert check_theorem_a(mobius_family(0.5), 1 / 3)
    assert scalar_embed([0.0], schur_certified=True) is not None
    assert check_theorem_a(scalar_embed([0.0, 0.0], schur_certified=True), 0.3)
    with pytest.warns(UserWarning):
        check_theorem_a(mobius_family(0.5), 0.5)


def test_theorem_a_moebius_conjugated():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for seed in range(200):
            assert check_theorem_a(random_schur_matrix(2, 64, "moebius-conjugated", seed), 1 / 3)


def test_trial_seed_deterministic():
    assert trial_seed(42, 3) == trial_seed(42, 3)
    assert len({trial_seed(42, i) for i in range(100)}) == 100


@pytest.mark.parametrize("check", ["wiener", "schwarz-pick", "growth", "theorem-a"])
def test_scalar_sweeps_pass(check):
    rep = sweep(check, "scalar-type", 100, 42)
    assert rep.ok and rep.trials == 100


def test_sweep_reproducible():
    a = sweep("wiener", "diagonal-blaschke", 30, 9).to_json_dict()
    b = sweep("wiener", "diagonal-blaschke", 30, 9).to_json_dict()
    assert a == b


def test_explore_lem22_forced():
    rep = explore_counterexamples("lem22", "diagonal-blaschke", 5, 1, include_forced=True)
    forced = [v for v in rep.violations if v.trial == -1 and v.detail == "a:k=1"]
    assert forced and forced[0].lhs == 1.0 and forced[0].rhs == 0.0
    assert "general-matrix" in rep.classification
    assert "scalar-type (A_n = a_n I) statement is not contradicted" in rep.classification


def test_explore_lem22_scalar_clean():
    rep = explore_counterexamples("lem22", "scalar-type", 300, 5)
    assert rep.ok and rep.classification == ""


def test_explore_lemma3_forced():
    rep = explore_counterexamples("lemma3-conclusion", "scalar-type", 10, 2, r=0.6, include_forced=True)
    (v,) = rep.violations
    assert v.trial == -1 and v.lhs == pytest.approx(1.099584, abs=1e-6)
    assert v.descriptor == {"forced": "diag(z^2, z^4)"}
    assert "general-matrix" in rep.classification


def test_explore_lemma5_forced_is_scalar():
    rep = explore_counterexamples("lemma5-conclusion", "scalar-type", 0, 2, include_forced=True)
    (v,) = rep.violations
    assert v.lhs > 1.2
    assert rep.classification.startswith("scalar-type instance")


def test_violation_descriptor_replays():
    rep = explore_counterexamples("lemma3-conclusion", "diagonal-blaschke", 40, 3, r=0.75)
    assert rep.violations
    v = rep.violations[0]
    d = v.descriptor
    s = random_schur_matrix(d["dim"], d["order"], d["mode"], d["seed"], vanish_at_origin=True)
    from bohrlab.functionals import eval_functional

    assert eval_functional("G", s, 0.75).value == pytest.approx(v.lhs, abs=1e-12)


def test_explore_rejects_unknown():
    with pytest.raises(InvalidInputError):
        explore_counterexamples("lemma9", "scalar-type", 1, 0)
    with pytest.raises(InvalidInputError):
        explore_counterexamples("lem22", "cubic", 1, 0)


def test_schwarz_pick_grid_constant():
    assert SCHWARZ_PICK_POINTS == (0.0, 0.3, -0.3, 0.6, -0.6)
    assert set(MODES) == {"scalar-type", "diagonal-blaschke", "moebius-conjugated"}
