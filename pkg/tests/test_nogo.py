import math

import numpy as np
import pytest

from qsanov.nogo import (
    NogoReport,
    dim_ratio_bound,
    haar_twirl_mc,
    haar_unitary,
    nogo_bound,
    random_invariant_operator,
    unitary_twirl_invariant,
    vacuity_threshold,
    verify_nogo_instance,
)
from qsanov.schur_weyl import (
    PermOperator,
    invariance_defect,
    isotypical_projector,
    tensor_power,
)
from qsanov.tableaux import enumerate_frames, hook_dimension, type_class_size

from test_tableaux import multiset_perm_count, syt_count


def test_haar_unitary_properties():
    rng = np.random.default_rng(0)
    for d in (2, 3, 4):
        u = haar_unitary(d, rng)
        assert np.abs(u @ u.conj().T - np.eye(d)).max() < 1e-12
    a = haar_unitary(2, np.random.default_rng(9))
    b = haar_unitary(2, np.random.default_rng(9))
    assert np.abs(a - b).max() == 0.0


def test_twirl_fixed_points():
    d, n = 2, 4
    dim = d**n
    # identity and single frame projectors are already twirl invariant
    assert np.abs(unitary_twirl_invariant(np.eye(dim), d, n) - np.eye(dim)).max() < 1e-10
    for lam in ((4,), (3, 1), (2, 2)):
        p = isotypical_projector(lam, d, n)
        assert np.abs(unitary_twirl_invariant(p, d, n) - p).max() < 1e-10


def test_twirl_preserves_trace_and_positivity():
    rng = np.random.default_rng(1)
    d, n = 2, 3
    a = random_invariant_operator(d, n, rng)
    t = unitary_twirl_invariant(a, d, n)
    assert abs(np.trace(t).real - np.trace(a).real) < 1e-9
    assert np.linalg.eigvalsh(t).min() > -1e-10
    assert np.abs(t - np.asarray(t).conj().T).max() < 1e-10


def test_twirl_commutes_with_collective_rotation():
    rng = np.random.default_rng(2)
    d, n = 2, 3
    a = random_invariant_operator(d, n, rng)
    t = unitary_twirl_invariant(a, d, n)
    for seed in (3, 4):
        u = tensor_power(haar_unitary(d, np.random.default_rng(seed)), n)
        assert np.abs(u @ t @ u.conj().T - t).max() < 1e-8
    for perm in ((1, 0, 2), (2, 0, 1)):
        pm = PermOperator(perm, d).matrix()
        assert np.abs(pm @ t @ pm.T - t).max() < 1e-10


def test_twirl_matches_monte_carlo():
    d, n = 2, 4
    for seed in (0, 1):
        rng = np.random.default_rng(seed)
        a = random_invariant_operator(d, n, rng)
        exact = unitary_twirl_invariant(a, d, n)
        mc, se = haar_twirl_mc(a, d, n, samples=200, rng=rng)
        assert np.linalg.norm(mc - exact) <= 3.0 * se, (seed, se)


def test_twirl_rejects_bad_input():
    with pytest.raises(ValueError):
        unitary_twirl_invariant(np.eye(7), 2, 3)
    bad = np.zeros((8, 8))
    bad[1, 1] = 1.0  # |001><001| breaks permutation symmetry
    with pytest.raises(ValueError):
        unitary_twirl_invariant(bad, 2, 3)


def test_random_invariant_operator_contract():
    rng = np.random.default_rng(5)
    for d, n in ((2, 3), (2, 5), (3, 3)):
        a = random_invariant_operator(d, n, rng)
        assert invariance_defect(a, d, n, rng=rng) < 1e-10
        vals = np.linalg.eigvalsh(a)
        assert vals.min() > -1e-12 and vals.max() < 1 + 1e-12
        assert abs(vals.min()) < 1e-10 and abs(vals.max() - 1) < 1e-10


def test_dim_ratio_frozen_and_sweep():
    ratio, floor = dim_ratio_bound((2, 1), 2, 3)
    assert abs(ratio - 2.0 / 3.0) < 1e-15
    assert abs(floor - 6.0**-4) < 1e-18
    for d in (2, 3):
        for n in range(2, 9):
            for lam in enumerate_frames(d, n):
                got_ratio, got_floor = dim_ratio_bound(lam.parts, d, n)
                want = syt_count(lam.parts) / multiset_perm_count(
                    lam.parts + (0,) * (d - len(lam.parts))
                )
                assert abs(got_ratio - want) < 1e-12
                assert got_ratio >= got_floor, (d, n, lam.parts)
    with pytest.raises(ValueError):
        dim_ratio_bound((2, 1), 2, 4)
    with pytest.raises(ValueError):
        dim_ratio_bound((2, 1, 1), 2, 4)


def test_nogo_bound_values():
    assert nogo_bound(0.0, 2, 4) == 1.0
    eps_star = vacuity_threshold(2, 4)
    assert abs(eps_star - 16.0**-16) < 1e-30
    assert abs(nogo_bound(eps_star, 2, 4)) < 1e-12
    assert nogo_bound(2 * eps_star, 2, 4) < 0
    with pytest.raises(ValueError):
        nogo_bound(-0.1, 2, 4)


def test_verify_nogo_identity():
    report = verify_nogo_instance(np.eye(16), 2, 4)
    assert report.eps_hat == 0.0
    assert report.bound == 1.0
    assert not report.vacuous
    assert abs(report.min_eig - 1.0) < 1e-12
    assert report.to_dict() == {
        "eps_hat": 0.0,
        "min_eig": report.min_eig,
        "bound": 1.0,
        "vacuous": False,
    }


def test_verify_nogo_near_identity():
    # shaving a sliver off one frame block makes the bound vacuous long
    # before the operator stops accepting product states
    p = isotypical_projector((4,), 2, 4)
    a = np.eye(16) - 1e-6 * p
    report = verify_nogo_instance(a, 2, 4)
    assert report.eps_hat > 0
    assert report.vacuous
    assert report.bound < 0


def test_verify_nogo_random_operator_is_vacuous():
    rng = np.random.default_rng(3)
    a = random_invariant_operator(2, 4, rng)
    report = verify_nogo_instance(a, 2, 4, rng=rng)
    # a generic normalized operator misses badly on some product state
    assert report.eps_hat > 0.01
    assert report.vacuous


def test_verify_nogo_rejects_noninvariant():
    bad = np.zeros((8, 8))
    bad[1, 1] = 1.0
    with pytest.raises(ValueError):
        verify_nogo_instance(bad, 2, 3)
