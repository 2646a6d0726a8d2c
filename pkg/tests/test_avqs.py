import itertools
import math

import numpy as np
import pytest

from qsanov.avqs import (
    avqs_test,
    delta_net,
    delta_schedule,
    empirical_mixture,
    enumerate_words,
    gamma,
    gamma_prime,
    min_relative_entropy_hull,
    net_cardinality_bound,
    product_state,
    robustification_check,
    simplex_project,
    smoothed_test,
    spectral_estimation_check,
    type_two_slack,
    word_type_one,
    worst_word_bound,
)
from qsanov.errors import SizeGuardError
from qsanov.hypotest import TestSpec, build_test, theta
from qsanov.quantum import bloch_state, depolarize, qrel_entropy, random_state, trace_distance
from qsanov.schur_weyl import invariance_defect, tensor_power
from qsanov.tableaux import ALPHA

ALPHABET = [np.diag([0.8, 0.2]).astype(complex), bloch_state([0.3, 0.0, 0.0])]
SIGMA = np.diag([0.75, 0.25])


def test_product_state_and_mixture():
    word = (0, 1, 0)
    got = product_state(word, ALPHABET)
    want = np.kron(np.kron(ALPHABET[0], ALPHABET[1]), ALPHABET[0])
    assert np.abs(got - want).max() < 1e-15
    const = product_state((1, 1, 1, 1), ALPHABET)
    assert np.abs(const - tensor_power(ALPHABET[1], 4)).max() < 1e-12
    mix = empirical_mixture((0, 1, 0), ALPHABET)
    assert np.abs(mix - (2 * ALPHABET[0] + ALPHABET[1]) / 3).max() < 1e-15
    with pytest.raises(SizeGuardError):
        product_state((0,) * 16, ALPHABET)


def test_avqs_test_is_hull_build():
    spec = TestSpec(sigma=SIGMA, null_set=ALPHABET, epsilon=0.3, n=4, hull=True)
    direct = build_test(spec)
    wrapped = avqs_test(ALPHABET, SIGMA, 0.3, 4)
    assert np.abs(direct - wrapped).max() < 1e-15


def test_word_type_one_definition():
    p = avqs_test(ALPHABET, SIGMA, 0.3, 3)
    for word in ((0, 0, 1), (1, 1, 1), (0, 1, 0)):
        big = product_state(word, ALPHABET)
        want = 1.0 - np.trace(p @ big).real
        assert abs(word_type_one(p, word, ALPHABET) - want) < 1e-12


def test_slack_formulas():
    n, eps, d, s = 8, 0.3, 2, 2
    want = 2.0 ** (-n * ALPHA * eps * eps + (2 * d * d + s) * math.log2(2 * n))
    assert abs(worst_word_bound(n, eps, d, s) - want) < 1e-15
    slack = type_two_slack(n, eps, d, SIGMA, s)
    assert abs(slack - theta(n, eps, d, SIGMA) - (s / n) * math.log2(2 * n)) < 1e-12


def test_robustification_inequality_all_words():
    n = 4
    p = avqs_test(ALPHABET, SIGMA, 0.3, n)
    rng = np.random.default_rng(7)
    for word in enumerate_words(2, n):
        lhs, rhs = robustification_check(p, word, ALPHABET, rng=rng)
        assert lhs <= rhs + 1e-9, word
        assert 0.0 <= lhs <= 1.0 + 1e-12


def test_robustification_rejects_biased_operator():
    bad = np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex)  # |01><01|
    with pytest.raises(ValueError):
        robustification_check(bad, (0, 1), ALPHABET)


def test_spectral_estimation_inequality_and_total():
    word = (0, 1, 0, 1)
    n = len(word)
    frames = [(4,), (3, 1), (2, 2)]
    total = 0.0
    for lam in frames:
        lhs, rhs = spectral_estimation_check(lam, word, ALPHABET)
        assert lhs <= rhs + 1e-9, lam
        total += lhs
    # frame blocks resolve the identity, so the weights sum to one
    assert abs(total - 1.0) < 1e-9
    with pytest.raises(ValueError):
        spectral_estimation_check((3, 1), (0, 1, 0), ALPHABET)


def test_simplex_project_values():
    assert np.abs(simplex_project(np.array([0.5, 0.5])) - [0.5, 0.5]).max() < 1e-15
    assert np.abs(simplex_project(np.array([2.0, 0.0])) - [1.0, 0.0]).max() < 1e-12
    got = simplex_project(np.array([0.3, -0.2, 0.4]))
    assert np.abs(got - [0.45, 0.0, 0.55]).max() < 1e-12
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.normal(size=4) * 2
        p = simplex_project(v)
        assert p.min() >= -1e-15 and abs(p.sum() - 1) < 1e-12
        # projection is idempotent and closer than any other simplex point
        assert np.abs(simplex_project(p) - p).max() < 1e-12
        for _ in range(10):
            q = rng.dirichlet(np.ones(4))
            assert np.linalg.norm(v - p) <= np.linalg.norm(v - q) + 1e-12


def test_min_relative_entropy_two_generators_vs_grid():
    val, w = min_relative_entropy_hull(ALPHABET, SIGMA)
    grid = min(
        qrel_entropy(t * ALPHABET[0] + (1 - t) * ALPHABET[1], SIGMA)
        for t in np.linspace(0.0, 1.0, 1001)
    )
    assert val <= grid + 1e-12
    assert grid - val < 1e-5
    assert w.min() >= -1e-12 and abs(w.sum() - 1) < 1e-10
    mix = w[0] * ALPHABET[0] + w[1] * ALPHABET[1]
    assert abs(qrel_entropy(mix, SIGMA) - val) < 1e-10
    # never worse than the best single generator
    assert val <= min(qrel_entropy(g, SIGMA) for g in ALPHABET) + 1e-12


def test_min_relative_entropy_single_generator():
    val, w = min_relative_entropy_hull([ALPHABET[0]], SIGMA)
    assert abs(val - qrel_entropy(ALPHABET[0], SIGMA)) < 1e-12
    assert abs(w[0] - 1.0) < 1e-12


def test_min_relative_entropy_three_generators_vs_grid():
    gens = [np.diag([0.9, 0.1]), bloch_state([0.0, 0.4, 0.0]), np.eye(2) / 2]
    val, _ = min_relative_entropy_hull(gens, SIGMA)
    best = math.inf
    steps = 50
    for i in range(steps + 1):
        for j in range(steps + 1 - i):
            w = np.array([i, j, steps - i - j], dtype=float) / steps
            mix = sum(wi * g for wi, g in zip(w, gens))
            best = min(best, qrel_entropy(mix, SIGMA))
    assert val <= best + 1e-12
    assert best - val < 1e-4
    # the maximally mixed generator already achieves divergence D(I/2 || sigma)
    assert val <= qrel_entropy(np.eye(2) / 2, SIGMA) + 1e-12


def test_delta_schedule_and_cardinality():
    assert abs(delta_schedule(10, 2) - 12.0 * 10 ** (-1.0 / 16)) < 1e-12
    assert abs(net_cardinality_bound(0.5, 2) - 24.0**8) < 1e-3
    # at desk scale the schedule never drops below the trivial-net threshold
    for n in range(2, 11):
        for d in (2, 3):
            assert delta_schedule(n, d) >= 2.0


def test_delta_net_trivial_regime():
    net = delta_net(ALPHABET, 2.5)
    assert net.cardinality == 1
    assert np.abs(net.points[0] - np.eye(2) / 2).max() < 1e-15
    # full smoothing collapses every generator onto the centre
    assert net.cover_radius < 1e-12
    assert net.hull_contains_smoothed
    with pytest.raises(ValueError):
        delta_net(ALPHABET, 0.0)


def test_delta_net_small_delta_covers_smoothed_hull():
    delta = 0.5
    net = delta_net(ALPHABET, delta)
    assert net.hull_contains_smoothed
    assert net.cover_radius <= delta / 2 + 1e-12
    assert net.cardinality <= net_cardinality_bound(delta, 2)
    for p in net.points:
        vals = np.linalg.eigvalsh(p)
        assert vals.min() >= -1e-12 and abs(np.trace(p).real - 1) < 1e-12
    rng = np.random.default_rng(11)
    for _ in range(200):
        t = rng.uniform()
        hull_point = t * ALPHABET[0] + (1 - t) * ALPHABET[1]
        smoothed = depolarize(hull_point, delta)
        dist = min(trace_distance(smoothed, p) for p in net.points)
        assert dist <= delta, dist


def test_smoothed_test_duality():
    n, d, delta = 3, 2, 0.3
    p = avqs_test(ALPHABET, SIGMA, 0.4, n)
    q = smoothed_test(p, delta, d, n)
    rng = np.random.default_rng(5)
    for _ in range(10):
        states = [random_state(d, rng) for _ in range(n)]
        big = product_state(range(n), states)
        noisy = product_state(range(n), [depolarize(s, delta) for s in states])
        lhs = np.trace(np.asarray(q, dtype=complex) @ big).real
        rhs = np.trace(p @ noisy).real
        assert abs(lhs - rhs) < 1e-10
    # smoothing keeps hermiticity and permutation invariance
    assert np.abs(q - np.asarray(q).conj().T).max() < 1e-12
    assert invariance_defect(q, d, n, rng=rng) < 1e-10


def test_smoothed_test_endpoints_and_errors():
    n, d = 3, 2
    p = avqs_test(ALPHABET, SIGMA, 0.4, n)
    assert np.abs(smoothed_test(p, 0.0, d, n) - p).max() < 1e-12
    fully = smoothed_test(p, 1.0, d, n)
    want = np.trace(p).real / d**n * np.eye(d**n)
    assert np.abs(fully - want).max() < 1e-10
    with pytest.raises(ValueError):
        smoothed_test(p, 1.5, d, n)
    with pytest.raises(ValueError):
        smoothed_test(p, 0.3, d, n + 1)


def test_gamma_prime_variants():
    n, nu, d, s = 4096, 0.1, 2, 2
    for variant, shift, power in (("statement", 2.0, 8), ("proof", 4.0, 2)):
        inner_exp = ALPHA * (n**-0.25 - shift * s / n) - ((s - 2.0 * d * d) / n) * math.log2(
            2 * n
        )
        inner = 1.0 - nu - 2.0 ** (-n * inner_exp)
        want = (math.log2(inner) - power * d * d * math.log2(2 * n)) / n
        assert abs(gamma_prime(n, nu, d, s, variant) - want) < 1e-12
    assert gamma_prime(n, nu, d, s, "statement") != gamma_prime(n, nu, d, s, "proof")
    # a large alphabet at small n drives the inner expression nonpositive
    assert gamma_prime(4, 0.5, 2, 40) == -math.inf
    with pytest.raises(ValueError):
        gamma_prime(n, nu, d, s, "other")


def test_gamma_composition():
    n, nu, d, s = 4096, 0.1, 2, 2
    want = (
        theta(n, n**-0.25, d, SIGMA)
        + gamma_prime(n, nu, d, s)
        + (8.0 * d**6 / n) * math.log2(2 * n)
    )
    assert abs(gamma(n, nu, d, SIGMA, s) - want) < 1e-12


def test_enumerate_words_modes():
    words = list(enumerate_words(2, 6))
    assert words == list(itertools.product((0, 1), repeat=6))
    sampled = list(enumerate_words(2, 25, samples=16))
    assert len(sampled) == 16
    assert all(len(w) == 25 for w in sampled)
    assert sampled == list(enumerate_words(2, 25, samples=16))
