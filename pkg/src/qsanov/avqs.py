"""Tests against word-indexed product states with a finite state alphabet.

A length-n word over an alphabet of states generates the product state
rho_word = rho_{s_1} x ... x rho_{s_n}. The projector test built for the
convex hull of the alphabet controls the error on every word at once; the
checks here compare both error kinds against their exponent bounds and
against the reduction to the word's empirical mixture.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .hypotest import TestSpec, build_test, theta
from .quantum import assert_state, depolarize, qrel_entropy, spectrum, trace_distance
from .schur_weyl import (
    DENSE_LIMIT,
    block_weight,
    guard_dimension,
    invariance_defect,
    tensor_power,
)
from .tableaux import ALPHA, _frame_parts, enumerate_frequencies, relative_entropy


def product_state(word, alphabet) -> np.ndarray:
    """Dense product state of the letters of `word` (guarded)."""
    states = [assert_state(alphabet[s]) for s in word]
    d = states[0].shape[0]
    guard_dimension(d, len(word), DENSE_LIMIT)
    return reduce(np.kron, states)


def empirical_mixture(word, alphabet) -> np.ndarray:
    """Average alphabet state weighted by the letter counts of `word`."""
    n = len(word)
    out = np.zeros_like(np.asarray(alphabet[0], dtype=complex))
    for s in word:
        out += np.asarray(alphabet[s], dtype=complex)
    return out / n


def avqs_test(alphabet, sigma, epsilon: float, n: int, grid_pitch=None) -> np.ndarray:
    """Acceptance projector for the convex hull of the alphabet against sigma."""
    spec = TestSpec(
        sigma=sigma,
        null_set=list(alphabet),
        epsilon=epsilon,
        n=n,
        hull=True,
        grid_pitch=grid_pitch,
    )
    return build_test(spec)


def word_type_one(p_n, word, alphabet) -> float:
    """1 - tr{P rho_word}."""
    p = np.asarray(p_n)
    big = product_state(word, alphabet)
    return float(1.0 - np.einsum("ij,ji->", p, big).real)


def worst_word_bound(n: int, eps: float, d: int, s_size: int) -> float:
    """Type-one ceiling 2**(-n ALPHA eps^2 + (2 d*d + |S|) log2(2n))."""
    return 2.0 ** (-n * ALPHA * eps * eps + (2.0 * d * d + s_size) * math.log2(2 * n))


def type_two_slack(n: int, eps: float, d: int, sigma, s_size: int) -> float:
    """theta(n, eps, d, sigma) + (|S|/n) log2(2n)."""
    return theta(n, eps, d, sigma) + (s_size / n) * math.log2(2 * n)


def robustification_check(p_n, word, alphabet, rng=None) -> tuple[float, float]:
    """Word-state miss probability against its mixture-power reduction.

    Returns (tr{(1-P) rho_word}, (2n)**|S| tr{(1-P) mix^n}) where mix is the
    empirical mixture of the word. The projector must be permutation
    invariant; that is asserted by random conjugation first.
    """
    p = np.asarray(p_n)
    d = np.asarray(alphabet[0]).shape[0]
    n = len(word)
    if invariance_defect(p, d, n, rng=rng) > 1e-8:
        raise ValueError("projector is not permutation invariant")
    lhs = word_type_one(p, word, alphabet)
    mix = empirical_mixture(word, alphabet)
    big = tensor_power(mix, n)
    miss = float(1.0 - np.einsum("ij,ji->", p, big).real)
    rhs = (2.0 * n) ** len(alphabet) * miss
    return lhs, rhs


def spectral_estimation_check(lam, word, alphabet) -> tuple[float, float]:
    """Frame weight of a word state against its mixed-spectrum exponent bound.

    Returns (tr{P_lam rho_word}, (2n)**(|S| + d*d) 2**(-n D(lam_norm || spec mix))).
    """
    lam_p = _frame_parts(lam)
    n = len(word)
    if sum(lam_p) != n:
        raise ValueError("frame must partition the word length")
    states = [assert_state(alphabet[s]) for s in word]
    d = states[0].shape[0]
    guard_dimension(d, n)
    stacked = np.stack(states)
    lhs = 0.0
    for f in enumerate_frequencies(d, n):
        lhs += block_weight(f.counts, lam_p, stacked)
    mix = empirical_mixture(word, alphabet)
    lam_norm = np.asarray(lam_p + (0,) * (d - len(lam_p)), dtype=float) / n
    div = relative_entropy(lam_norm, spectrum(mix))
    rhs = (2.0 * n) ** (len(alphabet) + d * d) * 2.0 ** (-n * div)
    return lhs, rhs


# ---------------------------------------------------------------------------
# divergence over the convex hull


def simplex_project(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, len(v) + 1)
    cond = u - css / ks > 0
    k = ks[cond][-1]
    tau = css[k - 1] / k
    return np.clip(v - tau, 0.0, None)


def _log2_psd(m: np.ndarray, floor: float = 1e-18) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals, floor, None)
    return (vecs * np.log2(vals)) @ vecs.conj().T


def min_relative_entropy_hull(
    generators, sigma, restarts: int = 20, rng=None, iters: int = 500
) -> tuple[float, np.ndarray]:
    """min over mixtures w of D(sum_i w_i rho_i || sigma), in bits.

    Projected gradient descent on the mixing weights with backtracking and
    random restarts; for up to three generators a coarse weight grid seeds
    an extra start. Returns (value, weights).
    """
    gens = [assert_state(g) for g in generators]
    sigma = assert_state(sigma)
    k = len(gens)
    rng = np.random.default_rng(0) if rng is None else rng

    def mix(w):
        return sum(wi * gi for wi, gi in zip(w, gens))

    def value(w):
        return qrel_entropy(mix(w), sigma)

    log_sigma = _log2_psd(sigma, floor=1e-30)

    def grad(w):
        lg = _log2_psd(mix(w)) - log_sigma
        return np.array([float(np.einsum("ij,ji->", g, lg).real) for g in gens])

    starts = [np.full(k, 1.0 / k)]
    starts += [np.eye(k)[i] for i in range(k)]
    for _ in range(max(0, restarts - len(starts))):
        starts.append(rng.dirichlet(np.ones(k)))
    if k <= 3:
        best_grid, best_val = None, math.inf
        for w in _weight_grid(k, 100):
            v = value(w)
            if v < best_val:
                best_val, best_grid = v, w
        if best_grid is not None:
            starts.append(np.asarray(best_grid))

    best_w = starts[0]
    best = value(best_w)
    for w0 in starts:
        w = np.asarray(w0, dtype=float).copy()
        fw = value(w)
        step = 0.5
        for _ in range(iters):
            g = grad(w)
            moved = False
            for _ in range(40):
                cand = simplex_project(w - step * g)
                fc = value(cand)
                if fc < fw - 1e-15:
                    w, fw = cand, fc
                    step *= 1.3
                    moved = True
                    break
                step *= 0.5
            if not moved or step < 1e-14:
                break
        if fw < best:
            best, best_w = fw, w
    return float(best), best_w


def _weight_grid(k: int, steps: int):
    if k == 1:
        yield np.array([1.0])
        return
    for cuts in itertools.combinations_with_replacement(range(steps + 1), k - 1):
        prev = 0
        w = []
        for c in cuts:
            w.append(c - prev)
            prev = c
        w.append(steps - prev)
        yield np.array(w, dtype=float) / steps


# ---------------------------------------------------------------------------
# covering nets and smoothing


def delta_schedule(n: int, d: int) -> float:
    """Smoothing rate 12 n**(-1/(4 d*d))."""
    return 12.0 * n ** (-1.0 / (4.0 * d * d))


def net_cardinality_bound(delta: float, d: int) -> float:
    """(12/delta)**(2 d*d)."""
    return (12.0 / delta) ** (2 * d * d)


@dataclass
class Net:
    """Finite set of states covering a region in trace norm."""

    points: list[np.ndarray]
    radius: float
    cover_radius: float
    hull_contains_smoothed: bool

    @property
    def cardinality(self) -> int:
        return len(self.points)


def _trace_dists(stack: np.ndarray, point: np.ndarray) -> np.ndarray:
    diff = stack - point[None, :, :]
    vals = np.linalg.eigvalsh(diff)
    return 0.5 * np.abs(vals).sum(axis=1)


def _state_pool(d: int, rng: np.random.Generator) -> np.ndarray:
    if d == 2:
        from .quantum import bloch_state

        pts = [np.zeros(3)]
        n_dir, golden = 400, math.pi * (3.0 - math.sqrt(5.0))
        for shell in (0.25, 0.5, 0.75, 0.9, 1.0):
            for i in range(n_dir):
                z = 1.0 - 2.0 * (i + 0.5) / n_dir
                r = math.sqrt(max(0.0, 1.0 - z * z))
                phi = golden * i
                pts.append(shell * np.array([r * math.cos(phi), r * math.sin(phi), z]))
        return np.stack([bloch_state(x) for x in pts])
    # Cholesky-angle sample: lower-triangular factors with seeded entries
    out = [np.eye(d, dtype=complex) / d]
    for _ in range(6000):
        tri = np.tril(
            rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        )
        m = tri @ tri.conj().T
        out.append(m / m.trace().real)
    return np.stack(out)


def _in_hull_residual(points: list[np.ndarray], target: np.ndarray, iters=4000) -> float:
    """Distance from target to the convex hull of points (FISTA on weights)."""
    a = np.stack(
        [np.concatenate([p.real.ravel(), p.imag.ravel()]) for p in points]
    ).T
    t = np.concatenate([target.real.ravel(), target.imag.ravel()])
    k = a.shape[1]
    lip = np.linalg.norm(a, 2) ** 2
    w = np.full(k, 1.0 / k)
    y, s_prev = w.copy(), 1.0
    for _ in range(iters):
        g = a.T @ (a @ y - t)
        w_new = simplex_project(y - g / lip)
        s_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * s_prev**2))
        y = w_new + ((s_prev - 1.0) / s_new) * (w_new - w)
        w, s_prev = w_new, s_new
    return float(np.linalg.norm(a @ w - t))


def delta_net(generators, delta: float, rng=None) -> Net:
    """Greedy farthest-point covering net for the delta-smoothed targets.

    Net points are themselves states, so their hull stays inside the state
    set. For delta >= 2 the single point I/d suffices (every pair of
    states is within trace distance 1 <= delta/2). Otherwise greedy
    selection over a deterministic parameterized pool runs until the pool
    is covered within delta/2. Containment of the smoothed generators in
    the hull of the net is checked numerically.
    """
    gens = [assert_state(g) for g in generators]
    d = gens[0].shape[0]
    if delta <= 0:
        raise ValueError("delta must be positive")
    rng = np.random.default_rng(0) if rng is None else rng
    smoothed = [depolarize(g, min(delta, 1.0)) for g in gens]
    if delta >= 2.0:
        centre = np.eye(d, dtype=complex) / d
        return Net(
            points=[centre],
            radius=delta,
            cover_radius=max(trace_distance(s, centre) for s in smoothed),
            hull_contains_smoothed=all(
                _in_hull_residual([centre], s) <= 1e-4 for s in smoothed
            ),
        )
    pool = _state_pool(d, rng)
    mindist = _trace_dists(pool, pool[0])
    chosen = [0]
    while mindist.max() > delta / 2.0 and len(chosen) < pool.shape[0]:
        nxt = int(np.argmax(mindist))
        chosen.append(nxt)
        mindist = np.minimum(mindist, _trace_dists(pool, pool[nxt]))
    points = [pool[i] for i in chosen]
    cover = max(
        min(trace_distance(s, p) for p in points) for s in smoothed
    )
    contains = all(_in_hull_residual(points, s) <= 1e-4 for s in smoothed)
    return Net(
        points=points,
        radius=delta,
        cover_radius=float(max(cover, mindist.max())),
        hull_contains_smoothed=contains,
    )


def smoothed_test(p_n, delta: float, d: int, n: int) -> np.ndarray:
    """Sitewise adjoint depolarizing of a tensor-power operator.

    Applies (1-delta) A + (delta/d) tr_site{A} x I on every site; the
    result of testing with it equals testing the original operator on
    sitewise-depolarized states.
    """
    p = np.asarray(p_n, dtype=complex)
    dim = guard_dimension(d, n, DENSE_LIMIT)
    if p.shape != (dim, dim):
        raise ValueError(f"operator shape {p.shape} does not match d**n = {dim}")
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta={delta} outside [0, 1]")
    work = p.reshape((d,) * (2 * n))
    for site in range(n):
        row_ax = site
        col_ax = n + site
        partial = np.trace(work, axis1=row_ax, axis2=col_ax)
        eye = np.eye(d)
        expanded = np.tensordot(partial, eye, axes=0)
        # move the two fresh axes back to the site's slots
        expanded = np.moveaxis(expanded, (2 * n - 2, 2 * n - 1), (row_ax, col_ax))
        work = (1.0 - delta) * work + (delta / d) * expanded
    out = work.reshape(dim, dim)
    if np.abs(out.imag).max() < 1e-15:
        return out.real
    return out


# ---------------------------------------------------------------------------
# slack evaluators and word enumeration


def gamma_prime(n: int, nu: float, d: int, s_size: int, variant: str = "statement") -> float:
    """Residual slack of the smoothed test; two printed variants exist.

    `statement` uses a 2|S|/n inner shift and a (2n)**(-8 d*d) factor;
    `proof` uses 4|S|/n and (2n)**(-2 d*d). Returns -inf when the inner
    expression is nonpositive.
    """
    if variant == "statement":
        shift, power = 2.0, 8
    elif variant == "proof":
        shift, power = 4.0, 2
    else:
        raise ValueError(f"unknown variant {variant!r}")
    inner_exp = ALPHA * (n**-0.25 - shift * s_size / n) - (
        (s_size - 2.0 * d * d) / n
    ) * math.log2(2 * n)
    inner = 1.0 - nu - 2.0 ** (-n * inner_exp)
    if inner <= 0.0:
        return -math.inf
    return (math.log2(inner) - power * d * d * math.log2(2 * n)) / n


def gamma(
    n: int, nu: float, d: int, sigma, s_size: int, variant: str = "statement"
) -> float:
    """theta at the n**-0.25 schedule plus gamma_prime plus (8 d**6/n) log2(2n)."""
    return (
        theta(n, n**-0.25, d, sigma)
        + gamma_prime(n, nu, d, s_size, variant)
        + (8.0 * d**6 / n) * math.log2(2 * n)
    )


def enumerate_words(s_size: int, n: int, limit: int = 10**6, rng=None, samples: int = 4096):
    """All words when |S|**n <= limit, otherwise a seeded sample."""
    total = s_size**n
    if total <= limit:
        yield from itertools.product(range(s_size), repeat=n)
        return
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(samples):
        yield tuple(int(x) for x in rng.integers(0, s_size, size=n))
