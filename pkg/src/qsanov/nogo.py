"""Limits of permutation-invariant universal detectors.

A permutation-invariant operator that accepts every product state up to a
small error must be close to the identity. The pieces assembled here: the
exact unitary twirl of invariant operators (a weighted sum of frame
projectors), the dimension-to-type-class ratio estimate, and the closing
bound with its vacuity threshold.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import VerificationError
from .quantum import bloch_state, random_state
from .schur_weyl import (
    DENSE_LIMIT,
    PermOperator,
    guard_dimension,
    invariance_defect,
    isotypical_projector,
    tensor_power,
)
from .tableaux import _frame_parts, enumerate_frames, hook_dimension, type_class_size

INVARIANCE_TOL = 1e-8


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian with phase fixing."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases[None, :]


def unitary_twirl_invariant(a, d: int, n: int) -> np.ndarray:
    """Average of U^n A U^n-dagger over Haar U, for permutation-invariant A.

    On invariant operators the average lands in the span of the frame
    projectors, with each coefficient fixed by trace preservation:
    sum over lam of (tr{A P_lam}/tr{P_lam}) P_lam.
    """
    mat = np.asarray(a, dtype=complex)
    dim = guard_dimension(d, n, DENSE_LIMIT)
    if mat.shape != (dim, dim):
        raise ValueError(f"operator shape {mat.shape} does not match d**n = {dim}")
    if invariance_defect(mat, d, n) > INVARIANCE_TOL:
        raise ValueError("operator is not permutation invariant")
    out = np.zeros((dim, dim), dtype=complex)
    for lam in enumerate_frames(d, n):
        p_lam = isotypical_projector(lam.parts, d, n)
        weight = np.einsum("ij,ji->", mat, p_lam).real
        tr = np.trace(p_lam).real
        if tr > 0:
            out += (weight / tr) * p_lam
    if np.abs(out.imag).max() < 1e-15:
        return out.real
    return out


def haar_twirl_mc(a, d: int, n: int, samples: int = 200, rng=None) -> tuple[np.ndarray, float]:
    """Monte-Carlo Haar twirl: (sample mean, Frobenius norm of entrywise SE)."""
    mat = np.asarray(a, dtype=complex)
    dim = guard_dimension(d, n, DENSE_LIMIT)
    if mat.shape != (dim, dim):
        raise ValueError(f"operator shape {mat.shape} does not match d**n = {dim}")
    rng = np.random.default_rng(0) if rng is None else rng
    draws = np.empty((samples, dim, dim), dtype=complex)
    for k in range(samples):
        u = tensor_power(haar_unitary(d, rng), n)
        draws[k] = u @ mat @ u.conj().T
    mean = draws.mean(axis=0)
    # entrywise standard error, real and imaginary spread combined
    se = np.sqrt(
        (np.abs(draws - mean[None]) ** 2).sum(axis=0) / (samples * (samples - 1))
    )
    return mean, float(np.linalg.norm(se))


def random_invariant_operator(d: int, n: int, rng=None) -> np.ndarray:
    """Random permutation-invariant operator with spectrum in [0, 1].

    A Gaussian Hermitian matrix is averaged over the full symmetric group
    and affinely rescaled so its eigenvalues fill [0, 1].
    """
    dim = guard_dimension(d, n, DENSE_LIMIT)
    rng = np.random.default_rng(0) if rng is None else rng
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2.0
    acc = np.zeros_like(h)
    for perm in itertools.permutations(range(n)):
        pmap = PermOperator(perm, d).index_map()
        acc += h[np.ix_(pmap, pmap)]
    acc /= math.factorial(n)
    vals = np.linalg.eigvalsh(acc)
    lo, hi = float(vals[0]), float(vals[-1])
    if hi - lo < 1e-12:
        return np.eye(dim, dtype=complex)
    return (acc - lo * np.eye(dim)) / (hi - lo)


def dim_ratio_bound(lam, d: int, n: int) -> tuple[float, float]:
    """(dim F_lam / |T_lam|, (n+d+1)**(-d*d)) for lam read as a frequency."""
    parts = _frame_parts(lam)
    if sum(parts) != n:
        raise ValueError("frame must partition n")
    if len(parts) > d:
        raise ValueError(f"frame has more than {d} rows")
    ratio = hook_dimension(parts) / type_class_size(parts + (0,) * (d - len(parts)))
    return float(ratio), float((n + d + 1.0) ** (-d * d))


def nogo_bound(eps: float, d: int, n: int) -> float:
    """1 - eps (2 d n)**(4 d*d); negative values carry no information."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return 1.0 - eps * (2.0 * d * n) ** (4 * d * d)


def vacuity_threshold(d: int, n: int) -> float:
    """Largest eps at which the closing bound is still positive."""
    return (2.0 * d * n) ** (-4 * d * d)


@dataclass
class NogoReport:
    """Sampled acceptance defect of an invariant operator and the bound it implies."""

    eps_hat: float
    min_eig: float
    bound: float
    vacuous: bool

    def to_dict(self) -> dict:
        return {
            "eps_hat": self.eps_hat,
            "min_eig": self.min_eig,
            "bound": self.bound,
            "vacuous": self.vacuous,
        }


def _probe_states(d: int, sample_states: int, rng: np.random.Generator):
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        yield e
    yield np.eye(d, dtype=complex) / d
    if d == 2:
        golden = math.pi * (3.0 - math.sqrt(5.0))
        for shell in (0.5, 1.0):
            for i in range(25):
                z = 1.0 - 2.0 * (i + 0.5) / 25
                r = math.sqrt(max(0.0, 1.0 - z * z))
                yield bloch_state(
                    shell * np.array([r * math.cos(golden * i), r * math.sin(golden * i), z])
                )
    for _ in range(sample_states):
        yield random_state(d, rng)
    for _ in range(sample_states // 2):
        yield random_state(d, rng, rank=1)


def verify_nogo_instance(a, d: int, n: int, sample_states: int = 64, rng=None) -> NogoReport:
    """Probe the worst sampled acceptance error and check the closing bound.

    eps_hat = 1 - min over probe states rho of tr{A rho^n} (a sampled,
    hence optimistic, stand-in for the worst case). When the implied
    bound is non-vacuous, min-eig(A) must reach it.
    """
    mat = np.asarray(a, dtype=complex)
    dim = guard_dimension(d, n, DENSE_LIMIT)
    if mat.shape != (dim, dim):
        raise ValueError(f"operator shape {mat.shape} does not match d**n = {dim}")
    if invariance_defect(mat, d, n) > INVARIANCE_TOL:
        raise ValueError("operator is not permutation invariant")
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 1.0
    for rho in _probe_states(d, sample_states, rng):
        acc = float(np.einsum("ij,ji->", mat, tensor_power(rho, n)).real)
        worst = min(worst, acc)
    eps_hat = max(0.0, 1.0 - worst)
    # trace arithmetic carries ~1e-15 noise; anything below this floor is
    # indistinguishable from exact acceptance and would poison the
    # (2dn)**(4d*d) amplification
    if eps_hat < 1e-12:
        eps_hat = 0.0
    min_eig = float(np.linalg.eigvalsh(mat)[0])
    bound = nogo_bound(eps_hat, d, n)
    vacuous = bound <= 0.0
    if not vacuous and min_eig < bound - 1e-9:
        raise VerificationError(
            f"min eigenvalue {min_eig} below non-vacuous bound {bound}"
        )
    return NogoReport(eps_hat=eps_hat, min_eig=min_eig, bound=bound, vacuous=vacuous)
