"""Symmetric-group machinery on n-fold tensor powers of C^d.

For a fixed orthonormal basis of C^d, the tensor power splits into word
blocks V_f spanned by the product basis vectors whose letter counts equal
the frequency f. Each block carries a permutation action of S_n and splits
further into frame components V_{f,lam}, one per partition lam dominating
the sorted frequency; the component multiplicities are Kostka numbers.

Projectors onto the components are computed inside each word block. Every
central element of the group algebra acts on a frame component as an exact
integer scalar (its central character), and the class sums of short cycles
already separate all frames with at most three rows up to n = 12. Lagrange
interpolation in those class-sum matrices therefore yields each component
projector exactly, at polynomial cost, and agrees with the classical
central idempotent built from the full character sum.

Matrices handled here are real in the word basis. Dense full-space
materialization is guarded: index-level work allows d**n up to 60000,
dense d**n x d**n matrices up to 4096.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from .errors import SizeGuardError
from .quantum import assert_basis
from .tableaux import (
    _frame_parts,
    _freq_counts,
    dominance,
    enumerate_frames,
    enumerate_frequencies,
    hook_dimension,
    relative_entropy,
)

GUARD_LIMIT = 60000
DENSE_LIMIT = 4096


def guard_dimension(d: int, n: int, limit: int = GUARD_LIMIT) -> int:
    dim = d**n
    if dim > limit:
        raise SizeGuardError(f"d**n = {dim} exceeds the guard of {limit}")
    return dim


def tensor_power(a, n: int) -> np.ndarray:
    """n-fold Kronecker power (dense, guarded)."""
    m = np.asarray(a)
    guard_dimension(m.shape[0], n, DENSE_LIMIT)
    return reduce(np.kron, [m] * n) if n > 1 else m.copy()


# ---------------------------------------------------------------------------
# words


def words_of_type(f) -> np.ndarray:
    """All words with letter counts f, lexicographically sorted, shape (m, n)."""
    counts = list(_freq_counts(f))
    d = len(counts)
    n = sum(counts)
    rows: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec():
        if len(prefix) == n:
            rows.append(tuple(prefix))
            return
        for letter in range(d):
            if counts[letter]:
                counts[letter] -= 1
                prefix.append(letter)
                rec()
                prefix.pop()
                counts[letter] += 1

    rec()
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def word_codes(words: np.ndarray, d: int) -> np.ndarray:
    """Base-d codes of words; the first letter is most significant."""
    n = words.shape[1]
    powers = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return words @ powers


# ---------------------------------------------------------------------------
# permutation operators


def _validate_perm(perm) -> tuple[int, ...]:
    p = tuple(int(x) for x in perm)
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation of 0..{len(p) - 1}: {p!r}")
    return p


def compose(p, q) -> tuple[int, ...]:
    """(p o q)(x) = p(q(x))."""
    p = _validate_perm(p)
    q = _validate_perm(q)
    return tuple(p[q[x]] for x in range(len(p)))


class PermOperator:
    """Action of a permutation on the n-fold tensor power of C^d.

    The operator sends the product basis word w to the word w' with
    w'[pi(i)] = w[i]: letter i moves to slot pi(i).
    """

    __slots__ = ("perm", "d", "n")

    def __init__(self, perm, d: int):
        self.perm = _validate_perm(perm)
        self.d = int(d)
        self.n = len(self.perm)

    def inverse_slots(self) -> np.ndarray:
        inv = np.empty(self.n, dtype=np.int64)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return inv

    def apply_to_words(self, words: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(words[:, self.inverse_slots()])

    def index_map(self) -> np.ndarray:
        """Array M with M[code(w)] = code(pi . w), for all d**n words."""
        dim = guard_dimension(self.d, self.n)
        codes = np.arange(dim, dtype=np.int64)
        digits = np.empty((dim, self.n), dtype=np.int64)
        rem = codes
        for j in range(self.n - 1, -1, -1):
            digits[:, j] = rem % self.d
            rem = rem // self.d
        return word_codes(self.apply_to_words(digits), self.d)

    def matrix(self) -> np.ndarray:
        dim = guard_dimension(self.d, self.n, DENSE_LIMIT)
        out = np.zeros((dim, dim))
        out[self.index_map(), np.arange(dim)] = 1.0
        return out

    def __matmul__(self, other: "PermOperator") -> "PermOperator":
        if not isinstance(other, PermOperator) or other.d != self.d:
            return NotImplemented
        return PermOperator(compose(self.perm, other.perm), self.d)

    def cycle_type(self) -> tuple[int, ...]:
        seen = [False] * self.n
        lengths = []
        for s in range(self.n):
            if seen[s]:
                continue
            length = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths, reverse=True))


def perm_action(perm, d: int) -> PermOperator:
    return PermOperator(perm, d)


# ---------------------------------------------------------------------------
# characters


def conjugacy_classes(n: int) -> list[tuple[tuple[int, ...], int]]:
    """All cycle types of S_n with their class sizes (exact)."""
    out = []
    for mu in enumerate_frames(n, n):
        parts = mu.parts
        z = 1
        for length, reps in _multiplicities(parts).items():
            z *= length**reps * math.factorial(reps)
        out.append((parts, math.factorial(n) // z))
    return out


def _multiplicities(parts) -> dict[int, int]:
    m: dict[int, int] = {}
    for p in parts:
        m[p] = m.get(p, 0) + 1
    return m


@lru_cache(maxsize=None)
def _mn_character(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    # Murnaghan-Nakayama recursion over border strips, via beta numbers.
    if sum(lam) == 0:
        return 1
    k = mu[0]
    rest = mu[1:]
    rows = len(lam)
    beta = [lam[i] + (rows - 1 - i) for i in range(rows)]
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for c in beta if nb < c < b)
        new_beta = sorted((c for c in beta if c != b), reverse=True)
        new_beta.append(nb)
        new_beta.sort(reverse=True)
        rows2 = len(new_beta)
        new_lam = tuple(new_beta[i] - (rows2 - 1 - i) for i in range(rows2))
        new_lam = tuple(x for x in new_lam if x > 0)
        total += (-1) ** height * _mn_character(new_lam, rest)
    return total


def character(lam, mu) -> int:
    """Irreducible S_n character chi_lam at cycle type mu (exact integer)."""
    lam_p = _frame_parts(lam)
    mu_p = _frame_parts(mu)
    if sum(lam_p) != sum(mu_p):
        raise ValueError("frame and cycle type must partition the same n")
    return _mn_character(lam_p, tuple(sorted(mu_p, reverse=True)))


@dataclass
class CharacterTable:
    """Characters of the frames with at most d rows, over all cycle types."""

    n: int
    frames: list[tuple[int, ...]]
    classes: list[tuple[tuple[int, ...], int]]
    values: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = field(repr=False)

    def chi(self, lam, mu) -> int:
        return self.values[(_frame_parts(lam), _frame_parts(mu))]

    def orthogonality_defect(self) -> int:
        """Max |sum_mu |class| chi chi' - n! [lam = lam']| over frame pairs."""
        fact = math.factorial(self.n)
        worst = 0
        for a in self.frames:
            for b in self.frames:
                s = sum(
                    size * self.values[(a, mu)] * self.values[(b, mu)]
                    for mu, size in self.classes
                )
                expect = fact if a == b else 0
                worst = max(worst, abs(s - expect))
        return worst


def character_table(d: int, n: int) -> CharacterTable:
    frames = [fr.parts for fr in enumerate_frames(d, n)]
    classes = conjugacy_classes(n)
    values = {
        (lam, mu): _mn_character(lam, mu) for lam in frames for mu, _ in classes
    }
    return CharacterTable(n=n, frames=frames, classes=classes, values=values)


def kcycle_class_size(n: int, k: int) -> int:
    """Number of k-cycles in S_n."""
    return math.factorial(n) // (math.factorial(n - k) * k)


def central_character(lam, n: int, k: int) -> int:
    """Scalar by which the k-cycle class sum acts on the lam component."""
    lam_p = _frame_parts(lam)
    mu = tuple([k] + [1] * (n - k))
    value = Fraction(
        kcycle_class_size(n, k) * _mn_character(lam_p, mu), hook_dimension(lam_p)
    )
    if value.denominator != 1:
        raise ArithmeticError(f"central character not integral for {lam_p}, k={k}")
    return int(value)


# ---------------------------------------------------------------------------
# class sums and frame blocks


def _k_cycles(n: int, k: int):
    """All k-cycles of S_n as image tuples."""
    for support in itertools.combinations(range(n), k):
        first = support[0]
        for order in itertools.permutations(support[1:]):
            cycle = (first,) + order
            perm = list(range(n))
            for idx in range(k):
                perm[cycle[idx]] = cycle[(idx + 1) % k]
            yield tuple(perm)


def class_sum_on_words(words: np.ndarray, d: int, k: int) -> np.ndarray:
    """Matrix of the k-cycle class sum restricted to the given word block."""
    m, n = words.shape
    codes = word_codes(words, d)
    if np.any(np.diff(codes) <= 0):
        raise ValueError("words must be sorted and distinct")
    z = np.zeros((m, m))
    cols = np.arange(m)
    for perm in _k_cycles(n, k):
        inv = np.empty(n, dtype=np.int64)
        for i, p in enumerate(perm):
            inv[p] = i
        new_codes = word_codes(words[:, inv], d)
        pos = np.searchsorted(codes, new_codes)
        z[pos, cols] += 1.0
    return z


_BLOCK_CACHE: dict[tuple[int, ...], dict[tuple[int, ...], np.ndarray]] = {}


def frequency_blocks(f) -> dict[tuple[int, ...], np.ndarray]:
    """All frame-component projectors on the word block of frequency f.

    Returns a dict mapping frame parts to the projector matrix in the
    word basis (real symmetric, size |T_f|). Results are cached per f;
    the cache is a plain dict and is safe to share across threads only
    for reading.
    """
    counts = _freq_counts(f)
    cached = _BLOCK_CACHE.get(counts)
    if cached is not None:
        return cached
    d = len(counts)
    n = sum(counts)
    guard_dimension(d, n)
    words = words_of_type(counts)
    m = words.shape[0]
    if m > DENSE_LIMIT:
        raise SizeGuardError(
            f"word block of size {m} exceeds the dense guard of {DENSE_LIMIT}"
        )
    candidates = [
        fr.parts for fr in enumerate_frames(d, n) if dominance(counts, fr.parts)
    ]
    blocks: dict[tuple[int, ...], np.ndarray] = {}
    groups: list[tuple[list[tuple[int, ...]], np.ndarray]] = [
        (candidates, np.eye(m))
    ]
    k = 2
    eye = np.eye(m)
    while True:
        for lams, proj in groups:
            if len(lams) == 1:
                blocks[lams[0]] = (proj + proj.T) / 2.0
        groups = [g for g in groups if len(g[0]) > 1]
        if not groups:
            break
        if k > n:
            raise ArithmeticError("cycle class sums failed to separate frames")
        z = class_sum_on_words(words, d, k)
        split_groups = []
        for lams, proj in groups:
            by_value: dict[int, list[tuple[int, ...]]] = {}
            for lam in lams:
                by_value.setdefault(central_character(lam, n, k), []).append(lam)
            if len(by_value) == 1:
                split_groups.append((lams, proj))
                continue
            for value, sub in by_value.items():
                q = proj
                for other in by_value:
                    if other != value:
                        q = q @ (z - other * eye) / (value - other)
                split_groups.append((sub, q))
        groups = split_groups
        k += 1
    _BLOCK_CACHE[counts] = blocks
    return blocks


@dataclass
class ProjectorBlock:
    """Joint frequency/frame projector, stored on its word block.

    `block` is the real symmetric projector restricted to the words of
    frequency f (the basis in which the tensor factors are pinched);
    `matrix()` embeds it into the full d**n space, rotating out of the
    pinching basis when one is attached.
    """

    f: tuple[int, ...]
    lam: tuple[int, ...]
    words: np.ndarray
    block: np.ndarray
    basis: np.ndarray | None = None

    @property
    def d(self) -> int:
        return len(self.f)

    @property
    def n(self) -> int:
        return sum(self.f)

    @property
    def dim(self) -> int:
        return self.d**self.n

    @property
    def trace(self) -> float:
        return float(np.trace(self.block))

    def matrix(self) -> np.ndarray:
        dim = guard_dimension(self.d, self.n, DENSE_LIMIT)
        codes = word_codes(self.words, self.d)
        full = np.zeros((dim, dim))
        full[np.ix_(codes, codes)] = self.block
        if self.basis is None:
            return full
        b = assert_basis(self.basis)
        if np.allclose(b, np.eye(self.d), atol=1e-14):
            return full
        t = tensor_power(b, self.n)
        return t @ full @ t.conj().T

    def to_json_dict(self) -> dict:
        mat = self.matrix()
        return {
            "d": self.d,
            "n": self.n,
            "f": list(self.f),
            "lambda": list(self.lam),
            "trace": self.trace,
            "matrix": [[float(x.real), float(x.imag)] for x in mat.ravel()],
        }


def block_projector(f, lam, basis=None) -> ProjectorBlock:
    """Projector onto the lam component of the frequency-f word block.

    Vanishing Kostka number gives the zero block.
    """
    counts = _freq_counts(f)
    lam_p = _frame_parts(lam)
    if sum(counts) != sum(lam_p):
        raise ValueError("frequency and frame must count the same n")
    if len(lam_p) > len(counts):
        raise ValueError("frame has more rows than the alphabet has letters")
    words = words_of_type(counts)
    blocks = frequency_blocks(counts)
    block = blocks.get(lam_p)
    if block is None:
        block = np.zeros((words.shape[0], words.shape[0]))
    if basis is not None:
        basis = assert_basis(basis)
    return ProjectorBlock(f=counts, lam=lam_p, words=words, block=block, basis=basis)


def frequency_projector(f, basis=None) -> np.ndarray:
    """Projector onto the span of the basis words with letter counts f."""
    counts = _freq_counts(f)
    d = len(counts)
    n = sum(counts)
    dim = guard_dimension(d, n, DENSE_LIMIT)
    codes = word_codes(words_of_type(counts), d)
    if basis is None:
        out = np.zeros((dim, dim))
        out[codes, codes] = 1.0
        return out
    b = assert_basis(basis)
    cols = tensor_power(b, n)[:, codes]
    return cols @ cols.conj().T


def isotypical_projector(lam, d: int, n: int) -> np.ndarray:
    """Central projector onto the frame-lam component of the tensor power.

    Independent of any basis choice; assembled from the word blocks of the
    computational basis.
    """
    lam_p = _frame_parts(lam)
    if sum(lam_p) != n:
        raise ValueError("frame must partition n")
    dim = guard_dimension(d, n, DENSE_LIMIT)
    out = np.zeros((dim, dim))
    for f in enumerate_frequencies(d, n):
        block = frequency_blocks(f.counts).get(lam_p)
        if block is None:
            continue
        codes = word_codes(words_of_type(f.counts), d)
        out[np.ix_(codes, codes)] += block
    return out


def completeness_check(d: int, n: int) -> float:
    """Norm of (sum of all frequency/frame projectors) minus the identity.

    Works block by block: distinct frequencies occupy disjoint word
    coordinates, so the deviation is block diagonal and its spectral norm
    is the max over blocks. Blocks above 2000 words fall back to the
    Frobenius norm, an upper bound on the spectral norm.
    """
    guard_dimension(d, n)
    worst = 0.0
    for f in enumerate_frequencies(d, n):
        blocks = frequency_blocks(f.counts)
        m = words_of_type(f.counts).shape[0]
        total = np.zeros((m, m))
        for block in blocks.values():
            total += block
        dev = total - np.eye(m)
        if m <= 2000:
            norm = float(np.abs(np.linalg.eigvalsh(dev)).max())
        else:
            norm = float(np.linalg.norm(dev))
        worst = max(worst, norm)
    return worst


def block_weight(f, lam, states, basis=None) -> float:
    """tr of the (f, lam) projector against a product of single-site states.

    `states` is a single state (used on every site) or a length-n sequence.
    The product operator is never materialized on the full space: it is
    restricted to the word block directly.
    """
    counts = _freq_counts(f)
    lam_p = _frame_parts(lam)
    n = sum(counts)
    blocks = frequency_blocks(counts)
    block = blocks.get(lam_p)
    if block is None:
        return 0.0
    sts = _site_states(states, n)
    if basis is not None:
        b = assert_basis(basis)
        sts = [b.conj().T @ s @ b for s in sts]
    words = words_of_type(counts)
    m = words.shape[0]
    prod = np.ones((m, m), dtype=complex)
    for i in range(n):
        col = words[:, i]
        prod *= sts[i][col[:, None], col[None, :]]
    return float(np.einsum("ab,ba->", block, prod).real)


def _site_states(states, n: int) -> list[np.ndarray]:
    arr = np.asarray(states, dtype=complex)
    if arr.ndim == 2:
        return [arr] * n
    if arr.ndim == 3 and arr.shape[0] == n:
        return [arr[i] for i in range(n)]
    raise ValueError("states must be one state or a length-n sequence")


def spectral_estimate_check(lam, rho, n: int) -> tuple[float, float]:
    """(tr{P_lam rho^n}, (2n)**(d*d) * 2**(-n D(lam_norm || spec rho))).

    The left side is assembled block by block in the computational basis;
    the right side uses the convention 2**(-inf) = 0.
    """
    from .quantum import assert_state, spectrum

    rho_m = assert_state(rho)
    d = rho_m.shape[0]
    lam_p = _frame_parts(lam)
    if sum(lam_p) != n:
        raise ValueError("frame must partition n")
    guard_dimension(d, n)
    lhs = 0.0
    for f in enumerate_frequencies(d, n):
        lhs += block_weight(f.counts, lam_p, rho_m)
    lam_norm = np.asarray(lam_p + (0,) * (d - len(lam_p)), dtype=float) / n
    div = relative_entropy(lam_norm, spectrum(rho_m))
    rhs = (2.0 * n) ** (d * d) * 2.0 ** (-n * div)
    return lhs, rhs


def invariance_defect(a, d: int, n: int, rng=None, samples: int = 8) -> float:
    """Max entry deviation of U_pi A U_pi^dag from A over sampled pi."""
    mat = np.asarray(a)
    dim = guard_dimension(d, n, DENSE_LIMIT)
    if mat.shape != (dim, dim):
        raise ValueError(f"operator shape {mat.shape} does not match d**n = {dim}")
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    perms = [tuple(rng.permutation(n)) for _ in range(samples)]
    perms.append(tuple(range(1, n)) + (0,))  # cyclic shift
    for perm in perms:
        pmap = PermOperator(perm, d).index_map()
        conj = mat[np.ix_(pmap, pmap)]
        worst = max(worst, float(np.abs(conj - mat).max()))
    return worst
