"""Partitions, type classes, and Kostka combinatorics for small alphabets.

Conventions used throughout the package:

* all logarithms and entropies are base 2,
* ``0 * log(0) = 0`` and ``2**(-inf) = 0``,
* a partition ("frame") is a weakly decreasing tuple of positive ints,
* a frequency is a tuple of nonnegative ints of fixed length ``d``,
* normalized vectors are numpy arrays summing to one.

Counting functions (`hook_dimension`, `type_class_size`, `kostka`) work in
exact integer arithmetic.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Pinsker constant for base-2 relative entropy: D(p||q) >= ALPHA * |p - q|_1^2.
ALPHA = 1.0 / (2.0 * math.log(2.0))


class YoungFrame:
    """Partition of n into at most d weakly decreasing positive parts."""

    __slots__ = ("parts", "d")

    def __init__(self, parts: Iterable[int], d: int | None = None):
        ps = tuple(int(p) for p in parts)
        while ps and ps[-1] == 0:
            ps = ps[:-1]
        if any(p <= 0 for p in ps):
            raise ValueError(f"frame parts must be positive: {ps!r}")
        if any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError(f"frame parts must be weakly decreasing: {ps!r}")
        self.d = len(ps) if d is None else int(d)
        if len(ps) > self.d:
            raise ValueError(f"frame {ps!r} has more than {self.d} rows")
        self.parts = ps

    @property
    def n(self) -> int:
        return sum(self.parts)

    def padded(self, d: int | None = None) -> tuple[int, ...]:
        d = self.d if d is None else d
        return self.parts + (0,) * (d - len(self.parts))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, YoungFrame):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"YoungFrame{self.parts!r}"


class Frequency:
    """Letter counts over a d-letter alphabet; order is basis-tied."""

    __slots__ = ("counts",)

    def __init__(self, counts: Iterable[int]):
        cs = tuple(int(c) for c in counts)
        if not cs:
            raise ValueError("frequency needs at least one letter")
        if any(c < 0 for c in cs):
            raise ValueError(f"counts must be nonnegative: {cs!r}")
        self.counts = cs

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def d(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, i):
        return self.counts[i]

    def __eq__(self, other):
        if isinstance(other, Frequency):
            return self.counts == other.counts
        if isinstance(other, tuple):
            return self.counts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.counts)

    def __repr__(self):
        return f"Frequency{self.counts!r}"


def _frame_parts(lam) -> tuple[int, ...]:
    if isinstance(lam, YoungFrame):
        return lam.parts
    return YoungFrame(lam).parts


def _freq_counts(f) -> tuple[int, ...]:
    if isinstance(f, Frequency):
        return f.counts
    return Frequency(f).counts


def enumerate_frames(d: int, n: int) -> list[YoungFrame]:
    """All partitions of n into at most d parts, descending lexicographic."""
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    out: list[YoungFrame] = []

    def rec(remaining: int, cap: int, prefix: list[int]):
        if remaining == 0:
            out.append(YoungFrame(tuple(prefix), d=d))
            return
        if len(prefix) == d:
            return
        for p in range(min(remaining, cap), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def enumerate_frequencies(d: int, n: int) -> list[Frequency]:
    """All length-d frequency vectors summing to n, lexicographic."""
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    out: list[Frequency] = []

    def rec(pos: int, remaining: int, prefix: list[int]):
        if pos == d - 1:
            out.append(Frequency(tuple(prefix) + (remaining,)))
            return
        for c in range(remaining + 1):
            prefix.append(c)
            rec(pos + 1, remaining - c, prefix)
            prefix.pop()

    rec(0, n, [])
    return out


def normalize(x) -> np.ndarray:
    """Normalized probability vector of a frame, frequency, or count vector.

    Frames are padded with zero rows up to their row cap ``d`` before
    dividing by n, so the result always has an entry per letter.
    """
    if isinstance(x, YoungFrame):
        v = np.asarray(x.padded(), dtype=float)
    elif isinstance(x, Frequency):
        v = np.asarray(x.counts, dtype=float)
    else:
        v = np.asarray(tuple(x), dtype=float)
    total = v.sum()
    if total <= 0:
        raise ValueError("cannot normalize an empty count vector")
    return v / total


def as_prob_vec(p, tol: float = 1e-9) -> np.ndarray:
    """Validate and return p as a probability vector (clipping tiny negatives)."""
    v = np.asarray(p, dtype=float).copy()
    if v.ndim != 1:
        raise ValueError("probability vector must be one dimensional")
    if v.min() < -tol:
        raise ValueError(f"negative entry {v.min()} in probability vector")
    np.clip(v, 0.0, None, out=v)
    s = v.sum()
    if abs(s - 1.0) > max(tol, 1e-12):
        raise ValueError(f"probability vector sums to {s}, expected 1")
    return v / s


def l1_distance(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("shape mismatch in l1 distance")
    return float(np.abs(p - q).sum())


def entropy(p) -> float:
    """Shannon entropy in bits; zero entries contribute nothing."""
    v = as_prob_vec(p)
    nz = v[v > 0]
    return float(-(nz * np.log2(nz)).sum())


def relative_entropy(p, q) -> float:
    """D(p || q) in bits; +inf when supp(p) is not contained in supp(q)."""
    vp = as_prob_vec(p)
    vq = as_prob_vec(q)
    if vp.shape != vq.shape:
        raise ValueError("alphabet mismatch in relative entropy")
    mask = vp > 0
    if np.any(vq[mask] <= 0):
        return math.inf
    return float((vp[mask] * (np.log2(vp[mask]) - np.log2(vq[mask]))).sum())


def pinsker_bound(p, q) -> float:
    """Lower bound ALPHA * |p - q|_1^2 on D(p || q)."""
    return ALPHA * l1_distance(p, q) ** 2


def entropy_continuity_bound(theta: float, alphabet_size: int) -> float:
    """Bound on |H(p) - H(q)| for |p - q|_1 <= theta <= 1/2.

    Equals -theta * log2(theta / alphabet_size); domain error outside
    [0, 1/2] where the bound is not valid.
    """
    if not 0.0 <= theta <= 0.5:
        raise ValueError(f"theta={theta} outside [0, 1/2]")
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be positive")
    if theta == 0.0:
        return 0.0
    return float(-theta * math.log2(theta / alphabet_size))


def hook_lengths(lam) -> list[list[int]]:
    """Hook lengths of each cell, row by row."""
    parts = _frame_parts(lam)
    cols = [0] * (parts[0] if parts else 0)
    for p in parts:
        for j in range(p):
            cols[j] += 1
    out = []
    for i, p in enumerate(parts):
        row = []
        for j in range(p):
            arm = p - j - 1
            leg = cols[j] - i - 1
            row.append(arm + leg + 1)
        out.append(row)
    return out


def hook_dimension(lam) -> int:
    """Dimension of the irreducible S_n module of shape lam (exact)."""
    parts = _frame_parts(lam)
    n = sum(parts)
    prod = 1
    for row in hook_lengths(parts):
        for h in row:
            prod *= h
    num = math.factorial(n)
    if num % prod:
        raise ArithmeticError(f"hook product {prod} does not divide {n}!")
    return num // prod


def dimension_bounds(lam, d: int | None = None) -> tuple[float, float]:
    """Entropic sandwich for hook_dimension.

    Returns (2**(n*H(norm) - 2*d**6*log2(2n)), 2**(n*H(norm))); the lower
    bound is extremely loose at small n and may underflow to 0.
    """
    frame = lam if isinstance(lam, YoungFrame) else YoungFrame(lam)
    if d is None:
        d = frame.d
    if len(frame.parts) > d:
        raise ValueError(f"frame {frame.parts!r} does not fit in {d} rows")
    n = frame.n
    h = entropy(np.asarray(frame.padded(d), dtype=float) / n)
    upper_exp = n * h
    lower_exp = upper_exp - 2.0 * d**6 * math.log2(2 * n)
    return 2.0**lower_exp, 2.0**upper_exp


def type_class_size(f) -> int:
    """Number of length-n words with letter counts f (exact multinomial)."""
    counts = _freq_counts(f)
    n = sum(counts)
    size = math.factorial(n)
    for c in counts:
        size //= math.factorial(c)
    return size


def type_class_bounds(f) -> tuple[float, float]:
    """Entropic sandwich ((n+1)**-d * 2**(nH), 2**(nH)) for type_class_size."""
    counts = _freq_counts(f)
    n = sum(counts)
    d = len(counts)
    if n == 0:
        raise ValueError("empty word")
    h = entropy(np.asarray(counts, dtype=float) / n)
    upper = 2.0 ** (n * h)
    return upper / (n + 1) ** d, upper


def dominance(f, lam) -> bool:
    """True when lam dominates the decreasing rearrangement of f.

    Equivalent to kostka(f, lam) > 0.
    """
    counts = _freq_counts(f)
    parts = _frame_parts(lam)
    if sum(counts) != sum(parts):
        raise ValueError("frequency and frame must count the same n")
    fs = sorted(counts, reverse=True)
    width = max(len(fs), len(parts))
    pf = pl = 0
    for i in range(width):
        pl += parts[i] if i < len(parts) else 0
        pf += fs[i] if i < len(fs) else 0
        if pl < pf:
            return False
    return True


def _horizontal_strip_predecessors(parts: tuple[int, ...], k: int):
    """Shapes mu <= parts with parts/mu a horizontal strip of size k."""
    rows = len(parts)
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, prefix: list[int]):
        if i == rows:
            if remaining == 0:
                mu = tuple(prefix)
                while mu and mu[-1] == 0:
                    mu = mu[:-1]
                out.append(mu)
            return
        lo = parts[i + 1] if i + 1 < rows else 0
        hi = parts[i]
        # strip condition: mu_i in [lam_{i+1}, lam_i]
        for m in range(hi, lo - 1, -1):
            removed = hi - m
            if removed > remaining:
                continue
            prefix.append(m)
            rec(i + 1, remaining - removed, prefix)
            prefix.pop()

    rec(0, k, [])
    return out


@lru_cache(maxsize=None)
def _kostka_rec(parts: tuple[int, ...], counts: tuple[int, ...]) -> int:
    if not counts:
        return 1 if not parts else 0
    k = counts[-1]
    total = 0
    for mu in _horizontal_strip_predecessors(parts, k):
        total += _kostka_rec(mu, counts[:-1])
    return total


def kostka(f, lam) -> int:
    """Number of semistandard fillings of shape lam with content f (exact).

    Enumerates fillings letter by letter: the cells holding each successive
    letter must form a horizontal strip (weakly increasing rows, strictly
    increasing columns).
    """
    counts = _freq_counts(f)
    parts = _frame_parts(lam)
    if sum(counts) != sum(parts):
        raise ValueError("frequency and frame must count the same n")
    return _kostka_rec(parts, counts)


def schur_multiplicity(lam, d: int) -> int:
    """Multiplicity sum over all d-letter contents: sum_f kostka(f, lam)."""
    parts = _frame_parts(lam)
    if len(parts) > d:
        return 0
    n = sum(parts)
    return sum(kostka(f, parts) for f in enumerate_frequencies(d, n))


def majorizes(a, b, tol: float = 1e-12) -> bool:
    """True when the decreasing rearrangement of a majorizes that of b."""
    va = np.sort(np.asarray(a, dtype=float))[::-1]
    vb = np.sort(np.asarray(b, dtype=float))[::-1]
    if va.shape != vb.shape:
        raise ValueError("majorization needs equal lengths")
    if abs(va.sum() - vb.sum()) > max(tol, 1e-9):
        return False
    return bool(np.all(np.cumsum(va) >= np.cumsum(vb) - tol))
