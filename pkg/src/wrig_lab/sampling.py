"""Seeded generation of random representation matrices.

Every entry of the m-by-n matrix is an independent Bernoulli(p) variable.
Randomness comes from counter-based Philox streams derived through
``numpy.random.SeedSequence`` so that distinct (seed, stream) pairs give
statistically independent, bitwise-reproducible draws regardless of how
work is scheduled across processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import RepresentationMatrix

# Seeds are 64-bit unsigned values; derived streams are addressed by
# (seed, *stream) tuples.
Seed = int

# Below this success probability the sampler walks the entry grid with
# geometric skips instead of drawing one uniform per cell.
_SPARSE_THRESHOLD = 0.1


def derive_rng(seed: Seed, *stream: int) -> np.random.Generator:
    """Independent Philox generator for the given seed and stream address."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: Seed, *stream: int) -> int:
    """Collapse a (seed, stream) address into a fresh 64-bit seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ModelParams:
    """Parameters (n, m, p) of the random model, with optional provenance.

    ``derivation`` records how (m, p) were obtained: ``("alpha", a)`` means
    m = floor(n**a), ``("c", c)`` means m = n and p = c/n.
    """

    n: int
    m: int
    p: float
    derivation: Optional[tuple[str, float]] = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n, m >= 1, got n={self.n}, m={self.m}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"need 0 <= p <= 1, got p={self.p}")
        if self.derivation is not None:
            kind, value = self.derivation
            if kind == "alpha":
                if self.m != label_count_for_alpha(self.n, value):
                    raise ValueError(
                        f"m={self.m} is not floor({self.n}**{value})"
                    )
            elif kind == "c":
                if self.m != self.n or abs(self.p * self.n - value) >= 1e-9:
                    raise ValueError(
                        f"derivation c={value} needs m=n and p=c/n, "
                        f"got m={self.m}, p={self.p}"
                    )
            else:
                raise ValueError(f"unknown derivation kind {kind!r}")

    @classmethod
    def fixed(cls, n: int, m: int, p: float) -> "ModelParams":
        return cls(n=n, m=m, p=p)

    @classmethod
    def from_alpha(cls, n: int, alpha: float, p: float) -> "ModelParams":
        return cls(n=n, m=label_count_for_alpha(n, alpha), p=p, derivation=("alpha", alpha))

    @classmethod
    def from_c(cls, n: int, c: float) -> "ModelParams":
        return cls(n=n, m=n, p=c / n, derivation=("c", c))

    def regime_warning(self) -> Optional[str]:
        """Message when p leaves the studied window [sqrt(1/nm), 1/sqrt(m)].

        Outside this window instances degenerate (essentially sequence-free
        below, almost complete above); sampling still works, callers merely
        get a heads-up.
        """
        lo = math.sqrt(1.0 / (self.n * self.m))
        hi = 1.0 / math.sqrt(self.m)
        slack = 1e-9  # keep p == bound (up to float dust) inside the window
        if self.p < lo * (1.0 - slack) or self.p > hi * (1.0 + slack):
            return (
                f"p={self.p:g} is outside the studied window "
                f"[{lo:.3g}, {hi:.3g}] for n={self.n}, m={self.m}"
            )
        return None


def label_count_for_alpha(n: int, alpha: float) -> int:
    """floor(n**alpha), with a tiny nudge so exact powers survive float dust."""
    return max(1, math.floor(n**alpha + 1e-9))


def expected_edge_weight_sum(params: ModelParams) -> float:
    """Expected sum of off-diagonal entries of R^T R: n(n-1) m p^2."""
    return params.n * (params.n - 1) * params.m * params.p**2


def sample_matrix(params: ModelParams, seed: Seed) -> RepresentationMatrix:
    """Draw a representation matrix with iid Bernoulli(p) entries.

    Deterministic given (params, seed).  For p below 0.1 the sampler skips
    through the row-major entry grid with geometric gaps, costing time
    proportional to the number of ones instead of n*m; both code paths
    sample the same distribution.
    """
    if params.p < _SPARSE_THRESHOLD:
        return _sample_sparse(params, derive_rng(seed))
    return _sample_dense(params, derive_rng(seed))


def _sample_dense(params: ModelParams, rng: np.random.Generator) -> RepresentationMatrix:
    hits = rng.random((params.m, params.n)) < params.p
    label_sets = [np.nonzero(row)[0].tolist() for row in hits]
    return RepresentationMatrix.from_label_sets(params.n, label_sets)


def _sample_sparse(params: ModelParams, rng: np.random.Generator) -> RepresentationMatrix:
    m, n, p = params.m, params.n, params.p
    label_sets: list[list[int]] = [[] for _ in range(m)]
    if p > 0.0:
        total = m * n
        expected = total * p
        batch = max(256, int(expected + 10.0 * math.sqrt(expected) + 16.0))
        pos = -1
        while True:
            gaps = rng.geometric(p, size=batch)
            positions = pos + np.cumsum(gaps)
            inside = positions[positions < total]
            for q in inside.tolist():
                label_sets[q // n].append(q % n)
            if len(inside) < len(positions):
                break
            pos = int(positions[-1])
            batch = 256
    return RepresentationMatrix.from_label_sets(n, label_sets)
