"""Randomized cut heuristics and exact exponential oracles.

The two heuristics (uniform random cut, majority cut) are cheap and seeded;
the two oracles enumerate all 2^(n-1) bipartitions with x_0 fixed to +1
(negating a coloring never changes a cut weight) and are capped at a vertex
count where a desk run still finishes in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .core import Coloring, RepresentationMatrix, cut_weight
from .sampling import Seed, derive_rng

DEFAULT_BRUTE_FORCE_CAP = 24

PROCESSING_ORDERS = ("identity", "shuffled")


@dataclass(frozen=True)
class MajorityConfig:
    """Knobs of the majority heuristic.

    ``epsilon`` is the fraction of vertices colored uniformly at random
    before the greedy sweep starts (at 1.0 the whole coloring is random);
    ``order`` selects the processing order: the natural vertex order or a
    seeded shuffle.
    """

    epsilon: float = 0.0
    order: str = "identity"
    record_trace: bool = False

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.order not in PROCESSING_ORDERS:
            raise ValueError(f"order must be one of {PROCESSING_ORDERS}")


@dataclass(frozen=True)
class CutResult:
    """A coloring, its cut weight, and which algorithm produced it.

    ``trace`` optionally holds the running incident-weight score each greedy
    step of the majority heuristic saw before deciding a color.
    """

    coloring: Coloring
    weight: int
    algorithm: str
    trace: Optional[tuple[int, ...]] = None


def random_cut(R: RepresentationMatrix, seed: Seed) -> CutResult:
    """Color every vertex independently and equiprobably, then score the cut."""
    rng = derive_rng(seed)
    vals = rng.integers(0, 2, size=R.n) * 2 - 1
    x = Coloring(tuple(int(v) for v in vals))
    return CutResult(coloring=x, weight=cut_weight(R, x), algorithm="random")


def majority_cut(R: RepresentationMatrix, cfg: MajorityConfig, seed: Seed) -> CutResult:
    """Greedy majority coloring.

    After a random prefix of floor(epsilon*n) vertices, each vertex v gets the
    color opposing the signed weight of its already-colored neighborhood,
    z = sum over colored u of |S_u cap S_v| * x_u, with ties (z == 0) going
    to -1.  z is accumulated through per-label color sums, so one step costs
    O(|S_v|) after the label bookkeeping.
    """
    rng = derive_rng(seed)
    n = R.n
    if cfg.order == "shuffled":
        order = rng.permutation(n).tolist()
    else:
        order = range(n)
    prefix = math.floor(cfg.epsilon * n + 1e-9)
    random_colors = (rng.integers(0, 2, size=prefix) * 2 - 1).tolist() if prefix else []

    signs = [0] * n
    label_sums = [0] * R.m
    trace: Optional[list[int]] = [] if cfg.record_trace else None
    vertex_sets = R.vertex_sets
    for t, v in enumerate(order):
        if t < prefix:
            xv = random_colors[t]
        else:
            z = 0
            for l in vertex_sets[v]:
                z += label_sums[l]
            xv = -1 if z >= 0 else 1
            if trace is not None:
                trace.append(z)
        signs[v] = xv
        for l in vertex_sets[v]:
            label_sums[l] += xv

    x = Coloring(tuple(signs))
    return CutResult(
        coloring=x,
        weight=cut_weight(R, x),
        algorithm="majority",
        trace=tuple(trace) if trace is not None else None,
    )


def beta_lower_bound(c: float) -> float:
    """Asymptotic lower bound sqrt(16 / (27 pi c^3)) on the majority gain.

    This is the constant by which the majority heuristic beats the expected
    random-cut weight (multiplicatively, minus vanishing terms) at m = n,
    p = c/n for large c; it decreases in c.
    """
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    return math.sqrt(16.0 / (27.0 * math.pi * c**3))


def _check_cap(R: RepresentationMatrix, cap: int) -> None:
    if R.n > cap:
        raise ValueError(f"n={R.n} exceeds the brute-force cap {cap}")


def _coloring_from_mask(mask: int, n: int) -> Coloring:
    # Bit (n-1-v) encodes x_v (+1 when set), so integer order on masks is
    # lexicographic order on colorings with -1 sorting first.
    return Coloring(tuple(1 if (mask >> (n - 1 - v)) & 1 else -1 for v in range(n)))


def brute_force_max_cut(
    R: RepresentationMatrix, *, cap: int = DEFAULT_BRUTE_FORCE_CAP
) -> CutResult:
    """Exact maximum cut by Gray-code enumeration of all colorings.

    Walks the 2^(n-1) colorings with x_0 = +1 flipping one vertex at a time,
    keeping all label color sums (and |Rx|^2) incrementally updated.  Among
    optimal colorings the lexicographically smallest visited one is returned.
    """
    _check_cap(R, cap)
    n = R.n
    sums = [len(L) for L in R.label_sets]
    normsq = sum(s * s for s in sums)
    signs = [1] * n
    mask = (1 << n) - 1
    best_norm, best_mask = normsq, mask
    vertex_sets = R.vertex_sets
    for i in range(1, 1 << (n - 1)):
        v = (i & -i).bit_length()  # trailing-zero count + 1: flipped vertex
        d = -2 * signs[v]
        signs[v] += d
        for l in vertex_sets[v]:
            s = sums[l]
            normsq += d * (2 * s + d)
            sums[l] = s + d
        mask ^= 1 << (n - 1 - v)
        if normsq < best_norm or (normsq == best_norm and mask < best_mask):
            best_norm, best_mask = normsq, mask

    quad = R.entry_sum() - best_norm
    assert quad % 4 == 0
    return CutResult(
        coloring=_coloring_from_mask(best_mask, n),
        weight=quad // 4,
        algorithm="exact",
    )


def brute_force_min_discrepancy(
    R: RepresentationMatrix, *, cap: int = DEFAULT_BRUTE_FORCE_CAP
) -> tuple[Coloring, int]:
    """Exact minimum discrepancy over all colorings, same Gray-code walk.

    The running maximum of |color sum| is maintained through a histogram of
    absolute row sums; each single-vertex flip moves each affected row sum
    by 2, so the maximum drifts by at most 2 per affected label.
    """
    _check_cap(R, cap)
    n = R.n
    sums = [len(L) for L in R.label_sets]
    counts = [0] * (n + 1)
    for s in sums:
        counts[s] += 1
    curmax = max(sums, default=0)
    signs = [1] * n
    mask = (1 << n) - 1
    best_disc, best_mask = curmax, mask
    vertex_sets = R.vertex_sets
    for i in range(1, 1 << (n - 1)):
        v = (i & -i).bit_length()
        d = -2 * signs[v]
        signs[v] += d
        for l in vertex_sets[v]:
            a = abs(sums[l])
            sums[l] += d
            b = abs(sums[l])
            counts[a] -= 1
            counts[b] += 1
            if b > curmax:
                curmax = b
            elif a == curmax and counts[curmax] == 0:
                while curmax > 0 and counts[curmax] == 0:
                    curmax -= 1
        mask ^= 1 << (n - 1 - v)
        if curmax < best_disc or (curmax == best_disc and mask < best_mask):
            best_disc, best_mask = curmax, mask

    return _coloring_from_mask(best_mask, n), best_disc
