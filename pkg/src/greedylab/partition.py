"""Ordered partitions of {1..N} into consecutive blocks, and the averaging
projection machinery built on them.

Blocks are stored as (start, length) intervals: every construction downstream
uses consecutive blocks, and consecutiveness makes the averaging projection a
single O(N) pass (``np.add.reduceat``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .seqspace import DimensionMismatchError, FundamentalFunction, SeqNorm


@dataclass(frozen=True)
class OrderedPartition:
    """Consecutive blocks sigma_1, sigma_2, ... covering {1..N}."""

    sizes: tuple[int, ...]
    starts: np.ndarray = field(init=False)
    cumulative: np.ndarray = field(init=False)

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) == 0 or any(s < 1 for s in sizes):
            raise ValueError("all block sizes must be positive integers")
        object.__setattr__(self, "sizes", sizes)
        cum = np.cumsum(sizes)
        object.__setattr__(self, "cumulative", cum)
        object.__setattr__(self, "starts", cum - np.asarray(sizes))

    @property
    def dim(self) -> int:
        return int(self.cumulative[-1])

    @property
    def nblocks(self) -> int:
        return len(self.sizes)

    def block(self, n: int) -> np.ndarray:
        """0-based coordinate indices of the n-th block (1-based n)."""
        if not 1 <= n <= self.nblocks:
            raise IndexError(f"block {n} outside 1..{self.nblocks}")
        a = int(self.starts[n - 1])
        return np.arange(a, a + self.sizes[n - 1])

    def M(self, n: int) -> int:
        """Cumulative size M_n = |sigma_1| + ... + |sigma_n|; M_0 = 0."""
        if n == 0:
            return 0
        return int(self.cumulative[n - 1])

    def sizes_array(self) -> np.ndarray:
        return np.asarray(self.sizes, dtype=float)

    def block_of_coordinate(self) -> np.ndarray:
        """For each 0-based coordinate, the 0-based index of its block."""
        return np.repeat(np.arange(self.nblocks), self.sizes)

    def to_jsonable(self) -> dict:
        return {"sizes": list(self.sizes)}

    @staticmethod
    def from_jsonable(d: dict) -> "OrderedPartition":
        return OrderedPartition(tuple(d["sizes"]))


def _check_dim(sigma: OrderedPartition, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != sigma.dim:
        raise DimensionMismatchError(
            f"vector of length {f.shape[-1]} fed to partition of total size {sigma.dim}")
    return f


def block_sums(sigma: OrderedPartition, f: np.ndarray) -> np.ndarray:
    """Per-block coordinate sums; works on a vector or on rows of a matrix."""
    f = _check_dim(sigma, f)
    return np.add.reduceat(f, sigma.starts, axis=-1)


def average_project(sigma: OrderedPartition, f: np.ndarray) -> np.ndarray:
    """P_sigma f: replace each block by its mean (constant on blocks)."""
    means = block_sums(sigma, f) / sigma.sizes_array()
    return np.repeat(means, sigma.sizes, axis=-1)


def complement_project(sigma: OrderedPartition, f: np.ndarray) -> np.ndarray:
    """Q_sigma f = f - P_sigma f; every block of the output has zero mean."""
    f = _check_dim(sigma, f)
    return f - average_project(sigma, f)


@dataclass(frozen=True)
class BlockSystem:
    """Normalized block vectors v_n = 1_{sigma_n} / Lambda_{|sigma_n|} and
    their biorthogonal functionals v*_n = (Lambda_{|sigma_n|} / |sigma_n|) 1*_{sigma_n}.

    Lambda comes from the host norm's fundamental function, so each v_n has
    host norm exactly 1 and <v*_n, v_m> = delta_{nm}.
    """

    partition: OrderedPartition
    lam: FundamentalFunction

    def __post_init__(self):
        if len(self.lam) < max(self.partition.sizes):
            raise ValueError("fundamental function shorter than the largest block")

    @staticmethod
    def for_norm(s: SeqNorm, sigma: OrderedPartition) -> "BlockSystem":
        from .seqspace import fundamental_function
        if s.dim != sigma.dim:
            raise DimensionMismatchError("norm dimension != partition total size")
        return BlockSystem(sigma, fundamental_function(s))

    def lam_of_block(self, n: int) -> float:
        return self.lam[self.partition.sizes[n - 1]]

    def block_scales(self) -> np.ndarray:
        """Lambda_{|sigma_n|} for n = 1..#blocks, as an array."""
        return self.lam.lam[np.asarray(self.partition.sizes) - 1]

    def vector(self, n: int) -> np.ndarray:
        out = np.zeros(self.partition.dim)
        out[self.partition.block(n)] = 1.0 / self.lam_of_block(n)
        return out

    def functional_vector(self, n: int) -> np.ndarray:
        out = np.zeros(self.partition.dim)
        sz = self.partition.sizes[n - 1]
        out[self.partition.block(n)] = self.lam_of_block(n) / sz
        return out

    def coefficients(self, f: np.ndarray) -> np.ndarray:
        """All v*_n(f) in one pass (vector, or per row of a matrix)."""
        sums = block_sums(self.partition, f)
        return sums * (self.block_scales() / self.partition.sizes_array())

    def synthesize(self, c: np.ndarray) -> np.ndarray:
        """sum_n c_n v_n as a coordinate vector."""
        c = np.asarray(c, dtype=float)
        if c.shape[-1] != self.partition.nblocks:
            raise DimensionMismatchError("coefficient count != number of blocks")
        vals = c / self.block_scales()
        return np.repeat(vals, self.partition.sizes, axis=-1)


def block_functional(bs: BlockSystem, n: int, f: np.ndarray) -> float:
    """v*_n(f) = (Lambda_{|sigma_n|} / |sigma_n|) * sum over the block."""
    if not 1 <= n <= bs.partition.nblocks:
        raise IndexError(f"block {n} outside 1..{bs.partition.nblocks}")
    f = _check_dim(bs.partition, f)
    sz = bs.partition.sizes[n - 1]
    return float(f[bs.partition.block(n)].sum() * bs.lam_of_block(n) / sz)


def _structured_probe(sigma: OrderedPartition) -> np.ndarray:
    n = sigma.dim
    rows = []
    k = min(sigma.nblocks, 16)
    for j in range(1, k + 1):
        v = np.zeros(n)
        v[sigma.block(j)] = 1.0
        rows.append(v)                     # block indicator
        v = np.zeros(n)
        idx = sigma.block(j)
        v[idx] = np.where(np.arange(len(idx)) % 2 == 0, 1.0, -1.0)
        rows.append(v)                     # alternating inside a block
    v = np.zeros(n)
    v[0] = 1.0
    rows.append(v)
    rows.append(np.ones(n))
    return np.asarray(rows)


def projection_norm_bound_check_multi(sigma: OrderedPartition,
                                      norms: dict[str, SeqNorm],
                                      trials: int = 1000, seed: int = 0,
                                      q_trials: int | None = None,
                                      chunk: int = 512) -> dict:
    """Empirical operator-norm lower estimates for P_sigma and Q_sigma,
    sharing one sample family across several norms.

    Random Gaussian vectors plus structured ones (block indicators,
    within-block alternating signs, single coordinates) are pushed through
    the projections.  The averaged vectors are block-constant, so their
    norms are evaluated at block granularity.  The complement ratios cost a
    second full rearrangement per sample; q_trials caps how many samples
    they use (default: all).  All values are lower estimates of the true
    operator norms; the classical upper bounds on a symmetric space are 2
    for P and 3 for Q.
    """
    for s in norms.values():
        if s.dim != sigma.dim:
            raise DimensionMismatchError("norm dimension != partition total size")
    rng = np.random.default_rng(seed)
    n = sigma.dim
    sizes = np.asarray(sigma.sizes)
    if q_trials is None:
        q_trials = trials
    best = {name: {"P": 0.0, "Q": 0.0} for name in norms}
    q_budget = q_trials + 64            # structured rows always included
    remaining = trials
    batches = [_structured_probe(sigma)]
    while remaining > 0:
        take = min(chunk, remaining)
        batches.append(rng.standard_normal((take, n)))
        remaining -= take
    for F in batches:
        means = block_sums(sigma, F) / sizes
        take_q = max(0, min(len(F), q_budget))
        q_budget -= take_q
        Q = None
        if take_q > 0:
            Q = F[:take_q] - np.repeat(means[:take_q], sizes, axis=-1)
        for name, s in norms.items():
            nf = s.eval_rows(F)
            keep = nf > 0
            if not keep.any():
                continue
            npn = s.eval_block_constant_rows(means[keep], sizes)
            best[name]["P"] = max(best[name]["P"], float((npn / nf[keep]).max()))
            if Q is not None:
                kq = keep[:take_q]
                if kq.any():
                    nq = s.eval_rows(Q[kq])
                    best[name]["Q"] = max(best[name]["Q"],
                                          float((nq / nf[:take_q][kq]).max()))
    return best


def projection_norm_bound_check(sigma: OrderedPartition, s: SeqNorm,
                                trials: int = 1000, seed: int = 0,
                                chunk: int = 512) -> dict:
    """Single-norm form of projection_norm_bound_check_multi."""
    return projection_norm_bound_check_multi(
        sigma, {"s": s}, trials=trials, seed=seed, chunk=chunk)["s"]
