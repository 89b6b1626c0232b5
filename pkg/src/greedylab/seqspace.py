"""Symmetric sequence-space norms on finite coordinate vectors.

Three norm families are provided, all invariant under permutations and sign
changes of the coordinates:

* ``lp``            -- plain power norms (sum |f_k|^p)^(1/p),
* ``lorentz``       -- weighted rearrangement norms built from a weight's
                       primitive sequence s_n = w_1 + ... + w_n,
* ``weak_lorentz``  -- the sup-form companion, sup_n s_n * a_n^*,

together with the fundamental function (norm of an m-term indicator), the
doubling-type regularity predicates used to classify its growth, and a
sampled equivalence check for two weights.

Everything is truncated at a fixed dimension N; the regularity verdicts are
therefore truncation-relative and say so in their result objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ABS_TOL = 1e-10
EXACT_TOL = 1e-12


class DimensionMismatchError(ValueError):
    """Vector length does not match the norm's dimension."""


@dataclass(frozen=True)
class Weight:
    """Non-negative weight sequence with w_1 > 0, stored with its primitive."""

    values: np.ndarray
    primitive: np.ndarray = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.values, dtype=float)
        if w.ndim != 1 or len(w) == 0:
            raise ValueError("weight must be a nonempty 1-d sequence")
        if w[0] <= 0:
            raise ValueError("first weight entry must be positive")
        if np.any(w < 0):
            raise ValueError("weight entries must be non-negative")
        object.__setattr__(self, "values", w)
        object.__setattr__(self, "primitive", np.cumsum(w))

    def __len__(self):
        return len(self.values)

    @staticmethod
    def ones(n: int) -> "Weight":
        return Weight(np.ones(n))

    @staticmethod
    def from_primitive(s: np.ndarray) -> "Weight":
        """Weight whose primitive sequence equals ``s`` exactly."""
        s = np.asarray(s, dtype=float)
        return Weight(np.diff(s, prepend=0.0))


@dataclass(frozen=True)
class FundamentalFunction:
    """Positive non-decreasing sequence Lambda_1..Lambda_N.

    ``validate()`` reports whether the two classical monotonicity properties
    (Lambda_m and m/Lambda_m both non-decreasing) hold; they are checked, not
    assumed, for user-supplied sequences.
    """

    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.ndim != 1 or len(lam) == 0:
            raise ValueError("fundamental function must be a nonempty 1-d sequence")
        if np.any(lam <= 0):
            raise ValueError("fundamental function entries must be positive")
        object.__setattr__(self, "lam", lam)

    def __len__(self):
        return len(self.lam)

    def __getitem__(self, m: int) -> float:
        """1-based access: self[m] = Lambda_m."""
        if not 1 <= m <= len(self.lam):
            raise IndexError(f"m={m} outside 1..{len(self.lam)}")
        return float(self.lam[m - 1])

    def validate(self, rel_tol: float = 1e-9) -> dict:
        lam = self.lam
        m = np.arange(1, len(lam) + 1)
        nondecr = bool(np.all(np.diff(lam) >= -rel_tol * lam[:-1]))
        ratio = m / lam
        ratio_nondecr = bool(np.all(np.diff(ratio) >= -rel_tol * ratio[:-1]))
        return {"nondecreasing": nondecr, "m_over_lambda_nondecreasing": ratio_nondecr}

    @property
    def derived_weight(self) -> Weight:
        """Weight (Lambda_n - Lambda_{n-1}) with Lambda_0 = 0."""
        return Weight.from_primitive(self.lam)

    @property
    def derived_density(self) -> Weight:
        """Weight (Lambda_n / n)."""
        n = np.arange(1, len(self.lam) + 1)
        return Weight(self.lam / n)


class SeqNorm:
    """A 1-symmetric norm evaluator of fixed dimension.

    kind is one of "lp", "lorentz", "weak_lorentz".  Lorentz kinds sort the
    absolute values in non-increasing order and apply the primitive-weighted
    sum / sup formula; lp is a plain power sum.  For q < 1 (or p < 1) the
    functional is only a quasi-norm, which callers must account for.
    """

    def __init__(self, kind: str, dim: int, *, p: float | None = None,
                 q: float | None = None, weight: Weight | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.kind = kind
        self.dim = int(dim)
        if kind == "lp":
            if p is None or (p <= 0):
                raise ValueError("lp norm needs p > 0")
            self.p = float(p)
        elif kind == "lorentz":
            if q is None or q <= 0:
                raise ValueError("lorentz norm needs q > 0")
            if weight is None or len(weight) < dim:
                raise ValueError("lorentz norm needs a weight of length >= dim")
            self.q = float(q)
            self.weight = weight
        elif kind == "weak_lorentz":
            if weight is None or len(weight) < dim:
                raise ValueError("weak lorentz norm needs a weight of length >= dim")
            self.weight = weight
        else:
            raise ValueError(f"unknown norm kind {kind!r}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def lp(p: float, dim: int) -> "SeqNorm":
        return SeqNorm("lp", dim, p=p)

    @staticmethod
    def lorentz(q: float, weight: Weight, dim: int | None = None) -> "SeqNorm":
        return SeqNorm("lorentz", dim or len(weight), q=q, weight=weight)

    @staticmethod
    def weak_lorentz(weight: Weight, dim: int | None = None) -> "SeqNorm":
        return SeqNorm("weak_lorentz", dim or len(weight), weight=weight)

    @property
    def is_euclidean(self) -> bool:
        return self.kind == "lp" and self.p == 2.0

    # -- evaluation --------------------------------------------------------

    def __call__(self, f: np.ndarray) -> float:
        return self.eval(f)

    def eval(self, f: np.ndarray) -> float:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.dim,):
            raise DimensionMismatchError(
                f"vector of length {f.shape} fed to norm of dim {self.dim}")
        return float(self.eval_rows(f[None, :])[0])

    def eval_rows(self, F: np.ndarray) -> np.ndarray:
        """Vectorized evaluation, one norm per row of F."""
        F = np.asarray(F, dtype=float)
        if F.ndim != 2 or F.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"rows of shape {F.shape} fed to norm of dim {self.dim}")
        A = np.abs(F)
        if self.kind == "lp":
            p = self.p
            if math.isinf(p):
                return A.max(axis=1)
            if p == 2.0:
                return np.sqrt((A * A).sum(axis=1))
            if p == 1.0:
                return A.sum(axis=1)
            return (A ** p).sum(axis=1) ** (1.0 / p)
        # non-increasing rearrangement; ties need no rule, the result is
        # rearrangement-invariant
        Astar = -np.sort(-A, axis=1)
        s = self.weight.primitive[:self.dim]
        w = self.weight.values[:self.dim]
        if self.kind == "weak_lorentz":
            return (Astar * s).max(axis=1)
        q = self.q
        terms = (s * Astar) ** q * (w / s)
        return terms.sum(axis=1) ** (1.0 / q)

    def eval_block_constant_rows(self, V: np.ndarray, sizes: np.ndarray) -> np.ndarray:
        """Norms of vectors that are constant on consecutive blocks.

        V holds one block value per column; sizes are the block lengths with
        sum equal to the norm dimension.  Sorting happens at block
        granularity, so this is much cheaper than expanding when blocks are
        large.  Exact variant of eval_rows on the expanded vectors.
        """
        V = np.atleast_2d(np.asarray(V, dtype=float))
        sizes = np.asarray(sizes, dtype=int)
        if sizes.sum() != self.dim or V.shape[1] != len(sizes):
            raise DimensionMismatchError("block sizes do not tile the norm dimension")
        A = np.abs(V)
        if self.kind == "lp":
            p = self.p
            if math.isinf(p):
                return A.max(axis=1)
            return (A ** p @ sizes.astype(float)) ** (1.0 / p)
        order = np.argsort(-A, axis=1, kind="stable")
        a_sorted = np.take_along_axis(A, order, axis=1)
        sz_sorted = sizes[order]
        ends = np.cumsum(sz_sorted, axis=1)
        starts = ends - sz_sorted
        if self.kind == "weak_lorentz":
            # sup of s_n * a*_n over each run is attained at the run's end
            s = self.weight.primitive[:self.dim]
            return (a_sorted * s[ends - 1]).max(axis=1)
        q = self.q
        s = self.weight.primitive[:self.dim]
        w = self.weight.values[:self.dim]
        csum = np.concatenate([[0.0], np.cumsum(s ** (q - 1.0) * w)])
        run = csum[ends] - csum[starts]
        return (a_sorted ** q * run).sum(axis=1) ** (1.0 / q)

    # -- serialization -----------------------------------------------------

    def to_jsonable(self) -> dict:
        if self.kind == "lp":
            return {"kind": "lp", "p": self.p, "dim": self.dim}
        if self.kind == "lorentz":
            return {"kind": "lorentz", "q": self.q, "dim": self.dim,
                    "weight": self.weight.values[:self.dim].tolist()}
        return {"kind": "weak_lorentz", "dim": self.dim,
                "weight": self.weight.values[:self.dim].tolist()}

    @staticmethod
    def from_jsonable(d: dict) -> "SeqNorm":
        kind = d["kind"]
        if kind == "lp":
            return SeqNorm.lp(d["p"], d["dim"])
        w = Weight(np.asarray(d["weight"], dtype=float))
        if kind == "lorentz":
            return SeqNorm.lorentz(d["q"], w, d["dim"])
        if kind == "weak_lorentz":
            return SeqNorm.weak_lorentz(w, d["dim"])
        raise ValueError(f"unknown norm kind {kind!r}")

    def __repr__(self):
        if self.kind == "lp":
            return f"SeqNorm.lp(p={self.p}, dim={self.dim})"
        if self.kind == "lorentz":
            return f"SeqNorm.lorentz(q={self.q}, dim={self.dim})"
        return f"SeqNorm.weak_lorentz(dim={self.dim})"


def norm_eval(s: SeqNorm, f: np.ndarray) -> float:
    """Functional form of SeqNorm.eval."""
    return s.eval(f)


def fundamental_function(s: SeqNorm) -> FundamentalFunction:
    """Lambda_m = norm of the indicator of {1..m}, for m = 1..dim.

    Computed incrementally in closed form per kind; agrees with feeding
    indicator vectors to ``norm_eval`` (that identity is under test).
    """
    n = s.dim
    if s.kind == "lp":
        m = np.arange(1, n + 1, dtype=float)
        if math.isinf(s.p):
            lam = np.ones(n)
        else:
            lam = m ** (1.0 / s.p)
    elif s.kind == "lorentz":
        sprim = s.weight.primitive[:n]
        w = s.weight.values[:n]
        lam = np.cumsum(sprim ** (s.q - 1.0) * w) ** (1.0 / s.q)
    else:
        lam = s.weight.primitive[:n].copy()
    return FundamentalFunction(lam)


@dataclass(frozen=True)
class RegularityVerdict:
    """Truncation-relative doubling verdict.

    ``holds`` is true when some dilation factor b in {2..N//2} satisfies the
    tested inequality for every m with b*m <= N; ``witness_b`` is the least
    such b.  When false, ``counterexamples`` maps each candidate b to a
    violating m.  At truncation scale a large b can pass vacuously because
    only m <= N/b are testable, so callers should read ``witness_b`` together
    with ``tested_range``.
    """

    holds: bool
    witness_b: int | None
    counterexamples: dict[int, int]
    tested_range: tuple[int, int]


def _doubling_scan(lam: np.ndarray, predicate) -> RegularityVerdict:
    n = len(lam)
    if n < 4:
        raise ValueError("need at least 4 entries for a doubling scan")
    counterexamples: dict[int, int] = {}
    for b in range(2, n // 2 + 1):
        m_max = n // b
        m = np.arange(1, m_max + 1)
        ok = predicate(lam, m, b)
        if ok.all():
            return RegularityVerdict(True, b, counterexamples, (2, n // 2))
        counterexamples[b] = int(m[~ok][0])
    return RegularityVerdict(False, None, counterexamples, (2, n // 2))


def has_lrp(lam: FundamentalFunction, rel_tol: float = 1e-9) -> RegularityVerdict:
    """Least b with 2*Lambda_m <= Lambda_{b m} for all testable m."""

    def pred(arr, m, b):
        return 2.0 * arr[m - 1] <= arr[b * m - 1] * (1.0 + rel_tol)

    return _doubling_scan(lam.lam, pred)


def has_urp(lam: FundamentalFunction, rel_tol: float = 1e-9) -> RegularityVerdict:
    """Least b with 2*Lambda_{b m} <= b*Lambda_m for all testable m."""

    def pred(arr, m, b):
        return 2.0 * arr[b * m - 1] <= b * arr[m - 1] * (1.0 + rel_tol)

    return _doubling_scan(lam.lam, pred)


def dini_ratio(lam: FundamentalFunction) -> np.ndarray:
    """r_m = (sum_{n<=m} Lambda_n/n) / Lambda_m for m = 1..N.

    Boundedness of r is the integral-test companion of the doubling
    predicates; the caller judges boundedness.
    """
    arr = lam.lam
    n = np.arange(1, len(arr) + 1)
    return np.cumsum(arr / n) / arr


def _sample_vectors(rng: np.random.Generator, dim: int, trials: int) -> np.ndarray:
    """Gaussian rows plus a few structured shapes that stress rearrangement norms."""
    rows = [rng.standard_normal((trials, dim))]
    structured = np.zeros((min(dim, 24) + 2, dim))
    for i, m in enumerate(np.unique(np.geomspace(1, dim, num=min(dim, 24)).astype(int))):
        structured[i, :m] = 1.0
    structured[-2] = rng.standard_normal(dim) ** 3          # heavy tail
    structured[-1, :] = 1.0 / np.arange(1, dim + 1)         # hyperbolic decay
    rows.append(structured)
    return np.vstack(rows)


def lorentz_equiv_check(w: Weight, w2: Weight, q: float, trials: int = 1000,
                        seed: int = 0, dim: int | None = None) -> float:
    """Max two-sided ratio of the two Lorentz norms over sampled vectors.

    Indicator vectors are always included in the sample: the primitive
    sequences are compared exactly on them, so a genuine gap between the
    primitives shows up even when random vectors would smooth it out.
    """
    n = dim or min(len(w), len(w2))
    na = SeqNorm.lorentz(q, w, n)
    nb = SeqNorm.lorentz(q, w2, n)
    rng = np.random.default_rng(seed)
    F = _sample_vectors(rng, n, trials)
    va = na.eval_rows(F)
    vb = nb.eval_rows(F)
    keep = (va > 0) & (vb > 0)
    if not keep.any():
        return 1.0
    r = np.maximum(va[keep] / vb[keep], vb[keep] / va[keep])
    return float(r.max())


def embedding_constant(w: Weight, p: float, q: float, trials: int = 400,
                       seed: int = 0, dim: int | None = None) -> float:
    """Observed max of |f|_{d_q(w)} / |f|_{d_p(w)} over samples, for p <= q.

    The inequality holds up to a constant; with the primitive-normalized
    formulas the constant is not 1 in general, so it is measured rather than
    asserted.
    """
    if p > q:
        raise ValueError("embedding runs from smaller to larger exponent")
    n = dim or len(w)
    np_ = SeqNorm.lorentz(p, w, n)
    nq_ = SeqNorm.lorentz(q, w, n)
    rng = np.random.default_rng(seed)
    F = _sample_vectors(rng, n, trials)
    vp = np_.eval_rows(F)
    vq = nq_.eval_rows(F)
    keep = vp > 0
    return float((vq[keep] / vp[keep]).max())
