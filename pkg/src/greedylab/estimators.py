"""Quantitative greedy-approximation parameters.

Everything here is a sampled or witness-driven bound:

* ``km_exact_hilbert`` is the one certified value (largest singular value of
  the projection matrices, enumerated exhaustively when feasible);
* ``km_lower`` / ``ktilde_lower`` / ``phi_lower`` / ``quasi_greedy_lower`` /
  ``tqg_constant_lower`` return lower bounds that are monotone under witness
  enlargement and deterministic given a seed;
* ``democracy_functions`` reports observed maxima/minima of signed indicator
  norms with the matching bound-kind labels.

Dual norms outside inner-product geometry are sampled lower bounds and are
labeled as such everywhere they appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .basis import Basis, coordinate_projection, greedy_set, tga
from .constructions import DkkSpace
from .util import parallel_max, split_seeds

_TOL = 1e-10


@dataclass
class EstimateReport:
    """One measured quantity at one scale."""

    quantity: str
    scale: float
    value: float
    bound_kind: str                  # exact | lower | upper
    witness: str = ""
    seed: int | None = None

    def row(self) -> list:
        return [self.quantity, self.scale, self.value, self.bound_kind,
                self.witness, "" if self.seed is None else self.seed]


@dataclass
class WitnessItem:
    vector: np.ndarray
    index_set: tuple[int, ...]
    provenance: str = "structured"   # construction | random | structured
    label: str = ""


@dataclass
class WitnessFamily:
    items: list[WitnessItem] = field(default_factory=list)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def add(self, vector, index_set, provenance="structured", label=""):
        self.items.append(WitnessItem(np.asarray(vector, dtype=float),
                                      tuple(int(i) for i in index_set),
                                      provenance, label))

    def validate(self, dim: int):
        for it in self.items:
            if it.vector.shape != (dim,):
                raise ValueError(f"witness {it.label!r} has wrong dimension")
            if it.index_set and not (1 <= min(it.index_set) <= max(it.index_set) <= dim):
                raise ValueError(f"witness {it.label!r} has an out-of-range index set")


def family_from_basis(b: Basis) -> WitnessFamily:
    """Collect the construction-attached scale witnesses of a built basis."""
    fam = WitnessFamily()
    for sw in b.witnesses.get("scales", []):
        fam.add(sw.vector, sw.set_a, "construction", f"{sw.label}-n{sw.n}-a")
        fam.add(sw.vector, sw.set_b, "construction", f"{sw.label}-n{sw.n}-b")
    return fam


# -- exact Hilbert values -----------------------------------------------------


def _projection_matrix(b: Basis, A) -> np.ndarray:
    n = b.dim
    D = np.zeros(n)
    D[np.asarray(sorted(A), dtype=int) - 1] = 1.0
    if b.synth is None:
        return np.diag(D)
    return b.synth @ (D[:, None] * b.anal)


def km_exact_hilbert(b: Basis, m: int, candidates=None,
                     enumeration_limit: int = 200_000) -> EstimateReport:
    """sup |S_A| over |A| <= m in Euclidean ambient, by singular values.

    Exhaustive enumeration when the subset count fits the limit, otherwise
    restricted to ``candidates`` and labeled a lower bound.
    """
    if not b.space.is_euclidean:
        raise ValueError("exact projection norms need a Euclidean ambient; "
                         "use km_lower instead")
    n = b.dim
    exact = True
    if candidates is None:
        total = sum(math.comb(n, k) for k in range(1, m + 1))
        if total > enumeration_limit:
            raise ValueError(
                f"{total} subsets exceed the enumeration limit; pass candidates")
        candidates = [A for k in range(1, m + 1)
                      for A in combinations(range(1, n + 1), k)]
    else:
        exact = False
        candidates = [tuple(A) for A in candidates if 0 < len(A) <= m]
    best = 0.0
    for A in candidates:
        s = np.linalg.svd(_projection_matrix(b, A), compute_uv=False)
        best = max(best, float(s[0]))
    return EstimateReport("km", m, best, "exact" if exact else "lower",
                          witness=f"{len(candidates)} sets")


# -- sampled lower bounds -----------------------------------------------------


def _ratio(b: Basis, A, f: np.ndarray) -> float:
    nf = b.space.norm(f)
    if nf <= 0 or len(A) == 0:
        return 0.0
    return b.space.norm(coordinate_projection(b, A, f)) / nf


def _refine(b: Basis, A, f: np.ndarray, rounds: int = 20) -> float:
    """Alternating 1-d rescale of the on-set and off-set parts of f.

    The projection is linear, so scaling one side only moves the denominator;
    a short golden-ratio-free grid search per round is enough for a bound.
    """
    A_idx = np.asarray(sorted(A), dtype=int) - 1
    mask = np.zeros(b.dim, dtype=bool)
    mask[A_idx] = True
    c = b.analyze(f)
    best = _ratio(b, A, f)
    grid = np.array([0.25, 0.5, 0.8, 1.25, 2.0, 4.0])
    for r in range(rounds):
        on_side = r % 2 == 0
        improved = False
        for t in grid:
            c2 = c.copy()
            c2[mask if on_side else ~mask] *= t
            f2 = b.synthesize(c2)
            val = _ratio(b, A, f2)
            if val > best + 1e-15:
                best, c, improved = val, c2, True
        if not improved and r >= 1:
            break
    return best


def km_lower(b: Basis, m: int, witnesses: WitnessFamily | None = None,
             trials: int = 200, seed: int = 0, refine_rounds: int = 20) -> EstimateReport:
    """Witness + random lower bound for sup |S_A f|/|f| over |A| <= m."""
    if not 0 <= m <= b.dim:
        raise ValueError(f"m={m} outside 0..{b.dim}")
    best = 0.0
    tag = ""
    if m >= 1:
        best, tag = 1.0, "singleton"      # A = {n}, f = x_n
    if witnesses is not None:
        witnesses.validate(b.dim)
        for it in witnesses:
            A = it.index_set
            if len(A) > m:
                c = np.abs(b.analyze(it.vector))
                A = tuple(sorted(A, key=lambda i: -c[i - 1])[:m])
            val = _refine(b, A, it.vector, refine_rounds)
            if val > best:
                best, tag = val, it.label or it.provenance

    def one_seed(s):
        rng = np.random.default_rng(s)
        local = 0.0
        for _ in range(max(1, trials // 8)):
            f = rng.standard_normal(b.dim)
            g = greedy_set(b, f, m)
            local = max(local, _ratio(b, g.A, f))
            A = tuple(rng.choice(b.dim, size=m, replace=False) + 1) if m else ()
            local = max(local, _ratio(b, A, f))
        return local

    rand_best = parallel_max(one_seed, split_seeds(seed, 8)) if trials > 0 else 0.0
    if rand_best > best:
        best, tag = rand_best, "random"
    return EstimateReport("km", m, best, "lower", witness=tag, seed=seed)


def ktilde_lower(b: Basis, m: int, witnesses: WitnessFamily | None = None,
                 trials: int = 200, seed: int = 0) -> EstimateReport:
    """As km_lower but f restricted to the span of the first m basis vectors
    and the projection set unrestricted."""
    if not 1 <= m <= b.dim:
        raise ValueError(f"m={m} outside 1..{b.dim}")
    best, tag = 1.0, "singleton"
    if witnesses is not None:
        witnesses.validate(b.dim)
        for it in witnesses:
            c = b.analyze(it.vector)
            if np.any(np.abs(c[m:]) > _TOL * max(1.0, np.abs(c).max())):
                continue                   # not in the span of x_1..x_m
            val = _ratio(b, it.index_set, it.vector)
            if val > best:
                best, tag = val, it.label or it.provenance

    def one_seed(s):
        rng = np.random.default_rng(s)
        local = 0.0
        for _ in range(max(1, trials // 8)):
            c = np.zeros(b.dim)
            c[:m] = rng.standard_normal(m)
            f = b.synthesize(c)
            for k in (m // 2, m, min(2 * m, b.dim)):
                if k < 1:
                    continue
                g = greedy_set(b, f, k)
                local = max(local, _ratio(b, g.A, f))
            A = tuple(rng.choice(b.dim, size=min(m, b.dim), replace=False) + 1)
            local = max(local, _ratio(b, A, f))
        return local

    rand_best = parallel_max(one_seed, split_seeds(seed, 8)) if trials > 0 else 0.0
    if rand_best > best:
        best, tag = rand_best, "random"
    return EstimateReport("ktilde", m, best, "lower", witness=tag, seed=seed)


# -- democracy ---------------------------------------------------------------


def _structured_sets(b: Basis, rng: np.random.Generator, per_size: int,
                     sizes: np.ndarray) -> list[tuple[int, ...]]:
    n = b.dim
    sets: list[tuple[int, ...]] = []
    for m in sizes:
        sets.append(tuple(range(1, m + 1)))                       # prefix
        for _ in range(per_size):
            sets.append(tuple(sorted(rng.choice(n, size=m, replace=False) + 1)))
        stride = max(1, n // m)
        sets.append(tuple(range(1, n + 1, stride))[:m])           # spread-out
    space = b.space
    if isinstance(space, DkkSpace):
        sigma = space.sigma
        union: list[int] = []
        for j in range(1, sigma.nblocks + 1):
            blk = [int(i) + 1 for i in sigma.block(j)]
            sets.append(tuple(blk))
            union += blk
            if j <= 24 or j % max(1, sigma.nblocks // 24) == 0:
                sets.append(tuple(union))                          # block prefix union
            half = len(blk) // 2
            if half:
                sets.append(tuple(blk[:half]))                     # within-block halves
                sets.append(tuple(blk[half:]))
    for sw in b.witnesses.get("scales", []):
        sets.append(tuple(sw.set_a))
        sets.append(tuple(sw.set_b))
        sets.append(tuple(sorted(set(sw.set_a) | set(sw.set_b))))
    seen = set()
    out = []
    for A in sets:
        if A and A not in seen:
            seen.add(A)
            out.append(A)
    return out


def democracy_functions(b: Basis, m_list, mode: str = "sampled",
                        trials: int = 40, seed: int = 0,
                        exhaustive_limit: int = 1_000_000) -> dict:
    """Observed democracy and super-democracy functions on a size grid.

    Returns {m: {"phi_u": EstimateReport, "phi_l": ..., "phi_u_s": ...,
    "phi_l_s": ...}}.  In sampled mode the sup-type values are lower bounds
    and the inf-type values are upper bounds; exhaustive mode enumerates all
    subsets (feasible only for small dimensions) and labels values exact.
    """
    m_list = sorted(int(m) for m in m_list)
    n = b.dim
    rng = np.random.default_rng(seed)
    if mode == "exhaustive":
        total = sum(math.comb(n, k) for k in range(1, n + 1))
        if total > exhaustive_limit:
            raise ValueError("exhaustive democracy scan too large")
        sets = [A for k in range(1, n + 1)
                for A in combinations(range(1, n + 1), k)]
        kinds = ("exact", "exact")
    else:
        sizes = np.unique(np.clip(np.asarray(
            m_list + [max(1, n // 3), max(1, n // 2), n]), 1, n))
        sets = _structured_sets(b, rng, per_size=max(2, trials // len(sizes)),
                                sizes=sizes)
        kinds = ("lower", "upper")

    aligned: dict[tuple, np.ndarray] = {}
    for sw in b.witnesses.get("scales", []):
        union = tuple(sorted(set(sw.set_a) | set(sw.set_b)))
        eps = np.array([1.0 if i in set(sw.set_a) else -1.0 for i in union])
        aligned[union] = eps

    recs = []
    for A in sets:
        size = len(A)
        plain = b.space.norm(b.indicator(A))
        signed = [plain]
        alt = np.where(np.arange(size) % 2 == 0, 1.0, -1.0)
        signed.append(b.space.norm(b.indicator(A, alt)))
        if A in aligned:
            signed.append(b.space.norm(b.indicator(A, aligned[A])))
        if mode != "exhaustive":
            for _ in range(2):
                eps = rng.choice([-1.0, 1.0], size=size)
                signed.append(b.space.norm(b.indicator(A, eps)))
        else:
            for bits in range(1, 2 ** (size - 1)):
                eps = np.array([1.0 if (bits >> i) & 1 == 0 else -1.0
                                for i in range(size)])
                signed.append(b.space.norm(b.indicator(A, eps)))
        recs.append((size, plain, min(signed), max(signed)))

    recs.sort()
    sizes_arr = np.array([r[0] for r in recs])
    plain_arr = np.array([r[1] for r in recs])
    smin_arr = np.array([r[2] for r in recs])
    smax_arr = np.array([r[3] for r in recs])

    out = {}
    for m in m_list:
        le = sizes_arr <= m
        ge = sizes_arr >= m
        if not le.any() or not ge.any():
            continue
        out[m] = {
            "phi_u": EstimateReport("phi_u", m, float(plain_arr[le].max()), kinds[0], seed=seed),
            "phi_u_s": EstimateReport("phi_u_s", m, float(smax_arr[le].max()), kinds[0], seed=seed),
            "phi_l": EstimateReport("phi_l", m, float(plain_arr[ge].min()), kinds[1], seed=seed),
            "phi_l_s": EstimateReport("phi_l_s", m, float(smin_arr[ge].min()), kinds[1], seed=seed),
        }
    return out


# -- truncation / quasi-greedy constants --------------------------------------


def tqg_constant_lower(b: Basis, trials: int = 200, seed: int = 0,
                       witnesses: WitnessFamily | None = None) -> EstimateReport:
    """max over samples of min_{n in A}|x*_n(f)| * |1_{eps(f),A}| / |f|
    over greedy sets A of f."""
    rng = np.random.default_rng(seed)
    vectors = [b.vector(1)]
    if witnesses is not None:
        vectors += [it.vector for it in witnesses]
    vectors += [rng.standard_normal(b.dim) for _ in range(trials)]
    flat = np.ones(b.dim)
    vectors.append(b.synthesize(flat))
    best, tag = 0.0, ""
    for f in vectors:
        nf = b.space.norm(f)
        if nf <= 0:
            continue
        c = b.analyze(f)
        mags = np.abs(c)
        order = np.argsort(-mags, kind="stable")
        ms = {1, 2, b.dim // 2, b.dim}
        ms |= set(int(2 ** k) for k in range(0, int(math.log2(max(2, b.dim))) + 1))
        for m in sorted(x for x in ms if 1 <= x <= b.dim):
            t = mags[order[m - 1]]
            if t <= 0:
                continue
            A = tuple(int(i) + 1 for i in order[:m])
            eps = np.sign(c[order[:m]])
            eps[eps == 0] = 1.0
            val = t * b.space.norm(b.indicator(A, eps)) / nf
            if val > best:
                best, tag = val, f"m={m}"
    return EstimateReport("tqg", b.dim, best, "lower", witness=tag, seed=seed)


def quasi_greedy_lower(b: Basis, witnesses: WitnessFamily) -> EstimateReport:
    """max |S_A f| / |f| over witness pairs whose sets are greedy for them.

    Sets that are not greedy sets of their vector (up to tolerance) are
    skipped, so the result is a valid quasi-greedy lower bound.
    """
    witnesses.validate(b.dim)
    best, tag = 1.0, "identity"
    for it in witnesses:
        c = np.abs(b.analyze(it.vector))
        if not it.index_set:
            continue
        inside = min(c[i - 1] for i in it.index_set)
        mask = np.ones(b.dim, dtype=bool)
        mask[np.asarray(it.index_set) - 1] = False
        outside = c[mask].max() if mask.any() else 0.0
        if inside + 1e-9 * max(1.0, outside) < outside:
            continue
        val = _ratio(b, it.index_set, it.vector)
        if val > best:
            best, tag = val, it.label or it.provenance
    return EstimateReport("qg", len(witnesses), best, "lower", witness=tag)


def lebesgue_lower(b: Basis, f: np.ndarray, m: int,
                   candidate_supports) -> float:
    """|f - G_m f| / min_B |f - S_B f| over candidate supports of size <= m.

    The denominator over-estimates no best m-term error, so the quotient is
    a valid Lebesgue-parameter lower bound.  Exact recovery returns 1; a
    zero denominator with nonzero numerator returns inf.
    """
    gm = tga(b, f, m)
    num = b.space.norm(f - gm)
    den = math.inf
    used = 0
    for A in candidate_supports:
        if len(A) > m:
            continue
        used += 1
        den = min(den, b.space.norm(f - coordinate_projection(b, A, f)))
    if used == 0:
        raise ValueError("no candidate supports of size <= m")
    if den < _TOL:
        return 1.0 if num < _TOL else math.inf
    return float(num / den)


# -- near-unconditionality -----------------------------------------------------


def _q_normalize(b: Basis, f: np.ndarray):
    c = b.analyze(f)
    top = np.abs(c).max()
    if top <= 0:
        return None
    return f / top, c / top


def phi_lower(b: Basis, a: float, witnesses: WitnessFamily | None = None,
              trials: int = 100, seed: int = 0) -> EstimateReport:
    """max |S_A f| / |f| over coefficient-bounded f and A inside the
    level set {n : |x*_n(f)| >= a}."""
    if not 0 < a <= 1:
        raise ValueError("threshold a must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    cands = [(b.vector(n), (n,), "singleton")
             for n in (1, min(2, b.dim), b.dim)]
    if witnesses is not None:
        witnesses.validate(b.dim)
        cands += [(it.vector, it.index_set, it.label or it.provenance)
                  for it in witnesses]
    for _ in range(trials):
        cands.append((rng.standard_normal(b.dim), (), "random"))
    best, tag = 0.0, ""
    for f, pref, label in cands:
        qn = _q_normalize(b, f)
        if qn is None:
            continue
        g, c = qn
        level = np.flatnonzero(np.abs(c) >= a * (1 - 1e-12)) + 1
        if len(level) == 0:
            continue
        level_set = set(int(i) for i in level)
        subsets = [tuple(sorted(level_set))]
        if pref:
            inter = tuple(sorted(level_set & set(pref)))
            if inter:
                subsets.append(inter)
        pos = tuple(sorted(i for i in level_set if c[i - 1] > 0))
        neg = tuple(sorted(i for i in level_set if c[i - 1] < 0))
        subsets += [s for s in (pos, neg) if s]
        order = sorted(level_set, key=lambda i: -abs(c[i - 1]))
        for k in (len(order) // 4, len(order) // 2):
            if k:
                subsets.append(tuple(sorted(order[:k])))
        for A in subsets:
            val = _ratio(b, A, g)
            if val > best:
                best, tag = val, label
    return EstimateReport("phi", a, best, "lower", witness=tag, seed=seed)


def dyadic_layers(b: Basis, f: np.ndarray, a: float) -> list[tuple[int, ...]]:
    """Split the level set {|x*_n(f)| >= a} of a coefficient-bounded f into
    dyadic magnitude layers [1, inf), [1/2, 1), ..., tail below 2^{1-n}.

    Layer count is n+1 with n = -floor(log2 a), hence at most 2 - log2(a).
    """
    if not 0 < a <= 1:
        raise ValueError("threshold a must lie in (0, 1]")
    c = b.analyze(f)
    mags = np.abs(c)
    if mags.max() > 1 + 1e-9:
        raise ValueError("vector has coefficients above 1; normalize first")
    A = set(int(i) + 1 for i in np.flatnonzero(mags >= a * (1 - 1e-12)))
    n = -math.floor(math.log2(a))
    layers = []
    top = set(i for i in A if mags[i - 1] >= 1.0)
    layers.append(tuple(sorted(top)))
    for k in range(1, n):
        lo, hi = 2.0 ** (-k), 2.0 ** (1 - k)
        layers.append(tuple(sorted(
            i for i in A if lo <= mags[i - 1] < hi)))
    if n >= 1:
        layers.append(tuple(sorted(
            i for i in A if mags[i - 1] < 2.0 ** (1 - n))))
    return layers


def dual_norm_lower(b: Basis, phi: np.ndarray, trials: int = 100,
                    seed: int = 0) -> float:
    """Sampled lower bound of sup |<phi, f>| / |f| in the basis's space."""
    phi = np.asarray(phi, dtype=float)
    rng = np.random.default_rng(seed)
    cands = [phi, np.sign(phi)]
    top = np.argsort(-np.abs(phi))[:4]
    for i in top:
        e = np.zeros(b.dim)
        e[i] = 1.0
        cands.append(e)
    cands += [rng.standard_normal(b.dim) for _ in range(trials)]
    best = 0.0
    for f in cands:
        nf = b.space.norm(f)
        if nf <= 0:
            continue
        best = max(best, abs(float(phi @ f)) / nf)
    return best


def vector_norm_sup(b: Basis, sample_limit: int = 512) -> float:
    """sup_n |x_n|, over all n when feasible, else a deterministic subsample."""
    idx = range(1, b.dim + 1) if b.dim <= sample_limit else \
        sorted(set(list(range(1, sample_limit // 2)) +
                   list(np.linspace(1, b.dim, sample_limit // 2, dtype=int))))
    return max(b.space.norm(b.vector(n)) for n in idx)


def dual_norm_sup_lower(b: Basis, trials: int = 20, seed: int = 0,
                        sample_limit: int = 64) -> float:
    """sup_n over a subsample of sampled lower bounds for |x*_n|."""
    idx = range(1, b.dim + 1) if b.dim <= sample_limit else \
        sorted(set(np.linspace(1, b.dim, sample_limit, dtype=int)))
    return max(dual_norm_lower(b, b.dual_vector(n), trials=trials, seed=seed)
               for n in idx)


def kmphi_transfer_check(b: Basis, p: float, alpha1: float, alpha2: float,
                         km_curve: list[tuple[float, float]], a_grid,
                         witnesses: WitnessFamily | None = None,
                         trials: int = 50, seed: int = 0,
                         tol: float = 1e-9) -> list[dict]:
    """Compare phi_lower(a) against F(a^-p) / (4^{1/p} alpha1 alpha2).

    F is the non-decreasing step interpolant of the supplied projection-norm
    lower-bound curve.  Since both sides are lower bounds of the same truth,
    a left side falling below the right one beyond tolerance indicates an
    estimator defect (alpha2 being itself a sampled lower bound, the check
    is a consistency check, not a proof).
    """
    pts = sorted(km_curve)
    ms = np.array([m for m, _ in pts], dtype=float)
    vs = np.maximum.accumulate(np.array([v for _, v in pts], dtype=float))

    def F(x: float) -> float:
        i = np.searchsorted(ms, x, side="right") - 1
        return float(vs[i]) if i >= 0 else 1.0

    denom = 4.0 ** (1.0 / p) * alpha1 * alpha2
    rows = []
    for a in a_grid:
        lhs = phi_lower(b, a, witnesses, trials=trials, seed=seed).value
        rhs = F(a ** (-p)) / denom
        rows.append({"a": float(a), "lhs": lhs, "rhs": rhs,
                     "flag": bool(lhs < rhs - tol)})
    return rows
