"""Explicit basis constructions with prescribed greedy behavior.

The building blocks:

* ``rotation_pair``     -- a planar unit-vector pair at angle 2*arcsin(1/R),
                           whose dual functionals grow like R while the pair
                           difference shrinks like 1/R;
* ``eta_transform``     -- replaces consecutive basis pairs by rotated,
                           rescaled combinations, trading norm growth of the
                           vectors against norm growth of the duals;
* ``dkk_space``         -- the composite norm  |Q_sigma f|_S + |T f|_X  that
                           blends a symmetric sequence norm with an inner
                           basis over an ordered partition;
* ``dkkw_assembly``     -- the eta-transform tuned so that block-indicator
                           pairs have sum-norms ~ 2 s_n but difference-norms
                           ~ 1, the engine behind all growth examples;

and three ready-made builds (``build_thmA``, ``build_mainA``,
``build_dem_nonucc``) which attach their witness vectors at construction
time so the estimators do not have to rediscover them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .basis import Basis, MappedSpace, NormedSpace, SeqSpace, direct_sum
from .partition import BlockSystem, OrderedPartition, average_project, complement_project
from .seqspace import (DimensionMismatchError, SeqNorm,
                       fundamental_function, has_lrp)

SQRT2 = math.sqrt(2.0)
DEFAULT_DIM_CAP = 1 << 17


class ResourceLimitError(RuntimeError):
    """Construction would exceed the configured coordinate cap."""


def _check_cap(n: int, cap: int):
    if n > cap:
        raise ResourceLimitError(
            f"construction needs {n} coordinates, cap is {cap}")


def _with_dim(s: SeqNorm, n: int) -> SeqNorm:
    """Same norm family at another dimension."""
    if s.kind == "lp":
        return SeqNorm.lp(s.p, n)
    if len(s.weight) < n:
        raise DimensionMismatchError(
            f"weight has {len(s.weight)} entries, {n} needed")
    if s.kind == "lorentz":
        return SeqNorm.lorentz(s.q, s.weight, n)
    return SeqNorm.weak_lorentz(s.weight, n)


# -- rotation pairs ----------------------------------------------------------


@dataclass(frozen=True)
class RotationPair:
    R: float
    alpha: float
    h1: np.ndarray
    h2: np.ndarray
    h1_dual: np.ndarray
    h2_dual: np.ndarray

    @property
    def dual_norm(self) -> float:
        return self.R ** 2 / (2.0 * math.sqrt(self.R ** 2 - 1.0))


def rotation_pair(R: float) -> RotationPair:
    """Unit pair h1 = (1,0), h2 = (cos 2a, sin 2a) with sin a = 1/R.

    Requires R >= sqrt(2) so that 2a <= pi/2; that keeps cos 2a >= 0, which
    is what makes |x h1 + y h2| >= sqrt(x^2+y^2) for non-negative x, y.
    """
    if R < SQRT2 - 1e-12:
        raise ValueError(f"rotation parameter R={R} must be >= sqrt(2)")
    alpha = math.asin(1.0 / R)
    c2, s2 = math.cos(2 * alpha), math.sin(2 * alpha)
    scale = R ** 2 / (2.0 * math.sqrt(R ** 2 - 1.0))
    return RotationPair(
        R=float(R), alpha=alpha,
        h1=np.array([1.0, 0.0]),
        h2=np.array([c2, s2]),
        h1_dual=scale * np.array([s2, -c2]),
        h2_dual=scale * np.array([0.0, 1.0]),
    )


@dataclass(frozen=True)
class EtaSequence:
    """Per-pair scales (lambda_n, mu_n) with lambda_n * mu_n >= sqrt(2)."""

    lam: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        if lam.shape != mu.shape or lam.ndim != 1:
            raise ValueError("lambda and mu must be 1-d of equal length")
        if np.any(lam <= 0) or np.any(mu <= 0):
            raise ValueError("eta scales must be positive")
        if np.any(lam * mu < SQRT2 - 1e-12):
            raise ValueError("every lambda_n * mu_n must be >= sqrt(2)")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def npairs(self) -> int:
        return len(self.lam)

    @property
    def R(self) -> np.ndarray:
        return self.lam * self.mu


def eta_transform(b: Basis, eta: EtaSequence) -> Basis:
    """Pairwise rotated basis y_{2n-1} = lam_n L_n(h1), y_{2n} = lam_n L_n(h2)
    where L_n maps the plane onto span(x_{2n-1}, x_{2n}).

    Dual vectors come out as (1/lam_n) L_n(h*) automatically through the
    matrix inverse.
    """
    if b.dim % 2 != 0:
        raise DimensionMismatchError("eta transform needs an even-dimensional basis")
    if eta.npairs != b.dim // 2:
        raise DimensionMismatchError("one (lambda, mu) pair per basis pair required")
    T = np.zeros((b.dim, b.dim))
    for n in range(eta.npairs):
        rp = rotation_pair(float(eta.R[n]))
        block = eta.lam[n] * np.column_stack([rp.h1, rp.h2])
        T[2 * n:2 * n + 2, 2 * n:2 * n + 2] = block
    synth = T if b.synth is None else b.synth @ T
    out = Basis(b.space, synth)
    out.witnesses["eta"] = eta
    return out


# -- the composite norm ------------------------------------------------------


class DkkSpace(NormedSpace):
    """|f| = |Q_sigma f|_S + |sum_n v*_n(f) x_n|_X.

    S is a symmetric sequence norm on the coordinates, sigma an ordered
    partition with one inner basis vector x_n per block, and v*_n the
    normalized block functionals of S.  The two summands vanish together
    only at f = 0, and both S and X convex gives a genuine norm.
    """

    def __init__(self, inner: Basis, host: SeqNorm, sigma: OrderedPartition):
        if host.dim != sigma.dim:
            raise DimensionMismatchError("host norm dimension != partition size")
        if inner.dim != sigma.nblocks:
            raise DimensionMismatchError(
                f"inner basis dim {inner.dim} != block count {sigma.nblocks}")
        self.host = host
        self.sigma = sigma
        self.inner = inner
        self.blocks = BlockSystem.for_norm(host, sigma)
        self.dim = host.dim

    def coefficients(self, f: np.ndarray) -> np.ndarray:
        """Block functional values v*_n(f)."""
        return self.blocks.coefficients(f)

    def decompose(self, f: np.ndarray):
        """(Q_sigma f, image of the averaged part in inner coordinates)."""
        f = self.check_vec(f)
        q = complement_project(self.sigma, f)
        x = self.inner.synthesize(self.coefficients(f))
        return q, x

    def norm(self, f) -> float:
        q, x = self.decompose(f)
        return self.host.eval(q) + self.inner.space.norm(x)

    def norm_rows(self, F) -> np.ndarray:
        F = np.atleast_2d(np.asarray(F, dtype=float))
        Q = F - average_project(self.sigma, F)
        C = self.blocks.coefficients(F)
        if self.inner.synth is not None:
            C = C @ self.inner.synth.T
        return self.host.eval_rows(Q) + self.inner.space.norm_rows(C)

    def to_jsonable(self):
        return {"space": "dkk", "host": self.host.to_jsonable(),
                "sizes": list(self.sigma.sizes),
                "inner": self.inner.space.to_jsonable(),
                "inner_synth": None if self.inner.synth is None else "external"}


def dkk_space(inner: Basis, host: SeqNorm, sigma: OrderedPartition) -> Basis:
    """Unit vector system of the composite space as a Basis."""
    return Basis(DkkSpace(inner, host, sigma), None)


# -- paired assembly ---------------------------------------------------------


@dataclass
class ScaleWitness:
    """A per-scale witness: the two aligned halves of a block pair."""

    n: int                       # pair index, 1-based
    m: int                       # coordinate position the scale certifies
    vector: np.ndarray           # ambient coordinates
    set_a: tuple[int, ...]       # 1-based coordinates of the leading half
    set_b: tuple[int, ...]       # 1-based coordinates of the trailing half
    label: str = "pair"


@dataclass
class DkkwAssembly:
    """dkk_space over an eta-transformed basis with paired block sizes.

    ``eta`` is (s_n / Lambda_{s_n}, Lambda_{s_n}); with that choice the
    block-indicator pair norms R_n satisfy R_n(a,b) ~ (a+b) s_n for
    non-negative a, b while R_n(-1,1) stays ~ 1, and the identity
    R_n(a,b) = Lambda_{s_n} |a y_{2n-1} + b y_{2n}| holds exactly.
    """

    basis: Basis
    inner_eta: Basis
    sigma: OrderedPartition
    pair_sizes: np.ndarray
    pair_scales: np.ndarray       # Lambda_{s_n}
    eta: EtaSequence

    @property
    def npairs(self) -> int:
        return len(self.pair_sizes)

    def indicator_pair(self, n: int, a: float, b: float) -> np.ndarray:
        f = np.zeros(self.sigma.dim)
        f[self.sigma.block(2 * n - 1)] = a
        f[self.sigma.block(2 * n)] = b
        return f

    def R_direct(self, n: int, a: float, b: float) -> float:
        """Ambient norm of a*1_{sigma_{2n-1}} + b*1_{sigma_{2n}}."""
        return self.basis.space.norm(self.indicator_pair(n, a, b))

    def R_via_inner(self, n: int, a: float, b: float) -> float:
        """Lambda_{s_n} * |a y_{2n-1} + b y_{2n}| in the inner space."""
        y = a * self.inner_eta.vector(2 * n - 1) + b * self.inner_eta.vector(2 * n)
        return float(self.pair_scales[n - 1]) * self.inner_eta.space.norm(y)


def dkkw_assembly(inner: Basis, host: SeqNorm, sigma: OrderedPartition) -> DkkwAssembly:
    """Assemble the composite space over paired blocks.

    ``sigma`` must have an even number of blocks with |sigma_{2n-1}| =
    |sigma_{2n}| >= 2.  The inner basis is eta-transformed with
    (s_n/Lambda_{s_n}, Lambda_{s_n}) before entering the composite norm.
    """
    sizes = np.asarray(sigma.sizes)
    if len(sizes) % 2 != 0:
        raise DimensionMismatchError("paired assembly needs an even number of blocks")
    s_odd, s_even = sizes[0::2], sizes[1::2]
    if np.any(s_odd != s_even):
        raise ValueError("blocks must come in equal-size pairs")
    if np.any(s_odd < 2):
        raise ValueError("paired block sizes must be >= 2")
    lam_fn = fundamental_function(host)
    pair_scales = lam_fn.lam[s_odd - 1]
    eta = EtaSequence(lam=s_odd / pair_scales, mu=pair_scales)
    inner_eta = eta_transform(inner, eta)
    y = dkk_space(inner_eta, host, sigma)
    asm = DkkwAssembly(basis=y, inner_eta=inner_eta, sigma=sigma,
                       pair_sizes=s_odd.astype(float), pair_scales=pair_scales,
                       eta=eta)
    y.witnesses["assembly"] = asm
    return asm


def _paired_dyadic_partition(levels: int) -> OrderedPartition:
    sizes = []
    for n in range(1, levels + 1):
        sizes += [2 ** n, 2 ** n]
    return OrderedPartition(tuple(sizes))


def _interleaved_block_host_basis(host: SeqNorm, sigma: OrderedPartition,
                                  pairs: int, right: Basis | None) -> Basis:
    """Concrete stand-in for an abstract two-sided sum basis.

    Interleaves the first ``pairs`` normalized block vectors of the host
    (spanning part of the averaged range) with a unit basis of the host
    family at dimension ``pairs``; both halves are normalized, and the
    interleaved system is bounded together with its duals.
    """
    bs = BlockSystem.for_norm(host, sigma)
    cols = np.column_stack([bs.vector(j) for j in range(1, pairs + 1)])
    left = Basis(MappedSpace(SeqSpace(host), cols, label="block-span"), None)
    if right is None:
        right = Basis(SeqSpace(_with_dim(host, pairs)), None)
    elif right.dim != pairs:
        raise DimensionMismatchError(
            f"explicit inner summand must have dim {pairs}")
    return direct_sum(left, right)


def build_thmA(base: SeqNorm | Basis, levels: int,
               dim_cap: int = DEFAULT_DIM_CAP) -> Basis:
    """Space whose coordinate basis carries linearly growing projection
    witnesses: paired dyadic blocks (2, 2, 4, 4, ..., 2^levels, 2^levels)
    assembled over the host norm.

    Witness ratios R_n(0,1)/R_n(-1,1) grow like 2^n at positions M_n ~ 2^n,
    so restricted projection-norm lower bounds grow linearly.
    """
    if levels < 2:
        raise ValueError("need levels >= 2 for a non-degenerate build")
    if isinstance(base, Basis):
        host = SeqNorm.lp(2.0, 1)  # placeholder, replaced below
        right: Basis | None = base
        host_proto = getattr(base.space, "seqnorm", None)
        if host_proto is None:
            raise ValueError("explicit basis input must live on a SeqSpace")
        host_kind = host_proto
    else:
        right = None
        host_kind = base
    sigma = _paired_dyadic_partition(levels)
    _check_cap(sigma.dim, dim_cap)
    host = _with_dim(host_kind, sigma.dim)
    inner = _interleaved_block_host_basis(host, sigma, levels, right)
    asm = dkkw_assembly(inner, host, sigma)
    y = asm.basis
    scales = []
    for n in range(1, levels + 1):
        u = asm.indicator_pair(n, -1.0, 1.0)
        scales.append(ScaleWitness(
            n=n, m=sigma.M(2 * n), vector=u,
            set_a=tuple(int(i) + 1 for i in sigma.block(2 * n - 1)),
            set_b=tuple(int(i) + 1 for i in sigma.block(2 * n)),
        ))
    y.witnesses["scales"] = scales
    y.witnesses["construction"] = "thmA"
    return y


def build_mainA(base: SeqNorm, levels: int,
                dim_cap: int = DEFAULT_DIM_CAP) -> Basis:
    """Two-stage build: a paired dyadic assembly is wrapped, one coordinate
    per unit vector, into a second composite space over minimal (size-2)
    outer blocks.

    The attached witnesses f_n, g_n are block-indicator combinations scaled
    by 1/Lambda_{|outer block|}; their norms collapse to the inner pair
    norms, so |g_n| ~ 2^n while |g_n - f_n| ~ 1.  The outer stage keeps the
    total dimension at twice the inner one (the fully dyadic outer sizes of
    the limiting object square the dimension per scale and are far out of
    reach at finite truncation; see the ledger analysis for what that costs
    the fundamental-function and near-unconditionality profiles).
    """
    if levels < 2:
        raise ValueError("need levels >= 2 for a non-degenerate build")
    lam_host = fundamental_function(_with_dim(base, 2 ** levels))
    lrp = has_lrp(lam_host)
    if not lrp.holds:
        warnings.warn("host fundamental function lacks the doubling property; "
                      "squeeze-type checks will degrade", RuntimeWarning)
    inner_basis = build_thmA(base, levels, dim_cap=dim_cap)
    asm: DkkwAssembly = inner_basis.witnesses["assembly"]
    n_inner = inner_basis.dim
    _check_cap(2 * n_inner, dim_cap)
    sigma_out = OrderedPartition((2,) * n_inner)
    host_out = _with_dim(base, sigma_out.dim)
    y1 = dkk_space(inner_basis, host_out, sigma_out)
    lam2 = fundamental_function(host_out)[2]

    sigma_in = asm.sigma
    scales = []
    halves = []
    for n in range(1, levels + 1):
        fa = np.zeros(sigma_out.dim)
        ga = np.zeros(sigma_out.dim)
        for k in sigma_in.block(2 * n - 1):          # inner coords, 0-based
            fa[2 * k:2 * k + 2] = 1.0 / lam2
        for k in sigma_in.block(2 * n):
            ga[2 * k:2 * k + 2] = 1.0 / lam2
        u = -fa + ga
        set_a = tuple(int(i) + 1 for i in np.flatnonzero(fa))
        set_b = tuple(int(i) + 1 for i in np.flatnonzero(ga))
        scales.append(ScaleWitness(
            n=n, m=2 * sigma_in.M(2 * n), vector=u,
            set_a=set_a, set_b=set_b))
        halves.append((fa, ga))
    y1.witnesses["scales"] = scales
    y1.witnesses["halves"] = halves
    y1.witnesses["inner"] = inner_basis
    y1.witnesses["assembly"] = asm
    y1.witnesses["a_grid"] = {n: 1.0 / lam_host[2 ** n]
                              for n in range(1, levels + 1)}
    y1.witnesses["construction"] = "mainA"
    return y1


def build_dem_nonucc(base: SeqNorm, max_pair: int = 60,
                     dim_cap: int = DEFAULT_DIM_CAP) -> Basis:
    """Democratic-but-sign-sensitive build: paired blocks of sizes
    (2, 2, 3, 3, ..., n, n) whose inner basis is the normalized block
    system itself, eta-transformed with (1, Lambda_n).

    Within-pair alternating-sign indicators then have constant norm while
    plus-sign indicators of size m keep norm ~ Lambda_m.  Pairs start at
    size 2: a size-1 pair would need a rotation parameter below sqrt(2).
    """
    if max_pair < 3:
        raise ValueError("need pairs up to at least 3")
    sizes = []
    for n in range(2, max_pair + 1):
        sizes += [n, n]
    sigma = OrderedPartition(tuple(sizes))
    _check_cap(sigma.dim, dim_cap)
    host = _with_dim(base, sigma.dim)
    bs = BlockSystem.for_norm(host, sigma)
    cols = np.column_stack([bs.vector(j) for j in range(1, sigma.nblocks + 1)])
    v_basis = Basis(MappedSpace(SeqSpace(host), cols, label="block-system"), None)
    pair_scales = fundamental_function(host).lam[np.asarray(sizes[0::2]) - 1]
    eta = EtaSequence(lam=np.ones_like(pair_scales), mu=pair_scales)
    inner_eta = eta_transform(v_basis, eta)
    y = dkk_space(inner_eta, host, sigma)
    scales = []
    for j, n in enumerate(range(2, max_pair + 1), start=1):
        u = np.zeros(sigma.dim)
        u[sigma.block(2 * j - 1)] = 1.0
        u[sigma.block(2 * j)] = -1.0
        scales.append(ScaleWitness(
            n=n, m=sigma.M(2 * j), vector=u,
            set_a=tuple(int(i) + 1 for i in sigma.block(2 * j - 1)),
            set_b=tuple(int(i) + 1 for i in sigma.block(2 * j)),
            label="alternating-pair"))
    y.witnesses["scales"] = scales
    y.witnesses["construction"] = "demNonUCC"
    return y


def eq_positive_check(u: Basis, mu: np.ndarray, trials: int = 1000,
                      seed: int = 0) -> float:
    """Max two-sided norm ratio between the doubled basis and its
    (1, mu_n)-transform over non-negative coefficient samples.

    For an unconditional semi-normalized input the two systems agree on
    non-negative scalars up to constants; the observed ratio is returned.
    """
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 1):
        raise ValueError("mu entries must exceed 1")
    u2 = direct_sum(u, u)
    eta = EtaSequence(lam=np.ones_like(mu), mu=mu)
    if eta.npairs != u2.dim // 2:
        raise DimensionMismatchError("one mu per doubled pair required")
    u2_eta = eta_transform(u2, eta)
    rng = np.random.default_rng(seed)
    worst = 1.0
    for _ in range(trials):
        a = np.abs(rng.standard_normal(u2.dim))
        if rng.random() < 0.25:
            k = rng.integers(0, eta.npairs)
            mask = np.zeros(u2.dim)
            mask[2 * k:2 * k + 2] = 1.0
            a = a * mask                     # single active pair
        fa = u2.synthesize(a)
        ga = u2_eta.synthesize(a)
        na, nb = u2.space.norm(fa), u2_eta.space.norm(ga)
        if na == 0 or nb == 0:
            continue
        worst = max(worst, na / nb, nb / na)
    return float(worst)
