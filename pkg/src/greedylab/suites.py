"""Named experiment suites with pass/fail verdicts.

Each suite builds its objects, measures the relevant quantities into
EstimateReport rows, and judges a fixed list of named checks.  The checks
double as the acceptance gate: the test suite runs these functions and
asserts the verdicts, and the command line exposes them via ``reproduce``.

All tolerances are pinned here.  Two-sided equivalences are judged by the
max/min spread of the tested ratio family (default bound 8) plus a no-drift
condition where a trend would hide in the spread.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .basis import Basis, SeqSpace, greedy_set
from .constructions import (DEFAULT_DIM_CAP, build_dem_nonucc, build_mainA,
                            build_thmA, dkk_space, rotation_pair)
from .estimators import (EstimateReport, democracy_functions, dyadic_layers,
                         family_from_basis, km_exact_hilbert, km_lower,
                         kmphi_transfer_check, ktilde_lower, lebesgue_lower,
                         phi_lower)
from .partition import (BlockSystem, OrderedPartition, average_project,
                        complement_project, projection_norm_bound_check_multi)
from .seqspace import (SeqNorm, Weight, dini_ratio, embedding_constant,
                       fundamental_function, has_lrp, has_urp,
                       lorentz_equiv_check)
from .util import fit_scaled, loglog_fit, spread

SUITES = ("rotation", "dkk-core", "thmA", "mainA", "demNonUCC", "lorentz",
          "regularity", "phi", "calibration")

SPREAD_BOUND = 8.0


@dataclass
class ExperimentConfig:
    suite: str
    levels: int = 8
    host: str = "l2"
    seed: int = 42
    trials: int = 1000
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        if self.levels < 2:
            raise ValueError("levels must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def host_norm(self, dim: int) -> SeqNorm:
        return parse_host(self.host, dim)


def parse_host(desc: str, dim: int) -> SeqNorm:
    """Host-norm descriptor: l2, l1, lp:<p>, or lorentz:<q>:<weight csv>."""
    if desc == "l2":
        return SeqNorm.lp(2.0, dim)
    if desc == "l1":
        return SeqNorm.lp(1.0, dim)
    parts = desc.split(":")
    if parts[0] == "lp" and len(parts) == 2:
        return SeqNorm.lp(float(parts[1]), dim)
    if parts[0] == "lorentz" and len(parts) == 3:
        from .io import load_vector
        w = Weight(load_vector(parts[2]))
        return SeqNorm.lorentz(float(parts[1]), w, dim)
    raise ValueError(f"cannot parse host descriptor {desc!r}")


@dataclass
class Verdict:
    criterion: str
    passed: bool
    details: dict


@dataclass
class SuiteResult:
    suite: str
    rows: list[EstimateReport]
    verdicts: list[Verdict]
    provenance: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def _finish(cfg: ExperimentConfig, rows, verdicts, t0) -> SuiteResult:
    from . import __version__
    prov = {"config": {"suite": cfg.suite, "levels": cfg.levels,
                       "host": cfg.host, "seed": cfg.seed,
                       "trials": cfg.trials, "dim_cap": cfg.dim_cap},
            "version": __version__,
            "timing_s": round(time.time() - t0, 3)}
    return SuiteResult(cfg.suite, rows, verdicts, prov)


# -- C1 -------------------------------------------------------------------------


def run_rotation(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, residuals = [], []
    for R in (math.sqrt(2.0), 1.5, 2.0, 5.0, 50.0):
        rp = rotation_pair(R)
        checks = {
            "unit_h1": abs(np.linalg.norm(rp.h1) - 1.0),
            "unit_h2": abs(np.linalg.norm(rp.h2) - 1.0),
            "biorth_11": abs(rp.h1_dual @ rp.h1 - 1.0),
            "biorth_12": abs(rp.h1_dual @ rp.h2),
            "biorth_21": abs(rp.h2_dual @ rp.h1),
            "biorth_22": abs(rp.h2_dual @ rp.h2 - 1.0),
            "gap": abs(np.linalg.norm(rp.h1 - rp.h2) - 2.0 / R),
            "dual_norm_1": abs(np.linalg.norm(rp.h1_dual) - rp.dual_norm),
            "dual_norm_2": abs(np.linalg.norm(rp.h2_dual) - rp.dual_norm),
        }
        xs = np.linspace(0.0, 3.0, 50)
        X, Y = np.meshgrid(xs, xs)
        V = X[..., None] * rp.h1 + Y[..., None] * rp.h2
        norms = np.linalg.norm(V, axis=-1)
        checks["sandwich_lower"] = float(
            np.max(np.sqrt(X ** 2 + Y ** 2) - norms))
        checks["sandwich_upper"] = float(np.max(norms - (X + Y)))
        worst = max(checks.values())
        residuals.append(worst)
        rows.append(EstimateReport("rotation_residual", R, worst, "exact",
                                   witness="identity-grid"))
    elapsed = time.time() - t0
    verdicts = [Verdict("C1-rotation-exactness",
                        max(residuals) <= 1e-10 and elapsed < 1.0,
                        {"max_residual": max(residuals),
                         "elapsed_s": round(elapsed, 3)})]
    return _finish(cfg, rows, verdicts, t0)


# -- C2 -------------------------------------------------------------------------


def run_dkk_core(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []
    n = 1 << 14
    sizes = []
    cycle = (2, 4, 8, 16, 2, 3, 32, 5)
    while sum(sizes) + max(cycle) < n:
        sizes.append(cycle[len(sizes) % len(cycle)])
    sizes.append(n - sum(sizes))
    sigma = OrderedPartition(tuple(sizes))

    # biorthogonality of the normalized block system
    host = SeqNorm.lp(2.0, n)
    bs = BlockSystem.for_norm(host, sigma)
    worst_bio = 0.0
    probe = list(range(1, min(sigma.nblocks, 12) + 1)) + [sigma.nblocks]
    for i in probe:
        vi = bs.functional_vector(i)
        for j in probe:
            got = vi @ bs.vector(j)
            worst_bio = max(worst_bio, abs(got - (1.0 if i == j else 0.0)))
    rows.append(EstimateReport("block_biorthogonality", n, worst_bio, "exact"))
    verdicts.append(Verdict("C2-block-biorthogonality", worst_bio <= 1e-12,
                            {"worst": worst_bio}))

    # projection identities on random vectors
    rng = np.random.default_rng(cfg.seed)
    worst_idem = worst_sum = 0.0
    for _ in range(1000):
        f = rng.standard_normal(n)
        P = average_project(sigma, f)
        worst_idem = max(worst_idem, float(np.abs(average_project(sigma, P) - P).max()))
        worst_sum = max(worst_sum, float(np.abs(P + complement_project(sigma, f) - f).max()))
    rows.append(EstimateReport("P_idempotence_residual", n, worst_idem, "exact"))
    rows.append(EstimateReport("P_plus_Q_residual", n, worst_sum, "exact"))
    verdicts.append(Verdict("C2-projection-identities",
                            worst_idem <= 1e-12 and worst_sum <= 1e-12,
                            {"idempotence": worst_idem, "sum": worst_sum}))

    # averaging-projection ratios on three hosts over one 1e4-sample family;
    # complement ratios are sampled on a 1e3 subfamily (they cost an extra
    # full rearrangement each)
    w = Weight.from_primitive(np.sqrt(np.arange(1, n + 1)))
    hosts = {"l1": SeqNorm.lp(1.0, n), "l2": SeqNorm.lp(2.0, n),
             "d1w": SeqNorm.lorentz(1.0, w, n)}
    res_multi = projection_norm_bound_check_multi(
        sigma, hosts, trials=10_000, seed=cfg.seed, q_trials=1000)
    ok = True
    for name, res in res_multi.items():
        rows.append(EstimateReport("P_norm_ratio", n, res["P"], "lower", witness=name))
        rows.append(EstimateReport("Q_norm_ratio", n, res["Q"], "lower", witness=name))
        ok = ok and res["P"] <= 2.0 + 1e-10 and res["Q"] <= 3.0 + 1e-10
    verdicts.append(Verdict("C2-averaging-projection-bounds", ok, res_multi))

    # composite-norm decomposition: max <= total <= sum <= 2*max
    sigma2 = OrderedPartition(tuple(2 ** k for k in range(1, 9)))
    host2 = SeqNorm.lp(2.0, sigma2.dim)
    inner = Basis(SeqSpace(SeqNorm.lp(2.0, 8)), None)
    y = dkk_space(inner, host2, sigma2)
    worst_fac = 0.0
    ok2 = True
    for _ in range(1000):
        f = rng.standard_normal(sigma2.dim)
        q, x = y.space.decompose(f)
        sq, sx = host2.eval(q), inner.space.norm(x)
        total = y.space.norm(f)
        ok2 = ok2 and (abs(total - sq - sx) <= 1e-10 * max(1.0, total))
        if max(sq, sx) > 0:
            worst_fac = max(worst_fac, total / max(sq, sx))
    rows.append(EstimateReport("dkk_max_sum_factor", sigma2.dim, worst_fac, "exact"))
    verdicts.append(Verdict("C2-dkk-two-sided-decomposition",
                            ok2 and worst_fac <= 2.0 + 1e-10,
                            {"factor": worst_fac}))

    elapsed = time.time() - t0
    verdicts.append(Verdict("C2-runtime", elapsed < 30.0,
                            {"elapsed_s": round(elapsed, 3)}))
    return _finish(cfg, rows, verdicts, t0)


# -- C3 + C4 ---------------------------------------------------------------------


def run_thmA(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []
    levels = max(cfg.levels, 10)
    y = build_thmA(cfg.host_norm(4), levels, dim_cap=cfg.dim_cap)
    asm = y.witnesses["assembly"]

    # exact identity between the ambient evaluation and the inner form
    grid = (-2.5, -1.0, -0.3, 0.0, 0.7, 1.0, 2.0)
    worst_id = 0.0
    for n in range(1, levels + 1):
        for a in grid:
            for b_ in grid:
                lhs = asm.R_direct(n, a, b_)
                rhs = asm.R_via_inner(n, a, b_)
                worst_id = max(worst_id, abs(lhs - rhs) / max(1.0, abs(lhs)))
    rows.append(EstimateReport("pair_identity_residual", levels, worst_id, "exact"))

    sum_ratio = [asm.R_direct(n, 1.0, 1.0) / (2.0 * 2 ** n)
                 for n in range(2, min(levels, 10) + 1)]
    diff_vals = [asm.R_direct(n, -1.0, 1.0) for n in range(2, min(levels, 10) + 1)]
    for n, (sr, dv) in enumerate(zip(sum_ratio, diff_vals), start=2):
        rows.append(EstimateReport("R_sum_over_2s", n, sr, "exact"))
        rows.append(EstimateReport("R_diff", n, dv, "exact"))
    verdicts.append(Verdict("C3-pair-identity-and-spreads",
                            worst_id <= 1e-10
                            and spread(sum_ratio) <= SPREAD_BOUND
                            and spread(diff_vals) <= SPREAD_BOUND,
                            {"identity_residual": worst_id,
                             "sum_spread": spread(sum_ratio),
                             "diff_spread": spread(diff_vals)}))

    # restricted-projection growth: witness bounds at the pair positions
    fam = family_from_basis(y)
    ms, vals = [], []
    for sw in y.witnesses["scales"]:
        if sw.n < 3:
            continue
        r = ktilde_lower(y, sw.m, fam, trials=0).value
        ms.append(sw.m)
        vals.append(r)
        rows.append(EstimateReport("ktilde", sw.m, r, "lower",
                                   witness=f"pair-n{sw.n}", seed=cfg.seed))
    slope, _, r2 = loglog_fit(ms, vals)
    elapsed = time.time() - t0
    verdicts.append(Verdict("C4-linear-growth-fit",
                            abs(slope - 1.0) <= 0.15 and r2 >= 0.98
                            and elapsed < 120.0,
                            {"slope": slope, "r2": r2,
                             "elapsed_s": round(elapsed, 3)}))
    return _finish(cfg, rows, verdicts, t0)


# -- C5 -------------------------------------------------------------------------


def run_mainA(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []
    levels = cfg.levels
    y = build_mainA(cfg.host_norm(4), levels, dim_cap=cfg.dim_cap)
    scales = y.witnesses["scales"]
    halves = y.witnesses["halves"]

    gn_ratio, diff_vals, qg_ratio = [], [], []
    for sw, (fa, ga) in zip(scales, halves):
        ng = y.space.norm(ga)
        nu = y.space.norm(sw.vector)
        gn_ratio.append(ng / 2.0 ** sw.n)
        diff_vals.append(nu)
        qg_ratio.append(max(y.space.norm(fa), ng) / nu)
        rows.append(EstimateReport("g_norm_over_2n", sw.n, gn_ratio[-1], "exact"))
        rows.append(EstimateReport("minus_f_plus_g_norm", sw.n, nu, "exact"))
        rows.append(EstimateReport("greedy_projection_ratio", sw.n,
                                   qg_ratio[-1], "lower", witness="block-aligned"))
    verdicts.append(Verdict("C5a-g-norm-spread", spread(gn_ratio) <= SPREAD_BOUND,
                            {"spread": spread(gn_ratio)}))
    verdicts.append(Verdict("C5b-difference-norm-spread",
                            spread(diff_vals) <= SPREAD_BOUND,
                            {"spread": spread(diff_vals)}))
    rate = 2.0 ** float(np.polyfit(np.arange(1, levels + 1),
                                   np.log2(qg_ratio), 1)[0])
    verdicts.append(Verdict("C5c-quasi-greedy-blowup-rate",
                            abs(rate - 2.0) <= 0.2 and qg_ratio[-1] >= 2.0 ** (levels - 2),
                            {"rate_per_level": rate, "top_ratio": qg_ratio[-1]}))

    # fundamental function over structured sets against sqrt(m).
    # NOTE: the limiting construction needs outer blocks growing like 2^k to
    # keep indicator norms square-root shaped; that profile squares the
    # dimension per scale and cannot be truncated into memory, so this check
    # is expected to fail at levels高 enough to see the other three verdicts.
    lam = fundamental_function(cfg.host_norm(y.dim))
    mgrid = sorted(set(int(x) for x in np.geomspace(1, y.dim, 12)))
    dem = democracy_functions(y, mgrid, trials=24, seed=cfg.seed)
    ratios = []
    for m in mgrid:
        if m not in dem:
            continue
        r = dem[m]["phi_u"].value / lam[m]
        ratios.append(r)
        rows.append(EstimateReport("phi_u_over_lambda", m, r, "lower", seed=cfg.seed))
    verdicts.append(Verdict("C5d-fundamental-function-spread",
                            spread(ratios) <= SPREAD_BOUND,
                            {"spread": spread(ratios),
                             "note": "expected to exceed the bound at deep "
                                     "truncations; see ledger analysis"}))
    return _finish(cfg, rows, verdicts, t0)


# -- C6 -------------------------------------------------------------------------


def run_dem_nonucc(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []
    y = build_dem_nonucc(cfg.host_norm(4), 60, dim_cap=cfg.dim_cap)
    sigma = y.space.sigma
    lam = fundamental_function(cfg.host_norm(y.dim))

    alt = []
    for sw in y.witnesses["scales"]:
        v = y.space.norm(sw.vector)
        alt.append(v)
        rows.append(EstimateReport("alternating_pair_norm", sw.n, v, "exact"))
    verdicts.append(Verdict("C6-alternating-sign-spread",
                            spread(alt) <= SPREAD_BOUND, {"spread": spread(alt)}))

    pos_ratio = []
    for j, n in enumerate(range(2, 61), start=1):
        v = np.zeros(sigma.dim)
        v[sigma.block(2 * j - 1)] = 1.0
        v[sigma.block(2 * j)] = 1.0
        m = 2 * n
        r = y.space.norm(v) / lam[m]
        pos_ratio.append(r)
        rows.append(EstimateReport("positive_indicator_over_lambda", m, r, "exact"))
    rng = np.random.default_rng(cfg.seed)
    for m in (2, 8, 32, 128, 512, 2048):
        A = tuple(sorted(rng.choice(sigma.dim, size=m, replace=False) + 1))
        r = y.space.norm(y.indicator(A)) / lam[m]
        pos_ratio.append(r)
        rows.append(EstimateReport("positive_indicator_over_lambda", m, r,
                                   "lower", witness="random", seed=cfg.seed))
    verdicts.append(Verdict("C6-positive-indicator-spread",
                            spread(pos_ratio) <= SPREAD_BOUND,
                            {"spread": spread(pos_ratio)}))
    return _finish(cfg, rows, verdicts, t0)


# -- C7 -------------------------------------------------------------------------


def run_lorentz(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []
    consts = {}
    for (p, q) in ((1.0, 2.0), (2.0, 4.0), (3.0, 4.0)):
        per_dim = []
        for d in (64, 256, 1024):
            c = embedding_constant(Weight.ones(d), p, q,
                                   trials=min(cfg.trials, 300), seed=cfg.seed, dim=d)
            per_dim.append(c)
            rows.append(EstimateReport("embedding_constant", d, c, "lower",
                                       witness=f"p={p},q={q}", seed=cfg.seed))
        consts[(p, q)] = per_dim
    stable = all(max(v) / min(v) <= 1.01 and max(v) <= 1.05
                 for v in consts.values())
    verdicts.append(Verdict("C7-embedding-constant-stable", stable,
                            {f"{p}->{q}": v for (p, q), v in consts.items()}))

    n = 200
    r_equal = lorentz_equiv_check(Weight.ones(n),
                                  Weight(np.tile([2.0, 0.0], n // 2)), 1.0,
                                  trials=cfg.trials, seed=cfg.seed)
    rows.append(EstimateReport("equiv_ratio_equal_primitive", n, r_equal, "lower",
                               seed=cfg.seed))
    w_log = Weight(1.0 / np.arange(1, n + 1))
    r_gap_small = lorentz_equiv_check(Weight.ones(n), w_log, 1.0,
                                      trials=cfg.trials, seed=cfg.seed, dim=64)
    r_gap_big = lorentz_equiv_check(Weight.ones(n), w_log, 1.0,
                                    trials=cfg.trials, seed=cfg.seed, dim=200)
    rows.append(EstimateReport("equiv_ratio_gap", 64, r_gap_small, "lower", seed=cfg.seed))
    rows.append(EstimateReport("equiv_ratio_gap", 200, r_gap_big, "lower", seed=cfg.seed))
    verdicts.append(Verdict("C7-equivalence-check",
                            r_equal <= 2.01 and r_gap_big > r_gap_small,
                            {"equal_primitive": r_equal,
                             "gap_64": r_gap_small, "gap_200": r_gap_big}))
    return _finish(cfg, rows, verdicts, t0)


def run_regularity(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []
    n = 10_000
    m = np.arange(1, n + 1)
    profiles = {"sqrt": np.sqrt(m), "linear": m.astype(float),
                "log": 1.0 + np.log(m)}
    from .seqspace import FundamentalFunction
    table = {}
    for name, arr in profiles.items():
        lam = FundamentalFunction(arr)
        lrp, urp = has_lrp(lam), has_urp(lam)
        dini = float(dini_ratio(lam).max())
        table[name] = {"lrp": (lrp.holds, lrp.witness_b),
                       "urp": (urp.holds, urp.witness_b), "dini_max": dini}
        rows.append(EstimateReport("lrp_witness", n,
                                   float(lrp.witness_b or -1), "exact", witness=name))
        rows.append(EstimateReport("urp_witness", n,
                                   float(urp.witness_b or -1), "exact", witness=name))
        rows.append(EstimateReport("dini_max", n, dini, "exact", witness=name))
    # expected values computed by the exhaustive doubling scan: the log
    # profile fails every bounded dilation factor but turns vacuously true
    # around b ~ sqrt(e*n), which the verdict records explicitly
    log_lrp = table["log"]["lrp"]
    expected = (
        table["sqrt"]["lrp"] == (True, 4)
        and table["sqrt"]["urp"] == (True, 4)
        and table["linear"]["lrp"] == (True, 2)
        and table["linear"]["urp"] == (False, None)
        and table["log"]["urp"] == (True, 6)
        and log_lrp[0] and log_lrp[1] == 164
    )
    verdicts.append(Verdict("C7-regularity-table", expected, table))
    verdicts.append(Verdict("C7-dini-sqrt-bounded",
                            table["sqrt"]["dini_max"] <= 2.01,
                            {"dini_max": table["sqrt"]["dini_max"]}))
    return _finish(cfg, rows, verdicts, t0)


# -- C8 -------------------------------------------------------------------------


def run_phi(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []
    levels = max(cfg.levels, 8)
    y = build_mainA(cfg.host_norm(4), levels, dim_cap=cfg.dim_cap)
    fam = family_from_basis(y)
    a_grid = y.witnesses["a_grid"]

    # logarithmic profile fit.  NOTE: with tied witness coefficients the
    # measured curve is flat at the top scale (the blow-up is available at
    # every threshold), so the logarithmic fit is expected to fail; the
    # limiting object needs doubly-exponential coefficient grading that no
    # finite truncation can carry.  Kept as stated; see ledger analysis.
    xs, ys = [], []
    for nn in range(2, min(levels, 8) + 1):
        a = a_grid[nn]
        v = phi_lower(y, a, fam, trials=40, seed=cfg.seed).value
        xs.append(1.0 - math.log(a))
        ys.append(v)
        rows.append(EstimateReport("phi", a, v, "lower", witness=f"n={nn}",
                                   seed=cfg.seed))
    c1, r2 = fit_scaled(xs, ys)
    verdicts.append(Verdict("C8-phi-log-fit", c1 > 0 and r2 >= 0.95,
                            {"c1": c1, "r2": r2,
                             "floor_c1": float(min(np.array(ys) / np.array(xs))),
                             "note": "expected to fail at truncation; "
                                     "the floor constant stays positive"}))

    # dyadic layer decomposition on random coefficient-bounded vectors
    rng = np.random.default_rng(cfg.seed)
    small = Basis(SeqSpace(SeqNorm.lp(2.0, 24)), None)
    ok_layers = True
    worst_layers = 0
    for _ in range(1000):
        f = rng.uniform(-1, 1, size=24)
        f[int(rng.integers(0, 24))] = 1.0
        a = float(rng.uniform(0.01, 1.0))
        layers = dyadic_layers(small, f, a)
        level = set(int(i) + 1 for i in np.flatnonzero(np.abs(f) >= a * (1 - 1e-12)))
        union: set[int] = set()
        for L in layers:
            if union & set(L):
                ok_layers = False
            union |= set(L)
        ok_layers = ok_layers and union == level
        ok_layers = ok_layers and len(layers) <= 2 - math.log2(a) + 1e-9
        worst_layers = max(worst_layers, len(layers))
    rows.append(EstimateReport("dyadic_layer_max_count", 24.0,
                               float(worst_layers), "exact", seed=cfg.seed))
    verdicts.append(Verdict("C8-dyadic-layers-partition", ok_layers,
                            {"max_layers": worst_layers}))

    # transfer consistency on a calibration basis
    calib = Basis(SeqSpace(SeqNorm.lp(2.0, 8)), None)
    trows = kmphi_transfer_check(calib, 1.0, 1.0, 1.0, [(1.0, 1.0)],
                                 [1.0, 0.5, 0.1, 0.01], trials=30, seed=cfg.seed)
    for r in trows:
        rows.append(EstimateReport("kmphi_lhs", r["a"], r["lhs"], "lower", seed=cfg.seed))
        rows.append(EstimateReport("kmphi_rhs", r["a"], r["rhs"], "lower", seed=cfg.seed))
    verdicts.append(Verdict("C8-transfer-consistency",
                            not any(r["flag"] for r in trows),
                            {"flags": sum(r["flag"] for r in trows)}))
    return _finish(cfg, rows, verdicts, t0)


# -- C9 -------------------------------------------------------------------------


def run_calibration(cfg: ExperimentConfig) -> SuiteResult:
    t0 = time.time()
    rows, verdicts = [], []

    # singular-value values against a zoomed dense-grid maximization
    from .tests_support import grid_km_3d  # local helper, kept importable
    rng = np.random.default_rng(cfg.seed)
    worst_gap = 0.0
    for _ in range(3):
        M = rng.standard_normal((3, 3)) + 2.5 * np.eye(3)
        b = Basis(SeqSpace(SeqNorm.lp(2.0, 3)), M)
        for m in (1, 2):
            ex = km_exact_hilbert(b, m).value
            br = grid_km_3d(b, m)
            worst_gap = max(worst_gap, abs(ex - br))
            rows.append(EstimateReport("km_exact_vs_grid", m, ex - br, "exact"))
    verdicts.append(Verdict("C9-km-exact-vs-grid", worst_gap <= 1e-6,
                            {"worst_gap": worst_gap}))

    ok_rel = True
    for sdx in range(10):
        r = np.random.default_rng(cfg.seed + sdx)
        M = r.standard_normal((8, 8)) + 3 * np.eye(8)
        b = Basis(SeqSpace(SeqNorm.lp(2.0, 8)), M)
        lo = km_lower(b, 2, trials=80, seed=sdx).value
        ex = km_exact_hilbert(b, 2).value
        ok_rel = ok_rel and lo <= ex + 1e-9
        rows.append(EstimateReport("km_lower_vs_exact", sdx, ex - lo, "exact"))
    verdicts.append(Verdict("C9-km-lower-below-exact", ok_rel, {}))

    ortho = Basis(SeqSpace(SeqNorm.lp(2.0, 8)), None)
    km1 = km_exact_hilbert(ortho, 3).value
    lebs = []
    for m in (1, 2):
        f = rng.standard_normal(8)
        g = greedy_set(ortho, f, m)
        lebs.append(lebesgue_lower(ortho, f, m,
                                   [g.A, tuple(range(1, m + 1))]))
    leb = max(lebs)
    phiv = phi_lower(ortho, 0.5, trials=60, seed=cfg.seed).value
    rows.append(EstimateReport("orthonormal_km", 3, km1, "exact"))
    rows.append(EstimateReport("orthonormal_lebesgue", 2, leb, "lower"))
    rows.append(EstimateReport("orthonormal_phi", 0.5, phiv, "lower"))
    verdicts.append(Verdict("C9-orthonormal-unity",
                            abs(km1 - 1.0) <= 1e-12
                            and abs(leb - 1.0) <= 1e-9
                            and abs(phiv - 1.0) <= 1e-9,
                            {"km": km1, "lebesgue": leb, "phi": phiv}))
    return _finish(cfg, rows, verdicts, t0)


_RUNNERS = {
    "rotation": run_rotation,
    "dkk-core": run_dkk_core,
    "thmA": run_thmA,
    "mainA": run_mainA,
    "demNonUCC": run_dem_nonucc,
    "lorentz": run_lorentz,
    "regularity": run_regularity,
    "phi": run_phi,
    "calibration": run_calibration,
}


def run_suite(cfg: ExperimentConfig) -> SuiteResult:
    """Dispatch a named suite; deterministic for a fixed (config, seed)."""
    return _RUNNERS[cfg.suite](cfg)
