"""Basis, dual-system, greedy-set, and block-sequence tests."""

import numpy as np
import pytest

from greedylab import (Basis, SeqNorm, SeqSpace, affinity, analyze,
                       cc_block_sequence, coordinate_projection, direct_sum,
                       dkk_space, greedy_set, tga)
from greedylab.basis import MappedSpace
from greedylab.partition import OrderedPartition
from greedylab.seqspace import fundamental_function


def _l2(n):
    return SeqSpace(SeqNorm.lp(2.0, n))


def test_identity_analyze_roundtrip():
    b = Basis(_l2(4), None)
    f = np.array([1.0, -2.0, 0.5, 3.0])
    assert np.allclose(analyze(b, f), f)
    assert np.allclose(b.synthesize(analyze(b, f)), f)


def test_rotation_pair_coefficients():
    # the R=2 pair expanded on (1,0): coefficients (1, 0)
    from greedylab import rotation_pair
    rp = rotation_pair(2.0)
    b = Basis(_l2(2), np.column_stack([rp.h1, rp.h2]))
    c = analyze(b, np.array([1.0, 0.0]))
    assert np.allclose(c, [1.0, 0.0], atol=1e-12)
    # oracle: matrix inverse
    assert np.allclose(b.anal, np.linalg.inv(b.synth), atol=1e-14)


def test_analyze_of_basis_vector_is_unit():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((5, 5)) + 5 * np.eye(5)
    b = Basis(_l2(5), M)
    for k in range(1, 6):
        c = analyze(b, b.vector(k))
        e = np.zeros(5)
        e[k - 1] = 1.0
        assert np.allclose(c, e, atol=1e-10)
    assert np.allclose(b.anal @ b.synth, np.eye(5), atol=1e-10)


def test_synthesize_analyze_random_roundtrip():
    rng = np.random.default_rng(1)
    M = rng.standard_normal((8, 8)) + 4 * np.eye(8)
    b = Basis(_l2(8), M)
    for _ in range(20):
        f = rng.standard_normal(8)
        assert np.allclose(b.synthesize(analyze(b, f)), f, rtol=1e-10, atol=1e-12)


def test_coordinate_projection_basics():
    b = Basis(_l2(5), None)
    f = np.array([3.0, 1.0, 2.0, -4.0, 0.5])
    assert np.allclose(coordinate_projection(b, range(1, 6), f), f)
    assert np.allclose(coordinate_projection(b, (), f), 0.0)
    p = coordinate_projection(b, (1, 3), f)
    assert np.allclose(p, [3.0, 0.0, 2.0, 0.0, 0.0])
    assert np.linalg.norm(p) <= np.linalg.norm(f)  # Pythagoras oracle


def test_projection_lattice_identities():
    rng = np.random.default_rng(2)
    M = rng.standard_normal((6, 6)) + 3 * np.eye(6)
    b = Basis(_l2(6), M)
    A, B = (1, 2, 5), (2, 4, 5, 6)
    for _ in range(10):
        f = rng.standard_normal(6)
        sa = coordinate_projection(b, A, f)
        assert np.allclose(coordinate_projection(b, A, sa), sa, atol=1e-10)
        ab = coordinate_projection(b, A, coordinate_projection(b, B, f))
        assert np.allclose(ab, coordinate_projection(b, (2, 5), f), atol=1e-10)
        comp = coordinate_projection(b, (3, 4, 6), f)
        assert np.allclose(sa + comp, f, atol=1e-10)


def test_greedy_set_selection_and_ties():
    b = Basis(_l2(3), None)
    f = np.array([0.5, -1.0, 0.5])
    assert greedy_set(b, f, 1).A == (2,)
    g = greedy_set(b, f, 2)
    assert g.A == (2, 1)          # lowest-index preference on the tie
    assert g.tie_note
    assert greedy_set(b, f, 0).A == ()
    with pytest.raises(ValueError):
        greedy_set(b, f, 4)


def test_greedy_set_block_priority():
    b = Basis(_l2(4), None)
    f = np.array([1.0, 1.0, 1.0, 1.0])
    pr = np.array([1, 1, 0, 0])   # prefer the second block under ties
    g = greedy_set(b, f, 2, tie_priority=pr)
    assert set(g.A) == {3, 4}
    assert g.tie_note


def test_greedy_set_is_valid_greedy_set_property():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((7, 7)) + 4 * np.eye(7)
    b = Basis(_l2(7), M)
    for _ in range(1000):
        f = rng.standard_normal(7)
        m = int(rng.integers(0, 8))
        g = greedy_set(b, f, m)
        mags = np.abs(g.coefficients)
        inside = min((mags[i - 1] for i in g.A), default=np.inf)
        outside = max((mags[i - 1] for i in set(range(1, 8)) - set(g.A)),
                      default=0.0)
        assert inside >= outside - 1e-12


def test_tga_values_and_telescoping():
    b = Basis(_l2(3), None)
    f = np.array([3.0, 1.0, 2.0])
    assert np.allclose(tga(b, f, 2), [3.0, 0.0, 2.0])
    assert np.allclose(tga(b, f, 3), f)
    rng = np.random.default_rng(4)
    M = rng.standard_normal((6, 6)) + 4 * np.eye(6)
    b2 = Basis(_l2(6), M)
    f = rng.standard_normal(6)
    prev = np.zeros(6)
    taken: list[int] = []
    for m in range(1, 7):
        g = greedy_set(b2, f, m)
        new = [i for i in g.A if i not in taken]
        assert len(new) == 1
        n_m = new[0]
        step = g.coefficients[n_m - 1] * b2.vector(n_m)
        assert np.allclose(g.projection, prev + step, atol=1e-10)
        prev = g.projection
        taken = list(g.A)


def test_direct_sum_interleaving_and_max_norm():
    b1 = Basis(_l2(2), None)
    b2 = Basis(_l2(2), None)
    z = direct_sum(b1, b2)
    assert z.dim == 4
    # z_1 = (x_1, 0), z_2 = (0, y_1), z_3 = (x_2, 0), z_4 = (0, y_2)
    assert np.allclose(z.vector(1), [1, 0, 0, 0])
    assert np.allclose(z.vector(2), [0, 0, 1, 0])
    assert np.allclose(z.vector(3), [0, 1, 0, 0])
    assert np.allclose(z.vector(4), [0, 0, 0, 1])
    f = np.array([3.0, 0.0, 4.0, 0.0])
    assert z.space.norm(f) == pytest.approx(max(3.0, 4.0))
    for k in range(1, 5):
        assert z.space.norm(z.vector(k)) == pytest.approx(1.0)


def test_direct_sum_dual_system():
    rng = np.random.default_rng(5)
    M = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    b1 = Basis(_l2(3), M)
    b2 = Basis(_l2(3), None)
    z = direct_sum(b1, b2)
    assert np.allclose(z.anal @ z.synth, np.eye(6), atol=1e-10)


def test_affinity_scaling_and_projection_invariance():
    rng = np.random.default_rng(6)
    M = rng.standard_normal((5, 5)) + 3 * np.eye(5)
    b = Basis(_l2(5), M)
    lam = np.array([1.0, 2.0, -0.5, 3.0, 0.25])
    ba = affinity(b, lam)
    for n in range(1, 6):
        assert np.allclose(ba.vector(n), lam[n - 1] * b.vector(n), atol=1e-12)
        assert np.allclose(ba.dual_vector(n), b.dual_vector(n) / lam[n - 1], atol=1e-10)
    # identical projection operators
    f = rng.standard_normal(5)
    for A in [(1,), (2, 4), (1, 3, 5)]:
        assert np.allclose(coordinate_projection(b, A, f),
                           coordinate_projection(ba, A, f), atol=1e-10)
    with pytest.raises(ValueError):
        affinity(b, np.array([1.0, 0.0, 1.0, 1.0, 1.0]))


def test_affinity_identity_scale():
    b = Basis(_l2(3), None)
    ba = affinity(b, np.ones(3))
    assert np.allclose(ba.synth, np.eye(3))


def test_dual_norms_halve_under_doubling():
    b = Basis(_l2(4), None)
    ba = affinity(b, 2.0 * np.ones(4))
    for n in range(1, 5):
        assert np.linalg.norm(ba.dual_vector(n)) == pytest.approx(
            0.5 * np.linalg.norm(b.dual_vector(n)))


def test_cc_block_sequence_singletons_is_subbasis():
    b = Basis(_l2(4), None)
    r = cc_block_sequence(b, [{1}, {3}])
    assert r.dim == 2
    c = np.array([2.0, -1.0])
    assert r.space.norm(c) == pytest.approx(np.sqrt(5.0))


def test_cc_block_sequence_on_composite_space_matches_affinity():
    # unit system blocks of the composite norm behave as a rescaled inner basis
    n = 12
    host = SeqNorm.lp(2.0, n)
    sigma = OrderedPartition((2, 4, 6))
    inner = Basis(_l2(3), None)
    y = dkk_space(inner, host, sigma)
    blocks = [set(int(i) + 1 for i in sigma.block(j)) for j in range(1, 4)]
    r = cc_block_sequence(y, blocks)
    lam = fundamental_function(host)
    scales = np.array([lam[2], lam[4], lam[6]])
    rng = np.random.default_rng(7)
    for _ in range(20):
        c = rng.standard_normal(3)
        # |sum c_j 1_{sigma_j}|_Y = |sum c_j Lambda_j x_j|_X exactly
        assert r.space.norm(c) == pytest.approx(
            np.linalg.norm(scales * c), rel=1e-10)


def test_cc_block_sequence_m_boundedness_on_tested_construction():
    from greedylab import build_dem_nonucc
    from greedylab.estimators import dual_norm_lower
    y = build_dem_nonucc(SeqNorm.lp(2.0, 4), 12)
    sigma = y.space.sigma
    blocks = [set(int(i) + 1 for i in sigma.block(j))
              for j in range(1, sigma.nblocks + 1)]
    r = cc_block_sequence(y, blocks)
    duals = r.witnesses["averaged_duals"]
    prods = []
    for j in range(r.dim):
        e = np.zeros(r.dim)
        e[j] = 1.0
        ynorm = r.space.norm(e)
        dnorm = dual_norm_lower(y, duals[j], trials=40, seed=j)
        prods.append(ynorm * dnorm)
    assert max(prods) < 12.0


def test_cc_block_sequence_rejects_overlap():
    b = Basis(_l2(4), None)
    with pytest.raises(ValueError):
        cc_block_sequence(b, [{1, 2}, {2, 3}])


def test_condition_number_warning():
    M = np.array([[1.0, 0.0], [0.0, 1e-14]])
    with pytest.warns(RuntimeWarning):
        Basis(_l2(2), M)


def test_mapped_space_norm():
    cols = np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
    sp = MappedSpace(_l2(3), cols)
    assert sp.norm(np.array([1.0, 0.0])) == pytest.approx(1.0)
    assert sp.norm(np.array([0.0, 1.0])) == pytest.approx(np.sqrt(2.0))
