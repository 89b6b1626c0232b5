"""Finite normed spaces, bases with explicit dual systems, coordinate
projections, greedy sets, and the thresholding greedy algorithm.

A ``Basis`` is an invertible synthesis matrix over a ``NormedSpace`` (columns
are the basis vectors in coordinates) together with its inverse, whose rows
are the dual functionals.  ``synth=None`` means the unit vector system; the
large composite spaces downstream all use that representation, so no N x N
identity is ever materialized.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .seqspace import DimensionMismatchError, SeqNorm

CONDITION_WARN = 1e12


class NormedSpace:
    """Dimension plus a norm evaluator.  Subclasses fix the geometry."""

    dim: int

    def norm(self, f: np.ndarray) -> float:
        raise NotImplementedError

    def norm_rows(self, F: np.ndarray) -> np.ndarray:
        return np.asarray([self.norm(row) for row in np.atleast_2d(F)])

    @property
    def is_euclidean(self) -> bool:
        return False

    def check_vec(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.dim,):
            raise DimensionMismatchError(
                f"vector of shape {f.shape} fed to space of dim {self.dim}")
        return f


class SeqSpace(NormedSpace):
    """A coordinate space normed by a SeqNorm."""

    def __init__(self, seqnorm: SeqNorm):
        self.seqnorm = seqnorm
        self.dim = seqnorm.dim

    def norm(self, f):
        return self.seqnorm.eval(f)

    def norm_rows(self, F):
        return self.seqnorm.eval_rows(np.atleast_2d(F))

    @property
    def is_euclidean(self):
        return self.seqnorm.is_euclidean

    def to_jsonable(self):
        return {"space": "seq", "norm": self.seqnorm.to_jsonable()}


class DirectSumSpace(NormedSpace):
    """Concatenated coordinates [f; g] with norm max(|f|_left, |g|_right)."""

    def __init__(self, left: NormedSpace, right: NormedSpace):
        self.left = left
        self.right = right
        self.dim = left.dim + right.dim

    def split(self, h: np.ndarray):
        h = self.check_vec(h)
        return h[:self.left.dim], h[self.left.dim:]

    def norm(self, h):
        f, g = self.split(h)
        return max(self.left.norm(f), self.right.norm(g))

    def norm_rows(self, H):
        H = np.atleast_2d(np.asarray(H, dtype=float))
        nl = self.left.norm_rows(H[:, :self.left.dim])
        nr = self.right.norm_rows(H[:, self.left.dim:])
        return np.maximum(nl, nr)

    def to_jsonable(self):
        return {"space": "direct_sum", "left": self.left.to_jsonable(),
                "right": self.right.to_jsonable()}


class MappedSpace(NormedSpace):
    """Span of given ambient vectors, normed by the ambient norm.

    Coordinates are coefficients c; the norm is ambient(cols @ c).  Used for
    block spans and for the averaged-projection range inside the composite
    constructions.
    """

    def __init__(self, ambient: NormedSpace, cols: np.ndarray, label: str = "span"):
        cols = np.asarray(cols, dtype=float)
        if cols.ndim != 2 or cols.shape[0] != ambient.dim:
            raise DimensionMismatchError("columns must be ambient vectors")
        self.ambient = ambient
        self.cols = cols
        self.dim = cols.shape[1]
        self.label = label

    def norm(self, c):
        c = self.check_vec(c)
        return self.ambient.norm(self.cols @ c)

    def norm_rows(self, C):
        C = np.atleast_2d(np.asarray(C, dtype=float))
        return self.ambient.norm_rows(C @ self.cols.T)

    def to_jsonable(self):
        return {"space": "mapped", "label": self.label,
            "ambient": self.ambient.to_jsonable(), "cols": "external"}


class Basis:
    """Synthesis matrix + dual system over a normed space.

    synth columns are the basis vectors; anal = synth^{-1}, whose rows are
    the dual functionals.  synth=None denotes the unit vector system.
    Immutable by convention after construction; witness vectors attached by
    the constructions live in ``witnesses``.
    """

    def __init__(self, space: NormedSpace, synth: np.ndarray | None = None):
        self.space = space
        n = space.dim
        if synth is None:
            self.synth = None
            self.anal = None
        else:
            synth = np.asarray(synth, dtype=float)
            if synth.shape != (n, n):
                raise DimensionMismatchError("synthesis matrix must be square of space dim")
            cond = np.linalg.cond(synth)
            if cond > CONDITION_WARN:
                warnings.warn(f"basis matrix condition number {cond:.3e} exceeds 1e12",
                              RuntimeWarning)
            self.synth = synth
            self.anal = np.linalg.inv(synth)
        self.witnesses: dict = {}

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def is_unit_system(self) -> bool:
        return self.synth is None

    # -- coefficient transform ---------------------------------------------

    def analyze(self, f: np.ndarray) -> np.ndarray:
        """Coefficients (x*_n(f))_n."""
        f = self.space.check_vec(f)
        return f.copy() if self.anal is None else self.anal @ f

    def synthesize(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dim,):
            raise DimensionMismatchError("coefficient vector has wrong length")
        return c.copy() if self.synth is None else self.synth @ c

    def vector(self, n: int) -> np.ndarray:
        """Basis vector x_n (1-based)."""
        out = np.zeros(self.dim)
        out[n - 1] = 1.0
        return out if self.synth is None else self.synth[:, n - 1].copy()

    def dual_vector(self, n: int) -> np.ndarray:
        """Dual functional x*_n as a coordinate vector (acts by dot product)."""
        out = np.zeros(self.dim)
        out[n - 1] = 1.0
        return out if self.anal is None else self.anal[n - 1, :].copy()

    def indicator(self, A, signs=None) -> np.ndarray:
        """sum_{n in A} eps_n x_n for a 1-based index set A."""
        c = np.zeros(self.dim)
        idx = np.asarray(sorted(A), dtype=int) - 1
        c[idx] = 1.0 if signs is None else np.asarray(signs, dtype=float)
        return self.synthesize(c)

    def norm_of(self, f: np.ndarray) -> float:
        return self.space.norm(f)


# -- operations --------------------------------------------------------------


def analyze(b: Basis, f: np.ndarray) -> np.ndarray:
    return b.analyze(f)


def coordinate_projection(b: Basis, A, f: np.ndarray) -> np.ndarray:
    """S_A f = sum_{n in A} x*_n(f) x_n (A is 1-based)."""
    c = b.analyze(f)
    keep = np.zeros(b.dim, dtype=bool)
    if len(A) > 0:
        idx = np.asarray(sorted(A), dtype=int)
        if idx[0] < 1 or idx[-1] > b.dim:
            raise IndexError("projection set outside 1..dim")
        keep[idx - 1] = True
    return b.synthesize(np.where(keep, c, 0.0))


@dataclass
class GreedyResult:
    """An m-element greedy set, its projection, and a tie flag.

    ``tie_note`` is set when the m-th and (m+1)-th coefficient magnitudes
    agree to 1e-12: other greedy sets of the same size then exist.
    """

    A: tuple[int, ...]
    projection: np.ndarray
    tie_note: bool
    coefficients: np.ndarray

    @property
    def signs(self) -> np.ndarray:
        """Coefficient sign pattern, with sign(0) = +1 by convention."""
        s = np.sign(self.coefficients)
        s[s == 0] = 1.0
        return s


def greedy_set(b: Basis, f: np.ndarray, m: int,
               tie_priority: np.ndarray | None = None) -> GreedyResult:
    """Indices of the m largest |coefficients|.

    Ties are broken by lowest index, or by ``tie_priority`` (lower rank
    wins) when an experiment needs a specific greedy set, e.g. one aligned
    with a block structure.  The returned set is always a valid greedy set.
    """
    if not 0 <= m <= b.dim:
        raise ValueError(f"m={m} outside 0..{b.dim}")
    c = b.analyze(f)
    mags = np.abs(c)
    if tie_priority is None:
        order = np.argsort(-mags, kind="stable")
    else:
        pr = np.asarray(tie_priority)
        order = np.lexsort((np.arange(b.dim), pr, -mags))
    A = tuple(int(i) + 1 for i in order[:m])
    tie = bool(0 < m < b.dim and
               abs(mags[order[m - 1]] - mags[order[m]]) <= 1e-12)
    proj = coordinate_projection(b, A, f)
    return GreedyResult(A, proj, tie, c)


def tga(b: Basis, f: np.ndarray, m: int,
        tie_priority: np.ndarray | None = None) -> np.ndarray:
    """m-th greedy approximant G_m(f)."""
    return greedy_set(b, f, m, tie_priority).projection


def direct_sum(b1: Basis, b2: Basis) -> Basis:
    """Interleaved basis of the max-norm direct sum.

    z_{2n-1} = (x_n, 0) and z_{2n} = (0, y_n) while both sequences last;
    leftovers of the longer one are appended.  Dual system is the matching
    interleave of the duals.
    """
    space = DirectSumSpace(b1.space, b2.space)
    n1, n2 = b1.dim, b2.dim
    cols = np.zeros((space.dim, space.dim))
    left = b1.synth if b1.synth is not None else np.eye(n1)
    right = b2.synth if b2.synth is not None else np.eye(n2)
    order = _interleave_order(n1, n2)
    for k, (side, j) in enumerate(order):
        if side == 0:
            cols[:n1, k] = left[:, j]
        else:
            cols[n1:, k] = right[:, j]
    return Basis(space, cols)


def _interleave_order(n1: int, n2: int):
    order = []
    i = j = 0
    while i < n1 or j < n2:
        if i < n1:
            order.append((0, i)); i += 1
        if j < n2:
            order.append((1, j)); j += 1
    return order


def affinity(b: Basis, lam: np.ndarray) -> Basis:
    """Rescaled basis y_n = lam_n x_n; duals are rescaled by 1/lam_n.

    Coordinate projections are unchanged as operators, and the restricted
    unconditionality parameters are invariant.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (b.dim,):
        raise DimensionMismatchError("one scale per basis vector required")
    if np.any(lam == 0):
        raise ValueError("affinity scales must be nonzero")
    synth = np.eye(b.dim) if b.synth is None else b.synth
    out = Basis(b.space, synth * lam)
    out.witnesses = dict(b.witnesses)
    return out


def cc_block_sequence(b: Basis, blocks: list, signs: list | None = None) -> Basis:
    """Constant-coefficient block basic sequence y_j = sum_{n in D_j} eps_n x_n,
    represented as the unit system of the block span with the ambient norm.

    The averaged duals y*_j = (1/|D_j|) sum_{n in D_j} eps_n x*_n are kept on
    the result (``averaged_duals``, ambient coordinates) for norm estimates.
    """
    seen: set[int] = set()
    for D in blocks:
        D = set(D)
        if not D or (seen & D):
            raise ValueError("blocks must be nonempty and pairwise disjoint")
        seen |= D
    J = len(blocks)
    cols = np.zeros((b.dim, J))
    duals = np.zeros((J, b.dim))
    for j, D in enumerate(blocks):
        eps = np.ones(len(D)) if signs is None else np.asarray(signs[j], dtype=float)
        idx = np.asarray(sorted(D), dtype=int) - 1
        coeff = np.zeros(b.dim)
        coeff[idx] = eps
        cols[:, j] = b.synthesize(coeff)
        for e, n in zip(eps, idx):
            duals[j] += e * b.dual_vector(n + 1)
        duals[j] /= len(D)
    reduced = MappedSpace(b.space, cols, label="cc-block-span")
    out = Basis(reduced, None)
    out.witnesses["averaged_duals"] = duals
    out.witnesses["block_columns"] = cols
    return out
