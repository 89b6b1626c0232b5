"""Independent oracles shared by the calibration suite and the test suite."""

from __future__ import annotations

import itertools

import numpy as np

from .basis import Basis


def grid_km_3d(b: Basis, m: int) -> float:
    """Dense-grid maximization of |S_A f| over the unit sphere of R^3,
    zoomed twice around the argmax.

    A pure sampling oracle for the largest singular value of the coordinate
    projections: no factorization is involved, so it cross-checks the
    singular-value path independently.
    """
    S = b.synth if b.synth is not None else np.eye(3)
    An = b.anal if b.anal is not None else np.eye(3)
    mats = []
    for k in range(1, m + 1):
        for A in itertools.combinations(range(3), k):
            idx = np.array(A)
            mats.append(S[:, idx] @ An[idx, :])

    def sphere(theta, phi):
        t, p = np.meshgrid(theta, phi, indexing="ij")
        pts = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p),
                        np.cos(t)], axis=-1)
        return pts.reshape(-1, 3), t.shape

    best = 0.0
    for SA in mats:
        theta = np.linspace(0.0, np.pi, 200)
        phi = np.linspace(0.0, 2.0 * np.pi, 400, endpoint=False)
        for _ in range(3):
            F, shape = sphere(theta, phi)
            vals = np.linalg.norm(F @ SA.T, axis=1).reshape(shape)
            i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
            best = max(best, float(vals[i, j]))
            dt = theta[1] - theta[0] if len(theta) > 1 else 0.1
            dp = phi[1] - phi[0] if len(phi) > 1 else 0.1
            theta = np.linspace(theta[i] - dt, theta[i] + dt, 60)
            phi = np.linspace(phi[j] - dp, phi[j] + dp, 60)
    return best
