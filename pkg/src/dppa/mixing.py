"""Doubly stochastic mixing matrices and their spectral constants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .netgraph import CommGraph

STOCHASTIC_TOL = 1e-12

WEIGHT_SCHEMES = ("metropolis", "metropolis-hastings")


@dataclass(frozen=True, eq=False)
class MixingMatrix:
    """Symmetric doubly stochastic weight matrix with cached spectra.

    Attributes
    ----------
    w : ndarray of shape (n, n)
        The weights; ``w[i, j] > 0`` off the diagonal exactly on graph edges.
    rho_w : float
        Spectral norm of ``w - 11^T / n``, the consensus contraction factor.
    lambda_min : float
        Smallest eigenvalue of ``w``.
    """

    w: np.ndarray
    rho_w: float
    lambda_min: float

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @classmethod
    def from_weights(cls, w) -> "MixingMatrix":
        w = np.array(w, dtype=float)
        w.setflags(write=False)
        rho_w, lambda_min = spectral_gap_quantities(w)
        return cls(w, rho_w, lambda_min)

    def to_dict(self) -> dict:
        return {"w": self.w.tolist(), "rho_w": self.rho_w, "lambda_min": self.lambda_min}

    @classmethod
    def from_dict(cls, data: dict) -> "MixingMatrix":
        return cls.from_weights(data["w"])


def _weights(g: CommGraph, offset: int) -> np.ndarray:
    w = np.zeros((g.n, g.n))
    deg = g.degrees
    for i, j in g.edges:
        w[i, j] = w[j, i] = 1.0 / (max(deg[i], deg[j]) + offset)
    for i in range(g.n):
        # fixed left-to-right order keeps the diagonal reproducible
        s = 0.0
        for j in range(g.n):
            if j != i:
                s += w[i, j]
        w[i, i] = 1.0 - s
    return w


def metropolis_weights(g: CommGraph) -> MixingMatrix:
    """Weights ``1 / max(deg i, deg j)`` on edges, remainder on the diagonal.

    The node of largest degree always ends up with a zero diagonal under this
    rule, so the result never passes :func:`validate_assumption2`.
    """
    return MixingMatrix.from_weights(_weights(g, 0))


def metropolis_hastings_weights(g: CommGraph) -> MixingMatrix:
    """Weights ``1 / (1 + max(deg i, deg j))``; every diagonal is positive."""
    return MixingMatrix.from_weights(_weights(g, 1))


def build_weights(g: CommGraph, scheme: str = "metropolis-hastings") -> MixingMatrix:
    if scheme == "metropolis":
        return metropolis_weights(g)
    if scheme == "metropolis-hastings":
        return metropolis_hastings_weights(g)
    raise ValueError(f"unknown weight scheme {scheme!r}; expected one of {WEIGHT_SCHEMES}")


def validate_assumption2(m, tol: float = STOCHASTIC_TOL) -> list[str]:
    """List every way ``m`` fails to be a valid mixing matrix.

    Checks symmetry, nonnegativity, unit row and column sums, and a strictly
    positive diagonal. An empty list means the matrix is valid.
    """
    w = np.asarray(m.w if isinstance(m, MixingMatrix) else m, dtype=float)
    out = []
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        return [f"not square: shape {w.shape}"]
    if not np.array_equal(w, w.T):
        out.append("not symmetric")
    if (w < 0).any():
        bad = sorted({int(i) for i in np.argwhere(w < 0)[:, 0]})
        out.append(f"negative entries in rows {bad}")
    rows = np.flatnonzero(np.abs(w.sum(axis=1) - 1.0) > tol)
    if rows.size:
        out.append(f"row sum != 1 at rows {rows.tolist()}")
    cols = np.flatnonzero(np.abs(w.sum(axis=0) - 1.0) > tol)
    if cols.size:
        out.append(f"column sum != 1 at columns {cols.tolist()}")
    diag = np.flatnonzero(np.diag(w) <= 0)
    if diag.size:
        out.append(f"zero diagonal at nodes {diag.tolist()}")
    return out


def pattern_violations(m: MixingMatrix, g: CommGraph) -> list[str]:
    """Off-diagonal support of ``m`` must coincide with the edge set of ``g``."""
    off = m.w > 0
    np.fill_diagonal(off, False)
    adj = g.adjacency()
    bad = np.argwhere(off != adj)
    return [f"support mismatch at ({i}, {j})" for i, j in bad if i < j]


def spectral_gap_quantities(w) -> tuple[float, float]:
    """Return ``(rho_w, lambda_min)`` for a symmetric weight matrix.

    ``rho_w`` is the largest absolute eigenvalue of ``w - 11^T / n``.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {w.shape}")
    if not np.allclose(w, w.T, rtol=0.0, atol=1e-14):
        raise ValueError("spectral quantities require a symmetric matrix")
    n = w.shape[0]
    lambda_min = float(np.linalg.eigvalsh(w)[0])
    centered = w - np.full((n, n), 1.0 / n)
    ev = np.linalg.eigvalsh(centered)
    rho_w = float(max(abs(ev[0]), abs(ev[-1])))
    return rho_w, lambda_min


def mix(m: MixingMatrix, x) -> np.ndarray:
    """One communication round: row ``i`` becomes ``sum_j w_ij x_j``."""
    w = m.w if isinstance(m, MixingMatrix) else np.asarray(m, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != w.shape[1]:
        raise ValueError(f"state has {x.shape[0]} rows but W is {w.shape[0]}x{w.shape[1]}")
    return w @ x
