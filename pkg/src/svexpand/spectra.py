"""Dense symmetric eigensolver and the spectral quantities built on it.

Singular values of a normalized adjacency matrix are always obtained from the
eigenvalues of the symmetric lift, whose spectrum is the singular values with
both signs.  Eigenvectors of the lift also feed the sweep-cut rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Digraph, GraphError, is_eulerian, is_strongly_connected

__all__ = [
    "SpectralError",
    "Spectrum",
    "SingularPair",
    "jacobi_eigh",
    "symmetric_eigenvalues",
    "normalized_adjacency",
    "random_walk_matrix",
    "lift_eigensystem",
    "singular_values",
    "second_singular_pair",
    "stationary_distribution",
]

SYM_TOL = 1e-12
CLUSTER_GAP = 1e-8
MAX_SWEEPS = 64
DIRECT_SOLVE_MAX_N = 512


class SpectralError(RuntimeError):
    """Eigensolver failure or a violated spectral cross-check."""


def _check_symmetric(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SpectralError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise SpectralError("matrix has non-finite entries")
    bad = np.abs(m - m.T) > SYM_TOL * np.maximum(1.0, np.abs(m))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise SpectralError(f"matrix not symmetric at ({i},{j})")


def _orient(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude coordinate positive; first index wins ties
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs



def _sweep(a: np.ndarray, v: np.ndarray, thresh: float) -> None:
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if abs(apq) <= thresh:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            ap = a[:, p].copy()
            aq = a[:, q]
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap = a[p, :].copy()
            aq = a[q, :]
            a[p, :] = c * ap - s * aq
            a[q, :] = s * ap + c * aq
            a[p, q] = a[q, p] = 0.0
            vp = v[:, p].copy()
            vq = v[:, q]
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq


def jacobi_eigh(m, want_vectors: bool = False, tol: float = 1e-10,
                max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi eigen-decomposition of a real symmetric matrix.

    Returns eigenvalues sorted in descending order and, if requested, the
    matching orthonormal eigenvectors as columns.  Sweeps stop once the
    off-diagonal Frobenius norm falls to ``tol * ||M||_F``; more than
    ``max_sweeps`` sweeps raise :class:`SpectralError`.
    """
    a = np.array(m, dtype=float, copy=True)
    _check_symmetric(a)
    a = (a + a.T) / 2
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)

    def off_norm() -> float:
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    if n > 1 and scale > 0:
        # skip rotations whose entry cannot move the off-diagonal mass
        thresh = 1e-3 * tol * scale / n
        sweeps = 0
        polished = False
        while True:
            if off_norm() <= tol * scale:
                # one more sweep costs little and squares the remaining error
                if polished:
                    break
                polished = True
            elif sweeps == max_sweeps:
                raise SpectralError(f"Jacobi did not converge in {max_sweeps} sweeps")
            sweeps += 1
            _sweep(a, v, thresh)
    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    if not want_vectors:
        return vals
    return vals, _orient(v[:, order])


def symmetric_eigenvalues(m, want_vectors: bool = False):
    return jacobi_eigh(m, want_vectors=want_vectors)


# ---------------------------------------------------------------------------


def _degrees(g: Digraph) -> np.ndarray:
    if not is_eulerian(g):
        raise GraphError("graph is not Eulerian")
    d = np.array([float(x) for x in g.out_degrees])
    if g.n and (d <= 0).any():
        raise GraphError(f"vertex {int(np.argmin(d))} has zero degree")
    return d


def normalized_adjacency(g: Digraph) -> np.ndarray:
    """``A(u, v) = w(u, v) / sqrt(d(u) d(v))`` for an Eulerian graph."""
    d = _degrees(g)
    return g.matrix() / np.sqrt(np.outer(d, d))


def random_walk_matrix(g: Digraph) -> np.ndarray:
    d = np.array([float(x) for x in g.out_degrees])
    if (d <= 0).any():
        raise GraphError("zero out-degree vertex")
    return g.matrix() / d[:, None]


@dataclass(frozen=True)
class Spectrum:
    sigmas: tuple[float, ...]
    mus: tuple[float, ...] | None
    residual: float

    def sigma(self, k: int) -> float:
        """k-th largest singular value, 1-based."""
        return self.sigmas[k - 1]

    def mu(self, k: int) -> float:
        if self.mus is None:
            raise SpectralError("eigenvalues only defined for undirected graphs")
        return self.mus[k - 1]

    def to_json(self) -> dict:
        return {
            "sigmas": list(self.sigmas),
            "mus": None if self.mus is None else list(self.mus),
            "residual": self.residual,
        }


@dataclass(frozen=True)
class SingularPair:
    sigma2: float
    left: np.ndarray
    right: np.ndarray


def lift_eigensystem(g: Digraph) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of the lift's normalized adjacency."""
    key = "lift_eig"
    hit = g._cache.get(key)
    if hit is None:
        a = normalized_adjacency(g)
        n = g.n
        big = np.zeros((2 * n, 2 * n))
        big[:n, n:] = a
        big[n:, :n] = a.T
        vals, vecs = jacobi_eigh(big, want_vectors=True)
        vals.setflags(write=False)
        vecs.setflags(write=False)
        hit = (vals, vecs)
        g._cache[key] = hit
    return hit


def _residual(m: np.ndarray, vals: np.ndarray, vecs: np.ndarray) -> float:
    if vals.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(m @ vecs - vecs * vals[None, :], axis=0)))


def singular_values(g: Digraph) -> Spectrum:
    """Singular values via the lift; eigenvalues too when ``g`` is undirected."""
    n = g.n
    vals, vecs = lift_eigensystem(g)
    if np.max(np.abs(vals + vals[::-1]), initial=0.0) > 1e-8:
        raise SpectralError("lift spectrum is not symmetric about zero")
    sig = (vals[:n] - vals[::-1][:n]) / 2
    a = normalized_adjacency(g)
    big = np.block([[np.zeros((n, n)), a], [a.T, np.zeros((n, n))]])
    res = _residual(big, vals, vecs)
    mus = None
    if not g.directed:
        mvals, mvecs = jacobi_eigh(a, want_vectors=True)
        res = max(res, _residual(a, mvals, mvecs))
        if n >= 2:
            s2 = max(mvals[1], abs(mvals[-1]))
            if abs(s2 - sig[1]) > 1e-8:
                raise SpectralError(f"sigma2 {sig[1]} != max(mu2, |mun|) = {s2}")
        if np.max(np.abs(np.sort(np.abs(mvals))[::-1] - sig), initial=0.0) > 1e-8:
            raise SpectralError("|eigenvalues| and singular values disagree")
        mus = tuple(float(x) for x in mvals)
    return Spectrum(tuple(float(x) for x in sig), mus, res)


def _top_lift_vector(g: Digraph) -> np.ndarray:
    d = np.sqrt(np.array([float(x) for x in g.out_degrees]))
    z = np.concatenate([d, d])
    return z / np.linalg.norm(z)


def _unit_orthogonal(u: np.ndarray) -> np.ndarray:
    # first basis vector with a usable component orthogonal to u
    for i in range(len(u)):
        e = np.zeros(len(u))
        e[i] = 1.0
        e -= u * (u @ e)
        nrm = np.linalg.norm(e)
        if nrm > 1e-6:
            return e / nrm
    raise SpectralError("no orthogonal direction")


def sigma2_cluster(g: Digraph) -> list[np.ndarray]:
    """Unit lift eigenvectors spanning the sigma2 eigenspace, orthogonal to the top one.

    When sigma2 is degenerate every basis vector of the cluster is returned.
    """
    vals, vecs = lift_eigensystem(g)
    s2 = vals[1]
    top = _top_lift_vector(g)
    out = []
    for j in range(len(vals)):
        if abs(vals[j] - s2) >= CLUSTER_GAP:
            continue
        z = vecs[:, j] - top * (top @ vecs[:, j])
        nrm = np.linalg.norm(z)
        if nrm > 1e-6:
            out.append(z / nrm)
    if not out:
        raise SpectralError("empty sigma2 cluster")
    return out


def second_singular_pair(g: Digraph) -> SingularPair:
    n = g.n
    if n < 2:
        raise GraphError("second singular pair needs n >= 2")
    vals, _ = lift_eigensystem(g)
    s2 = float((vals[1] - vals[-2]) / 2)
    sqd = np.sqrt(np.array([float(x) for x in g.out_degrees]))
    sqd /= np.linalg.norm(sqd)
    if s2 < CLUSTER_GAP:
        # A has rank one: every unit vector orthogonal to sqrt(d) works
        u = _unit_orthogonal(sqd)
        return SingularPair(s2, u, u.copy())
    for z in sigma2_cluster(g):
        left, right = z[:n], z[n:]
        ln, rn = np.linalg.norm(left), np.linalg.norm(right)
        if ln > 1e-6 and rn > 1e-6:
            left = left / ln
            right = right / rn
            # exact orthogonality to the top singular vector
            left -= sqd * (sqd @ left)
            right -= sqd * (sqd @ right)
            left /= np.linalg.norm(left)
            right /= np.linalg.norm(right)
            return SingularPair(s2, left, right)
    raise SpectralError("could not split a sigma2 lift eigenvector")


def stationary_distribution(g: Digraph) -> np.ndarray:
    """Float stationary distribution: direct solve for n <= 512, else power iteration."""
    for v, d in enumerate(g.out_degrees):
        if d == 0:
            raise GraphError(f"vertex {v} has zero out-degree")
    if not is_strongly_connected(g):
        raise GraphError("graph is not strongly connected")
    n = g.n
    w = random_walk_matrix(g)
    if n <= DIRECT_SOLVE_MAX_N:
        sys_m = w.T - np.eye(n)
        sys_m[-1, :] = 1.0
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        pi = np.linalg.solve(sys_m, rhs)
    else:
        lazy = (w + np.eye(n)) / 2
        pi = np.full(n, 1.0 / n)
        for _ in range(1_000_000):
            nxt = pi @ lazy
            if np.max(np.abs(nxt - pi)) <= 1e-13:
                pi = nxt
                break
            pi = nxt
        else:
            raise SpectralError("power iteration did not converge")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    return pi
