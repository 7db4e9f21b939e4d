"""Commutants, star-commutants, and spectral (Riesz) idempotents of a
single matrix.

The commutant {A}' = {B : AB = BA} is computed as the kernel of the
Sylvester map X -> XA - AX; the spectral idempotent of an eigenvalue
cluster comes from a reordered complex Schur form and one Sylvester solve
for the coupling block, which stays robust for clustered spectra.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConsistencyError, IllConditionedError
from .matcore import DEFAULT_TOL, Tolerances, as_square_matrix, eig, nullspace

__all__ = [
    "CommutantBasis",
    "commutant_basis",
    "star_commutant_dim",
    "riesz_idempotents",
]

# pairs checked exhaustively for closure up to this basis dimension
_CLOSURE_FULL_DIM = 64


@dataclass(frozen=True)
class CommutantBasis:
    """Linearly independent matrices spanning {base}'.

    Elements are orthonormal in the Frobenius inner product, so projection
    onto the span is a plain Gram contraction.
    """

    base: np.ndarray
    elements: tuple[np.ndarray, ...]

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def contains(self, m, tol: Tolerances = DEFAULT_TOL) -> bool:
        """Whether ``m`` lies in the span, within tolerance."""
        v = np.asarray(m, dtype=np.complex128).reshape(-1)
        q = np.stack([e.reshape(-1) for e in self.elements], axis=1)
        resid = v - q @ (q.conj().T @ v)
        return float(np.linalg.norm(resid)) <= tol.tol_zero * max(
            1.0, float(np.linalg.norm(v))
        )


def _sylvester_operator(a: np.ndarray) -> np.ndarray:
    # row-major vec: vec(XA - AX) = (I (x) A^T - A (x) I) vec(X)
    n = a.shape[0]
    eye = np.eye(n)
    return np.kron(eye, a.T) - np.kron(a, eye)


def _check_closure(kernel: np.ndarray, elements, tol: Tolerances):
    d = len(elements)
    if d <= _CLOSURE_FULL_DIM:
        pairs = [(i, j) for i in range(d) for j in range(d)]
    else:
        stride = max(1, d // _CLOSURE_FULL_DIM)
        idx = range(0, d, stride)
        pairs = [(i, j) for i in idx for j in idx]
    for i, j in pairs:
        prod = (elements[i] @ elements[j]).reshape(-1)
        resid = prod - kernel @ (kernel.conj().T @ prod)
        if float(np.linalg.norm(resid)) > tol.tol_zero * max(
            1.0, float(np.linalg.norm(prod))
        ):
            raise ConsistencyError(
                f"computed commutant basis is not closed under products "
                f"(pair {i},{j}, residual {np.linalg.norm(resid):.3e})"
            )


def commutant_basis(a, tol: Tolerances = DEFAULT_TOL) -> CommutantBasis:
    """Basis of the commutant {a}'.

    The span is verified to be closed under multiplication; failure raises
    ConsistencyError rather than silently returning a non-algebra.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    kernel = nullspace(_sylvester_operator(a), tol)
    elements = tuple(kernel[:, j].reshape(n, n).copy() for j in range(kernel.shape[1]))
    if not elements:
        raise ConsistencyError("commutant came out empty; it must contain I")
    _check_closure(kernel, elements, tol)
    return CommutantBasis(base=a, elements=elements)


def star_commutant_dim(a, tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of {X : XA = AX and XA* = A*X}.

    Equals 1 exactly when A is irreducible (no nontrivial orthogonal
    projections commute with it).
    """
    a = as_square_matrix(a)
    stacked = np.vstack([_sylvester_operator(a), _sylvester_operator(a.conj().T)])
    return nullspace(stacked, tol).shape[1]


def riesz_idempotents(a, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """One spectral idempotent per eigenvalue cluster of ``a``.

    The family resolves the identity, is pairwise annihilating, commutes
    with ``a``, and each member projects onto the generalized eigenspace of
    its cluster. Order matches :func:`sidecomp.matcore.eig`.

    Raises
    ------
    IllConditionedError
        Propagated from eigenvalue clustering, or when the Schur reorder
        disagrees with the clustering.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    clusters = eig(a, tol)
    if len(clusters) == 1:
        return [np.eye(n, dtype=np.complex128)]

    means = np.array([c[0] for c in clusters])
    out = []
    for k, (_, mult) in enumerate(clusters):

        def in_cluster(z, _k=k):
            return int(np.argmin(np.abs(means - z))) == _k

        t, z, sdim = scipy.linalg.schur(a, output="complex", sort=in_cluster)
        if sdim != mult:
            raise IllConditionedError(
                f"Schur reordering selected {sdim} eigenvalues for a cluster "
                f"of multiplicity {mult}; clustering is unreliable here"
            )
        t11, t12, t22 = t[:sdim, :sdim], t[:sdim, sdim:], t[sdim:, sdim:]
        y = scipy.linalg.solve_sylvester(t11, -t22, t12)
        p_schur = np.zeros((n, n), dtype=np.complex128)
        p_schur[:sdim, :sdim] = np.eye(sdim)
        p_schur[:sdim, sdim:] = y
        out.append(z @ p_schur @ z.conj().T)
    return out
