"""Dense complex matrix kernels the rest of the toolkit builds on.

Spectral norms, clustered eigenvalues, SVD-thresholded nullspaces and
ranks, positive definite square roots, and guarded inversion. All
functions are pure: inputs are never mutated and results are fresh
arrays.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedError, NotPDError, SingularMatrixError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "as_square_matrix",
    "op_norm",
    "cond",
    "eig",
    "nullspace",
    "rank",
    "pd_sqrt",
    "inverse",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy shared by every operation.

    tol_zero
        Relative threshold below which residuals and singular values count
        as zero.
    tol_cluster
        Relative radius (times the operator norm) used to merge eigenvalues
        into clusters; repeated-eigenvalue detection is exact in theory and
        must be made robust here.
    max_cond
        Condition-number cap; inversions beyond it are refused.
    """

    tol_zero: float = 1e-10
    tol_cluster: float = 1e-8
    max_cond: float = 1e12

    def __post_init__(self):
        if not (self.tol_zero > 0 and self.tol_cluster > 0 and self.max_cond > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.tol_zero > self.tol_cluster:
            raise ValueError("tol_zero must not exceed tol_cluster")


DEFAULT_TOL = Tolerances()


def as_square_matrix(m) -> np.ndarray:
    """Validate and convert to a square complex128 array."""
    a = np.array(m, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def op_norm(m) -> float:
    """Largest singular value (the operator norm induced by l2)."""
    a = as_square_matrix(m)
    return float(np.linalg.norm(a, 2))


def cond(m) -> float:
    """2-norm condition number; inf when numerically singular."""
    s = np.linalg.svd(as_square_matrix(m), compute_uv=False)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def _single_linkage(values: np.ndarray, radius: float) -> np.ndarray:
    """Single-linkage clustering of complex points; returns cluster labels."""
    n = values.size
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    return np.array([find(i) for i in range(n)])


def eig(m, tol: Tolerances = DEFAULT_TOL) -> list[tuple[complex, int]]:
    """Eigenvalues grouped into clusters of single-linkage diameter
    ``tol_cluster * op_norm(m)``.

    Returns ``[(cluster mean, multiplicity), ...]`` sorted by (real, imag)
    of the mean; multiplicities sum to the dimension.

    Raises
    ------
    IllConditionedError
        When two distinct clusters sit within twice the clustering radius
        of each other, so the grouping would flip under a perturbation
        comparable to the radius.
    """
    a = as_square_matrix(m)
    values = np.linalg.eigvals(a)
    radius = tol.tol_cluster * float(np.linalg.norm(a, 2))
    labels = _single_linkage(values, radius)

    groups: dict[int, np.ndarray] = {}
    for lab in np.unique(labels):
        groups[int(lab)] = values[labels == lab]

    keys = list(groups)
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            gap = np.abs(groups[keys[i]][:, None] - groups[keys[j]][None, :]).min()
            if gap < 2.0 * radius:
                raise IllConditionedError(
                    f"eigenvalue clusters separated by {gap:.3e}, within a factor "
                    f"2 of the clustering radius {radius:.3e}; adjust tol_cluster"
                )

    clusters = [(complex(g.mean()), int(g.size)) for g in groups.values()]
    clusters.sort(key=lambda c: (c[0].real, c[0].imag))
    return clusters


def nullspace(l, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``{v : ||Lv|| <= tol_zero * ||L||}``.

    Accepts any 2-d matrix (maps between spaces of different dimension are
    allowed). Returns an array with the basis as columns; shape (n, 0) when
    the kernel is trivial.
    """
    a = np.array(l, dtype=np.complex128, order="C")
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    _, s, vh = np.linalg.svd(a)
    cutoff = tol.tol_zero * (s[0] if s.size else 0.0)
    r = int(np.count_nonzero(s > cutoff))
    return vh[r:].conj().T.copy()


def rank(m, tol: Tolerances = DEFAULT_TOL, floor: float = 0.0) -> int:
    """SVD rank with cutoff ``tol_zero * max(sigma_max, floor)``.

    ``floor`` anchors the threshold when the matrix itself may be pure
    rounding noise (e.g. high powers of a normalized nilpotent part).
    """
    a = np.array(m, dtype=np.complex128, order="C")
    s = np.linalg.svd(a, compute_uv=False)
    cutoff = tol.tol_zero * max(float(s[0]) if s.size else 0.0, floor)
    return int(np.count_nonzero(s > cutoff))


def pd_sqrt(s, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unique positive definite square root of a Hermitian PD matrix.

    Raises
    ------
    NotPDError
        If ``s`` is not Hermitian within ``tol_zero * ||s||`` or its
        smallest eigenvalue is not above ``tol_zero * ||s||``.
    """
    a = as_square_matrix(s)
    scale = float(np.linalg.norm(a, 2))
    asym = float(np.linalg.norm(a - a.conj().T, 2))
    if scale == 0.0 or asym > tol.tol_zero * scale:
        raise NotPDError(f"matrix is not Hermitian within tolerance "
                         f"(asymmetry {asym:.3e} vs scale {scale:.3e})")
    herm = (a + a.conj().T) / 2.0
    w, v = np.linalg.eigh(herm)
    if w[0] <= tol.tol_zero * scale:
        raise NotPDError(f"matrix is not positive definite "
                         f"(min eigenvalue {w[0]:.3e} vs scale {scale:.3e})")
    x = (v * np.sqrt(w)) @ v.conj().T
    return (x + x.conj().T) / 2.0


def inverse(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Inverse, refused when the condition number exceeds ``max_cond``.

    Raises
    ------
    SingularMatrixError
        If the smallest singular value is at most ``op_norm(m)/max_cond``.
    """
    a = as_square_matrix(m)
    u, s, vh = np.linalg.svd(a)
    if s[-1] <= s[0] / tol.max_cond:
        raise SingularMatrixError(
            f"condition number beyond cap {tol.max_cond:.1e} "
            f"(singular values {s[0]:.3e} .. {s[-1]:.3e})"
        )
    return (vh.conj().T / s) @ u.conj().T
