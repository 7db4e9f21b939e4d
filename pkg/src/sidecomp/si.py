"""Per-fiber structural analysis.

Irreducibility and strong irreducibility tests, Jordan structure recovery
from rank sequences, similarity splitting into Jordan blocks, the
scalar-plus-nilpotent split, and a randomized idempotent-search oracle
for small dimensions.

A matrix is strongly irreducible here exactly when it is similar to a
single Jordan block: one eigenvalue cluster and geometric multiplicity
one. The commutant of such a matrix is a local algebra and carries no
nontrivial idempotents, which is what the rest of the toolkit needs.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .commutant import commutant_basis, riesz_idempotents
from .commutant import star_commutant_dim as _star_dim
from .errors import IllConditionedError
from .matcore import (
    DEFAULT_TOL,
    Tolerances,
    as_square_matrix,
    eig,
    inverse,
    op_norm,
    rank,
)

__all__ = [
    "JordanStructure",
    "SiSplit",
    "jordan_block",
    "is_irreducible",
    "is_strongly_irreducible",
    "jordan_structure",
    "si_split",
    "dunford_split",
    "brute_idempotent_search",
]


def jordan_block(lam: complex, size: int) -> np.ndarray:
    """The size x size upper Jordan block with eigenvalue ``lam``."""
    j = np.eye(size, dtype=np.complex128) * lam
    j += np.diag(np.ones(size - 1), 1) if size > 1 else 0.0
    return j


@dataclass(frozen=True)
class JordanStructure:
    """Eigenvalue clusters with their Jordan block sizes (descending)."""

    clusters: tuple[tuple[complex, tuple[int, ...]], ...]

    @property
    def dim(self) -> int:
        return sum(sum(sizes) for _, sizes in self.clusters)

    @property
    def total_blocks(self) -> int:
        return sum(len(sizes) for _, sizes in self.clusters)

    def block_list(self) -> list[tuple[complex, int]]:
        """Flat (eigenvalue, size) list in cluster order, sizes descending."""
        return [(lam, s) for lam, sizes in self.clusters for s in sizes]


@dataclass(frozen=True)
class SiSplit:
    """Similarity onto a direct sum of Jordan blocks.

    ``x @ a @ inverse(x)`` equals ``scipy.linalg.block_diag(*blocks)`` up
    to ``residual`` (absolute operator norm).
    """

    x: np.ndarray
    blocks: tuple[np.ndarray, ...]
    residual: float


def is_irreducible(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when no orthogonal projection other than 0, I commutes with
    ``a`` (joint commutant of a and a* is trivial)."""
    return _star_dim(a, tol) == 1


def is_strongly_irreducible(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when ``a`` is similar to a single Jordan block.

    Criterion: exactly one eigenvalue cluster and rank(a - lam I) = dim-1.
    """
    a = as_square_matrix(a)
    clusters = eig(a, tol)
    if len(clusters) != 1:
        return False
    n = a.shape[0]
    if n == 1:
        return True
    lam = clusters[0][0]
    return rank(a - lam * np.eye(n), tol) == n - 1


def _kernel_basis(m: np.ndarray, tol: Tolerances) -> np.ndarray:
    # absolute cutoff at the normalized scale (matrix is renormalized by the
    # caller, so sigma_max <= 1 and pure-noise powers still read as zero)
    _, s, vh = np.linalg.svd(m)
    cutoff = tol.tol_zero * max(1.0, float(s[0]) if s.size else 0.0)
    r = int(np.count_nonzero(s > cutoff))
    return vh[r:].conj().T.copy()


def _rank_sequence(a: np.ndarray, lam: complex, mult: int,
                   tol: Tolerances) -> list[int]:
    """r_k = rank((a - lam I)^k) for k = 0.. until it reaches dim - mult.

    Powers are renormalized at every step so rank thresholds stay
    meaningful (see Tolerances.tol_zero).
    """
    n = a.shape[0]
    nilp = a - lam * np.eye(n)
    floor_rank = n - mult
    norm_n = op_norm(nilp)
    if norm_n <= tol.tol_zero * max(1.0, op_norm(a)):
        # the whole space is the eigenspace: a == lam I
        return [n, floor_rank]
    base = nilp / norm_n
    ranks = [n]
    power = np.eye(n, dtype=np.complex128)
    while ranks[-1] > floor_rank:
        power = power @ base
        pnorm = op_norm(power)
        if pnorm > 0.0:
            power = power / pnorm
        r = max(rank(power, tol, floor=1.0), floor_rank)
        if r >= ranks[-1] or len(ranks) > n:
            raise IllConditionedError(
                f"rank sequence for eigenvalue {lam:.6g} does not decrease "
                f"({ranks + [r]}); Jordan structure is unreliable here"
            )
        ranks.append(r)
    return ranks


def _sizes_from_ranks(ranks: list[int], mult: int) -> tuple[int, ...]:
    ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    if any(ge[k] < ge[k + 1] for k in range(len(ge) - 1)):
        raise IllConditionedError(f"inconsistent rank sequence {ranks}")
    sizes: list[int] = []
    for k, count_ge in enumerate(ge, start=1):
        exact = count_ge - (ge[k] if k < len(ge) else 0)
        sizes.extend([k] * exact)
    if sum(sizes) != mult:
        raise IllConditionedError(
            f"block sizes {sizes} do not account for multiplicity {mult}"
        )
    return tuple(sorted(sizes, reverse=True))


def jordan_structure(a, tol: Tolerances = DEFAULT_TOL) -> JordanStructure:
    """Jordan block sizes per eigenvalue cluster, from rank sequences.

    The number of blocks of size >= k for a cluster equals
    r_{k-1} - r_k where r_k = rank((a - lam I)^k).
    """
    a = as_square_matrix(a)
    out = []
    for lam, mult in eig(a, tol):
        ranks = _rank_sequence(a, lam, mult, tol)
        out.append((lam, _sizes_from_ranks(ranks, mult)))
    return JordanStructure(clusters=tuple(out))


def _range_basis(p: np.ndarray, r: int) -> np.ndarray:
    n = p.shape[0]
    if r == n:
        return np.eye(n, dtype=np.complex128)
    u, _, _ = np.linalg.svd(p)
    return u[:, :r].copy()


def _jordan_chains(nilp: np.ndarray, scale: float,
                   tol: Tolerances) -> list[np.ndarray]:
    """Chain bases for a (numerically) nilpotent matrix.

    Returns one (m, h) array per chain, columns ordered bottom-first, so
    that nilp maps column i+1 to column i exactly and column 0 into the
    kernel. Chains come out tallest first.
    """
    m = nilp.shape[0]
    norm_n = op_norm(nilp)
    if norm_n <= tol.tol_zero * max(1.0, scale):
        return [np.eye(m, dtype=np.complex128)[:, j:j + 1] for j in range(m)]

    base = nilp / norm_n
    kers = [np.zeros((m, 0), dtype=np.complex128)]
    ranks = [m]
    power = np.eye(m, dtype=np.complex128)
    while ranks[-1] > 0:
        power = power @ base
        pnorm = op_norm(power)
        if pnorm > 0.0:
            power = power / pnorm
        k_basis = _kernel_basis(power, tol)
        kers.append(k_basis)
        r = m - k_basis.shape[1]
        if r >= ranks[-1] or len(ranks) > m:
            raise IllConditionedError(
                "nilpotent rank sequence does not decrease; "
                "chain construction is unreliable here"
            )
        ranks.append(r)
    q = len(ranks) - 1  # nilpotency index = tallest chain

    chains: list[tuple[int, np.ndarray]] = []  # (height, top vector)
    for j in range(q, 0, -1):
        want_ge_j = ranks[j - 1] - ranks[j]
        need = want_ge_j - len(chains)
        if need <= 0:
            continue
        pool = kers[j]
        obst_cols = [kers[j - 1]]
        for height, top in chains:
            vec = top
            for _ in range(height - j):
                vec = base @ vec
            obst_cols.append(vec[:, None] / max(np.linalg.norm(vec), 1e-300))
        obst = np.hstack(obst_cols)
        if obst.shape[1]:
            q_obst, r_obst = np.linalg.qr(obst)
            keep = np.abs(np.diag(r_obst)) > tol.tol_zero
            q_obst = q_obst[:, keep]
            resid = pool - q_obst @ (q_obst.conj().T @ pool)
        else:
            resid = pool
        _, rr, piv = scipy.linalg.qr(resid, mode="economic", pivoting=True)
        diag = np.abs(np.diag(rr))
        if diag.size < need or diag[need - 1] <= tol.tol_zero:
            raise IllConditionedError(
                "could not select independent Jordan chain tops"
            )
        for idx in piv[:need]:
            chains.append((j, pool[:, idx].copy()))

    chains.sort(key=lambda hc: -hc[0])
    out = []
    total = 0
    for height, top in chains:
        vecs = [top]
        for _ in range(height - 1):
            vecs.append(nilp @ vecs[-1])
        w = np.stack(vecs[::-1], axis=1)
        # uniform chain scaling preserves the exact unit superdiagonal
        w = w / max(float(np.linalg.norm(w, axis=0).max()), 1e-300)
        out.append(w)
        total += height
    if total != m:
        raise IllConditionedError(
            f"chains of total length {total} do not fill dimension {m}"
        )
    return out


def si_split(a, tol: Tolerances = DEFAULT_TOL) -> SiSplit:
    """Similarity bringing ``a`` to a direct sum of Jordan blocks.

    Blocks are returned as exact Jordan matrices (cluster-mean eigenvalue
    on the diagonal, unit superdiagonal); the reconstruction residual
    ``||x a x^{-1} - blocks||`` is reported, not hidden.
    """
    a = as_square_matrix(a)
    clusters = eig(a, tol)
    projectors = riesz_idempotents(a, tol)
    scale = max(op_norm(a), 1.0)

    cols = []
    blocks = []
    for (lam, mult), proj in zip(clusters, projectors):
        u = _range_basis(proj, mult)
        comp = u.conj().T @ a @ u
        for chain in _jordan_chains(comp - lam * np.eye(mult), scale, tol):
            cols.append(u @ chain)
            blocks.append(jordan_block(lam, chain.shape[1]))
    v = np.hstack(cols)
    x = inverse(v, tol)
    residual = float(
        np.linalg.norm(x @ a @ v - scipy.linalg.block_diag(*blocks), 2)
    )
    return SiSplit(x=x, blocks=tuple(blocks), residual=residual)


def dunford_split(a, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Split into diagonalizable part S and nilpotent part R = a - S.

    S is the sum of cluster-mean eigenvalues times their spectral
    idempotents; R is literally the remaining difference (no cleanup), so
    S + R reproduces ``a`` to the last bit of the one subtraction.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    clusters = eig(a, tol)
    if len(clusters) == 1:
        s = clusters[0][0] * np.eye(n, dtype=np.complex128)
    else:
        s = np.zeros((n, n), dtype=np.complex128)
        for (lam, _), proj in zip(clusters, riesz_idempotents(a, tol)):
            s += lam * proj
    return s, a - s


def brute_idempotent_search(a, trials: int, tol: Tolerances = DEFAULT_TOL,
                            seed: int = 0) -> list[np.ndarray]:
    """Randomized search for nontrivial idempotents in {a}'.

    Parametrizes P = sum c_m B_m over a commutant basis and runs damped
    Newton on P^2 = P from ``trials`` random starts (per-trial stream
    seeded by (seed, trial), so results do not depend on execution order).
    Returns deduplicated nontrivial solutions. An empty result over many
    trials is evidence, not proof, of strong irreducibility.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    if n > 6:
        raise ValueError("idempotent search oracle is restricted to dim <= 6")
    if trials < 1:
        raise ValueError("trials must be positive")

    basis_obj = commutant_basis(a, tol)
    d = basis_obj.dimension
    if d == 1:
        return []
    basis = np.stack(basis_obj.elements)

    starts = np.empty((trials, d), dtype=np.complex128)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        starts[t] = rng.standard_normal(d) + 1j * rng.standard_normal(d)

    coeffs, converged = _kernels.newton_search(
        basis, starts, max_iter=100, damping=0.5, ftol=1e-13
    )

    eye = np.eye(n)
    found: list[np.ndarray] = []
    units: list[np.ndarray] = []
    for t in range(trials):
        if not converged[t]:
            continue
        p = np.tensordot(coeffs[t], basis, axes=1)
        pnorm = float(np.linalg.norm(p))
        if pnorm < 0.5 or np.linalg.norm(p - eye) < 0.5:
            continue  # 0 or I; nonzero idempotents have norm >= 1
        if np.linalg.norm(p @ p - p) > tol.tol_zero * max(1.0, pnorm ** 2):
            continue
        unit = p / pnorm
        if any(np.linalg.norm(unit - u) <= 1e-6 for u in units):
            continue
        found.append(p)
        units.append(unit)
    return found
