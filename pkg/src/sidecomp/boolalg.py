"""Abelian Boolean algebras of idempotents.

Lattice operations (P v Q = P + Q - PQ, P ^ Q = PQ, P^c = I - P),
generation of the finite algebra spanned by commuting seeds, norm bounds
over all elements, the explicit orthogonalizing similarity
X = sqrt(sum_j E_j* E_j), and maximality certification through strongly
irreducible compressions.

The orthogonalizer comes from the identity S E_j = E_j* S for
S = sum_j E_j* E_j over atoms resolving the identity: conjugation by
S^(1/2) then makes every element of the algebra Hermitian.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConsistencyError,
    NotCommutingError,
    NotIdempotentError,
    NotInCommutantError,
    NotPDError,
)
from .matcore import DEFAULT_TOL, Tolerances, as_square_matrix, op_norm, pd_sqrt
from .si import is_strongly_irreducible

__all__ = [
    "IdempotentAlgebra",
    "MaximalityReport",
    "join",
    "meet",
    "complement",
    "generate",
    "from_atoms",
    "algebra_bound",
    "orthogonalize",
    "is_maximal_in_commutant",
]

# exhaustive element enumeration is exponential; cap per the desk-scale
# policy and fall back to atoms + singleton complements beyond it
ENUMERATION_CAP = 20


def _require_idempotent(p: np.ndarray, tol: Tolerances, what: str = "matrix"):
    defect = op_norm(p @ p - p)
    scale = max(1.0, op_norm(p) ** 2)
    if defect > tol.tol_zero * scale:
        raise NotIdempotentError(
            f"{what} is not idempotent (defect {defect:.3e} at scale {scale:.3e})"
        )


def _require_commuting(p: np.ndarray, q: np.ndarray, tol: Tolerances):
    defect = op_norm(p @ q - q @ p)
    scale = max(1.0, op_norm(p) * op_norm(q))
    if defect > tol.tol_zero * scale:
        raise NotCommutingError(
            f"operators do not commute (defect {defect:.3e} at scale {scale:.3e})"
        )


def join(p, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Lattice join P + Q - PQ of commuting idempotents."""
    p, q = as_square_matrix(p), as_square_matrix(q)
    _require_idempotent(p, tol)
    _require_idempotent(q, tol)
    _require_commuting(p, q, tol)
    return p + q - p @ q


def meet(p, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Lattice meet PQ of commuting idempotents."""
    p, q = as_square_matrix(p), as_square_matrix(q)
    _require_idempotent(p, tol)
    _require_idempotent(q, tol)
    _require_commuting(p, q, tol)
    return p @ q


def complement(p, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """I - P."""
    p = as_square_matrix(p)
    _require_idempotent(p, tol)
    return np.eye(p.shape[0], dtype=np.complex128) - p


@dataclass(frozen=True)
class IdempotentAlgebra:
    """Finite abelian Boolean algebra given by its atoms.

    Atoms are the minimal nonzero idempotents: pairwise annihilating,
    commuting, and summing to the identity. Every element is the sum of a
    subset of atoms. ``bound`` is the max operator norm over all elements
    (over atoms and singleton complements only when ``bound_capped``).
    """

    dim: int
    atoms: tuple[np.ndarray, ...] = field(repr=False)
    bound: float
    bound_capped: bool = False

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def elements(self):
        """Yield all 2^k elements (including 0 and I) as matrices."""
        zero = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for mask in range(2 ** self.n_atoms):
            total = zero.copy()
            for j in range(self.n_atoms):
                if mask >> j & 1:
                    total = total + self.atoms[j]
            yield total


def from_atoms(atoms, tol: Tolerances = DEFAULT_TOL) -> IdempotentAlgebra:
    """Validate atoms and build the algebra they span."""
    mats = [as_square_matrix(a) for a in atoms]
    if not mats:
        raise ValueError("an algebra needs at least one atom")
    n = mats[0].shape[0]
    if any(m.shape[0] != n for m in mats):
        raise ValueError("atoms must share one dimension")
    for j, m in enumerate(mats):
        _require_idempotent(m, tol, what=f"atom {j}")
    for j in range(len(mats)):
        for k in range(j + 1, len(mats)):
            prod = max(op_norm(mats[j] @ mats[k]), op_norm(mats[k] @ mats[j]))
            scale = max(1.0, op_norm(mats[j]) * op_norm(mats[k]))
            if prod > tol.tol_zero * scale:
                raise NotCommutingError(
                    f"atoms {j},{k} do not annihilate (|EF| = {prod:.3e})"
                )
    total = sum(mats)
    resolution = op_norm(total - np.eye(n))
    if resolution > tol.tol_zero * max(1.0, sum(op_norm(m) for m in mats)):
        raise ConsistencyError(
            f"atoms do not resolve the identity (defect {resolution:.3e})"
        )
    bound, capped = algebra_bound(mats)
    return IdempotentAlgebra(dim=n, atoms=tuple(mats), bound=bound,
                             bound_capped=capped)


def generate(seeds, tol: Tolerances = DEFAULT_TOL) -> IdempotentAlgebra:
    """Boolean algebra generated by pairwise commuting idempotent seeds.

    Atoms are the nonzero products of seeds and their complements over all
    sign patterns; distinct patterns always give distinct atoms, so no
    deduplication is needed. Atom count is at most 2^len(seeds) and at
    most the dimension.
    """
    mats = [as_square_matrix(s) for s in seeds]
    if not mats:
        raise ValueError("need at least one seed")
    n = mats[0].shape[0]
    if any(m.shape[0] != n for m in mats):
        raise ValueError("seeds must share one dimension")
    for j, m in enumerate(mats):
        _require_idempotent(m, tol, what=f"seed {j}")
    for j in range(len(mats)):
        for k in range(j + 1, len(mats)):
            _require_commuting(mats[j], mats[k], tol)

    eye = np.eye(n, dtype=np.complex128)
    atoms = []
    for pattern in range(2 ** len(mats)):
        prod = eye.copy()
        for j, m in enumerate(mats):
            prod = prod @ (m if pattern >> j & 1 else eye - m)
        # nonzero idempotents have operator norm >= 1
        if op_norm(prod) > 0.5:
            atoms.append(prod)
    return from_atoms(atoms, tol)


def algebra_bound(atoms, cap: int = ENUMERATION_CAP) -> tuple[float, bool]:
    """Max operator norm over all subset sums of the atoms.

    Exhaustive (Gray-code walk) up to ``cap`` atoms; beyond that, returns
    the max over atoms and singleton complements with the capped flag set.
    """
    mats = [as_square_matrix(a) for a in atoms]
    k = len(mats)
    if k == 0:
        return 0.0, False
    n = mats[0].shape[0]
    if k > cap:
        best = 1.0
        total = sum(mats)
        for m in mats:
            best = max(best, op_norm(m), op_norm(total - m))
        return best, True

    best = 0.0
    current = np.zeros((n, n), dtype=np.complex128)
    members = [False] * k
    for i in range(1, 2 ** k):
        j = (i & -i).bit_length() - 1  # Gray code: flip one atom per step
        if members[j]:
            current = current - mats[j]
        else:
            current = current + mats[j]
        members[j] = not members[j]
        best = max(best, op_norm(current))
    return best, False


def orthogonalize(alg: IdempotentAlgebra, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Positive definite X with X E X^{-1} Hermitian for every element E.

    X is the PD square root of S = sum_j E_j* E_j over the atoms; S is PD
    whenever the atoms resolve the identity, and S E_j = E_j* S makes the
    conjugates Hermitian.
    """
    s = np.zeros((alg.dim, alg.dim), dtype=np.complex128)
    for e in alg.atoms:
        s += e.conj().T @ e
    try:
        return pd_sqrt(s, tol)
    except NotPDError as exc:
        raise ConsistencyError(
            f"atom Gram sum is not positive definite ({exc}); "
            "the algebra does not resolve the identity"
        ) from exc


@dataclass(frozen=True)
class MaximalityReport:
    is_maximal: bool
    atom_si: tuple[bool, ...]
    failing_atoms: tuple[int, ...]


def _compression(a: np.ndarray, atom: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    r = int(round(np.trace(atom).real))
    if r <= 0 or r > n:
        raise ConsistencyError(f"atom trace {np.trace(atom):.6g} is not a rank")
    if r == n:
        return a
    u, _, _ = np.linalg.svd(atom)
    u = u[:, :r]
    return u.conj().T @ a @ u


def is_maximal_in_commutant(a, alg: IdempotentAlgebra,
                            tol: Tolerances = DEFAULT_TOL) -> MaximalityReport:
    """Certify maximality of the algebra inside {a}'.

    The algebra is maximal abelian among idempotent families in {a}' iff
    each atom compresses ``a`` to a strongly irreducible operator; the
    compression is taken in an orthonormal basis of the atom's range
    (invariant for ``a`` because atom and matrix commute).

    Raises
    ------
    NotInCommutantError
        If some atom fails to commute with ``a``.
    """
    a = as_square_matrix(a)
    for j, atom in enumerate(alg.atoms):
        defect = op_norm(atom @ a - a @ atom)
        if defect > tol.tol_zero * max(1.0, op_norm(atom) * op_norm(a)):
            raise NotInCommutantError(
                f"atom {j} does not commute with the matrix (defect {defect:.3e})"
            )
    verdicts = tuple(
        is_strongly_irreducible(_compression(a, atom), tol) for atom in alg.atoms
    )
    failing = tuple(j for j, ok in enumerate(verdicts) if not ok)
    return MaximalityReport(is_maximal=not failing, atom_si=verdicts,
                            failing_atoms=failing)
