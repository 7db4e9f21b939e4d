"""The sampled direct-integral layer.

A partitioned sample space is a finite list of labeled, weighted points,
each carrying a fiber dimension; an operator field assigns a matrix of
that dimension to every point. Norms are discrete essential suprema
(weights never affect them: every point has positive measure), and the
decomposability criterion is commutation with the diagonal indicators of
the points.
"""

from dataclasses import dataclass, field as dc_field
from typing import Any, Mapping

import numpy as np

from .errors import NotBlockDiagonalizableError, TooLargeError
from .matcore import DEFAULT_TOL, Tolerances, as_square_matrix, cond, inverse, op_norm

__all__ = [
    "SamplePoint",
    "PartitionedSpace",
    "OperatorField",
    "IdempotentField",
    "FiberSplit",
    "field_norm",
    "assemble",
    "commutes_with_diagonal",
    "field_bound",
    "repartition",
    "ASSEMBLE_MAX_DIM",
]

ASSEMBLE_MAX_DIM = 512


@dataclass(frozen=True)
class SamplePoint:
    """One cell of the sampled measure space."""

    label: Any
    weight: float
    dim: int

    def __post_init__(self):
        if not (isinstance(self.weight, (int, float)) and self.weight > 0):
            raise ValueError(f"weight must be positive, got {self.weight!r}")
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise ValueError(f"fiber dimension must be a positive int, got {self.dim!r}")
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class PartitionedSpace:
    """Finite list of sample points with unique labels."""

    points: tuple[SamplePoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise ValueError("a partitioned space needs at least one point")
        labels = [p.label for p in pts]
        if len(set(labels)) != len(labels):
            raise ValueError("point labels must be unique")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def labels(self) -> list:
        return [p.label for p in self.points]

    @property
    def total_dim(self) -> int:
        return sum(p.dim for p in self.points)

    def offsets(self) -> list[tuple[int, int]]:
        """(start, stop) index ranges of each point in the assembled space."""
        out, pos = [], 0
        for p in self.points:
            out.append((pos, pos + p.dim))
            pos += p.dim
        return out

    def index_of(self, label) -> int:
        for i, p in enumerate(self.points):
            if p.label == label:
                return i
        raise KeyError(f"no point labeled {label!r}")


@dataclass(frozen=True)
class OperatorField:
    """One matrix per sample point (a sampled decomposable operator)."""

    space: PartitionedSpace
    fibers: tuple[np.ndarray, ...] = dc_field(repr=False)

    def __post_init__(self):
        fibs = tuple(as_square_matrix(f) for f in self.fibers)
        if len(fibs) != len(self.space):
            raise ValueError(
                f"{len(fibs)} fibers for {len(self.space)} points"
            )
        for p, f in zip(self.space.points, fibs):
            if f.shape[0] != p.dim:
                raise ValueError(
                    f"fiber at {p.label!r} has dim {f.shape[0]}, expected {p.dim}"
                )
        for f in fibs:
            f.flags.writeable = False
        object.__setattr__(self, "fibers", fibs)

    def fiber(self, label) -> np.ndarray:
        return self.fibers[self.space.index_of(label)]

    def items(self):
        return zip(self.space.points, self.fibers)


class IdempotentField(OperatorField):
    """Operator field whose fibers are all idempotent (at default
    tolerances; validate separately for exotic settings)."""

    def __post_init__(self):
        super().__post_init__()
        for p, f in zip(self.space.points, self.fibers):
            defect = op_norm(f @ f - f)
            if defect > DEFAULT_TOL.tol_zero * max(1.0, op_norm(f) ** 2):
                raise ValueError(
                    f"fiber at {p.label!r} is not idempotent (defect {defect:.3e})"
                )


def field_norm(f: OperatorField) -> float:
    """Discrete essential supremum: max fiber operator norm."""
    return max(op_norm(fib) for fib in f.fibers)


def assemble(f: OperatorField, max_dim: int = ASSEMBLE_MAX_DIM) -> np.ndarray:
    """Block-diagonal matrix of all fibers, in point order.

    Raises TooLargeError beyond ``max_dim`` total dimensions; the
    assembled form exists for cross-validation, not production work.
    """
    total = f.space.total_dim
    if total > max_dim:
        raise TooLargeError(f"assembled dimension {total} exceeds {max_dim}")
    out = np.zeros((total, total), dtype=np.complex128)
    for (start, stop), fib in zip(f.space.offsets(), f.fibers):
        out[start:stop, start:stop] = fib
    return out


def commutes_with_diagonal(q, f: OperatorField,
                           tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether ``q`` commutes with every diagonal point indicator.

    Equivalent to ``q`` being block-diagonal along the point partition,
    i.e. decomposable over this space.
    """
    q = as_square_matrix(q)
    total = f.space.total_dim
    if q.shape[0] != total:
        raise ValueError(f"expected dimension {total}, got {q.shape[0]}")
    off = q.copy()
    for start, stop in f.space.offsets():
        off[start:stop, start:stop] = 0.0
    return op_norm(off) <= tol.tol_zero * max(1.0, op_norm(q))


def field_bound(fields) -> float:
    """Max fiber norm over a family of fields; 0 for an empty family."""
    best = 0.0
    for f in fields:
        best = max(best, field_norm(f))
    return best


@dataclass(frozen=True)
class FiberSplit:
    """Requested split of one fiber: block dims under a supplied similarity.

    ``similarity @ fiber @ inverse(similarity)`` must be block diagonal
    with the stated dims.
    """

    dims: tuple[int, ...]
    similarity: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"bad block dims {self.dims!r}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "similarity", as_square_matrix(self.similarity))


def repartition(f: OperatorField, splits: Mapping[Any, FiberSplit],
                tol: Tolerances = DEFAULT_TOL) -> OperatorField:
    """Split fibers into direct summands and rewire the sample space.

    Each split point is replaced by one point per block (labels suffixed
    ``#k``, weight copied: the measure of the cell is unchanged); the new
    fibers are the diagonal blocks of the conjugated fiber. Point order is
    preserved. Empty ``splits`` returns the field unchanged.

    Raises
    ------
    NotBlockDiagonalizableError
        When a supplied similarity leaves off-diagonal residue above
        ``tol_zero * cond(similarity) * max(1, ||fiber||)``.
    """
    if not splits:
        return f
    for label in splits:
        f.space.index_of(label)  # KeyError early for unknown labels

    new_points = []
    new_fibers = []
    for point, fib in f.items():
        if point.label not in splits:
            new_points.append(point)
            new_fibers.append(fib)
            continue
        split = splits[point.label]
        if sum(split.dims) != point.dim:
            raise NotBlockDiagonalizableError(
                f"split dims {split.dims} do not sum to fiber dim {point.dim} "
                f"at {point.label!r}"
            )
        x = split.similarity
        if x.shape[0] != point.dim:
            raise NotBlockDiagonalizableError(
                f"similarity at {point.label!r} has dim {x.shape[0]}, "
                f"expected {point.dim}"
            )
        b = x @ fib @ inverse(x, tol)
        off = b.copy()
        pos = 0
        blocks = []
        for d in split.dims:
            blocks.append(b[pos:pos + d, pos:pos + d].copy())
            off[pos:pos + d, pos:pos + d] = 0.0
            pos += d
        residue = op_norm(off)
        allowed = tol.tol_zero * cond(x) * max(1.0, op_norm(fib))
        if residue > allowed:
            raise NotBlockDiagonalizableError(
                f"off-diagonal residue {residue:.3e} at {point.label!r} "
                f"exceeds {allowed:.3e}; the similarity does not split this fiber"
            )
        for k, (d, blk) in enumerate(zip(split.dims, blocks)):
            new_points.append(
                SamplePoint(label=f"{point.label}#{k}", weight=point.weight, dim=d)
            )
            new_fibers.append(blk)
    return OperatorField(space=PartitionedSpace(points=tuple(new_points)),
                         fibers=tuple(new_fibers))
