import itertools
from typing import List, Optional, Sequence, Tuple

import sympy

from prime_tiles.errors import DimensionError, InternalInconsistency, PreconditionError
from prime_tiles.zn_group import default_enumeration_bound

IntegerMatrix = List[List[int]]


def _as_vectors(points: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    vectors = [tuple(int(c) for c in pt) for pt in points]
    if not vectors:
        raise PreconditionError("no points given")
    if len({len(v) for v in vectors}) != 1:
        raise PreconditionError("points have different dimensions")
    return vectors


def differences_from_first(points: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    vectors = _as_vectors(points)
    base = vectors[0]
    return [tuple(a - b for a, b in zip(v, base)) for v in vectors[1:]]


def adjugate(V: IntegerMatrix) -> Tuple[IntegerMatrix, int]:
    """Exact adjugate V' (transposed signed cofactors) and D = det V, checked against V'V = VV' = D*I."""
    M = sympy.Matrix(V)
    if not M.is_square:
        raise PreconditionError(f"adjugate needs a square matrix, got {M.shape}")
    adj = M.adjugate()
    D = M.det()
    identity = sympy.eye(M.rows)
    if adj * M != D * identity or M * adj != D * identity:
        raise InternalInconsistency(f"adjugate relation fails for {V}")
    return [[int(v) for v in row] for row in adj.tolist()], int(D)


def check_general_position(points: Sequence[Sequence[int]]) -> bool:
    """True iff the p - 1 differences from the first point are linearly independent over Q."""
    vectors = _as_vectors(points)
    p, d = len(vectors), len(vectors[0])
    if p < 2:
        raise PreconditionError("general position needs at least two points")
    if d < p - 1:
        raise DimensionError(f"{p} points cannot be in general position in dimension {d} < {p - 1}")
    return sympy.Matrix([list(v) for v in differences_from_first(vectors)]).rank() == p - 1


def difference_determinant(points: Sequence[Sequence[int]]) -> Optional[int]:
    """det of the difference matrix when it is square (d = p - 1), else None."""
    diffs = differences_from_first(points)
    if not diffs or len(diffs) != len(diffs[0]):
        return None
    return int(sympy.Matrix([list(v) for v in diffs]).det())


def separating_functional(points: Sequence[Sequence[int]], p: int) -> Optional[List[int]]:
    """
    A vector w in {0, ..., p-1}^d such that <w, point> mod p takes p distinct values.

    First solves <w, v_i> = i (mod p) for the differences v_i from the first point on the
    first set of p - 1 coordinates whose minor is invertible mod p. If every minor
    vanishes mod p, scans Z_p^d for any separating w.
    """
    vectors = _as_vectors(points)
    diffs = differences_from_first(vectors)
    d = len(vectors[0])
    target = sympy.Matrix(list(range(1, p)))
    for cols in itertools.combinations(range(d), p - 1):
        minor = sympy.Matrix([[v[c] for c in cols] for v in diffs])
        if minor.det() % p == 0:
            continue
        solution = (minor.inv_mod(p) * target).applyfunc(lambda e: e % p)
        w = [0] * d
        for c, value in zip(cols, solution):
            w[c] = int(value)
        return w

    if p ** d > default_enumeration_bound():
        return None
    for w in itertools.product(range(p), repeat=d):
        values = {sum(a * b for a, b in zip(w, v)) % p for v in vectors}
        if len(values) == p:
            return list(w)
    return None
