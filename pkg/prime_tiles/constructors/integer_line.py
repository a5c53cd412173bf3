from dataclasses import dataclass
from typing import Optional, Sequence

from prime_tiles.errors import InternalInconsistency, PreconditionError
from prime_tiles.mask_fourier import PointMultiset, vanishes_at_root_of_unity
from prime_tiles.pair_verify import TilingCertificate, verify_tiling_direct
from prime_tiles.utils import is_prime
from prime_tiles.zn_group import GroupContext


@dataclass(frozen=True)
class LineTileDecision:
    tiles: bool
    k: Optional[int] = None
    complement_recipe: Optional[str] = None
    window: Optional[TilingCertificate] = None


def prime_size_tiles_z(A: Sequence[int], p: int) -> LineTileDecision:
    """
    Decides whether a set of p integers tiles Z.

    Such a set tiles iff Phi_{p^k} divides its mask polynomial sum z^(a - min A) for some
    k with p^(k-1) (p-1) <= diam A. The complement is then {0, ..., p^(k-1) - 1} + p^k Z,
    checked on one period Z_{p^k}.
    """
    points = sorted(int(a) for a in A)
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if len(points) != p or len(set(points)) != p:
        raise PreconditionError(f"expected {p} distinct integers, got {A}")
    low, diam = points[0], points[-1] - points[0]
    mask = [0] * (diam + 1)
    for a in points:
        mask[a - low] = 1

    k = 1
    while p ** (k - 1) * (p - 1) <= diam:
        q = p ** k
        if vanishes_at_root_of_unity(mask, q):
            block = p ** (k - 1)
            ctx = GroupContext(q, 1)
            image = PointMultiset.from_points(ctx, [(a,) for a in points])
            residues = sorted(a % q for a in points)
            expected = sorted((residues[0] % block + j * block) % q for j in range(p))
            if not image.is_set or residues != expected:
                raise InternalInconsistency(f"Phi_{q} divides the mask of {points} but residues are {residues}")
            window = verify_tiling_direct(image, PointMultiset(ctx, {(b,): 1 for b in range(block)}))
            if not window.verdict:
                raise InternalInconsistency(f"recipe for {points} fails on Z_{q} at {window.witness}")
            recipe = f"{q}Z" if block == 1 else f"{{0, ..., {block - 1}}} + {q}Z"
            return LineTileDecision(True, k, recipe, window)
        k += 1
    return LineTileDecision(False)
