import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from prime_tiles.constructors.linear import check_general_position, separating_functional
from prime_tiles.constructors.spectrum import prime_tile_spectrum
from prime_tiles.errors import (
    DimensionError,
    EnumerationBoundExceeded,
    InternalInconsistency,
    NotConstructed,
    NotInGeneralPosition,
    PreconditionError,
    SearchBudgetExceeded,
)
from prime_tiles.mask_fourier import PointMultiset, class_annihilated, project_multiset
from prime_tiles.pair_verify import (
    SpectralCertificate,
    TilingCertificate,
    default_search_bound,
    search_tiling_complement,
    verify_spectral,
    verify_tiling_direct,
)
from prime_tiles.utils import format_point, is_prime, is_prime_power_of
from prime_tiles.zn_group import (
    GroupContext,
    GroupElement,
    SubgroupDesc,
    cyclic_span,
    equivalence_classes,
    orthogonal_group,
    subgroup_span,
)

FALLBACK_NODE_BUDGET = 10_000


def fourier_matrix_columns(p: int) -> List[GroupElement]:
    """
    Columns u_1, ..., u_{p-1} of the Vandermonde matrix over F_p with nodes 1, ..., p-1
    (the (p-1)-st roots of unity of F_p): u_j = (node^(j-1) mod p)_node, so u_1 is all ones.
    """
    return [tuple(pow(node, j, p) for node in range(1, p)) for j in range(p - 1)]


@dataclass(frozen=True)
class SimplexPair:
    A: PointMultiset
    B: SubgroupDesc
    S: Tuple[GroupElement, ...]
    tiling: TilingCertificate
    spectral: SpectralCertificate


def simplex_points(p: int) -> List[GroupElement]:
    """{0, e_1, 2e_2, ..., (p-1)e_{p-1}} in Z_p^{p-1}."""
    d = p - 1
    points = [(0,) * d]
    for i in range(1, p):
        point = [0] * d
        point[i - 1] = i
        points.append(tuple(point))
    return points


def simplex_tiling_pair(p: int, bound: Optional[int] = None) -> SimplexPair:
    """
    The simplex set of Z_p^{p-1} with its tiling complement and spectrum, both verified.

    The spectrum is the cyclic group generated by x = (1, ..., 1); the complement is the
    F_p-span of the Fourier columns u_2, ..., u_{p-1}, which must coincide with the
    orthogonal group of <x>.
    """
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    ctx = GroupContext(p, p - 1) if bound is None else GroupContext(p, p - 1, bound)
    ctx.require_enumerable("simplex_tiling_pair")

    A = PointMultiset(ctx, {a: 1 for a in simplex_points(p)})
    x = (1,) * (p - 1)
    spectrum_group = cyclic_span(ctx, x)
    B = subgroup_span(ctx, fourier_matrix_columns(p)[1:])
    if len(B) != p ** (p - 2):
        raise InternalInconsistency(f"|B| = {len(B)}, expected {p ** (p - 2)}")
    if B.members != orthogonal_group(ctx, spectrum_group).members:
        raise InternalInconsistency("span of u_2..u_{p-1} differs from the orthogonal group of <x>")

    tiling = verify_tiling_direct(A, PointMultiset(ctx, {b: 1 for b in B.members}))
    spectral = verify_spectral(A, spectrum_group.members)
    if not (tiling.verdict and spectral.verdict):
        raise InternalInconsistency(f"simplex certificates failed for p={p}: tiling witness {tiling.witness}, "
                                    f"spectral witness {spectral.witness}")
    logging.info(f"simplex pair for p={p}: |A|={p}, |B|={len(B)}, |S|={len(spectrum_group)}")
    return SimplexPair(A, B, spectrum_group.members, tiling, spectral)


@dataclass(frozen=True)
class GeneralPositionResult:
    """
    Tiling complement and spectrum for p points of Z^d. Without fallback the complement of
    the points in Z^d is {x : <w, x> = 0 mod p} and the certificates live in Z_p^d; with
    fallback they live in Z_{p^2}^d and the complement lifts periodically.
    """

    points: Tuple[Tuple[int, ...], ...]
    functional_w: Optional[Tuple[int, ...]]
    complement_descr: str
    modulus: int
    complement: Tuple[GroupElement, ...]
    image_pair: TilingCertificate
    spectrum: Tuple[GroupElement, ...]
    spectral: SpectralCertificate
    fallback_used: bool


def general_position_tiling(
    points: Sequence[Sequence[int]],
    search_bound: Optional[int] = None,
    fallback_node_budget: Optional[int] = FALLBACK_NODE_BUDGET,
) -> GeneralPositionResult:
    """
    Constructs and verifies a tiling complement and a spectrum for p points of Z^d in
    general linear position, d >= p - 1.

    When no separating functional exists mod p, the image in Z_{p^2}^d is searched for a
    complement. Images that annihilate no p-power class are rejected without a search,
    and the search gives up after `fallback_node_budget` placements.

    Args:
        points (Sequence[Sequence[int]]): p integer points of Z^d, p prime.
        search_bound (int, optional): Largest group order the fallback may search.
        fallback_node_budget (int, optional): Placement budget of the fallback search;
            None searches to completion. Defaults to FALLBACK_NODE_BUDGET.

    Returns:
        GeneralPositionResult: The complement, the spectrum and their certificates.

    Raises:
        DimensionError: If d < p - 1.
        NotInGeneralPosition: If the points lie in an affine hyperplane.
        NotConstructed: If no separating functional exists and the bounded search in
            Z_{p^2}^d finds no complement either. This never asserts non-tiling.
    """
    vectors = [tuple(int(c) for c in pt) for pt in points]
    p = len(vectors)
    if not is_prime(p):
        raise PreconditionError(f"number of points {p} is not prime")
    d = len(vectors[0])
    if d < p - 1:
        raise DimensionError(f"{p} points need dimension at least {p - 1}, got {d}")
    if not check_general_position(vectors):
        raise NotInGeneralPosition(f"points {vectors} are not in general linear position")
    base = vectors[0]
    shifted = [tuple(a - b for a, b in zip(v, base)) for v in vectors]

    w = separating_functional(shifted, p)
    if w is not None:
        ctx = GroupContext(p, d)
        image, injective = project_multiset(shifted, ctx)
        if not injective:
            raise InternalInconsistency(f"separating functional {w} but pi_{p} is not injective")
        kernel = orthogonal_group(ctx, cyclic_span(ctx, ctx.element(w)))
        image_pair = verify_tiling_direct(image, PointMultiset(ctx, {k: 1 for k in kernel.members}))
        spectrum = sorted(ctx.scale(j, tuple(w)) for j in range(p))
        spectral = verify_spectral(image, spectrum)
        if not (image_pair.verdict and spectral.verdict):
            raise InternalInconsistency(f"certificates failed for separating functional {w}")
        return GeneralPositionResult(
            points=tuple(vectors),
            functional_w=tuple(w),
            complement_descr=f"{{x in Z^{d} : <{format_point(w)}, x> = 0 mod {p}}}",
            modulus=p,
            complement=kernel.members,
            image_pair=image_pair,
            spectrum=tuple(spectrum),
            spectral=spectral,
            fallback_used=False,
        )

    logging.warning(f"no separating functional mod {p} for {vectors}; searching Z_{p * p}^{d}")
    ctx = GroupContext(p * p, d)
    image, injective = project_multiset(shifted, ctx)
    if not injective:
        raise NotConstructed(f"projection to Z_{p * p}^{d} is not injective")
    try:
        bound = default_search_bound() if search_bound is None else search_bound
        ctx.require_enumerable("general_position_tiling", bound)
        if not any(class_annihilated(image, E) for E in equivalence_classes(ctx) if is_prime_power_of(E.order, p)):
            # a tile of prime size p annihilates some class of p-power order
            raise NotConstructed(f"image in Z_{p * p}^{d} annihilates no {p}-power class; tiling of Z^{d} left undecided")
        complement = search_tiling_complement(image, search_bound, node_budget=fallback_node_budget)
    except (EnumerationBoundExceeded, SearchBudgetExceeded) as e:
        raise NotConstructed(f"fallback search skipped: {e}") from e
    if complement is None:
        raise NotConstructed(f"no tiling complement in Z_{p * p}^{d}; tiling of Z^{d} left undecided")
    image_pair = verify_tiling_direct(image, PointMultiset(ctx, {b: 1 for b in complement}))
    if not image_pair.verdict:
        raise InternalInconsistency(f"search returned a complement that does not verify: {image_pair.witness}")
    construction = prime_tile_spectrum(image, search_bound)
    return GeneralPositionResult(
        points=tuple(vectors),
        functional_w=None,
        complement_descr=f"periodic lift of the listed complement by {p * p}Z^{d}",
        modulus=p * p,
        complement=tuple(complement),
        image_pair=image_pair,
        spectrum=construction.derived,
        spectral=construction.certificate,
        fallback_used=True,
    )
