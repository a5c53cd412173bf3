import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from prime_tiles.errors import (
    EnumerationBoundExceeded,
    InternalInconsistency,
    NoAnnihilatedClass,
    PreconditionError,
    TheoremViolation,
)
from prime_tiles.mask_fourier import PointMultiset, class_annihilated
from prime_tiles.pair_verify import SpectralCertificate, search_tiling_complement, verify_spectral
from prime_tiles.utils import is_prime, is_prime_power_of
from prime_tiles.zn_group import CyclicClass, GroupElement, derived_set, equivalence_classes


@dataclass(frozen=True)
class SpectrumConstruction:
    chosen_class: CyclicClass
    derived: Tuple[GroupElement, ...]
    certificate: SpectralCertificate


def prime_tile_spectrum(A: PointMultiset, search_bound: Optional[int] = None) -> SpectrumConstruction:
    """
    Builds a spectrum of size p for a p-element set of Z_n^d.

    Scans the classes of p-power order in (order, canonical member) order and returns the
    derived set {0, h, ..., (p-1)h} of the first class annihilated by A, after verifying it.
    A tile of prime size always has such a class; when none exists the set is checked
    with the complement search to tell a non-tile from an arithmetic bug.

    Args:
        A (PointMultiset): A plain set with a prime number p of points.
        search_bound (int, optional): Bound passed to the complement search used for the diagnosis.

    Returns:
        SpectrumConstruction: The class used, the derived set and its spectral certificate.

    Raises:
        PreconditionError: If |A| is not prime or p does not divide n.
        NoAnnihilatedClass: If no p-power class is annihilated and A is not (or not provably) a tile.
        TheoremViolation: If no p-power class is annihilated although A tiles.
    """
    ctx = A.ctx
    p = A.total
    if not A.is_set:
        raise PreconditionError("prime_tile_spectrum needs a plain set")
    if not is_prime(p):
        raise PreconditionError(f"|A| = {p} is not prime")
    if ctx.n % p:
        raise PreconditionError(f"p={p} does not divide n={ctx.n}; a set of size p cannot tile Z_{ctx.n}^{ctx.d}")

    for E in equivalence_classes(ctx):
        if not is_prime_power_of(E.order, p) or not class_annihilated(A, E):
            continue
        spectrum = derived_set(ctx, E, p)
        certificate = verify_spectral(A, spectrum)
        if not certificate.verdict:
            raise InternalInconsistency(f"derived set of annihilated class {E.canonical} is not a spectrum")
        logging.info(f"spectrum from class of {E.canonical} (order {E.order}): {spectrum}")
        return SpectrumConstruction(E, tuple(spectrum), certificate)

    try:
        complement = search_tiling_complement(A, search_bound)
    except EnumerationBoundExceeded as e:
        raise NoAnnihilatedClass(f"no class of {p}-power order is annihilated; tiling undecided: {e}", is_tile=None) from e
    if complement is not None:
        logging.error(f"{A.support} tiles with {complement} yet annihilates no {p}-power class")
        raise TheoremViolation(f"tile {A.support} of prime size has no annihilated {p}-power class")
    raise NoAnnihilatedClass(f"no class of {p}-power order is annihilated; {A.support} is not a tile", is_tile=False)
