import itertools
import logging
import os
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from prime_tiles.errors import (
    EnumerationBoundExceeded,
    InternalInconsistency,
    PreconditionError,
    SearchBudgetExceeded,
)
from prime_tiles.mask_fourier import PointMultiset, ft_is_zero, project_multiset, require_nonempty, zero_set
from prime_tiles.zn_group import (
    GroupContext,
    GroupElement,
    canonical_translate,
    difference_set,
)

SIZE_ERRATUM = (
    "tiling size condition implemented as |A|*|B| = n^d; the printed criterion reads n^2, "
    "which only matches the d = 2 case"
)


def default_search_bound() -> int:
    return int(os.environ.get("PRIME_TILES_SEARCH_BOUND", 20000))


class TilingMethod(Enum):
    DIRECT_COVER = "direct_cover"
    FOURIER_CRITERION = "fourier_criterion"
    BOTH = "both"

    @staticmethod
    def valid_types() -> List[str]:
        return [method.value for method in TilingMethod]

    @staticmethod
    def is_valid(method: str) -> bool:
        return method in TilingMethod.valid_types()

    def uses_direct_cover(self) -> bool:
        return self in (TilingMethod.DIRECT_COVER, TilingMethod.BOTH)

    def uses_fourier(self) -> bool:
        return self in (TilingMethod.FOURIER_CRITERION, TilingMethod.BOTH)


def _points_to_lists(points: Iterable[GroupElement]) -> List[List[int]]:
    return [list(p) for p in points]


@dataclass(frozen=True)
class TilingCertificate:
    """
    Evidence that A + B does or does not partition Z_n^d. A false verdict carries a point
    witness (uncovered or doubly covered point, or a nonzero frequency annihilated by
    neither side) except for a size mismatch under the Fourier criterion.
    """

    A: PointMultiset
    B: PointMultiset
    method: TilingMethod
    verdict: bool
    witness: Optional[GroupElement] = None
    reason: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "tiling",
            "n": self.A.ctx.n,
            "d": self.A.ctx.d,
            "A": _points_to_lists(self.A.support),
            "B": _points_to_lists(self.B.support),
            "method": self.method.value,
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TilingCertificate":
        ctx = GroupContext(data["n"], data["d"])
        witness = data.get("witness")
        return cls(
            PointMultiset.from_points(ctx, data["A"]),
            PointMultiset.from_points(ctx, data["B"]),
            TilingMethod(data["method"]),
            bool(data["verdict"]),
            tuple(witness) if witness is not None else None,
            data.get("reason"),
        )

    def recheck(self) -> bool:
        """Re-run the recorded method on the recorded inputs; True if the verdict is reproduced."""
        again = verify_tiling(self.A, self.B, self.method)
        return again.verdict == self.verdict and again.witness == self.witness


@dataclass(frozen=True)
class SpectralCertificate:
    A: PointMultiset
    S: Tuple[GroupElement, ...]
    verdict: bool
    witness: Optional[GroupElement] = None
    reason: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "spectral",
            "n": self.A.ctx.n,
            "d": self.A.ctx.d,
            "A": _points_to_lists(self.A.support),
            "S": _points_to_lists(self.S),
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SpectralCertificate":
        ctx = GroupContext(data["n"], data["d"])
        witness = data.get("witness")
        return cls(
            PointMultiset.from_points(ctx, data["A"]),
            tuple(sorted(ctx.element(s) for s in data["S"])),
            bool(data["verdict"]),
            tuple(witness) if witness is not None else None,
            data.get("reason"),
        )

    def recheck(self) -> bool:
        again = verify_spectral(self.A, self.S)
        return again.verdict == self.verdict and again.witness == self.witness


def certificate_from_dict(data: Dict[str, Any]):
    if data.get("kind") == "tiling":
        return TilingCertificate.from_dict(data)
    if data.get("kind") == "spectral":
        return SpectralCertificate.from_dict(data)
    raise PreconditionError(f"unknown certificate kind {data.get('kind')!r}")


def _require_sets(*multisets: PointMultiset):
    ctx = multisets[0].ctx
    for M in multisets:
        if not M.is_set:
            raise PreconditionError("tiling and spectral pairs are defined for plain sets only")
        if M.ctx != ctx:
            raise PreconditionError("all sets must live in the same group")


def verify_tiling_direct(A: PointMultiset, B: PointMultiset) -> TilingCertificate:
    """
    Counts how often every group element is hit by A + B.

    Args:
        A (PointMultiset): A plain set of Z_n^d.
        B (PointMultiset): A plain set of the same group.

    Returns:
        TilingCertificate: True when every element is hit exactly once; otherwise the
        smallest element hit zero times ("uncovered") or more than once
        ("multiply_covered") is the witness.
    """
    _require_sets(A, B)
    ctx = A.ctx
    ctx.require_enumerable("verify_tiling_direct")
    hits = Counter(ctx.add(a, b) for a in A for b in B)
    for x in ctx.elements():
        count = hits.get(x, 0)
        if count != 1:
            reason = "uncovered" if count == 0 else "multiply_covered"
            return TilingCertificate(A, B, TilingMethod.DIRECT_COVER, False, x, reason)
    return TilingCertificate(A, B, TilingMethod.DIRECT_COVER, True)


def verify_tiling_fourier(A: PointMultiset, B: PointMultiset) -> TilingCertificate:
    """
    |A| * |B| = n^d and every nonzero frequency is annihilated by A or by B.
    The size condition uses n^d (see SIZE_ERRATUM).
    """
    _require_sets(A, B)
    ctx = A.ctx
    ctx.require_enumerable("verify_tiling_fourier")
    if A.total * B.total != ctx.group_order:
        return TilingCertificate(A, B, TilingMethod.FOURIER_CRITERION, False, None, "size_mismatch")
    for x in ctx.elements():
        if x == ctx.zero:
            continue
        if not ft_is_zero(A, x) and not ft_is_zero(B, x):
            return TilingCertificate(A, B, TilingMethod.FOURIER_CRITERION, False, x, "not_annihilated")
    return TilingCertificate(A, B, TilingMethod.FOURIER_CRITERION, True)


def verify_tiling(A: PointMultiset, B: PointMultiset, method: TilingMethod = TilingMethod.BOTH) -> TilingCertificate:
    """
    Decides whether (A, B) is a tiling pair with the chosen method.

    Args:
        A (PointMultiset): A plain set of Z_n^d.
        B (PointMultiset): A plain set of the same group.
        method (TilingMethod, optional): Which verifier to run. BOTH runs the two and
            reports the direct-cover witness. Defaults to TilingMethod.BOTH.

    Returns:
        TilingCertificate: The verdict and its witness.

    Raises:
        InternalInconsistency: If BOTH was asked for and the verifiers disagree.
    """
    if method == TilingMethod.DIRECT_COVER:
        return verify_tiling_direct(A, B)
    if method == TilingMethod.FOURIER_CRITERION:
        return verify_tiling_fourier(A, B)
    direct = verify_tiling_direct(A, B)
    fourier = verify_tiling_fourier(A, B)
    if direct.verdict != fourier.verdict:
        logging.error(f"direct cover says {direct.verdict}, Fourier criterion says {fourier.verdict}")
        raise InternalInconsistency("direct-cover and Fourier tiling verdicts disagree")
    return TilingCertificate(A, B, TilingMethod.BOTH, direct.verdict, direct.witness, direct.reason)


def verify_spectral(A: PointMultiset, S: Iterable[GroupElement]) -> SpectralCertificate:
    """
    |A| = |S| and every difference of S lies in the zero set of A.

    Args:
        A (PointMultiset): A nonempty plain set of Z_n^d.
        S (Iterable[GroupElement]): Candidate spectrum; coordinates are reduced mod n and
            repeated points count once.

    Returns:
        SpectralCertificate: True, or "size_mismatch", or the first difference of S (in
        lexicographic order) that A does not annihilate.

    Raises:
        PreconditionError: If A is empty or not a plain set.
    """
    _require_sets(A)
    require_nonempty(A, "verify_spectral")
    S = tuple(sorted(set(A.ctx.element(s) for s in S)))
    if len(S) != A.total:
        return SpectralCertificate(A, S, False, None, "size_mismatch")
    for x in difference_set(A.ctx, S):
        if not ft_is_zero(A, x):
            return SpectralCertificate(A, S, False, x, "not_annihilated")
    return SpectralCertificate(A, S, True)


def search_tiling_complement(
    A: PointMultiset,
    search_bound: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> Optional[List[GroupElement]]:
    """
    Exact-cover backtracking over translates of A.

    Always covers the smallest uncovered element next, trying the translates that put
    the points of A on it in sorted order, so the result is reproducible. The
    complement found is shifted to contain 0.

    Args:
        A (PointMultiset): A nonempty plain set whose size divides n^d.
        search_bound (int, optional): Largest group order to search. Defaults to
            PRIME_TILES_SEARCH_BOUND or 20000.
        node_budget (int, optional): Most translates the search may place before giving
            up. Unlimited by default.

    Returns:
        The sorted complement, or None if A does not tile Z_n^d.

    Raises:
        PreconditionError: If A is empty or |A| does not divide n^d.
        EnumerationBoundExceeded: If n^d exceeds the search bound.
        SearchBudgetExceeded: If the node budget runs out before the search is decided.
    """
    _require_sets(A)
    require_nonempty(A, "search_tiling_complement")
    ctx = A.ctx
    bound = default_search_bound() if search_bound is None else search_bound
    ctx.require_enumerable("search_tiling_complement", bound)
    size = ctx.group_order
    if size % A.total:
        raise PreconditionError(f"|A| = {A.total} does not divide {size}")

    elements = list(ctx.elements())
    index = {x: i for i, x in enumerate(elements)}
    points = A.support
    covered = bytearray(size)
    placed = 0
    # (cursor, point of A placed on it, translate, covered cells)
    stack: List[Tuple[int, int, GroupElement, List[int]]] = []
    cursor, first_choice = 0, 0
    while True:
        while cursor < size and covered[cursor]:
            cursor += 1
        if cursor == size:
            break
        target = elements[cursor]
        for s in range(first_choice, len(points)):
            b = ctx.sub(target, points[s])
            cells = [index[ctx.add(a, b)] for a in points]
            if not any(covered[c] for c in cells):
                placed += 1
                if node_budget is not None and placed > node_budget:
                    raise SearchBudgetExceeded("search_tiling_complement", node_budget)
                for c in cells:
                    covered[c] = 1
                stack.append((cursor, s, b, cells))
                first_choice = 0
                break
        else:
            if not stack:
                return None
            cursor, s, _, cells = stack.pop()
            for c in cells:
                covered[c] = 0
            first_choice = s + 1
    translates = sorted(b for _, _, b, _ in stack)
    return sorted(ctx.sub(b, translates[0]) for b in translates)


def search_spectrum(A: PointMultiset, search_bound: Optional[int] = None) -> Optional[List[GroupElement]]:
    """
    Clique search for a spectrum containing 0: vertices are group elements, s ~ s' when
    s - s' lies in the zero set of A. Candidates are tried in increasing order.

    Args:
        A (PointMultiset): A nonempty plain set.
        search_bound (int, optional): Largest group order to search. Defaults to
            PRIME_TILES_SEARCH_BOUND or 20000.

    Returns:
        A sorted spectrum of size |A| containing 0, or None if A is not spectral.
    """
    _require_sets(A)
    require_nonempty(A, "search_spectrum")
    ctx = A.ctx
    bound = default_search_bound() if search_bound is None else search_bound
    ctx.require_enumerable("search_spectrum", bound)
    zeros = set(zero_set(A))
    candidates = sorted(zeros)
    target = A.total
    chosen = [ctx.zero]
    next_index = [0]
    while True:
        if len(chosen) == target:
            return sorted(chosen)
        i = next_index[-1]
        extended = False
        while i < len(candidates):
            c = candidates[i]
            i += 1
            if all(ctx.sub(c, s) in zeros for s in chosen[1:]):
                next_index[-1] = i
                chosen.append(c)
                next_index.append(i)
                extended = True
                break
        if not extended:
            next_index.pop()
            if not next_index:
                return None
            chosen.pop()


@dataclass(frozen=True)
class TileRecord:
    points: Tuple[GroupElement, ...]
    is_tile: bool
    complement: Optional[Tuple[GroupElement, ...]] = None


def enumerate_tiles(ctx: GroupContext, size: int, search_bound: Optional[int] = None) -> List[TileRecord]:
    """
    Every size-`size` subset of Z_n^d up to translation, in its canonical form (contains 0,
    lexicographically smallest among its translates), flagged tile or non-tile.
    """
    bound = default_search_bound() if search_bound is None else search_bound
    ctx.require_enumerable("enumerate_tiles", bound)
    if size < 1 or ctx.group_order % size:
        raise PreconditionError(f"size {size} does not divide {ctx.group_order}")
    nonzero = list(ctx.elements())[1:]
    seen = set()
    records = []
    for rest in itertools.combinations(nonzero, size - 1):
        canonical = canonical_translate(ctx, (ctx.zero,) + rest)
        if canonical in seen:
            continue
        seen.add(canonical)
        complement = search_tiling_complement(PointMultiset(ctx, {x: 1 for x in canonical}), bound)
        records.append(TileRecord(canonical, complement is not None, tuple(complement) if complement else None))
    records.sort(key=lambda r: r.points)
    logging.info(f"enumerate_tiles: Z_{ctx.n}^{ctx.d}, size {size}: "
                 f"{sum(r.is_tile for r in records)} tiles among {len(records)} translation classes")
    return records


def scan_periodic_complement(
    points: Sequence[Sequence[int]],
    n_range: Iterable[int],
    search_bound: Optional[int] = None,
) -> Optional[Tuple[int, List[GroupElement]]]:
    """
    Looks for a period n such that pi_n(points) is injective and tiles Z_n^d. A hit lifts to a
    periodic tiling of Z^d; a miss over the range is inconclusive.
    """
    points = [tuple(int(c) for c in pt) for pt in points]
    if not points:
        raise PreconditionError("no points given")
    d = len(points[0])
    for n in n_range:
        ctx = GroupContext(n, d)
        A, injective = project_multiset(points, ctx)
        if not injective or ctx.group_order % A.total:
            continue
        try:
            complement = search_tiling_complement(A, search_bound)
        except EnumerationBoundExceeded as e:
            logging.info(f"scan_periodic_complement: stopping at n={n}: {e}")
            break
        if complement is not None:
            logging.info(f"scan_periodic_complement: period n={n} works")
            return n, complement
    logging.info("scan_periodic_complement: no period in range; inconclusive")
    return None
