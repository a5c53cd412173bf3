import itertools
import logging
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from prime_tiles.constructors.integer_line import prime_size_tiles_z
from prime_tiles.constructors.linear import check_general_position, difference_determinant
from prime_tiles.constructors.simplex import general_position_tiling, simplex_tiling_pair
from prime_tiles.constructors.spectrum import prime_tile_spectrum
from prime_tiles.errors import InternalInconsistency, NotConstructed, PrimeTilesError
from prime_tiles.mask_fourier import (
    PointMultiset,
    check_lemma_minimal,
    class_annihilated,
    lemma_proj_identity,
    poisson_check,
    uncertainty_product,
)
from prime_tiles.pair_verify import enumerate_tiles, search_tiling_complement, verify_tiling
from prime_tiles.utils import is_prime_power_of
from prime_tiles.zn_group import (
    GroupContext,
    GroupElement,
    all_subgroups,
    elem_order,
    equivalence_classes,
    prime_power_split,
)

SEED = 20240101


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


def _timed(name: str, check: Callable[[], str]) -> CriterionResult:
    start = time.perf_counter()
    try:
        detail, passed = check(), True
    except PrimeTilesError as e:
        detail, passed = f"{type(e).__name__}: {e}", False
    seconds = time.perf_counter() - start
    if passed:
        logging.info(f"selftest {name}: passed in {seconds:.2f}s ({detail})")
    else:
        logging.error(f"selftest {name}: FAILED after {seconds:.2f}s ({detail})")
    return CriterionResult(name, passed, detail, seconds)


def _as_set(ctx: GroupContext, points: Sequence[GroupElement]) -> PointMultiset:
    return PointMultiset(ctx, {tuple(x): 1 for x in points})


def _random_subset(rng: np.random.Generator, ctx: GroupContext, size: Optional[int] = None) -> PointMultiset:
    elements = list(ctx.elements())
    if size is None:
        size = int(rng.integers(1, len(elements) + 1))
    chosen = rng.choice(len(elements), size=size, replace=False)
    return _as_set(ctx, [elements[i] for i in chosen])


def prime_tile_sweep() -> str:
    """Every prime-size tile of the small groups gets a verified spectrum."""
    groups = [GroupContext(n, 1) for n in range(2, 13)] + [GroupContext(n, 2) for n in (2, 3, 4, 6)]
    tiles = 0
    for ctx in groups:
        for p in (2, 3, 5):
            if ctx.n % p:
                continue
            for record in enumerate_tiles(ctx, p):
                if not record.is_tile:
                    continue
                construction = prime_tile_spectrum(_as_set(ctx, record.points))
                if not construction.certificate.verdict:
                    raise InternalInconsistency(f"unverified spectrum for {record.points} in Z_{ctx.n}^{ctx.d}")
                tiles += 1
    return f"{tiles} prime-size tiles, all spectral"


def simplex_constructions() -> str:
    sizes = []
    for p in (2, 3, 5, 7):
        pair = simplex_tiling_pair(p)
        if len(pair.B) != p ** (p - 2) or len(pair.S) != p:
            raise InternalInconsistency(f"p={p}: |B|={len(pair.B)}, |S|={len(pair.S)}")
        sizes.append(f"p={p}:|B|={len(pair.B)}")
    return ", ".join(sizes)


def poisson_summation() -> str:
    checked = 0
    for ctx in (GroupContext(8, 1), GroupContext(4, 2), GroupContext(6, 2)):
        for H in all_subgroups(ctx):
            if not poisson_check(ctx, H):
                raise InternalInconsistency(f"Poisson identity fails for {H.generators} in Z_{ctx.n}^{ctx.d}")
            checked += 1
    return f"{checked} subgroups"


def uncertainty_principle(count: int = 1000, seed: int = SEED) -> str:
    rng = np.random.default_rng(seed)
    minimum = {}
    for ctx in (GroupContext(12, 1), GroupContext(3, 2)):
        elements = list(ctx.elements())
        lowest = None
        for _ in range(count):
            size = int(rng.integers(1, len(elements) + 1))
            support = rng.choice(len(elements), size=size, replace=False)
            values = rng.choice([-3, -2, -1, 1, 2, 3], size=size)
            product = uncertainty_product(ctx, {elements[i]: int(v) for i, v in zip(support, values)})
            lowest = product if lowest is None else min(lowest, product)
        minimum[f"Z_{ctx.n}^{ctx.d}"] = lowest
    return f"least products {minimum}"


def class_uniformity(count: int = 200, seed: int = SEED) -> str:
    rng = np.random.default_rng(seed)
    checked = 0
    for ctx in (GroupContext(12, 1), GroupContext(6, 2)):
        classes = equivalence_classes(ctx)
        for _ in range(count):
            A = _random_subset(rng, ctx)
            for E in classes:
                class_annihilated(A, E, verify=True)
                checked += 1
    return f"{checked} class checks"


def minimality_exhaustive(max_total: int = 8) -> str:
    ctx = GroupContext(4, 1)
    elements = list(ctx.elements())
    constant = 0
    total = 0
    for counts in itertools.product(range(max_total + 1), repeat=len(elements)):
        if not 0 < sum(counts) <= max_total:
            continue
        A = PointMultiset(ctx, {x: c for x, c in zip(elements, counts) if c})
        total += 1
        if check_lemma_minimal(A).premise_holds:
            constant += 1
    return f"{total} multisets, {constant} annihilate every nonzero frequency"


def projection_identity(count: int = 100, seed: int = SEED) -> str:
    rng = np.random.default_rng(seed)
    checked = 0
    for n, p, d in ((6, 3, 1), (6, 3, 2), (12, 2, 1), (12, 3, 1)):
        ctx = GroupContext(n, d)
        split = prime_power_split(n, p)
        frequencies = [x for x in ctx.elements() if is_prime_power_of(elem_order(ctx, x), p)]
        for _ in range(count):
            A = _random_subset(rng, ctx)
            for x in frequencies:
                if not lemma_proj_identity(ctx, A.support, split, x):
                    raise InternalInconsistency(f"projection identity fails for {A.support} at {x} in Z_{n}^{d}")
                checked += 1
    return f"{checked} evaluations agree"


def integer_line_remark() -> str:
    if prime_size_tiles_z([0, 3, 4], 3).tiles:
        raise InternalInconsistency("{0, 3, 4} reported as a tile of Z")
    for tile in ([0, 1, 2], [0, 1, 5]):
        decision = prime_size_tiles_z(tile, 3)
        if not decision.tiles or not decision.window.verdict:
            raise InternalInconsistency(f"{tile} not reported as a verified tile of Z")
    # diameter <= 9 bounds k by 2, so tiling Z is equivalent to tiling one period Z_27
    ctx = GroupContext(27, 1)
    agreed = 0
    for triple in itertools.combinations(range(10), 3):
        brute = search_tiling_complement(_as_set(ctx, [(a,) for a in triple])) is not None
        if prime_size_tiles_z(triple, 3).tiles != brute:
            raise InternalInconsistency(f"{triple}: criterion and exhaustive search disagree")
        agreed += 1
    return f"{agreed} triples agree with exhaustive search"


def _general_position_points(rng: np.random.Generator, p: int, d: int, span: int) -> List[List[int]]:
    while True:
        points = rng.integers(-span, span + 1, size=(p, d)).tolist()
        if len({tuple(pt) for pt in points}) == p and check_general_position(points):
            return points


def general_position_pipeline(seed: int = SEED) -> str:
    rng = np.random.default_rng(seed)
    direct = fallback = undecided = 0
    for p, d, span, count in ((3, 2, 9, 100), (5, 4, 4, 20)):
        for _ in range(count):
            points = _general_position_points(rng, p, d, span)
            det = difference_determinant(points)
            try:
                result = general_position_tiling(points)
            except NotConstructed:
                if det % p:
                    raise
                undecided += 1
                continue
            if not (result.image_pair.verdict and result.spectral.verdict):
                raise InternalInconsistency(f"unverified output for {points}")
            if det % p and result.fallback_used:
                raise InternalInconsistency(f"det {det} is a unit mod {p} but the fallback ran for {points}")
            if result.fallback_used:
                fallback += 1
            else:
                direct += 1
    return f"{direct} direct, {fallback} fallback, {undecided} not constructed"


def criterion_equivalence(count: int = 300, seed: int = SEED) -> str:
    checked = 0
    ctx = GroupContext(6, 1)
    elements = list(ctx.elements())
    subsets = [c for r in range(1, 7) for c in itertools.combinations(elements, r)]
    for A, B in itertools.product(subsets, repeat=2):
        if len(A) * len(B) == ctx.group_order:
            verify_tiling(_as_set(ctx, A), _as_set(ctx, B))
            checked += 1

    rng = np.random.default_rng(seed)
    for ctx in (GroupContext(12, 1), GroupContext(3, 2)):
        order = ctx.group_order
        divisors_of_order = [k for k in range(1, order + 1) if order % k == 0]
        for _ in range(count):
            size = int(rng.choice(divisors_of_order))
            # half the pairs have a matching size product
            other = order // size if rng.random() < 0.5 else int(rng.integers(1, order + 1))
            verify_tiling(_random_subset(rng, ctx, size), _random_subset(rng, ctx, other))
            checked += 1
    return f"{checked} pairs agree"


CRITERIA = [
    ("prime_tile_sweep", prime_tile_sweep),
    ("simplex_constructions", simplex_constructions),
    ("poisson_summation", poisson_summation),
    ("uncertainty_principle", uncertainty_principle),
    ("class_uniformity", class_uniformity),
    ("minimality_exhaustive", minimality_exhaustive),
    ("projection_identity", projection_identity),
    ("integer_line_remark", integer_line_remark),
    ("general_position_pipeline", general_position_pipeline),
    ("criterion_equivalence", criterion_equivalence),
]


def run_all(names: Optional[Sequence[str]] = None) -> List[CriterionResult]:
    selected = [(name, check) for name, check in CRITERIA if names is None or name in names]
    return [_timed(name, check) for name, check in selected]
