import itertools
import logging
import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from prime_tiles.errors import EnumerationBoundExceeded, InvalidModulus, PreconditionError
from prime_tiles.utils import is_prime, smallest_prime_factor

GroupElement = Tuple[int, ...]
"""Coordinates reduced into [0, n). Tuples compare lexicographically, which fixes every iteration order."""

LARGE_SCAN_THRESHOLD = 100_000


def default_enumeration_bound() -> int:
    return int(os.environ.get("PRIME_TILES_ENUMERATION_BOUND", 10 ** 7))


@dataclass(frozen=True)
class GroupContext:
    """The ambient group Z_n^d together with the enumeration bound for whole-group scans."""

    n: int
    d: int
    bound: int = field(default_factory=default_enumeration_bound, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"modulus n must be >= 1, got {self.n}")
        if self.d < 1:
            raise PreconditionError(f"dimension d must be >= 1, got {self.d}")

    @property
    def group_order(self) -> int:
        return self.n ** self.d

    @property
    def zero(self) -> GroupElement:
        return (0,) * self.d

    def element(self, coords: Sequence[int]) -> GroupElement:
        if len(coords) != self.d:
            raise PreconditionError(f"expected {self.d} coordinates, got {len(coords)}")
        return tuple(int(c) % self.n for c in coords)

    def is_canonical(self, x: Sequence[int]) -> bool:
        return len(x) == self.d and all(0 <= c < self.n for c in x)

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return tuple((a + b) % self.n for a, b in zip(x, y))

    def sub(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return tuple((a - b) % self.n for a, b in zip(x, y))

    def neg(self, x: GroupElement) -> GroupElement:
        return tuple(-a % self.n for a in x)

    def scale(self, k: int, x: GroupElement) -> GroupElement:
        return tuple(k * a % self.n for a in x)

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> int:
        """<x, y> mod n. Either argument may carry unreduced integer coordinates."""
        return sum(a * b for a, b in zip(x, y)) % self.n

    def require_enumerable(self, operation: str, bound: Optional[int] = None):
        limit = self.bound if bound is None else bound
        if self.group_order > limit:
            raise EnumerationBoundExceeded(operation, self.group_order, limit)
        if self.group_order > LARGE_SCAN_THRESHOLD:
            logging.info(f"{operation}: scanning {self.group_order} elements of Z_{self.n}^{self.d}")

    def elements(self) -> Iterator[GroupElement]:
        """All elements in lexicographic order. Callers check the bound first."""
        return itertools.product(range(self.n), repeat=self.d)


@dataclass(frozen=True)
class PrimePowerSplit:
    """n = p^k * m with gcd(p, m) = 1."""

    p: int
    k: int
    m: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if self.k < 1 or self.m < 1:
            raise PreconditionError(f"k and m must be positive, got k={self.k}, m={self.m}")
        if self.m % self.p == 0:
            raise PreconditionError(f"m={self.m} is divisible by p={self.p}")

    @property
    def prime_power(self) -> int:
        return self.p ** self.k

    @property
    def n(self) -> int:
        return self.prime_power * self.m


@dataclass(frozen=True)
class SubgroupDesc:
    generators: Tuple[GroupElement, ...]
    members: Tuple[GroupElement, ...]
    member_set: FrozenSet[GroupElement] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "member_set", frozenset(self.members))

    def __contains__(self, x) -> bool:
        return x in self.member_set

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CyclicClass:
    """All generators of one cyclic subgroup. `canonical` is the smallest member."""

    canonical: GroupElement
    order: int
    members: Tuple[GroupElement, ...]


def prime_power_split(n: int, p: int) -> PrimePowerSplit:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if n % p:
        raise PreconditionError(f"p={p} does not divide n={n}")
    k, m = 0, n
    while m % p == 0:
        m //= p
        k += 1
    return PrimePowerSplit(p, k, m)


def elem_order(ctx: GroupContext, x: GroupElement) -> int:
    """Least t >= 1 with t * x = 0, i.e. n / gcd(n, x_1, ..., x_d)."""
    return ctx.n // math.gcd(ctx.n, *x)


def cyclic_span(ctx: GroupContext, x: GroupElement) -> SubgroupDesc:
    """
    The cyclic subgroup <x> = {0, x, 2x, ...}.

    Args:
        ctx (GroupContext): The ambient group.
        x (GroupElement): A canonical element.

    Returns:
        SubgroupDesc: Sorted members; the generator tuple is (x,), or empty when x = 0.
    """
    order = elem_order(ctx, x)
    members = sorted(ctx.scale(k, x) for k in range(order))
    generators = (x,) if order > 1 else ()
    return SubgroupDesc(generators, tuple(members))


def subgroup_span(ctx: GroupContext, gens: Iterable[GroupElement]) -> SubgroupDesc:
    """
    Breadth-first closure of the generators under addition.

    Args:
        ctx (GroupContext): The ambient group.
        gens (Iterable[GroupElement]): Generators; coordinates are reduced mod n.

    Returns:
        SubgroupDesc: The generated subgroup with sorted members.

    Raises:
        EnumerationBoundExceeded: If n^d exceeds the enumeration bound.
    """
    ctx.require_enumerable("subgroup_span")
    gens = tuple(ctx.element(g) for g in gens)
    seen = {ctx.zero}
    queue = deque([ctx.zero])
    while queue:
        s = queue.popleft()
        for g in gens:
            t = ctx.add(s, g)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return SubgroupDesc(gens, tuple(sorted(seen)))


def _extend_span(ctx: GroupContext, span: Set[GroupElement], g: GroupElement) -> Set[GroupElement]:
    multiples = [ctx.scale(k, g) for k in range(elem_order(ctx, g))]
    return {ctx.add(s, t) for s in span for t in multiples}


def subgroup_from_members(ctx: GroupContext, members: Iterable[GroupElement]) -> SubgroupDesc:
    """Wrap a member list known to be a subgroup, picking a small generating set greedily."""
    members = sorted(members)
    span = {ctx.zero}
    gens = []
    for x in members:
        if x not in span:
            gens.append(x)
            span = _extend_span(ctx, span, x)
    if len(span) != len(members):
        raise PreconditionError("member list is not closed under addition")
    return SubgroupDesc(tuple(gens), tuple(members))


def orthogonal_group(ctx: GroupContext, H: SubgroupDesc) -> SubgroupDesc:
    """
    H-perp: every x with <x, h> = 0 mod n for all h in H. Checking the generators of H
    suffices. Applied twice it gives H back.

    Args:
        ctx (GroupContext): The ambient group.
        H (SubgroupDesc): A subgroup of ctx.

    Returns:
        SubgroupDesc: The orthogonal group with a greedily chosen generating set.

    Raises:
        EnumerationBoundExceeded: If n^d exceeds the enumeration bound.
    """
    ctx.require_enumerable("orthogonal_group")
    checks = H.generators or H.members
    members = [x for x in ctx.elements() if all(ctx.pairing(x, g) == 0 for g in checks)]
    return subgroup_from_members(ctx, members)


def equivalence_classes(ctx: GroupContext) -> List[CyclicClass]:
    """Partition Z_n^d into classes of elements generating the same cyclic subgroup."""
    ctx.require_enumerable("equivalence_classes")
    assigned: Set[GroupElement] = set()
    classes = []
    for x in ctx.elements():
        if x in assigned:
            continue
        order = elem_order(ctx, x)
        # x is the first unassigned element in lexicographic order, hence the class minimum
        members = sorted({ctx.scale(k, x) for k in range(1, order + 1) if math.gcd(k, order) == 1})
        assigned.update(members)
        classes.append(CyclicClass(x, order, tuple(members)))
    classes.sort(key=lambda E: (E.order, E.canonical))
    return classes


def class_of(ctx: GroupContext, x: GroupElement) -> CyclicClass:
    """The class of x alone: the multiples k * x with gcd(k, ord(x)) = 1. No group scan."""
    order = elem_order(ctx, x)
    members = sorted({ctx.scale(k, x) for k in range(1, order + 1) if math.gcd(k, order) == 1})
    return CyclicClass(members[0], order, tuple(members))


def derived_set(ctx: GroupContext, E: CyclicClass, p: int) -> List[GroupElement]:
    """
    {0, h, 2h, ..., (p-1)h} for h the canonical member of E. Its differences all lie in E.

    Args:
        ctx (GroupContext): The ambient group.
        E (CyclicClass): A nontrivial class.
        p (int): The smallest prime divisor of ord(E).

    Returns:
        List[GroupElement]: The p elements in sorted order.

    Raises:
        PreconditionError: If E is trivial or p is not the smallest prime divisor of ord(E).
    """
    if E.order < 2:
        raise PreconditionError("the trivial class has no derived set of prime size")
    if p != smallest_prime_factor(E.order):
        raise PreconditionError(f"p={p} is not the smallest prime divisor of ord(E)={E.order}")
    return sorted(ctx.scale(j, E.canonical) for j in range(p))


def project(x: Sequence[int], modulus: int, source_modulus: Optional[int] = None) -> GroupElement:
    """pi_n: coordinatewise reduction. With source_modulus set, the map Z_src^d -> Z_n^d needs n | src."""
    if modulus < 1:
        raise InvalidModulus(f"target modulus must be >= 1, got {modulus}")
    if source_modulus is not None and source_modulus % modulus:
        raise InvalidModulus(f"{modulus} does not divide {source_modulus}")
    return tuple(int(c) % modulus for c in x)


def project_points(points: Iterable[Sequence[int]], modulus: int) -> Tuple[List[GroupElement], bool]:
    """Images of the points (with repetitions) and whether the projection was injective."""
    points = [tuple(int(c) for c in pt) for pt in points]
    images = [project(pt, modulus) for pt in points]
    injective = len(set(images)) == len(set(points))
    return images, injective


def lift_p_power(split: PrimePowerSplit, x: GroupElement) -> GroupElement:
    """x' in Z_{p^k}^d  ->  m * x' in Z_n^d; preserves element order."""
    return tuple(split.m * c % split.n for c in x)


def difference_set(ctx: GroupContext, S: Iterable[GroupElement]) -> List[GroupElement]:
    """Sorted {s - t : s, t in S, s != t}."""
    S = list(S)
    diffs = {ctx.sub(s, t) for s in S for t in S if s != t}
    return sorted(diffs)


def translate(ctx: GroupContext, S: Iterable[GroupElement], t: GroupElement) -> List[GroupElement]:
    return sorted(ctx.add(s, t) for s in S)


def canonical_translate(ctx: GroupContext, S: Iterable[GroupElement]) -> Tuple[GroupElement, ...]:
    """Lexicographically smallest translate of S that contains 0."""
    S = list(S)
    return min(tuple(translate(ctx, S, ctx.neg(s))) for s in S)


def all_subgroups(ctx: GroupContext) -> List[SubgroupDesc]:
    """
    Every subgroup of Z_n^d, sorted by size then members. Subgroups of Z_n^d need at most d
    generators, so spans of all d-element generator tuples cover them.
    """
    ctx.require_enumerable("all_subgroups")
    found: Dict[Tuple[GroupElement, ...], SubgroupDesc] = {}
    for gens in itertools.combinations_with_replacement(list(ctx.elements()), ctx.d):
        H = subgroup_span(ctx, [g for g in gens if any(g)])
        found.setdefault(H.members, H)
    return sorted(found.values(), key=lambda H: (len(H), H.members))
