import logging
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from prime_tiles.errors import InternalInconsistency, PreconditionError, ZeroFunctionError
from prime_tiles.utils import divisors, is_prime_power_of, totient
from prime_tiles.zn_group import (
    CyclicClass,
    GroupContext,
    GroupElement,
    PrimePowerSplit,
    SubgroupDesc,
    elem_order,
    lift_p_power,
    orthogonal_group,
    project,
    project_points,
)

Poly = List[int]
"""Integer polynomial, index i holds the coefficient of z^i."""


def poly_trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return poly_trim(out)


def poly_divmod(num: Sequence[int], den: Sequence[int]) -> Tuple[Poly, Poly]:
    """Exact division by a monic integer polynomial."""
    den = poly_trim(den)
    if not den or den[-1] != 1:
        raise PreconditionError("divisor must be monic")
    rem = poly_trim(num)
    deg = len(den) - 1
    if len(rem) <= deg:
        return [], rem
    quot = [0] * (len(rem) - deg)
    for shift in range(len(rem) - 1 - deg, -1, -1):
        c = rem[shift + deg]
        if c:
            quot[shift] = c
            for i, di in enumerate(den):
                rem[shift + i] -= c * di
    return poly_trim(quot), poly_trim(rem[:deg])


def poly_rem(num: Sequence[int], den: Sequence[int]) -> Poly:
    return poly_divmod(num, den)[1]


class CyclotomicCache:
    """
    Memoized cyclotomic polynomials Phi_m.

    Entries are computed by exact division of z^m - 1 by the product of Phi_d over the
    proper divisors d of m, and checked on insert: monic, degree totient(m), and the
    product over all divisors reproduces z^m - 1. Concurrent inserts of the same m are
    idempotent since the entries are deterministic.
    """

    LOCK = threading.Lock()

    def __init__(self):
        self._polys: Dict[int, Tuple[int, ...]] = {}

    def __contains__(self, m: int) -> bool:
        return m in self._polys

    def get(self, m: int) -> Tuple[int, ...]:
        if m < 1:
            raise PreconditionError(f"cyclotomic index must be >= 1, got {m}")
        poly = self._polys.get(m)
        if poly is None:
            poly = self._compute(m)
            self._insert(m, poly)
        return poly

    def _compute(self, m: int) -> Poly:
        quotient = [-1] + [0] * (m - 1) + [1]
        for d in divisors(m)[:-1]:
            quotient, rem = poly_divmod(quotient, self.get(d))
            if rem:
                raise InternalInconsistency(f"Phi_{d} does not divide the running quotient for m={m}")
        return quotient

    def _insert(self, m: int, poly: Poly):
        if poly[-1] != 1 or len(poly) - 1 != totient(m):
            raise InternalInconsistency(f"Phi_{m} is not monic of degree {totient(m)}: {poly}")
        product = [1]
        for d in divisors(m)[:-1]:
            product = poly_mul(product, self.get(d))
        product = poly_mul(product, poly)
        if product != [-1] + [0] * (m - 1) + [1]:
            raise InternalInconsistency(f"product of Phi_d over d | {m} is not z^{m} - 1")
        with self.LOCK:
            self._polys[m] = tuple(poly)


CYCLOTOMIC_CACHE = CyclotomicCache()


def cyclotomic(m: int, cache: Optional[CyclotomicCache] = None) -> Tuple[int, ...]:
    return (cache or CYCLOTOMIC_CACHE).get(m)


def vanishes_at_root_of_unity(coeffs: Sequence[int], m: int) -> bool:
    """Exact test that sum coeffs[j] * e^{2 pi i j / m} = 0: Phi_m is the minimal polynomial."""
    return not poly_rem(coeffs, cyclotomic(m))


@dataclass(frozen=True)
class PointMultiset:
    """
    A finite multiset on Z_n^d. `entries` maps canonical elements to positive multiplicities;
    with every multiplicity 1 it is a plain set.
    """

    ctx: GroupContext
    entries: Mapping[GroupElement, int]
    _points: np.ndarray = field(init=False, repr=False, compare=False)
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = {}
        for x, mult in sorted(self.entries.items()):
            if not self.ctx.is_canonical(x):
                raise PreconditionError(f"{x} is not a canonical element of Z_{self.ctx.n}^{self.ctx.d}")
            if mult < 1:
                raise PreconditionError(f"multiplicity of {x} must be >= 1, got {mult}")
            entries[tuple(x)] = int(mult)
        object.__setattr__(self, "entries", entries)
        points = np.array(list(entries), dtype=np.int64).reshape(len(entries), self.ctx.d)
        object.__setattr__(self, "_points", points)
        object.__setattr__(self, "_weights", np.array(list(entries.values()), dtype=np.int64))

    @classmethod
    def from_points(cls, ctx: GroupContext, points: Iterable[Sequence[int]]) -> "PointMultiset":
        """Counts repeated points; coordinates are reduced mod n."""
        return cls(ctx, Counter(ctx.element(pt) for pt in points))

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    @property
    def is_set(self) -> bool:
        return all(mult == 1 for mult in self.entries.values())

    @property
    def support(self) -> List[GroupElement]:
        return list(self.entries)

    def multiplicity(self, x: GroupElement) -> int:
        return self.entries.get(tuple(x), 0)

    def __len__(self) -> int:
        return self.total

    def __iter__(self):
        return iter(self.entries)


def require_nonempty(A: PointMultiset, operation: str):
    if A.total == 0:
        raise PreconditionError(f"{operation} needs a nonempty set")


def project_multiset(points: Iterable[Sequence[int]], ctx: GroupContext) -> Tuple[PointMultiset, bool]:
    """pi_n(A) as a multiset on ctx, and whether the projection was injective."""
    images, injective = project_points(points, ctx.n)
    return PointMultiset(ctx, Counter(images)), injective


@dataclass(frozen=True)
class PairingPolynomial:
    """coeffs[j] is the total weight of points a with <a, x> = j mod n."""

    coeffs: Tuple[int, ...]

    @property
    def modulus(self) -> int:
        return len(self.coeffs)

    def evaluate(self) -> complex:
        """Floating value at e^{2 pi i / n}. Advisory only."""
        n = self.modulus
        roots = np.exp(2j * np.pi * np.arange(n) / n)
        return complex(np.dot(np.array(self.coeffs, dtype=np.float64), roots))

    def is_zero(self) -> bool:
        return vanishes_at_root_of_unity(self.coeffs, self.modulus)


def _bucket(n: int, points: np.ndarray, weights: np.ndarray, x: Sequence[int]) -> Tuple[int, ...]:
    coeffs = np.zeros(n, dtype=np.int64)
    if len(weights):
        exponents = (points @ np.asarray(x, dtype=np.int64)) % n
        np.add.at(coeffs, exponents, weights)
    return tuple(int(c) for c in coeffs)


def pairing_poly(A: PointMultiset, x: GroupElement) -> PairingPolynomial:
    return PairingPolynomial(_bucket(A.ctx.n, A._points, A._weights, x))


def signed_pairing_poly(ctx: GroupContext, f: Mapping[GroupElement, int], x: GroupElement) -> PairingPolynomial:
    """Pairing polynomial of an integer-valued function; coefficients may be negative."""
    items = [(ctx.element(a), w) for a, w in f.items() if w]
    points = np.array([a for a, _ in items], dtype=np.int64).reshape(len(items), ctx.d)
    weights = np.array([w for _, w in items], dtype=np.int64)
    return PairingPolynomial(_bucket(ctx.n, points, weights, x))


def ft_is_zero(A: PointMultiset, x: GroupElement) -> bool:
    """Exact: the Fourier value at x vanishes iff Phi_n divides the pairing polynomial."""
    return pairing_poly(A, x).is_zero()


def ft_value_float(A: PointMultiset, x: GroupElement) -> complex:
    """Floating evaluation of the Fourier sum at x. A diagnostic, never ground truth."""
    return pairing_poly(A, x).evaluate()


def zero_set(A: PointMultiset) -> List[GroupElement]:
    """
    Every x with a vanishing transform, in lexicographic order. Never contains 0.

    Raises:
        PreconditionError: If A is empty (its transform vanishes everywhere).
        EnumerationBoundExceeded: If the group is larger than the enumeration bound.
    """
    require_nonempty(A, "zero_set")
    A.ctx.require_enumerable("zero_set")
    return [x for x in A.ctx.elements() if ft_is_zero(A, x)]


def class_annihilated(A: PointMultiset, E: CyclicClass, verify: bool = False) -> bool:
    """
    Decides whether A annihilates the class E by testing its canonical member; the
    value at one generator decides every generator of the same cyclic subgroup.

    Args:
        A (PointMultiset): The multiset whose transform is tested.
        E (CyclicClass): A class of the same group.
        verify (bool, optional): Also test every member and raise on disagreement. Defaults to False.

    Returns:
        bool: True if the transform of A vanishes on E.
    """
    verdict = ft_is_zero(A, E.canonical)
    if verify:
        for y in E.members:
            if ft_is_zero(A, y) != verdict:
                logging.error(f"class of {E.canonical} split by the zero set at {y}")
                raise InternalInconsistency(f"zero set splits the class of {E.canonical} at {y}")
    return verdict


def poisson_check(ctx: GroupContext, H: SubgroupDesc) -> bool:
    """Exact test of 1_H^ = |H| * 1_{H-perp} at every point of the group."""
    ctx.require_enumerable("poisson_check")
    perp = orthogonal_group(ctx, H)
    indicator = PointMultiset(ctx, {h: 1 for h in H.members})
    size = len(H.members)
    for x in ctx.elements():
        coeffs = list(pairing_poly(indicator, x).coeffs)
        if x in perp:
            coeffs[0] -= size
        if not vanishes_at_root_of_unity(coeffs, ctx.n):
            logging.info(f"Poisson identity fails at {x} for subgroup generated by {H.generators}")
            return False
    return True


def uncertainty_product(ctx: GroupContext, f: Mapping[GroupElement, int]) -> int:
    """|supp f| * |supp f^| for an integer-valued f given as a signed multiplicity map."""
    f = {ctx.element(a): int(w) for a, w in f.items() if w}
    if not f:
        raise ZeroFunctionError("uncertainty product of the zero function is undefined")
    ctx.require_enumerable("uncertainty_product")
    spectrum_support = sum(1 for x in ctx.elements() if not signed_pairing_poly(ctx, f, x).is_zero())
    product = len(f) * spectrum_support
    if product < ctx.group_order:
        logging.error(f"uncertainty product {product} below |G| = {ctx.group_order}")
        raise InternalInconsistency(f"uncertainty product {product} < {ctx.group_order}")
    return product


def auxiliary_function(A: PointMultiset) -> Dict[GroupElement, int]:
    """f = 1_A - m * 1_G with m the least multiplicity in A; zero values are dropped."""
    require_nonempty(A, "auxiliary_function")
    ctx = A.ctx
    ctx.require_enumerable("auxiliary_function")
    m = min(A.entries.values())
    f = {x: A.multiplicity(x) - m for x in ctx.elements()}
    return {x: w for x, w in f.items() if w}


@dataclass(frozen=True)
class MinimalityVerdict:
    """
    `auxiliary_support` and `auxiliary_spectrum_support` are |supp f| and |supp f^| for
    the auxiliary function f of A; both are 0 exactly when A is constant.
    """

    premise_holds: bool
    multiplicity: Optional[int] = None
    witness: Optional[GroupElement] = None
    auxiliary_support: int = 0
    auxiliary_spectrum_support: int = 0

    @property
    def constant(self) -> bool:
        return self.premise_holds


def check_lemma_minimal(A: PointMultiset) -> MinimalityVerdict:
    """
    If every nonzero frequency is annihilated by A, A must be a constant multiple of the
    whole group. Returns the common multiplicity in that case, otherwise the first
    frequency that is not annihilated.

    The support sizes of the auxiliary function f = 1_A - m * 1_G are recorded in both
    cases. A nonzero f has |supp f| * |supp f^| >= n^d, which is checked on the way.

    Args:
        A (PointMultiset): A nonempty multiset.

    Returns:
        MinimalityVerdict: The verdict with the common multiplicity or the witness.

    Raises:
        PreconditionError: If A is empty.
        InternalInconsistency: If the premise holds but the multiplicities differ.
    """
    ctx = A.ctx
    ctx.require_enumerable("check_lemma_minimal")
    f = auxiliary_function(A)
    support = len(f)
    spectrum_support = uncertainty_product(ctx, f) // support if f else 0
    for x in ctx.elements():
        if x != ctx.zero and not ft_is_zero(A, x):
            return MinimalityVerdict(
                False,
                witness=x,
                auxiliary_support=support,
                auxiliary_spectrum_support=spectrum_support,
            )
    if f:
        logging.error(f"minimality premise holds for {dict(A.entries)} but the auxiliary function is {f}")
        raise InternalInconsistency("annihilating every nonzero frequency without being constant")
    return MinimalityVerdict(True, multiplicity=A.multiplicity(ctx.zero))


def lemma_proj_identity(
    ctx: GroupContext,
    points: Iterable[Sequence[int]],
    split: PrimePowerSplit,
    x: GroupElement,
) -> bool:
    """
    Compares the transform of A at x in Z_n^d with the transform of pi_{p^k}(A) at x' in
    Z_{p^k}^d, where x = m * x' has order p^t, 1 <= t <= k.

    Both sides are written as polynomials in a primitive p^k-th root of unity (the Z_n
    exponents are all multiples of m and are divided by it) and compared modulo
    Phi_{p^k}. Zero status on each side is also decided in its own group.
    """
    if split.n != ctx.n:
        raise PreconditionError(f"split describes n={split.n}, group has n={ctx.n}")
    order = elem_order(ctx, x)
    if not is_prime_power_of(order, split.p):
        raise PreconditionError(f"order {order} of {x} is not a positive power of {split.p}")
    q, m = split.prime_power, split.m
    x_prime = tuple(c // m % q for c in x)
    if lift_p_power(split, x_prime) != tuple(x):
        raise PreconditionError(f"{x} is not m * x' for any x' in Z_{q}^{ctx.d}")

    points = [tuple(int(c) for c in pt) for pt in points]
    local = [0] * q
    projected = [0] * q
    for a in points:
        e = ctx.pairing(a, x)
        if e % m:
            raise InternalInconsistency(f"exponent {e} at {x} not divisible by m={m}")
        local[e // m] += 1
        projected[sum(r * c for r, c in zip(project(a, q), x_prime)) % q] += 1
    same_value = vanishes_at_root_of_unity([u - v for u, v in zip(local, projected)], q)

    full, _ = project_multiset(points, ctx)
    small, _ = project_multiset(points, GroupContext(q, ctx.d, ctx.bound))
    return same_value and ft_is_zero(full, x) == ft_is_zero(small, x_prime)
