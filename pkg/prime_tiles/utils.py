import math
from functools import lru_cache
from typing import Iterable, List, Sequence


def is_prime(n: int) -> bool:
    """Trial division. Inputs are desk-scale."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> List[int]:
    """Distinct prime factors of n in increasing order."""
    factors = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        factors.append(n)
    return factors


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError(f"{n} has no prime factor")
    return prime_factors(n)[0]


def is_prime_power_of(n: int, p: int) -> bool:
    """True for n = p^t with t >= 1."""
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def divisors(n: int) -> List[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def format_point(point: Sequence[int]) -> str:
    """(1, 2) -> "(1,2)"; one-dimensional points print as bare integers."""
    if len(point) == 1:
        return str(point[0])
    return "(" + ",".join(str(c) for c in point) + ")"


def format_points(points: Iterable[Sequence[int]]) -> str:
    return "{" + ", ".join(format_point(p) for p in points) + "}"
