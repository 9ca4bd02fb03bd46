"""Arbitrary-precision integer arithmetic substrate.

Extended gcd, modular exponentiation, Miller-Rabin primality, trial-division
plus Brent-rho factoring, square-free decomposition, fundamental
discriminants, Tonelli-Shanks square roots modulo odd primes, and the
Kronecker symbol.

All operations are pure: the randomized subroutines (rho, the probabilistic
primality rounds for huge inputs) draw from an explicitly passed
``random.Random``, defaulting to a fixed seed so repeated calls with the same
arguments give the same answers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from . import cache as result_cache
from .errors import InputError, ResourceCapError

TRIAL_DIVISION_BOUND = 10**5
DEFAULT_FACTOR_BUDGET = 4_000_000  # rho iterations; generous for ~80-bit composites
_DEFAULT_SEED = 0x5EED

# Fixed Miller-Rabin witness set, deterministic for n below this bound
# (comfortably above 2^64).
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_RANDOM_ROUNDS = 40


def gcd_ext(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: (g, u, v) with u*a + v*b = g = gcd(a, b) and g >= 0.

    >>> gcd_ext(12, 8)
    (4, 1, -1)
    """
    if a == 0 and b == 0:
        return 0, 0, 0
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """base**exp mod modulus, for exp >= 0 and modulus >= 1."""
    if modulus <= 0:
        raise InputError(f"modulus must be >= 1, got {modulus}")
    if exp < 0:
        raise InputError(f"exponent must be non-negative, got {exp}")
    return pow(base, exp, modulus)


def _mr_composite_witness(a: int, d: int, s: int, n: int) -> bool:
    """True if base a proves n composite."""
    a %= n
    if a <= 1 or a == n - 1:
        return False
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int, rng: random.Random | None = None) -> bool:
    """Miller-Rabin primality test.

    Deterministic (fixed witness set) for n below ~3.3e24, which covers all
    of [0, 2^64).  Above that, 40 extra random rounds bring the error
    probability under 4**-40; the rounds draw from ``rng`` (fixed seed when
    omitted, so results are reproducible).
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if _mr_composite_witness(a, d, s, n):
            return False
    if n >= _MR_DETERMINISTIC_LIMIT:
        if rng is None:
            rng = random.Random(_DEFAULT_SEED)
        for _ in range(_MR_RANDOM_ROUNDS):
            if _mr_composite_witness(rng.randrange(2, n - 1), d, s, n):
                return False
    return True


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    """Primes below TRIAL_DIVISION_BOUND."""
    bound = TRIAL_DIVISION_BOUND
    sieve = bytearray([1]) * bound
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(bound - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i in range(bound) if sieve[i])


def _brent_rho(n: int, rng: random.Random, budget: int) -> tuple[int | None, int]:
    """Brent-cycle rho with batched gcds.

    Returns (nontrivial factor or None, remaining budget).  n must be odd,
    composite and > 1.  Each advance of the iteration counts one unit of
    budget.
    """
    batch = 128
    while budget > 0:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1 and budget > 0:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            budget -= r
            k = 0
            while k < r and g == 1 and budget > 0:
                ys = y
                steps = min(batch, r - k)
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                budget -= steps
                g = math.gcd(q, n)
                k += batch
            r *= 2
        if g == n:
            # The batch overshot; replay single steps from the last checkpoint.
            g = 1
            while g == 1 and budget > 0:
                ys = (ys * ys + c) % n
                budget -= 1
                g = math.gcd(x - ys, n)
        if 1 < g < n:
            return g, budget
        # g in (1, n): bad parameters, retry with a fresh (y, c)
    return None, budget


@dataclass(frozen=True)
class Factorization:
    """sign * prod(p**e) == n, primes strictly increasing."""

    n: int
    factors: tuple[tuple[int, int], ...]
    sign: int

    def exponent_of(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def _factor_impl(n: int, budget: int, rng: random.Random) -> Factorization:
    sign = -1 if n < 0 else 1
    m = abs(n)
    counts: dict[int, int] = {}
    for p in _small_primes():
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    if m > 1:
        stack = [m]
        while stack:
            v = stack.pop()
            if is_prime(v, rng):
                counts[v] = counts.get(v, 0) + 1
                continue
            f, budget = _brent_rho(v, rng, budget)
            if f is None:
                raise ResourceCapError(
                    f"factoring budget exhausted; unfactored cofactor {v}", detail=v
                )
            stack.append(f)
            stack.append(v // f)
    factors = tuple(sorted(counts.items()))
    check = sign
    for p, e in factors:
        check *= p**e
    if check != n:
        raise RuntimeError(f"factorization of {n} failed to reassemble")  # pragma: no cover
    return Factorization(n=n, factors=factors, sign=sign)


# Factorizations are canonical values, so one memo serves every budget/rng
# combination; a hit costs no work, which keeps it inside any budget.
_factor_memo: dict[int, Factorization] = {}
_FACTOR_MEMO_MAX = 1 << 16


def factor(
    n: int,
    budget: int | None = None,
    rng: random.Random | None = None,
    use_cache: bool = True,
) -> Factorization:
    """Factor n completely: trial division below 10^5, then Brent rho.

    ``budget`` caps the total number of rho iterations; exhausting it raises
    ResourceCapError naming the unfactored cofactor.  Results are memoized
    (and stored in the CLI result cache when one is active) since the value
    is canonical; ``use_cache=False`` forces a fresh computation.
    """
    if n == 0:
        raise InputError("cannot factor 0")
    real_budget = DEFAULT_FACTOR_BUDGET if budget is None else budget
    real_rng = rng if rng is not None else random.Random(_DEFAULT_SEED)
    if not use_cache:
        return _factor_impl(n, real_budget, real_rng)
    cache = result_cache.active()
    memo_hit = _factor_memo.get(n)
    if memo_hit is not None:
        if cache is not None:
            cache.put_factor(n, memo_hit.sign, memo_hit.factors)  # no-op when present
        return memo_hit
    if cache is not None:
        raw = cache.get_factor(n)
        if raw is not None:
            result = Factorization(n=n, factors=raw[1], sign=raw[0])
            if len(_factor_memo) < _FACTOR_MEMO_MAX:
                _factor_memo[n] = result
            return result
    result = _factor_impl(n, real_budget, real_rng)
    if len(_factor_memo) < _FACTOR_MEMO_MAX:
        _factor_memo[n] = result
    if cache is not None:
        cache.put_factor(n, result.sign, result.factors)
    return result


@dataclass(frozen=True)
class SquarefreeDecomp:
    """n == d * t**2 with d square-free and sign(d) == sign(n), t >= 1."""

    d: int
    t: int


def squarefree_part(
    n: int, budget: int | None = None, rng: random.Random | None = None
) -> SquarefreeDecomp:
    """Split n as d * t**2 with d square-free (sign carried by d)."""
    fac = factor(n, budget, rng)
    d = fac.sign
    t = 1
    for p, e in fac.factors:
        if e % 2:
            d *= p
        t *= p ** (e // 2)
    return SquarefreeDecomp(d=d, t=t)


def fundamental_discriminant(
    d: int, budget: int | None = None, rng: random.Random | None = None
) -> int:
    """Discriminant of the maximal order of Q(sqrt(d)) for square-free d < 0.

    d itself when d = 1 mod 4, else 4d.
    """
    if d >= 0:
        raise InputError(f"need d < 0, got {d}")
    if squarefree_part(d, budget, rng).t != 1:
        raise InputError(f"{d} is not square-free")
    return d if d % 4 == 1 else 4 * d


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the standard extension of Jacobi to all n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    # peel factors of 2 from n
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi step for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod_prime(a: int, p: int, rng: random.Random | None = None) -> int | None:
    """Square root of a modulo an odd prime p, or None when a is a nonresidue.

    Tonelli-Shanks; the returned root is canonicalized to min(r, p - r).
    """
    if p < 3 or p % 2 == 0 or not is_prime(p, rng):
        raise InputError(f"p must be an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        t2i = t
        i = 0
        for i in range(1, m):
            t2i = t2i * t2i % p
            if t2i == 1:
                break
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)
