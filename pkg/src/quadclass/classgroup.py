"""Class numbers and class-group structure of imaginary quadratic fields.

Two independent routes to h: counting reduced forms (the primary path) and
the exact finite character sum

    h = w/(2|D|) * |sum_{k=1}^{|D|-1} kronecker(D, k) * k|

for fundamental D, with w = 6, 4, 2 for D = -3, -4 and everything else.  The
two must agree exactly; ``class_number_of_field`` cross-checks them on every
call while |D| stays small enough for the sum to be cheap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import cache as result_cache
from . import intmath, qform
from .errors import InconsistencyError, InputError, ResourceCapError
from .qform import DEFAULT_DISC_CAP, QuadForm

DEFAULT_STRUCTURE_CAP = 10**4
# |disc| up to which class_number_of_field runs the analytic cross-check.
ANALYTIC_CROSS_CHECK_LIMIT = 20_000


def is_fundamental_discriminant(
    disc: int, budget: int | None = None, rng: random.Random | None = None
) -> bool:
    """True iff disc < 0 is the discriminant of a maximal imaginary order."""
    if disc >= 0:
        return False
    r = disc % 4
    if r == 1:
        return intmath.squarefree_part(disc, budget, rng).t == 1
    if r == 0:
        q = disc // 4
        return q % 4 in (2, 3) and intmath.squarefree_part(q, budget, rng).t == 1
    return False


@lru_cache(maxsize=1 << 18)
def _count_forms_cached(disc: int, max_disc: int) -> int:
    return qform.count_reduced(disc, max_disc)


def class_number_forms(disc: int, max_disc: int = DEFAULT_DISC_CAP) -> int:
    """Class number of the order of discriminant disc, by counting reduced forms."""
    qform.validate_discriminant(disc)
    # cap check comes before any cache lookup, so cache state never changes
    # whether a call errors
    if -disc > max_disc:
        raise ResourceCapError(
            f"|discriminant| {-disc} exceeds enumeration cap {max_disc}", detail=disc
        )
    cache = result_cache.active()
    if cache is None:
        return _count_forms_cached(disc, max_disc)
    hit = cache.get_h(disc)
    if hit is not None:
        return hit
    h = _count_forms_cached(disc, max_disc)
    cache.put_h(disc, h)
    return h


def _prime_array(n: int) -> np.ndarray:
    """Primes below n."""
    if n < 3:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def class_number_analytic(disc: int, max_disc: int = DEFAULT_DISC_CAP) -> int:
    """Class number of a fundamental discriminant via the exact character sum.

    The character kronecker(disc, .) is completely multiplicative, so its
    values on 1..|disc|-1 are filled in by sieving over prime powers rather
    than evaluated k by k; the weighted sum itself is exact int64 work.
    """
    qform.validate_discriminant(disc)
    if -disc > max_disc:
        raise ResourceCapError(
            f"|discriminant| {-disc} exceeds cap {max_disc}", detail=disc
        )
    if not is_fundamental_discriminant(disc):
        raise InputError(f"{disc} is not a fundamental discriminant")
    abs_d = -disc
    if abs_d == 3:
        return 1
    chi = np.ones(abs_d, dtype=np.int8)
    chi[0] = 0
    for p in _prime_array(abs_d).tolist():
        e = intmath.kronecker(disc, p)
        if e == 1:
            continue
        if e == 0:
            chi[p::p] = 0
            continue
        pk = p
        while pk < abs_d:
            chi[pk::pk] *= -1
            pk *= p
    total = 0
    step = 1 << 22
    for lo in range(0, abs_d, step):
        hi = min(abs_d, lo + step)
        total += int(
            np.dot(np.arange(lo, hi, dtype=np.int64), chi[lo:hi].astype(np.int64))
        )
    w = 4 if disc == -4 else 2
    num = w * abs(total)
    if num == 0 or num % (2 * abs_d):
        raise InconsistencyError(
            f"character sum {total} for disc {disc} does not yield an integer class number"
        )
    return num // (2 * abs_d)


class FieldClassNumber(NamedTuple):
    h: int
    disc: int
    d_sf: int


def class_number_checked(
    disc: int,
    max_disc: int = DEFAULT_DISC_CAP,
    cross_check_limit: int = ANALYTIC_CROSS_CHECK_LIMIT,
) -> int:
    """Form-count class number, verified against the character sum when
    |disc| <= cross_check_limit.  Disagreement is a hard error."""
    h = class_number_forms(disc, max_disc)
    if -disc <= cross_check_limit and is_fundamental_discriminant(disc):
        ha = class_number_analytic(disc, max_disc)
        if ha != h:
            raise InconsistencyError(
                f"class number mismatch at disc {disc}: forms {h}, analytic {ha}"
            )
    return h


def class_number_of_field(
    d: int,
    max_disc: int = DEFAULT_DISC_CAP,
    budget: int | None = None,
    rng: random.Random | None = None,
    cross_check_limit: int = ANALYTIC_CROSS_CHECK_LIMIT,
) -> FieldClassNumber:
    """Class number of Q(sqrt(d)) for any negative integer d.

    Normalizes through the square-free part and the fundamental discriminant,
    so d may carry square factors (h(-343) is h of Q(sqrt(-7))).
    """
    if d >= 0:
        raise InputError(f"only imaginary quadratic fields are supported, got d={d}")
    d_sf = intmath.squarefree_part(d, budget, rng).d
    disc = d_sf if d_sf % 4 == 1 else 4 * d_sf
    if -disc > max_disc:
        raise ResourceCapError(
            f"|discriminant| {-disc} exceeds enumeration cap {max_disc}", detail=disc
        )
    h = class_number_checked(disc, max_disc, cross_check_limit)
    return FieldClassNumber(h=h, disc=disc, d_sf=d_sf)


def order_of_class(
    f: QuadForm, h: int, budget: int | None = None, rng: random.Random | None = None
) -> int:
    """Multiplicative order of the class [f], given a multiple h of it.

    Factors h and strips primes while the corresponding power stays
    principal.  Raises InconsistencyError if h is not actually a multiple of
    the order (e.g. a wrong class number was supplied).
    """
    if h < 1:
        raise InputError(f"h must be positive, got {h}")
    ident = qform.identity_form(f.discriminant)
    if f.power(h) != ident:
        raise InconsistencyError(f"power(f, {h}) is not principal; {h} is not a multiple of the order")
    m = h
    for p, _ in intmath.factor(h, budget, rng).factors:
        while m % p == 0 and f.power(m // p) == ident:
            m //= p
    return m


@dataclass(frozen=True)
class ClassGroupInfo:
    """Certificate for the group of classes of one discriminant.

    elementary_divisors is the ascending divisibility chain d1 | d2 | ... with
    product h; generators[i] has order elementary_divisors[i] and together
    they generate the whole group.
    """

    discriminant: int
    h: int
    elementary_divisors: tuple[int, ...]
    generators: tuple[QuadForm, ...]


def _exact_log(value: int, p: int) -> int:
    """e with p**e == value; the inputs here are always exact powers."""
    e = 0
    v = value
    while v > 1:
        if v % p:
            raise InconsistencyError(f"{value} is not a power of {p}")
        v //= p
        e += 1
    return e


def _sylow_exponents(order_values, p: int, a: int) -> list[int]:
    """Exponents (descending) of the p-Sylow invariant factors.

    #{x : ord(x) | p^j} equals p**(sum_i min(lambda_i, j)); differencing those
    logarithms over j recovers how many invariants have exponent >= j, and
    hence the multiset of exponents.
    """
    sums = []
    pj = 1
    for _ in range(a + 1):
        count = sum(1 for o in order_values if pj % o == 0)
        sums.append(_exact_log(count, p))
        pj *= p
    ge = [sums[j] - sums[j - 1] for j in range(1, a + 1)]  # non-increasing
    lams = [max(j for j in range(1, a + 1) if idx < ge[j - 1]) for idx in range(ge[0])]
    return sorted(lams, reverse=True)


def group_structure(
    disc: int,
    max_disc: int = DEFAULT_DISC_CAP,
    structure_cap: int = DEFAULT_STRUCTURE_CAP,
    budget: int | None = None,
    rng: random.Random | None = None,
) -> ClassGroupInfo:
    """Elementary divisors and matching generators of the form class group.

    Element orders give the Sylow invariant profile by counting; generators
    are then picked greedily (largest remaining invariant first) and verified
    by explicit subgroup growth, so the certificate is self-checking.
    """
    forms = qform.enumerate_reduced(disc, max_disc)
    h = len(forms)
    if h > structure_cap:
        raise ResourceCapError(
            f"class number {h} exceeds structure cap {structure_cap}", detail=h
        )
    if h == 1:
        return ClassGroupInfo(disc, 1, (), ())
    orders = {f: order_of_class(f, h, budget, rng) for f in forms}
    hfac = intmath.factor(h, budget, rng)

    # Sylow exponent profile per prime, from element-order counts alone.
    exps_by_prime = {
        p: _sylow_exponents(orders.values(), p, a) for p, a in hfac.factors
    }

    # Merge per-prime profiles into elementary divisors (descending first).
    width = max(len(v) for v in exps_by_prime.values())
    divisors_desc = []
    for i in range(width):
        d = 1
        for p, lams in exps_by_prime.items():
            if i < len(lams):
                d *= p ** lams[i]
        divisors_desc.append(d)

    # Greedy generators hitting the known targets, with subgroup verification.
    ident = qform.identity_form(disc)
    subgroup = {ident}
    gens_desc: list[QuadForm] = []
    by_order_desc = sorted(forms, key=lambda f: (-orders[f], f))
    for target in divisors_desc:
        found = None
        for f in by_order_desc:
            if orders[f] != target:
                continue
            # order of f's image in G/subgroup: smallest k | target with f^k inside
            quotient_order = None
            for k in _sorted_divisors(target):
                if f.power(k) in subgroup:
                    quotient_order = k
                    break
            if quotient_order == target:
                found = f
                break
        if found is None:  # pragma: no cover - counting profile guarantees one
            raise InconsistencyError(f"no generator of quotient order {target} found")
        gens_desc.append(found)
        powers = [ident]
        for _ in range(target - 1):
            powers.append(powers[-1].compose(found))
        subgroup = {s.compose(p) for s in subgroup for p in powers}
    if len(subgroup) != h:  # pragma: no cover
        raise InconsistencyError("generated subgroup does not exhaust the class group")

    divisors = tuple(reversed(divisors_desc))
    generators = tuple(reversed(gens_desc))
    return ClassGroupInfo(disc, h, divisors, generators)


def _sorted_divisors(n: int) -> list[int]:
    divs = []
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            divs.append(i)
            if i != n // i:
                divs.append(n // i)
    return sorted(divs)
