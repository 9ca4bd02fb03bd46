"""Primitive positive-definite binary quadratic forms.

A form (a, b, c) stands for a*X^2 + b*XY + c*Y^2 with b^2 - 4ac < 0, a > 0 and
gcd(a, b, c) = 1.  Equivalence classes of such forms under SL2(Z) model the
ideal classes of the imaginary quadratic order of the same discriminant;
Gauss composition is the group law.  Reduction picks the unique canonical
representative per class (|b| <= a <= c, b >= 0 at the boundaries), so class
arithmetic is plain value arithmetic on reduced triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistencyError, InputError, ResourceCapError
from . import intmath

DEFAULT_DISC_CAP = 10**8

# Below this |disc| the per-b numpy round trip costs more than a plain loop.
_NUMPY_MIN_DISC = 1 << 18
# Guard for the int64 kernel; (b^2 + |disc|) / 4 must fit in int64.
_NUMPY_MAX_DISC = 1 << 61


def validate_discriminant(disc: int) -> None:
    """Reject values that are not negative discriminants (0 or 1 mod 4)."""
    if disc >= 0:
        raise InputError(f"discriminant must be negative, got {disc}")
    if disc % 4 not in (0, 1):
        raise InputError(f"discriminant must be 0 or 1 mod 4, got {disc}")


@dataclass(frozen=True, order=True)
class QuadForm:
    """An integral binary quadratic form; immutable and totally ordered by (a, b, c)."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.b * self.b - 4 * self.a * self.c >= 0:
            raise InputError(f"form ({self.a},{self.b},{self.c}) is not positive definite")
        if math.gcd(math.gcd(self.a, self.b), self.c) != 1:
            raise InputError(f"form ({self.a},{self.b},{self.c}) is not primitive")

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if abs(b) > a or a > c:
            return False
        if b < 0 and (-b == a or a == c):
            return False
        return True

    def normalized(self) -> "QuadForm":
        """Translate so that -a < b <= a."""
        a, b, c = self.a, self.b, self.c
        if -a < b <= a:
            return self
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> "QuadForm":
        """The unique reduced representative of this form's class."""
        f = self.normalized()
        a, b, c = f.a, f.b, f.c
        while a > c or (a == c and b < 0):
            # swap outer coefficients, then re-translate in one step
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return QuadForm(a, b, c)

    def inverse(self) -> "QuadForm":
        """Reduced representative of the opposite class."""
        return QuadForm(self.a, -self.b, self.c).reduced()

    def compose(self, other: "QuadForm") -> "QuadForm":
        """Gauss composition; reduced output, well-defined on classes."""
        if self.discriminant != other.discriminant:
            raise InputError(
                f"discriminant mismatch: {self.discriminant} vs {other.discriminant}"
            )
        f, g = self.reduced(), other.reduced()
        a1, b1, c1 = f.a, f.b, f.c
        a2, b2, c2 = g.a, g.b, g.c
        s0 = (b1 + b2) // 2
        h0 = (b2 - b1) // 2
        w = math.gcd(math.gcd(a1, a2), s0)
        j = w
        s = a1 // w
        t = a2 // w
        u = s0 // w
        # solve (t*u) k = h0*u + s*c1 (mod s*t), then refine mod s
        k0, period = _solve_linear(t * u, h0 * u + s * c1, s * t)
        n0, _ = _solve_linear(t * period, h0 - t * k0, s)
        k = k0 + period * n0
        l = (k * t - h0) // s
        m = (t * u * k - h0 * u - s * c1) // (s * t)
        a3 = s * t
        b3 = j * u - (k * t + l * s)
        c3 = k * l - j * m
        return QuadForm(a3, b3, c3).reduced()

    def power(self, k: int) -> "QuadForm":
        """Reduced k-th power of the class, square-and-multiply; k >= 0."""
        if k < 0:
            raise InputError(f"exponent must be non-negative, got {k}")
        result = identity_form(self.discriminant)
        base = self.reduced()
        while k:
            if k & 1:
                result = result.compose(base)
            k >>= 1
            if k:
                base = base.compose(base)
        return result

    __mul__ = compose
    __pow__ = power


def _solve_linear(a: int, b: int, m: int) -> tuple[int, int]:
    """Smallest x >= 0 with a*x = b (mod m), plus the solution period m/gcd."""
    if m == 1:
        return 0, 1
    g = math.gcd(a, m)
    if b % g:
        raise InconsistencyError(f"no solution to {a} x = {b} (mod {m})")
    mg = m // g
    inv = pow((a // g) % mg, -1, mg)
    return (b // g) % mg * inv % mg, mg


def identity_form(disc: int) -> QuadForm:
    """The principal form: (1, 0, -disc/4) or (1, 1, (1-disc)/4)."""
    validate_discriminant(disc)
    k = disc % 2
    return QuadForm(1, k, (k * k - disc) // 4)


def _reduced_forms(disc: int, collect: bool, max_disc: int) -> tuple[int, list[QuadForm] | None]:
    """Count (and optionally collect) all primitive reduced forms of disc.

    Walks b over the admissible parity class and splits (b^2 - disc)/4 into
    a*c divisor pairs; numpy does the divisibility scan for large |disc|.
    """
    validate_discriminant(disc)
    abs_d = -disc
    if abs_d > max_disc:
        raise ResourceCapError(
            f"|discriminant| {abs_d} exceeds enumeration cap {max_disc}", detail=disc
        )
    use_np = _NUMPY_MIN_DISC <= abs_d < _NUMPY_MAX_DISC
    forms: list[QuadForm] | None = [] if collect else None
    count = 0
    b = abs_d & 1
    while 3 * b * b <= abs_d:
        m = (b * b + abs_d) // 4
        lo = b if b > 1 else 1
        hi = math.isqrt(m)
        if hi >= lo:
            if use_np:
                arr = np.arange(lo, hi + 1, dtype=np.int64)
                divisors = arr[m % arr == 0].tolist()
            else:
                divisors = [a for a in range(lo, hi + 1) if m % a == 0]
            for a in divisors:
                c = m // a
                if math.gcd(math.gcd(a, b), c) != 1:
                    continue
                count += 1
                if forms is not None:
                    forms.append(QuadForm(a, b, c))
                if 0 < b < a < c:
                    count += 1
                    if forms is not None:
                        forms.append(QuadForm(a, -b, c))
        b += 2
    if forms is not None:
        forms.sort()
    return count, forms


def enumerate_reduced(disc: int, max_disc: int = DEFAULT_DISC_CAP) -> list[QuadForm]:
    """All primitive reduced forms of the given discriminant, in canonical
    (a, b, c)-lexicographic order.  Their number is the class number."""
    _, forms = _reduced_forms(disc, collect=True, max_disc=max_disc)
    assert forms is not None
    return forms


def count_reduced(disc: int, max_disc: int = DEFAULT_DISC_CAP) -> int:
    """len(enumerate_reduced(disc)) without materializing the forms."""
    count, _ = _reduced_forms(disc, collect=False, max_disc=max_disc)
    return count


def prime_form(disc: int, q: int, rng=None) -> QuadForm | None:
    """A form (q, B, C) of discriminant disc with 0 <= B < 2q, or None when q
    is inert (kronecker(disc, q) = -1).

    Ramified q (q | disc) yields the unique form of norm q when a primitive
    one exists.  Of the admissible square roots B, the smallest is chosen, so
    the output is deterministic; the other root would give the inverse class,
    which has the same order.
    """
    validate_discriminant(disc)
    if q < 2 or not intmath.is_prime(q, rng):
        raise InputError(f"q must be prime, got {q}")
    if q == 2:
        rem = disc % 8
        if rem == 1:
            b = 1
        elif rem == 0:
            b = 0
        elif rem == 4:
            b = 2
        else:  # disc = 5 mod 8
            return None
    else:
        if disc % 2:
            parity = 1
        else:
            parity = 0
        ks = intmath.kronecker(disc, q)
        if ks == -1:
            return None
        r = intmath.sqrt_mod_prime(disc % q, q, rng)
        if r is None:  # pragma: no cover - kronecker said residue
            raise InconsistencyError(f"no sqrt of {disc} mod {q} despite kronecker 1")
        candidates = [
            x for x in (r, q - r, q + r, 2 * q - r) if 0 <= x < 2 * q and x % 2 == parity
        ]
        if not candidates:  # pragma: no cover - one of the four always matches
            raise InconsistencyError("no admissible square root lift")
        b = min(candidates)
    num = b * b - disc
    if num % (4 * q):
        raise InconsistencyError(f"B^2 != disc (mod 4q) for disc={disc}, q={q}")
    c = num // (4 * q)
    if math.gcd(math.gcd(q, b), c) != 1:
        raise InputError(
            f"no primitive form of norm {q} for discriminant {disc} (ramified in the conductor)"
        )
    return QuadForm(q, b, c)
