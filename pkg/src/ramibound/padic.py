"""Exact arithmetic foundation.

Everything here is integer arithmetic: residues mod p^M, polynomials over
them, quotient rings (Z/p^n)[u]/E(u)^r for an Eisenstein polynomial E, and
models of totally ramified extensions of Q_p presented by an Eisenstein
generator polynomial.  Valuations are exact `fractions.Fraction` values, never
floats.

Conventions
-----------
* p is an odd prime everywhere.
* A local-field model of degree m has uniformizer x with v_p(x) = 1/m.
  Reported valuations are multiplied by the model's normalization factor
  ``e_norm`` so that they come out in v_K-units (v_K(pi_K) = 1 for the base
  field K of absolute ramification index e_norm).
* Elements of a model carry an absolute precision ``aprec`` counted in
  x-units: the element is known modulo x^aprec.  Exhausting precision yields
  a flagged :class:`LowerBound`, not a wrong answer.

All values are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BaseMismatchError,
    InputError,
    NonUnitError,
    PrecisionError,
    UndecidableError,
)

Rat = Fraction


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def vp_int(a: int, p: int) -> int | None:
    """p-adic valuation of an integer, None for 0."""
    if a == 0:
        return None
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def min_integer_strictly_above(p: int, q: Rat, shift: int = 0) -> int:
    """Least integer s with p**(s - shift) > q, decided by exact comparisons.

    Used to evaluate log_p thresholds without floating logarithms; boundary
    cases sitting exactly at a power of p are resolved strictly.
    """
    if q <= 0:
        raise InputError("threshold must be positive")
    s = shift
    if Fraction(1) > q:
        while Fraction(p) ** (s - 1 - shift) > q:
            s -= 1
        return s
    while Fraction(p) ** (s - shift) <= q:
        s += 1
    return s


@dataclass(frozen=True)
class LowerBound:
    """Flag for 'valuation is at least this much'; the exact value is unknown
    because every digit at the working precision vanished."""

    value: Rat

    def __repr__(self) -> str:
        return f"LowerBound({self.value})"


# ---------------------------------------------------------------------------
# Z/p^M
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PAdicTrunc:
    """The ring Z/p^M for an odd prime p.  Elements are plain ints in
    [0, p^M); all operations go through the ring object so that mismatched
    moduli are caught."""

    p: int
    M: int

    def __post_init__(self) -> None:
        if not is_odd_prime(self.p):
            raise InputError(f"p must be an odd prime, got {self.p}")
        if self.M < 1:
            raise InputError("precision exponent must be >= 1")

    @property
    def modulus(self) -> int:
        return self.p ** self.M

    def reduce(self, a: int) -> int:
        return a % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus

    def neg(self, a: int) -> int:
        return (-a) % self.modulus

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise NonUnitError(f"{a} is not a unit mod {self.p}^{self.M}")
        return pow(a, -1, self.modulus)

    def require_same_base(self, other: "PAdicTrunc") -> None:
        if (self.p, self.M) != (other.p, other.M):
            raise BaseMismatchError(f"Z/{self.p}^{self.M} vs Z/{other.p}^{other.M}")


# ---------------------------------------------------------------------------
# Dense polynomials over Z/q (q a prime power), coefficient lists by degree
# ---------------------------------------------------------------------------


def poly_trim(c: tuple[int, ...]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def poly_add(a: tuple[int, ...], b: tuple[int, ...], q: int) -> tuple[int, ...]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % q
    return poly_trim(tuple(out))


def poly_neg(a: tuple[int, ...], q: int) -> tuple[int, ...]:
    return poly_trim(tuple((-v) % q for v in a))


def poly_mul(a: tuple[int, ...], b: tuple[int, ...], q: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if va == 0:
            continue
        for j, vb in enumerate(b):
            out[i + j] = (out[i + j] + va * vb) % q
    return poly_trim(tuple(out))


def poly_divmod_monic(
    num: tuple[int, ...], den: tuple[int, ...], q: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Division with remainder by a monic polynomial, exact mod q."""
    den = poly_trim(den)
    if not den or den[-1] % q != 1:
        raise InputError("divisor must be monic")
    d = len(den) - 1
    rem = [v % q for v in num]
    if len(rem) <= d:
        return (), poly_trim(tuple(rem))
    quot = [0] * (len(rem) - d)
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i] % q
        if c:
            quot[i - d] = c
            for j in range(d + 1):
                rem[i - d + j] = (rem[i - d + j] - c * den[j]) % q
    return poly_trim(tuple(quot)), poly_trim(tuple(rem[:d]))


def divide_by_monic(
    num: tuple[int, ...], den: tuple[int, ...], p: int, n: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(Q, R) with num = Q*den + R exactly mod p^n and deg R < deg den."""
    return poly_divmod_monic(num, den, p ** n)


def poly_divmod_monic_int(
    num: tuple[int, ...], den: tuple[int, ...]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Division with remainder by a monic polynomial over exact integers."""
    den = poly_trim(den)
    if not den or den[-1] != 1:
        raise InputError("divisor must be monic")
    d = len(den) - 1
    rem = list(num)
    if len(rem) <= d:
        return (), poly_trim(tuple(rem))
    quot = [0] * (len(rem) - d)
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i]
        if c:
            quot[i - d] = c
            for j in range(d + 1):
                rem[i - d + j] -= c * den[j]
    return poly_trim(tuple(quot)), poly_trim(tuple(rem[:d]))


def parse_poly(text: str) -> tuple[int, ...]:
    """Comma-separated integer coefficients, ascending degree ('3,1' is u+3)."""
    try:
        return tuple(int(t.strip()) for t in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad polynomial {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# Eisenstein polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EisensteinPoly:
    """Monic integer polynomial, p | a_i for i < e and v_p(a_0) = 1."""

    p: int
    coeffs: tuple[int, ...]

    @property
    def e(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self) -> tuple[int, ...]:
        return poly_trim(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def power(self, r: int, q: int) -> tuple[int, ...]:
        out: tuple[int, ...] = (1,)
        base = tuple(c % q for c in self.coeffs)
        for _ in range(r):
            out = poly_mul(out, base, q)
        return out

    def is_uniformizer_binomial(self) -> bool:
        """True for the shapes u^e - p and u^e + p."""
        if self.coeffs[0] not in (self.p, -self.p):
            return False
        return all(c == 0 for c in self.coeffs[1:-1])


def eisenstein_validate(coeffs: tuple[int, ...], p: int) -> EisensteinPoly:
    if not is_odd_prime(p):
        raise InputError(f"p must be an odd prime, got {p}")
    coeffs = tuple(coeffs)
    if len(coeffs) < 2:
        raise InputError("degree must be >= 1")
    if coeffs[-1] != 1:
        raise InputError("polynomial must be monic")
    for i, c in enumerate(coeffs[:-1]):
        if c % p != 0:
            raise InputError(f"coefficient of degree {i} is a p-unit")
    if coeffs[0] == 0 or (coeffs[0] // p) % p == 0:
        raise InputError("constant term must have valuation exactly 1")
    return EisensteinPoly(p, coeffs)


# ---------------------------------------------------------------------------
# W_n[u]/E(u)^r with W_n = Z/p^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotRing:
    """(Z/p^n)[u]/E(u)^r; elements are coefficient tuples of degree < e*r."""

    p: int
    n: int
    E: EisensteinPoly
    r: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.r < 1:
            raise InputError("n and r must be >= 1")
        if self.E.p != self.p:
            raise BaseMismatchError("Eisenstein polynomial over a different prime")

    @property
    def q(self) -> int:
        return self.p ** self.n

    @property
    def modulus_poly(self) -> tuple[int, ...]:
        return self.E.power(self.r, self.q)

    def reduce(self, coeffs: tuple[int, ...]) -> tuple[int, ...]:
        _, rem = poly_divmod_monic(coeffs, self.modulus_poly, self.q)
        return rem

    def add(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return poly_add(a, b, self.q)

    def neg(self, a: tuple[int, ...]) -> tuple[int, ...]:
        return poly_neg(a, self.q)

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return self.reduce(poly_mul(a, b, self.q))

    def inv(self, a: tuple[int, ...]) -> tuple[int, ...]:
        """Invert a unit: constant term a unit mod p is required, then the
        mod-p inverse (geometric series against the nilpotent part) is lifted
        through each p-digit by Newton steps."""
        a = self.reduce(a)
        if not a or a[0] % self.p == 0:
            raise NonUnitError("not a unit in the quotient ring")
        ring_p = QuotRing(self.p, 1, self.E, self.r)
        c_inv = pow(a[0] % self.p, -1, self.p)
        nil = ring_p.reduce(tuple((-c_inv * v) % self.p for v in ((0,) + a[1:])))
        inv_p: tuple[int, ...] = (c_inv,)
        term: tuple[int, ...] = (c_inv,)
        for _ in range(self.E.e * self.r):
            term = ring_p.mul(term, nil)
            if not term:
                break
            inv_p = ring_p.add(inv_p, term)
        v = inv_p
        mod = self.p
        while mod < self.q:
            mod = min(mod * mod, self.q)
            step = QuotRing(self.p, vp_int(mod, self.p), self.E, self.r)
            av = step.mul(tuple(x % mod for x in a), v)
            two_minus = step.add((2,), step.neg(av))
            v = step.mul(v, two_minus)
        out = self.mul(a, v)
        if out != (1,):
            raise NonUnitError("inverse verification failed")
        return v

    def u_power(self, k: int) -> tuple[int, ...]:
        return self.reduce((0,) * k + (1,))


# ---------------------------------------------------------------------------
# Local field models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalFieldModel:
    """Totally ramified extension of Q_p presented as Z_p[x]/g(x) with g
    Eisenstein of degree m, worked at a fixed p-adic digit cap.

    ``e_norm`` converts internal v_p-values into the report normalization
    v_K = e_norm * v_p, so v_K(x) = e_norm/m.
    """

    g: EisensteinPoly
    prec: int
    e_norm: int = 1

    def __post_init__(self) -> None:
        if self.prec < 1:
            raise InputError("model precision must be >= 1")
        if self.e_norm < 1:
            raise InputError("normalization factor must be >= 1")

    @property
    def p(self) -> int:
        return self.g.p

    @property
    def m(self) -> int:
        return len(self.g.coeffs) - 1

    @property
    def q(self) -> int:
        return self.p ** self.prec

    @property
    def full_aprec(self) -> int:
        return self.m * self.prec

    def zero(self) -> "LocalElement":
        return LocalElement(self, (0,) * self.m, self.full_aprec)

    def one(self) -> "LocalElement":
        return self.from_int(1)

    def from_int(self, c: int) -> "LocalElement":
        return self.from_coeffs((c,))

    def from_coeffs(self, coeffs: tuple[int, ...]) -> "LocalElement":
        if len(coeffs) > self.m:
            _, rem = poly_divmod_monic(coeffs, self.g.coeffs, self.q)
            coeffs = rem
        vec = tuple(coeffs[i] % self.q if i < len(coeffs) else 0 for i in range(self.m))
        return LocalElement(self, vec, self.full_aprec)

    def uniformizer_pow(self, k: int) -> "LocalElement":
        if k < 0:
            raise InputError("negative uniformizer power is not integral")
        return self.from_coeffs((0,) * k + (1,))

    def with_prec(self, prec: int) -> "LocalFieldModel":
        return LocalFieldModel(self.g, prec, self.e_norm)


@dataclass(frozen=True)
class LocalElement:
    """Element of a local-field model: coefficient vector over Z/p^prec plus
    an absolute precision in x-units (known modulo x^aprec)."""

    model: LocalFieldModel
    coeffs: tuple[int, ...]
    aprec: int

    def _check(self, other: "LocalElement") -> None:
        if self.model != other.model:
            raise BaseMismatchError("elements of different local-field models")

    # -- valuation ---------------------------------------------------------

    def term_xvals(self) -> list[int | None]:
        p, m = self.model.p, self.model.m
        out: list[int | None] = []
        for j, a in enumerate(self.coeffs):
            v = vp_int(a % self.model.q, p)
            out.append(None if v is None else m * v + j)
        return out

    def xval(self) -> int | None:
        """Exact valuation in x-units, or None when zero at precision."""
        best: int | None = None
        for t in self.term_xvals():
            if t is not None and t < self.aprec and (best is None or t < best):
                best = t
        return best

    def valuation(self) -> Rat | LowerBound:
        """v_K-valuation; LowerBound(e_norm * aprec / m) when zero at precision."""
        xv = self.xval()
        scale = Fraction(self.model.e_norm, self.model.m)
        if xv is None:
            return LowerBound(scale * self.aprec)
        return scale * xv

    def is_zero_at_prec(self) -> bool:
        return self.xval() is None

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "LocalElement") -> "LocalElement":
        self._check(other)
        q = self.model.q
        vec = tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs))
        return LocalElement(self.model, vec, min(self.aprec, other.aprec))

    def __sub__(self, other: "LocalElement") -> "LocalElement":
        return self + (-other)

    def __neg__(self) -> "LocalElement":
        q = self.model.q
        return LocalElement(self.model, tuple((-a) % q for a in self.coeffs), self.aprec)

    def __mul__(self, other: "LocalElement") -> "LocalElement":
        self._check(other)
        q = self.model.q
        prod = poly_mul(self.coeffs, other.coeffs, q)
        _, rem = poly_divmod_monic(prod, self.model.g.coeffs, q)
        vec = tuple(rem[i] if i < len(rem) else 0 for i in range(self.model.m))
        va = self.xval()
        vb = other.xval()
        ea = self.aprec + (vb if vb is not None else other.aprec)
        eb = other.aprec + (va if va is not None else self.aprec)
        aprec = min(ea, eb, self.model.full_aprec)
        return LocalElement(self.model, vec, aprec)

    def mul_int(self, c: int) -> "LocalElement":
        q = self.model.q
        return LocalElement(self.model, tuple((c * a) % q for a in self.coeffs), self.aprec)

    def pow(self, k: int) -> "LocalElement":
        if k < 0:
            raise InputError("negative powers via div()")
        out = self.model.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def eq_at_prec(self, other: "LocalElement") -> bool:
        return (self - other).is_zero_at_prec()

    # -- division ----------------------------------------------------------

    def shift_down(self) -> "LocalElement":
        """Exact division by the uniformizer x; requires x | self."""
        xv = self.xval()
        if xv is not None and xv < 1:
            raise PrecisionError("element is not divisible by the uniformizer")
        if self.aprec < 1:
            raise PrecisionError("no precision left for division")
        q = self.model.q
        p = self.model.p
        g = self.model.g.coeffs
        m = self.model.m
        z0 = self.coeffs[0] % q
        if z0 % p != 0:
            raise PrecisionError("element is not divisible by the uniformizer")
        c0_over_p = (g[0] // p) % q
        w_top = (-(z0 // p) * pow(c0_over_p, -1, q)) % q
        vec = [0] * m
        vec[m - 1] = w_top
        for j in range(1, m):
            vec[j - 1] = (self.coeffs[j] + w_top * g[j]) % q
        return LocalElement(self.model, tuple(vec), self.aprec - 1)

    def unit_inverse(self) -> "LocalElement":
        """Inverse of a unit (valuation 0), by mod-p series then Newton."""
        xv = self.xval()
        if xv is None or xv != 0:
            raise NonUnitError("not a unit at this precision")
        q = self.model.q
        p = self.model.p
        m = self.model.m
        g = self.model.g.coeffs
        c = self.coeffs[0] % p
        c_inv = pow(c, -1, p)
        inv = [0] * m
        inv[0] = c_inv
        # (c + h)^-1 = c^-1 sum (-h/c)^k with h the augmentation part, mod p
        # the ideal (x, p) is nilpotent mod (p, x^m)
        nil = [(-c_inv * v) % p for v in self.coeffs]
        nil[0] = (-c_inv * (self.coeffs[0] - c)) % p  # p-part dies mod p
        term = [c_inv] + [0] * (m - 1)
        for _ in range(m):
            raw = poly_mul(tuple(term), tuple(nil), p)
            _, rem = poly_divmod_monic(raw, tuple(x % p for x in g), p)
            term = [rem[i] if i < len(rem) else 0 for i in range(m)]
            if not any(term):
                break
            for i in range(m):
                inv[i] = (inv[i] + term[i]) % p
        v = LocalElement(self.model, tuple(inv), self.aprec)
        two = self.model.from_int(2)
        digits = 1
        while digits < self.model.prec:
            v = v * (two - self * v)
            digits *= 2
        v = LocalElement(self.model, v.coeffs, self.aprec)
        if not (self * v - self.model.one()).is_zero_at_prec():
            raise NonUnitError("inverse verification failed")
        return v

    def div(self, other: "LocalElement") -> "LocalElement":
        """Exact division; the divisor's valuation must not exceed ours."""
        self._check(other)
        k = other.xval()
        if k is None:
            raise PrecisionError("division by an element that is zero at precision")
        num = self
        den = other
        for _ in range(k):
            den = den.shift_down()
        if num.is_zero_at_prec():
            return LocalElement(self.model, (0,) * self.model.m, max(self.aprec - k, 0))
        for _ in range(k):
            num = num.shift_down()
        return num * den.unit_inverse()

    # -- truncation to graded-ideal levels ----------------------------------

    def coeff_cutoffs(self, level: Rat) -> tuple[int, ...]:
        """Per-coefficient digit counts k_j describing a^{>level}: an element
        lies in the ideal iff p^{k_j} divides coefficient j for all j."""
        m = self.model.m
        e_norm = self.model.e_norm
        out = []
        for j in range(m):
            qv = Fraction(level, e_norm) - Fraction(j, m)
            k = max(0, qv.__floor__() + 1)
            out.append(k)
        return tuple(out)

    def truncate_to_level(self, level: Rat) -> tuple[int, ...]:
        """Canonical representative of the class mod a^{>level}: coefficient j
        reduced mod p^{k_j}.  Raises when the level is not resolvable at the
        current precision."""
        cuts = self.coeff_cutoffs(level)
        m = self.model.m
        for j, k in enumerate(cuts):
            if k > 0 and m * (k - 1) + j >= self.aprec:
                raise UndecidableError(
                    f"level {level} needs digit {k} of coefficient {j}, precision exhausted"
                )
        p = self.model.p
        return tuple(a % (p ** k) for a, k in zip(self.coeffs, cuts))


def level_reps_count(model: LocalFieldModel, level: Rat) -> int:
    cuts = model.zero().coeff_cutoffs(level)
    return model.p ** sum(cuts)


def level_reps_iter(model: LocalFieldModel, level: Rat):
    """All canonical representatives of O_E / a^{>level} as LocalElements."""
    cuts = model.zero().coeff_cutoffs(level)
    ranges = [range(model.p ** k) for k in cuts]
    for combo in itertools.product(*ranges):
        yield model.from_coeffs(tuple(combo))
