"""Torsion Frobenius modules over truncated power series and tame lifts.

A module of rank d is stored as its Frobenius matrix A over (Z/p^n)[u]
truncated at u^P.  Height witnesses B with A*B = E(u)^r * I are found by
linear algebra over F_p[[u]] (a discrete valuation ring, so Laurent-series
elimination decides solvability) followed by digit-by-digit p-adic lifting;
direct inversion is unavailable because the coefficient ring is not a domain
for n > 1.  Every witness is re-verified by multiplication before it is
returned.

The tame-lift builder produces the cyclic module with phi(e_{i+1}) =
(u+p)^{n_i} e_i together with its filtered-module data and the exponent of
the level-d fundamental character it realizes; an independent oracle recovers
the exponent from the Kummer-style congruence system the module imposes on
homomorphism values.  The uniformizer here is pinned to -p, so E(u) = u + p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    InputError,
    NotHeightError,
    PrecisionError,
)
from .padic import (
    EisensteinPoly,
    eisenstein_validate,
    poly_trim,
)

# ---------------------------------------------------------------------------
# Finite fields F_{p^f}, explicit irreducible presentation
# ---------------------------------------------------------------------------


def _fp_polmul(a: tuple, b: tuple, p: int) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if va:
            for j, vb in enumerate(b):
                out[i + j] = (out[i + j] + va * vb) % p
    return poly_trim(tuple(out))


def _fp_polmod(a: tuple, mod: tuple, p: int) -> tuple:
    d = len(mod) - 1
    rem = [v % p for v in a]
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i]
        if c:
            for j in range(d + 1):
                rem[i - d + j] = (rem[i - d + j] - c * mod[j]) % p
    return poly_trim(tuple(rem[:d]))


def _fp_polpow_mod(a: tuple, k: int, mod: tuple, p: int) -> tuple:
    out: tuple = (1,)
    base = _fp_polmod(a, mod, p)
    while k:
        if k & 1:
            out = _fp_polmod(_fp_polmul(out, base, p), mod, p)
        base = _fp_polmod(_fp_polmul(base, base, p), mod, p)
        k >>= 1
    return out


def _fp_polgcd(a: tuple, b: tuple, p: int) -> tuple:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        bb = tuple((inv * c) % p for c in b)
        d = len(bb) - 1
        rem = [v % p for v in a]
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                for j in range(d + 1):
                    rem[i - d + j] = (rem[i - d + j] - c * bb[j]) % p
        a, b = b, poly_trim(tuple(rem[:d]))
    return a


def _is_irreducible(mod: tuple, p: int) -> bool:
    f = len(mod) - 1
    x: tuple = (0, 1)
    if _fp_polpow_mod(x, p ** f, mod, p) != x:
        return False
    primes = set()
    ff = f
    d = 2
    while d * d <= ff:
        if ff % d == 0:
            primes.add(d)
            while ff % d == 0:
                ff //= d
        d += 1
    if ff > 1:
        primes.add(ff)
    for t in primes:
        xp = _fp_polpow_mod(x, p ** (f // t), mod, p)
        diff = tuple(
            ((xp[i] if i < len(xp) else 0) - (x[i] if i < len(x) else 0)) % p
            for i in range(max(len(xp), len(x)))
        )
        g = _fp_polgcd(mod, diff, p)
        if len(poly_trim(g)) - 1 > 0:
            return False
    return True


@dataclass(frozen=True)
class GF:
    """F_{p^f} presented as F_p[y]/(modulus); the modulus is the first monic
    irreducible in lexicographic coefficient order, recorded explicitly.
    Elements are coefficient tuples of length f."""

    p: int
    f: int
    modulus: tuple[int, ...]

    @staticmethod
    def create(p: int, f: int) -> "GF":
        if f < 1:
            raise InputError("extension degree must be >= 1")
        if f == 1:
            return GF(p, 1, (0, 1))
        for tail in itertools.product(range(p), repeat=f):
            mod = tuple(tail) + (1,)
            if mod[0] == 0:
                continue
            if _is_irreducible(mod, p):
                return GF(p, f, mod)
        raise AssertionError("irreducible polynomial must exist")

    @property
    def order(self) -> int:
        return self.p ** self.f

    def zero(self):
        return (0,) * self.f

    def one(self):
        return self.from_int(1)

    def from_int(self, c: int):
        return (c % self.p,) + (0,) * (self.f - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        r = _fp_polmod(_fp_polmul(a, b, self.p), self.modulus, self.p)
        return tuple(r[i] if i < len(r) else 0 for i in range(self.f))

    def pow(self, a, k: int):
        out = self.one()
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def inv(self, a):
        if not any(a):
            raise InputError("inversion of zero")
        return self.pow(a, self.order - 2)

    def is_zero(self, a) -> bool:
        return not any(a)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def elements(self):
        for combo in itertools.product(range(self.p), repeat=self.f):
            yield tuple(combo)


# ---------------------------------------------------------------------------
# Series linear algebra over a field (the mod-p layer)
# ---------------------------------------------------------------------------
# A series is a plain list of field elements (index = u-exponent), always
# read modulo u^prec for an explicitly tracked prec.


def series_trim(F: GF, a: list) -> list:
    i = len(a)
    while i > 0 and F.is_zero(a[i - 1]):
        i -= 1
    return a[:i]


def series_mul(F: GF, a: list, b: list, prec: int) -> list:
    out = [F.zero()] * min(prec, max(len(a) + len(b) - 1, 0))
    for i, va in enumerate(a):
        if F.is_zero(va) or i >= prec:
            continue
        for j, vb in enumerate(b):
            if i + j >= prec:
                break
            out[i + j] = F.add(out[i + j], F.mul(va, vb))
    return out


def series_add(F: GF, a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [
        F.add(a[i] if i < len(a) else F.zero(), b[i] if i < len(b) else F.zero())
        for i in range(n)
    ]


def series_neg(F: GF, a: list) -> list:
    return [F.neg(v) for v in a]


def series_val(F: GF, a: list, prec: int) -> int | None:
    for i, v in enumerate(a):
        if i >= prec:
            break
        if not F.is_zero(v):
            return i
    return None


def series_inv_unit(F: GF, a: list, prec: int) -> list:
    if not a or F.is_zero(a[0]):
        raise InputError("series inverse needs a unit constant term")
    inv0 = F.inv(a[0])
    out = [inv0]
    for k in range(1, prec):
        acc = F.zero()
        for i in range(1, min(k, len(a) - 1) + 1):
            acc = F.add(acc, F.mul(a[i], out[k - i]))
        out.append(F.neg(F.mul(inv0, acc)))
    return out


def _mat_minor(mat, i, j):
    return [row[:j] + row[j + 1 :] for r, row in enumerate(mat) if r != i]


def series_det(F: GF, mat, prec: int) -> list:
    d = len(mat)
    if d == 1:
        return list(mat[0][0])
    acc: list = []
    sign = 1
    for j in range(d):
        sub = series_det(F, _mat_minor(mat, 0, j), prec)
        term = series_mul(F, mat[0][j], sub, prec)
        if sign < 0:
            term = series_neg(F, term)
        acc = series_add(F, acc, term)
        sign = -sign
    return acc


def series_adjugate(F: GF, mat, prec: int):
    d = len(mat)
    if d == 1:
        return [[[F.one()]]]
    out = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            sub = series_det(F, _mat_minor(mat, i, j), prec)
            if (i + j) % 2:
                sub = series_neg(F, sub)
            out[j][i] = sub  # transpose of cofactors
    return out


def series_solve(F: GF, A, M, prec: int):
    """C with A*C = M over F[[u]]/u^prec', prec' = prec - 2*val(det A).

    Returns (C, prec').  Raises NotHeightError when the unique Laurent
    solution is not integral, PrecisionError when det A vanishes entirely at
    this truncation.
    """
    d = len(A)
    det = series_det(F, A, prec)
    v = series_val(F, det, prec)
    if v is None:
        raise PrecisionError("matrix determinant vanishes at this u-precision")
    unit = det[v:]
    unit_inv = series_inv_unit(F, unit, max(prec - v, 1))
    adj = series_adjugate(F, A, prec)
    out_prec = prec - 2 * v
    if out_prec <= 0:
        raise PrecisionError("u-precision exhausted by determinant valuation")
    C = []
    for i in range(d):
        row = []
        for j in range(d):
            acc: list = []
            for k in range(d):
                acc = series_add(F, acc, series_mul(F, adj[i][k], M[k][j], prec))
            t = series_mul(F, acc, unit_inv, prec - v)
            for low in range(min(v, len(t))):
                if not F.is_zero(t[low]):
                    raise NotHeightError(
                        "solution acquires a pole: no witness at this height"
                    )
            row.append(t[v:])
        C.append(row)
    return C, out_prec


# ---------------------------------------------------------------------------
# Kisin modules over (Z/p^n)[u]/u^P
# ---------------------------------------------------------------------------


def _zq_series_mul(a: tuple, b: tuple, q: int, prec: int) -> tuple:
    out = [0] * min(prec, max(len(a) + len(b) - 1, 0))
    for i, va in enumerate(a):
        if va == 0 or i >= prec:
            continue
        for j, vb in enumerate(b):
            if i + j >= prec:
                break
            out[i + j] = (out[i + j] + va * vb) % q
    return poly_trim(tuple(out))


@dataclass(frozen=True)
class KisinModule:
    """Rank-d Frobenius matrix over (Z/p^n)[u] truncated at u^uprec."""

    p: int
    n: int
    E: EisensteinPoly
    rank: int
    entries: tuple[tuple[tuple[int, ...], ...], ...]
    uprec: int

    @property
    def q(self) -> int:
        return self.p ** self.n

    def entry(self, i: int, j: int) -> tuple[int, ...]:
        return self.entries[i][j]

    def entries_mod_p(self) -> tuple:
        return tuple(
            tuple(tuple(c % self.p for c in e) for e in row) for row in self.entries
        )

    def truncate_n(self, n_new: int) -> "KisinModule":
        if n_new > self.n:
            raise InputError("cannot increase p-adic length")
        qn = self.p ** n_new
        ent = tuple(
            tuple(poly_trim(tuple(c % qn for c in e)) for e in row)
            for row in self.entries
        )
        return KisinModule(self.p, n_new, self.E, self.rank, ent, self.uprec)


def kisin_new(
    p: int,
    n: int,
    E: EisensteinPoly,
    matrix,
    uprec: int | None = None,
    r_hint: int = 1,
) -> KisinModule:
    if E.p != p:
        raise InputError("Eisenstein polynomial over a different prime")
    if n < 1:
        raise InputError("p-adic length must be >= 1")
    d = len(matrix)
    if any(len(row) != d for row in matrix):
        raise InputError("Frobenius matrix must be square")
    if uprec is None:
        uprec = E.e * r_hint * n + E.e * r_hint + 8
    q = p ** n
    ent = []
    for row in matrix:
        out_row = []
        for entry in row:
            entry = tuple(entry)
            if any(not 0 <= c < q for c in entry):
                raise InputError(
                    f"matrix coefficients must lie in [0, {p}^{n}) = [0, {q})"
                )
            if len(entry) > uprec:
                raise InputError("entry degree exceeds the u-precision")
            out_row.append(poly_trim(entry))
        ent.append(tuple(out_row))
    return KisinModule(p, n, E, d, tuple(ent), uprec)


def _mat_mul_series(A, B, q: int, prec: int):
    d = len(A)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc: tuple = ()
            for k in range(d):
                term = _zq_series_mul(A[i][k], B[k][j], q, prec)
                n = max(len(acc), len(term))
                acc = poly_trim(
                    tuple(
                        (
                            (acc[t] if t < len(acc) else 0)
                            + (term[t] if t < len(term) else 0)
                        )
                        % q
                        for t in range(n)
                    )
                )
            row.append(acc)
        out.append(row)
    return out


def _mat_equal_series(A, B, q: int, prec: int) -> bool:
    d = len(A)
    for i in range(d):
        for j in range(d):
            a, b = A[i][j], B[i][j]
            for t in range(prec):
                av = a[t] if t < len(a) else 0
                bv = b[t] if t < len(b) else 0
                if (av - bv) % q:
                    return False
    return True


def _scalar_matrix(poly: tuple, d: int):
    return [[tuple(poly) if i == j else () for j in range(d)] for i in range(d)]


@dataclass(frozen=True)
class HeightWitness:
    B: tuple
    uprec: int  # u-precision at which A*B = E^r*I is certified
    r: int


def height_witness(mod: KisinModule, r: int) -> HeightWitness:
    """Solve A*B = E(u)^r * I over (Z/p^n)[u]/u^P.

    Mod p the system is solved by Laurent-series elimination; solutions are
    then lifted one p-digit at a time, each digit again a mod-p solve.  A pole
    at any stage means no witness exists at this height.
    """
    if r < 0:
        raise InputError("height must be nonnegative")
    p, n, q, P = mod.p, mod.n, mod.q, mod.uprec
    if P < mod.E.e * r + 1:
        raise PrecisionError("u-precision below e*r + 1 cannot certify the height")
    F = GF.create(p, 1)
    d = mod.rank

    def to_f(entry: tuple) -> list:
        return [(c % p,) for c in entry]

    A_f = [[to_f(mod.entry(i, j)) for j in range(d)] for i in range(d)]
    target = mod.E.power(r, q)
    target_f = [[to_f(target) if i == j else [] for j in range(d)] for i in range(d)]

    C0, avail = series_solve(F, A_f, target_f, P)
    B = [
        [poly_trim(tuple(c[0] for c in C0[i][j])) for j in range(d)]
        for i in range(d)
    ]

    for k in range(1, n):
        prod = _mat_mul_series(mod.entries, B, q, avail)
        pk = p ** k
        R_f = []
        for i in range(d):
            row = []
            for j in range(d):
                tgt = target if i == j else ()
                ent = []
                for t in range(avail):
                    av = (tgt[t] if t < len(tgt) else 0) - (
                        prod[i][j][t] if t < len(prod[i][j]) else 0
                    )
                    av %= q
                    if av % pk:
                        raise AssertionError("digit residual not divisible")
                    ent.append(((av // pk) % p,))
                row.append(ent)
            R_f.append(row)
        Ck, avail = series_solve(F, A_f, R_f, avail)
        for i in range(d):
            for j in range(d):
                lifted = tuple(c[0] * pk for c in Ck[i][j])
                base = B[i][j]
                nlen = max(len(base), len(lifted))
                B[i][j] = poly_trim(
                    tuple(
                        (
                            (base[t] if t < len(base) else 0)
                            + (lifted[t] if t < len(lifted) else 0)
                        )
                        % q
                        for t in range(nlen)
                    )
                )

    if avail < mod.E.e * r + 1:
        raise PrecisionError("witness certified below e*r + 1; raise uprec")
    Bt = tuple(tuple(B[i][j] for j in range(d)) for i in range(d))
    prod = _mat_mul_series(mod.entries, Bt, q, avail)
    if not _mat_equal_series(prod, _scalar_matrix(target, d), q, avail):
        raise AssertionError("witness re-verification failed")
    return HeightWitness(Bt, avail, r)


def u_power_witness(mod: KisinModule, wit: HeightWitness, N: int) -> HeightWitness:
    """B' = B*h with u^N = E(u)^r * h, so A*B' = u^N * I.  Requires u^N to
    vanish in the quotient by E^r, i.e. the division to be exact."""
    from .padic import divide_by_monic

    q = mod.q
    er_poly = mod.E.power(wit.r, q)
    quot, rem = divide_by_monic((0,) * N + (1,), er_poly, mod.p, mod.n)
    if rem:
        raise InputError(f"u^{N} does not vanish in the quotient: N too small")
    avail = wit.uprec
    if N >= avail:
        raise PrecisionError("u-precision too small to verify the u^N witness")
    d = mod.rank
    Bp = tuple(
        tuple(_zq_series_mul(wit.B[i][j], quot, q, avail) for j in range(d))
        for i in range(d)
    )
    prod = _mat_mul_series(mod.entries, Bp, q, avail)
    if not _mat_equal_series(prod, _scalar_matrix((0,) * N + (1,), d), q, avail):
        raise AssertionError("u-power witness re-verification failed")
    return HeightWitness(Bp, avail, wit.r)


# ---------------------------------------------------------------------------
# Tame lifts and the character oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TameLiftSpec:
    p: int
    period: int
    seq: tuple[int, ...]
    exponent: int  # exponent of the level-d fundamental character, mod p^d - 1
    filtration_jumps: tuple[int, ...]
    filtered_frobenius: tuple[int, ...]  # diagonal-shift entries p^{n_i}
    module: KisinModule
    height: int


def tame_lift_build(p: int, d: int, seq, n: int = 1) -> TameLiftSpec:
    """Cyclic module phi(e_{i+1}) = (u+p)^{n_i} e_i for a d-periodic exponent
    sequence with 0 <= n_i <= p-1, plus its filtered data and character
    exponent sum(n_i p^i) mod (p^d - 1)."""
    seq = tuple(int(v) for v in seq)
    if len(seq) != d:
        raise InputError("sequence length must equal the period")
    if any(not 0 <= v <= p - 1 for v in seq):
        raise InputError("exponents must lie in [0, p-1]")
    E = eisenstein_validate((p, 1), p)
    r = max(seq) if seq else 0
    q = p ** n
    uprec = E.e * max(r, 1) * n + E.e * max(r, 1) + 8
    matrix = [[() for _ in range(d)] for _ in range(d)]
    for i in range(d):
        pw: tuple = (1,)
        for _ in range(seq[i]):
            pw = _zq_series_mul(pw, (p % q, 1), q, uprec)
        matrix[i][(i + 1) % d] = tuple(pw)
    mod = kisin_new(p, n, E, matrix, uprec=uprec, r_hint=max(r, 1))
    qd = p ** d - 1
    exponent = sum(seq[i] * p ** i for i in range(d)) % qd
    return TameLiftSpec(
        p,
        d,
        seq,
        exponent,
        tuple(sorted(seq)),
        tuple(p ** v for v in seq),
        mod,
        r,
    )


@dataclass(frozen=True)
class TameOracleResult:
    exponent: int
    consistent_starts: tuple[int, ...]
    field_modulus: tuple[int, ...]


def tame_character_oracle(p: int, d: int, seq) -> TameOracleResult:
    """Independent exponent computation from the congruence system the cyclic
    module imposes on homomorphism values.

    Writing each value as c_i * t^{a_i} with t^q = u (q = p^d - 1) and c_i in
    F_{p^d}, Frobenius compatibility forces p*a_{i+1} = a_i + q*n_i around the
    cycle.  Enumerating admissible starts a_0 in [0, q] and reading the
    t -> zeta*t action on the solution line gives the character exponent a_0
    mod q.  The sign convention (no inversion under the Hom) is anchored by
    the period-1, exponent-1 case and frozen."""
    seq = tuple(int(v) for v in seq)
    if len(seq) != d:
        raise InputError("sequence length must equal the period")
    if any(not 0 <= v <= p - 1 for v in seq):
        raise InputError("exponents must lie in [0, p-1]")
    q = p ** d - 1
    starts = []
    for a0 in range(q + 1):
        a = a0
        ok = True
        for i in range(d):
            t = a + q * seq[i]
            if t % p:
                ok = False
                break
            a = t // p
        if ok and a == a0:
            starts.append(a0)
    if not starts:
        raise AssertionError("the cyclic exponent system always has a solution")
    exps = {a0 % q for a0 in starts}
    if len(exps) != 1:
        raise AssertionError("inconsistent exponent classes")
    F = GF.create(p, d)
    # coefficient solutions form an F_{p^d}-line: d-fold Frobenius must fix
    # the field elementwise
    probe = F.from_int(2) if d == 1 else tuple([1, 1] + [0] * (d - 2))
    fr = probe
    for _ in range(d):
        fr = F.frobenius(fr)
    if fr != probe:
        raise AssertionError("field presentation is not fixed by q-Frobenius")
    return TameOracleResult(exps.pop(), tuple(starts), F.modulus)


# ---------------------------------------------------------------------------
# Etale Frobenius modules over F_q((u)) and integral models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Laurent:
    """Truncated Laurent series: coeffs[i] multiplies u^(shift + i)."""

    shift: int
    coeffs: tuple

    def val(self, F: GF) -> int | None:
        for i, c in enumerate(self.coeffs):
            if not F.is_zero(c):
                return self.shift + i
        return None


@dataclass(frozen=True)
class EtalePhiModule:
    """Frobenius matrix over F_q((u)), truncated; etale means det != 0."""

    field: GF
    entries: tuple[tuple[Laurent, ...], ...]
    e: int
    uprec: int

    @property
    def rank(self) -> int:
        return len(self.entries)


def etale_new(field: GF, entries, e: int, uprec: int = 32) -> EtalePhiModule:
    d = len(entries)
    if any(len(row) != d for row in entries):
        raise InputError("Frobenius matrix must be square")
    rows = tuple(tuple(entries[i][j] for j in range(d)) for i in range(d))
    mod = EtalePhiModule(field, rows, e, uprec)
    _, det_val = _etale_det_val(mod)
    if det_val is None:
        raise InputError("Frobenius matrix is not etale: det vanishes")
    return mod


def _etale_det_val(mod: EtalePhiModule):
    F = mod.field
    d = mod.rank
    # common downward shift so every entry becomes a series
    shifts = [ent.shift for row in mod.entries for ent in row]
    base = min(shifts) if shifts else 0
    mat = []
    for row in mod.entries:
        mat_row = []
        for ent in row:
            pad = ent.shift - base
            mat_row.append([F.zero()] * pad + list(ent.coeffs))
        mat.append(mat_row)
    det = series_det(F, mat, mod.uprec)
    v = series_val(F, det, mod.uprec)
    if v is None:
        return None, None
    return det, v + d * base


@dataclass(frozen=True)
class EtaleToKisinResult:
    field_modulus: tuple[int, ...]
    rescale_power: int  # t, with u^{t(p-1)} applied to the matrix
    r: int
    matrix: tuple  # integral entries as series coefficient tuples
    det_val: int


def etale_to_kisin(mod: EtalePhiModule) -> EtaleToKisinResult:
    """Rescale by the minimal u^{t(p-1)} making the matrix integral, then read
    off the height r = ceil(val_u(det)/e) of the resulting mod-p module."""
    F = mod.field
    p = F.p
    d = mod.rank
    vals = [ent.val(F) for row in mod.entries for ent in row]
    vals = [v for v in vals if v is not None]
    if not vals:
        raise InputError("zero matrix is not etale")
    minval = min(vals)
    t = 0
    if minval < 0:
        t = (-minval + p - 2) // (p - 1)  # ceil(-minval / (p-1))
    shift = t * (p - 1)
    mat = []
    for row in mod.entries:
        mat_row = []
        for ent in row:
            pad = ent.shift + shift
            if pad < 0:
                raise AssertionError("rescaled entry still fractional")
            mat_row.append(tuple([F.zero()] * pad + list(ent.coeffs)))
        mat.append(tuple(mat_row))
    rescaled = EtalePhiModule(
        F,
        tuple(tuple(Laurent(0, entry) for entry in row) for row in mat),
        mod.e,
        mod.uprec,
    )
    _, det_val = _etale_det_val(rescaled)
    if det_val is None:
        raise PrecisionError("determinant vanished at truncation after rescaling")
    r = -(-det_val // mod.e)
    return EtaleToKisinResult(F.modulus, t, r, tuple(mat), det_val)


def modp_height_witness(field: GF, matrix, e: int, r: int, uprec: int):
    """Witness A*B = u^{e*r} * I over F_q[[u]]; the mod-p incarnation of the
    height condition (E is congruent to u^e there)."""
    F = field
    d = len(matrix)
    A_f = [[list(matrix[i][j]) for j in range(d)] for i in range(d)]
    er = e * r
    if er >= uprec:
        raise PrecisionError("u-precision too small for this height")
    tgt = [F.zero()] * er + [F.one()]
    M = [[list(tgt) if i == j else [] for j in range(d)] for i in range(d)]
    C, avail = series_solve(F, A_f, M, uprec)
    # verify
    for i in range(d):
        for j in range(d):
            acc: list = []
            for k in range(d):
                acc = series_add(F, acc, series_mul(F, A_f[i][k], C[k][j], avail))
            want = tgt if i == j else []
            for tpos in range(avail):
                av = acc[tpos] if tpos < len(acc) else F.zero()
                bv = want[tpos] if tpos < len(want) else F.zero()
                if av != bv:
                    raise AssertionError("mod-p witness re-verification failed")
    return C, avail


def result_as_kisin_module(res: EtaleToKisinResult, p: int, E: EisensteinPoly,
                           uprec: int | None = None) -> KisinModule:
    """Package an integral prime-field conversion result as a length-1 module."""
    if res.field_modulus != (0, 1):
        raise InputError("only prime-field matrices lift to the Z/p layer here")
    matrix = [
        [tuple(c[0] % p for c in entry) for entry in row] for row in res.matrix
    ]
    return kisin_new(p, 1, E, matrix, uprec=uprec, r_hint=max(res.r, 1))
