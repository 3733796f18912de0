"""Finite Frobenius-solution sets over local-field models and exact lifting.

A problem instance fixes a Frobenius module (matrix A over (Z/p^n)[u]), a
local-field model E containing the level-s Kummer layer, and the annihilation
exponent N.  The variable u acts through the Teichmueller representative of a
p^s-th root pi_s of the base uniformizer; the finite solution sets consist of
d-vectors over W_n(O_E) solving the Frobenius congruence modulo the graded
ideal [a^{>c/p^s}].

Three layers of machinery:

* enumeration of the congruence solutions over canonical residue
  representatives, with an explicit candidate cap;
* reduction maps between truncation levels, and the splitting detector that
  compares the reduced image count against the size the full solution module
  would have;
* the successive-approximation lifter that refines a level-a class into an
  exact solution, gaining a fixed positive valuation per step, with the
  p-adic digit induction for n > 1.

Working precision is self-tuning: when a certification cannot be reached at
the current model precision the problem is rebuilt at twice the digit count
and the computation retried.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bounds import BoundConstants, bound_constants, exact_nilpotency_index
from .errors import (
    CapExceededError,
    InputError,
    NonConvergenceError,
    PrecisionError,
    UndecidableError,
)
from .kisin import KisinModule, height_witness, u_power_witness
from .padic import LocalElement, LocalFieldModel, LowerBound, Rat
from .witt import (
    LocalRing,
    ideal_membership_gt,
    int_to_witt,
    power_frobenius,
    teichmuller_scale,
    witt_add,
    witt_arith_symbolic,
    witt_mul,
    witt_neg,
    witt_sub,
    witt_zero,
)

DEFAULT_CAP = 10 ** 6

Member = tuple  # tuple over coords of tuples over Witt components of coeffs


@dataclass(frozen=True)
class JSetProblem:
    module: KisinModule
    model: LocalFieldModel
    s: int
    r: int
    N: int
    constants: BoundConstants
    pi_s_power: int
    cap: int
    A_tilde: tuple
    B_tilde: tuple

    @property
    def d(self) -> int:
        return self.module.rank

    @property
    def n(self) -> int:
        return self.module.n

    @property
    def p(self) -> int:
        return self.module.p

    @property
    def level_a(self) -> Rat:
        return self.constants.a

    @property
    def level_b(self) -> Rat:
        return self.constants.b

    def pi_s(self) -> LocalElement:
        return self.model.uniformizer_pow(self.pi_s_power)

    def quotient_level(self, c: Rat) -> Rat:
        return Fraction(c) / self.p ** self.s

    def comp_threshold(self, c: Rat, i: int) -> Rat:
        return self.quotient_level(c) * self.p ** i


def _ring(prob: JSetProblem) -> LocalRing:
    return LocalRing(prob.model)


def _lift_poly(prob: JSetProblem, ring: LocalRing, poly: tuple) -> tuple:
    """Image of a (Z/p^n)[u]-polynomial in W_n(O_E) under u -> [pi_s]:
    sum of [pi_s^k] * (Witt image of the integer coefficient)."""
    p, n = prob.p, prob.n
    acc = witt_zero(ring, n)
    for k, c in enumerate(poly):
        if c == 0:
            continue
        term = teichmuller_scale(
            ring, p, prob.pi_s().pow(k), int_to_witt(ring, p, c, n)
        )
        acc = witt_add(ring, p, acc, term)
    return acc


def _witt_identity(ring: LocalRing, p: int, n: int, d: int) -> tuple:
    one = int_to_witt(ring, p, 1, n)
    zero = witt_zero(ring, n)
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def _mat_mul(ring, p, A, B):
    d = len(A)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc = None
            for k in range(d):
                term = witt_mul(ring, p, A[i][k], B[k][j])
                acc = term if acc is None else witt_add(ring, p, acc, term)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_vec(ring, p, X, B):
    """Row vector times matrix."""
    d = len(B)
    out = []
    for j in range(d):
        acc = None
        for i in range(d):
            term = witt_mul(ring, p, X[i], B[i][j])
            acc = term if acc is None else witt_add(ring, p, acc, term)
        out.append(acc)
    return tuple(out)


def _teich_div(vec: tuple, z: LocalElement, p: int) -> tuple:
    """Divide a Witt vector by the Teichmueller representative [z]:
    component i is divided by z^{p^i}."""
    out = []
    zp = z
    for i, comp in enumerate(vec):
        if i:
            zp = zp.pow(p)
        out.append(comp.div(zp))
    return tuple(out)


def _witt_vec_is_zero(vec: tuple, min_aprec: int | None = None) -> bool:
    for comp in vec:
        if not comp.is_zero_at_prec():
            return False
        if min_aprec is not None and comp.aprec < min_aprec:
            raise PrecisionError(
                f"component certified only to x-precision {comp.aprec} < {min_aprec}"
            )
    return True


def _witt_vec_val_ge(vec: tuple, target_x: int) -> bool:
    """Every component vanishes modulo x^target_x (vanishing at the working
    precision must reach the target to count)."""
    for comp in vec:
        xv = comp.xval()
        if xv is None:
            if comp.aprec < target_x:
                raise PrecisionError(
                    f"component certified only to x-precision {comp.aprec} < {target_x}"
                )
            continue
        if xv < target_x:
            return False
    return True


def derive_pi_s_power(module: KisinModule, model: LocalFieldModel, s: int) -> int:
    """For a model of degree m = e * p^s * t the canonical choice pi_s = x^t
    satisfies pi_s^{p^s} = x^{m/e}; validated by evaluating E at its p^s-th
    power."""
    e = module.E.e
    m = model.m
    ps = module.p ** s
    if m % (e * ps):
        raise InputError(
            f"model degree {m} is not a multiple of e*p^s = {e * ps}; "
            "pass the uniformizer power for pi_s explicitly"
        )
    t = m // (e * ps)
    _validate_pi_s(module, model, s, t)
    return t


def _validate_pi_s(module: KisinModule, model: LocalFieldModel, s: int, t: int) -> None:
    pi = model.uniformizer_pow(t).pow(module.p ** s)
    acc = model.zero()
    for i, c in enumerate(module.E.coeffs):
        if c:
            acc = acc + pi.pow(i).mul_int(c)
    if not acc.is_zero_at_prec():
        raise InputError(
            "candidate pi_s does not produce a root of the Eisenstein polynomial"
        )


def build_jset_problem(
    module: KisinModule,
    model: LocalFieldModel,
    s: int,
    r: int,
    N: int | None = None,
    pi_s_power: int | None = None,
    cap: int = DEFAULT_CAP,
) -> JSetProblem:
    """Assemble the lifted matrices and the normalization A~ * B~ = [pi_s]^N.

    Checks: the model normalization matches the base ramification index, s
    clears the minimal-level threshold, and the correction matrix lies in the
    positive-valuation ideal before the geometric series is applied.
    """
    if model.p != module.p:
        raise InputError("model and module disagree on p")
    if model.e_norm != module.E.e:
        raise InputError(
            "model must report valuations normalized to the base field "
            f"(e_norm = {module.E.e})"
        )
    if N is None:
        N = exact_nilpotency_index(module.E, module.n, r)
    constants = bound_constants(module.p, module.E.e, module.n, r, N)
    if s < constants.s_min_int:
        raise InputError(
            f"level s={s} is below the minimal admissible level {constants.s_min_int}"
        )
    if pi_s_power is None:
        pi_s_power = derive_pi_s_power(module, model, s)
    else:
        _validate_pi_s(module, model, s, pi_s_power)

    prob = JSetProblem(
        module, model, s, r, N, constants, pi_s_power, cap, (), ()
    )
    if module.rank == 0:
        return prob
    ring = _ring(prob)
    p, n, d = prob.p, prob.n, prob.d

    A_t = tuple(
        tuple(_lift_poly(prob, ring, module.entry(i, j)) for j in range(d))
        for i in range(d)
    )

    wit = u_power_witness(module, height_witness(module, r), N)
    B_t0 = tuple(
        tuple(_lift_poly(prob, ring, wit.B[i][j]) for j in range(d)) for i in range(d)
    )

    pi_n = prob.pi_s().pow(N)
    prod = _mat_mul(ring, p, A_t, B_t0)
    ident = _witt_identity(ring, p, n, d)
    R_mat = []
    for i in range(d):
        row = []
        for j in range(d):
            quot = _teich_div(prod[i][j], pi_n, p)
            entry = witt_sub(ring, p, quot, ident[i][j])
            if not _witt_vec_is_zero(entry):
                if not ideal_membership_gt(entry, Fraction(0), strict=True):
                    raise PrecisionError(
                        "normalization defect is not in the positive-valuation ideal"
                    )
            row.append(entry)
        R_mat.append(tuple(row))
    R_mat = tuple(R_mat)

    inv = ident
    term = ident
    neg_R = tuple(
        tuple(witt_neg(ring, p, R_mat[i][j]) for j in range(d)) for i in range(d)
    )
    for _ in range(model.full_aprec + 8):
        term = _mat_mul(ring, p, term, neg_R)
        if all(_witt_vec_is_zero(term[i][j]) for i in range(d) for j in range(d)):
            break
        inv = tuple(
            tuple(witt_add(ring, p, inv[i][j], term[i][j]) for j in range(d))
            for i in range(d)
        )
    else:
        raise PrecisionError("normalization series did not terminate at precision")

    B_t = _mat_mul(ring, p, B_t0, inv)
    check = _mat_mul(ring, p, A_t, B_t)
    pi_teich = teichmuller_scale(ring, p, pi_n, int_to_witt(ring, p, 1, n))
    for i in range(d):
        for j in range(d):
            want = pi_teich if i == j else witt_zero(ring, n)
            if not _witt_vec_is_zero(witt_sub(ring, p, check[i][j], want)):
                raise PrecisionError("normalized witness check failed at precision")

    return JSetProblem(
        module, model, s, r, N, constants, pi_s_power, cap, A_t, B_t
    )


def with_precision(prob: JSetProblem, prec_digits: int) -> JSetProblem:
    return build_jset_problem(
        prob.module,
        prob.model.with_prec(prec_digits),
        prob.s,
        prob.r,
        prob.N,
        prob.pi_s_power,
        prob.cap,
    )


# ---------------------------------------------------------------------------
# Members: canonical representatives of W_n(O_E)/[a^{>c/p^s}]
# ---------------------------------------------------------------------------


def member_to_witt(prob: JSetProblem, member: Member) -> tuple:
    return tuple(
        tuple(prob.model.from_coeffs(comp) for comp in coord) for coord in member
    )


def truncate_witt_vec(prob: JSetProblem, vec: tuple, c: Rat) -> tuple:
    return tuple(
        comp.truncate_to_level(prob.comp_threshold(c, i)) for i, comp in enumerate(vec)
    )


def truncate_solution(prob: JSetProblem, X: tuple, c: Rat) -> Member:
    return tuple(truncate_witt_vec(prob, vec, c) for vec in X)


def _residual(prob: JSetProblem, ring: LocalRing, X: tuple, level_n: int,
              arith=None) -> tuple:
    """phi(X) - X * A~, truncated to the first level_n Witt components."""
    p = prob.p
    Xl = tuple(vec[:level_n] for vec in X)
    Al = tuple(
        tuple(prob.A_tilde[i][j][:level_n] for j in range(prob.d))
        for i in range(prob.d)
    )
    if arith is None:
        mul, add = (
            lambda a, b: witt_mul(ring, p, a, b),
            lambda a, b: witt_add(ring, p, a, b),
        )
    else:
        mul, add = arith
    phi = tuple(power_frobenius(ring, p, vec) for vec in Xl)
    out = []
    for j in range(prob.d):
        acc = None
        for i in range(prob.d):
            term = mul(Xl[i], Al[i][j])
            acc = term if acc is None else add(acc, term)
        out.append(add(phi[j], witt_neg(ring, p, acc)))
    return tuple(out)


def _level_component_reps(prob: JSetProblem, c: Rat):
    """Lists of canonical coefficient tuples for each Witt component."""
    model = prob.model
    zero = model.zero()
    per_comp = []
    for i in range(prob.n):
        cuts = zero.coeff_cutoffs(prob.comp_threshold(c, i))
        ranges = [range(model.p ** k) for k in cuts]
        per_comp.append([tuple(t) for t in itertools.product(*ranges)])
    return per_comp


@dataclass(frozen=True)
class JSolutionSet:
    level: Rat
    members: tuple

    def __len__(self) -> int:
        return len(self.members)


def resolve_level(prob: JSetProblem, level) -> Rat:
    if level in ("a", None):
        return prob.level_a
    if level == "b":
        return prob.level_b
    return Fraction(level)


def jset_enumerate(prob: JSetProblem, level="a") -> JSolutionSet:
    """Complete list of congruence solutions at the given truncation level,
    over canonical residue representatives, in deterministic order."""
    c = resolve_level(prob, level)
    e = prob.module.E.e
    bound = Fraction(e * prob.p ** (prob.s - prob.n + 1))
    if not 0 <= c < bound:
        raise InputError(f"level {c} outside the admissible range [0, {bound})")
    per_comp = _level_component_reps(prob, c)
    count_one_coord = 1
    for reps in per_comp:
        count_one_coord *= len(reps)
    total = count_one_coord ** prob.d
    if total > prob.cap:
        raise CapExceededError(
            f"enumeration needs {total} candidates, cap is {prob.cap}"
        )
    ring = _ring(prob)
    q_level = prob.quotient_level(c)
    members = []
    coord_space = list(itertools.product(*per_comp))
    for combo in itertools.product(coord_space, repeat=prob.d):
        X = member_to_witt(prob, combo)
        res = _residual(prob, ring, X, prob.n)
        if all(ideal_membership_gt(entry, q_level, strict=True) for entry in res):
            members.append(tuple(combo))
    return JSolutionSet(c, tuple(members))


def recheck_member(prob: JSetProblem, member: Member, c: Rat) -> bool:
    """Re-verify one member's congruence with the symbolic universal-
    polynomial evaluation path instead of ghost solving."""
    ring = _ring(prob)
    p = prob.p
    arith = (
        lambda a, b: witt_arith_symbolic(ring, p, a, b, "mul"),
        lambda a, b: witt_arith_symbolic(ring, p, a, b, "add"),
    )
    X = member_to_witt(prob, member)
    res = _residual(prob, ring, X, prob.n, arith=arith)
    return all(
        ideal_membership_gt(entry, prob.quotient_level(c), strict=True)
        for entry in res
    )


def rho_reduce(prob: JSetProblem, sol: JSolutionSet, target) -> JSolutionSet:
    """Reduction to a lower truncation level; merges members that become
    congruent."""
    c = resolve_level(prob, target)
    if c > sol.level:
        raise InputError("reduction target must not exceed the source level")
    seen = []
    seen_set = set()
    for member in sol.members:
        X = member_to_witt(prob, member)
        key = truncate_solution(prob, X, c)
        if key not in seen_set:
            seen_set.add(key)
            seen.append(key)
    return JSolutionSet(c, tuple(seen))


def splitting_test(prob: JSetProblem, expected_t_size: int) -> tuple[bool, int]:
    """|rho_{a,b}(J_a)| against the full solution-module size: equality means
    the splitting field embeds in the model field."""
    image = rho_reduce(prob, jset_enumerate(prob, "a"), "b")
    return len(image) == expected_t_size, len(image)


# ---------------------------------------------------------------------------
# Exact lifting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftResult:
    problem: JSetProblem
    X: tuple  # d-tuple of Witt vectors over the (possibly boosted) model
    iterations: int
    gamma: Rat | None
    a_prime: Rat | None
    certified_digits: int
    trace: tuple


def lift_solution(
    prob: JSetProblem,
    member: Member,
    target_digits: int = 6,
    max_attempts: int = 5,
) -> LiftResult:
    """Refine a level-a congruence class into an exact solution.

    Retries with doubled model precision whenever certification (not
    convergence) fails; non-convergence means the starting point violated
    the level-a precondition and is reported as such.
    """
    cur = prob
    for attempt in range(max_attempts):
        try:
            return _lift_attempt(cur, member, target_digits)
        except PrecisionError:
            if attempt == max_attempts - 1:
                raise
            cur = with_precision(cur, cur.model.prec * 2)
    raise AssertionError("unreachable")


def _decompose_valuation(prob: JSetProblem, v: Rat) -> LocalElement:
    """Monomial p^j * x^i of exact v_K-valuation v."""
    model = prob.model
    t_x = Fraction(v) * model.m / model.e_norm
    if t_x.denominator != 1:
        raise PrecisionError(f"valuation {v} is not in the model's value group")
    j, i = divmod(int(t_x), model.m)
    return model.uniformizer_pow(i).mul_int(model.p ** j)


def _lift_attempt(prob: JSetProblem, member: Member, target_digits: int) -> LiftResult:
    ring = _ring(prob)
    p, n, d = prob.p, prob.n, prob.d
    model = prob.model
    target_x = model.m * target_digits
    if model.prec < target_digits:
        raise PrecisionError("model precision below the certification target")

    X = member_to_witt(prob, member)
    level_a_q = prob.quotient_level(prob.level_a)

    res = _residual(prob, ring, X, n)
    if all(_witt_vec_val_ge(entry, target_x) for entry in res):
        return LiftResult(prob, X, 0, None, None, target_digits, ())

    # congruence defect level a' (capped so the auxiliary monomial stays
    # inside the ring of integers of every Witt component)
    candidates = []
    for entry in res:
        for i, comp in enumerate(entry):
            v = comp.valuation()
            if isinstance(v, LowerBound):
                if Fraction(v.value) / p ** i <= level_a_q:
                    raise PrecisionError(
                        "residual component vanished below the level-a threshold"
                    )
                candidates.append(Fraction(v.value) / p ** i)
            else:
                candidates.append(Fraction(v) / p ** i)
    a_prime = min(candidates)
    a_prime = min(a_prime, Fraction(model.e_norm, p ** (n - 1)))
    if a_prime <= level_a_q:
        raise NonConvergenceError(
            f"congruence defect {a_prime} does not exceed the level-a "
            f"threshold {level_a_q}: starting point is not a level-a solution"
        )

    pi_n = prob.pi_s().pow(prob.N)
    n_over_ps = Fraction(prob.N, p ** prob.s)
    alpha = _decompose_valuation(prob, a_prime)
    beta = alpha.div(pi_n)
    v_beta = a_prime - n_over_ps
    gamma = min(v_beta, (p - 1) * v_beta - n_over_ps)
    if gamma <= 0:
        raise NonConvergenceError("contraction gain is not positive")
    target_vk = Fraction(target_digits * model.e_norm)
    budget = int(-(-target_vk // gamma)) + 2

    divisor = pi_n * beta
    trace: list = []

    def step(Z: tuple, level: int) -> tuple:
        Xl = tuple(vec[:level] for vec in X)
        Bl = tuple(
            tuple(prob.B_tilde[i][j][:level] for j in range(d)) for i in range(d)
        )
        XbZ = tuple(
            witt_add(ring, p, Xl[i], teichmuller_scale(ring, p, beta, Z[i]))
            for i in range(d)
        )
        phi = tuple(power_frobenius(ring, p, vec) for vec in XbZ)
        MB = _mat_vec(ring, p, phi, Bl)
        piNX = tuple(teichmuller_scale(ring, p, pi_n, Xl[i]) for i in range(d))
        return tuple(
            _teich_div(witt_sub(ring, p, MB[i], piNX[i]), divisor, p)
            for i in range(d)
        )

    def certified(Z: tuple, level: int) -> bool:
        Xc = tuple(
            witt_add(
                ring, p, tuple(X[i][:level]), teichmuller_scale(ring, p, beta, Z[i])
            )
            for i in range(d)
        )
        r = _residual(prob, ring, Xc, level)
        return all(_witt_vec_val_ge(entry, target_x) for entry in r)

    iterations = 0

    def _vals_of(vecs: tuple) -> tuple:
        out = []
        for vec in vecs:
            for comp in vec:
                v = comp.valuation()
                out.append(f">={v.value}" if isinstance(v, LowerBound) else str(v))
        return tuple(out)

    def solve(level: int) -> tuple:
        nonlocal iterations
        if level == 1:
            Z = tuple((model.zero(),) for _ in range(d))
        else:
            low = solve(level - 1)
            Z = tuple(vec + (model.zero(),) for vec in low)
        for it in range(1, budget + 1):
            Z_next = step(Z, level)
            delta = tuple(witt_sub(ring, p, Z_next[i], Z[i]) for i in range(d))
            delta_zero = all(_witt_vec_is_zero(dv) for dv in delta)
            Z = Z_next
            trace.append((level, it, _vals_of(delta)))
            iterations = max(iterations, it)
            if certified(Z, level):
                return Z
            if delta_zero:
                raise PrecisionError(
                    "iteration is stationary but the residual is not certified"
                )
        raise NonConvergenceError(
            f"no convergence within {budget} iterations at Witt level {level}"
        )

    Z = solve(n)
    X_exact = tuple(
        witt_add(ring, p, X[i], teichmuller_scale(ring, p, beta, Z[i]))
        for i in range(d)
    )
    # exactness and proximity certificates
    res = _residual(prob, ring, X_exact, n)
    for entry in res:
        if not _witt_vec_val_ge(entry, target_x):
            raise PrecisionError("final residual not certified at target precision")
    diff = tuple(witt_sub(ring, p, X_exact[i], X[i]) for i in range(d))
    for entry in diff:
        if not ideal_membership_gt(entry, prob.quotient_level(prob.level_b), True):
            raise AssertionError("lift strayed outside the level-b class")
    return LiftResult(
        prob, X_exact, iterations, gamma, a_prime, target_digits, tuple(trace)
    )


@dataclass(frozen=True)
class InjectivityVerdict:
    equal: bool
    entry: int | None = None
    component: int | None = None
    valuation: Rat | None = None
    threshold: Rat | None = None


def injectivity_gap(prob: JSetProblem, X: tuple, Y: tuple) -> InjectivityVerdict:
    """Exact solutions agreeing modulo [a^{>b/p^s}] must be equal; distinct
    ones are reported with the first separating component and its valuation."""
    ring = _ring(prob)
    p = prob.p
    level_b_q = prob.quotient_level(prob.level_b)
    diffs = tuple(witt_sub(ring, p, X[i], Y[i]) for i in range(prob.d))
    if all(_witt_vec_is_zero(entry) for entry in diffs):
        return InjectivityVerdict(True)
    same_class = all(
        ideal_membership_gt(entry, level_b_q, strict=True) for entry in diffs
    )
    if same_class:
        raise AssertionError(
            "distinct exact solutions in one level-b class violate injectivity"
        )
    for j, entry in enumerate(diffs):
        for i, comp in enumerate(entry):
            v = comp.valuation()
            if isinstance(v, LowerBound):
                continue
            threshold = level_b_q * p ** i
            if v <= threshold:
                return InjectivityVerdict(False, j, i, v, threshold)
    raise UndecidableError("no separating component resolved at this precision")


def exact_solution_set(
    prob: JSetProblem, target_digits: int = 6
) -> tuple[JSolutionSet, list[LiftResult]]:
    """Lift every level-a class and deduplicate by level-b truncation.  The
    deduplicated count must equal the reduced-image count."""
    level_a = jset_enumerate(prob, "a")
    lifts = [lift_solution(prob, member, target_digits) for member in level_a.members]
    seen = []
    seen_set = set()
    for lr in lifts:
        key = truncate_solution(lr.problem, lr.X, prob.level_b)
        if key not in seen_set:
            seen_set.add(key)
            seen.append(key)
    image = rho_reduce(prob, level_a, "b")
    if len(seen) != len(image):
        raise AssertionError("exact-solution count disagrees with the reduced image")
    return JSolutionSet(prob.level_b, tuple(seen)), lifts
