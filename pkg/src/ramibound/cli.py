"""Command-line front end with deterministic, machine-readable reports.

Every subcommand prints one JSON document (or TSV with --format tsv) built
from insertion-ordered dicts, so identical invocations produce byte-identical
output.  Rationals are serialized as reduced "num/den" strings, integers
bare.  Exit codes: 0 success, 2 invalid input, 3 enumeration cap exceeded,
4 non-convergence or precision exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bounds as bounds_mod
from . import herbrand as herbrand_mod
from . import kisin as kisin_mod
from . import solver as solver_mod
from .errors import (
    CapExceededError,
    InputError,
    NonConvergenceError,
    NotHeightError,
    PrecisionError,
    RamiboundError,
    UndecidableError,
)
from .padic import LocalFieldModel, eisenstein_validate, is_odd_prime, parse_poly

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_NUMERIC = 4


def format_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}: {exc}") from None


def jsonable(value):
    """Recursively convert report values: Fractions become num/den strings."""
    if isinstance(value, Fraction):
        return format_rat(value)
    if isinstance(value, bool) or isinstance(value, int) or value is None:
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def emit_report(report, fmt: str = "json") -> str:
    data = jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "tsv":
        rows = data if isinstance(data, list) else [data]
        if not rows:
            return "\n"
        keys = list(rows[0].keys())
        def cell(v):
            if v is None:
                return ""
            if isinstance(v, (dict, list)):
                return json.dumps(v, separators=(",", ":"))
            return str(v)
        lines = ["\t".join(keys)]
        for row in rows:
            lines.append("\t".join(cell(row.get(k)) for k in keys))
        return "\n".join(lines) + "\n"
    raise InputError(f"unknown format {fmt!r}")


def bound_report_from_json(data: dict) -> bounds_mod.BoundReport:
    """Inverse of the JSON serialization of a bound report."""
    return bounds_mod.BoundReport(
        p=int(data["p"]),
        e=int(data["e"]),
        n=int(data["n"]),
        r=int(data["r"]),
        N=int(data["N"]),
        N_provenance=data["N_provenance"],
        thm11_mu=parse_rat(str(data["thm11_mu"])),
        thm11_min_s=int(data["thm11_min_s"]),
        cor39_mu=parse_rat(str(data["cor39_mu"])),
        cor39_min_s=int(data["cor39_min_s"]),
        thm12_mu=parse_rat(str(data["thm12_mu"])),
        thm12_diff=parse_rat(str(data["thm12_diff"])),
        conj13_mu=parse_rat(str(data["conj13_mu"])),
        conj13_diff=parse_rat(str(data["conj13_diff"])),
    )


# ---------------------------------------------------------------------------
# Shared argument parsing
# ---------------------------------------------------------------------------


def _check_prime(p: int) -> int:
    if not is_odd_prime(p):
        raise InputError(f"p must be an odd prime, got {p}")
    return p


def _infer_prime(args) -> int:
    """Use --p when given; otherwise read the prime off the Eisenstein
    polynomial's constant term, provided that is unambiguous."""
    if getattr(args, "p", None) is not None:
        return _check_prime(args.p)
    text = getattr(args, "eisenstein", None)
    if text is None:
        raise InputError("--p is required when no Eisenstein polynomial is given")
    coeffs = parse_poly(text)
    a0 = abs(coeffs[0])
    candidates = []
    for q in range(3, a0 + 1, 2):
        if a0 % q == 0 and is_odd_prime(q):
            try:
                eisenstein_validate(coeffs, q)
                candidates.append(q)
            except InputError:
                pass
    if len(candidates) == 1:
        return candidates[0]
    raise InputError(
        "cannot infer an unambiguous odd prime from the polynomial; pass --p"
    )


def _parse_matrix(text: str, p: int, n: int):
    """Rows separated by ';', entries by ',', u-coefficients by ':'."""
    q = p ** n
    rows = []
    for row_text in text.split(";"):
        row = []
        for ent in row_text.split(","):
            ent = ent.strip()
            if not ent or ent == "0":
                row.append(())
                continue
            try:
                coeffs = tuple(int(c) % q for c in ent.split(":"))
            except ValueError as exc:
                raise InputError(f"bad matrix entry {ent!r}: {exc}") from None
            row.append(coeffs)
        rows.append(row)
    return rows


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad integer list {text!r}: {exc}") from None


def _eisenstein_from_args(args, p: int):
    if args.eisenstein is None:
        return None
    E = eisenstein_validate(parse_poly(args.eisenstein), p)
    if getattr(args, "e", None) not in (None,) and args.e != E.e:
        raise InputError(
            f"--e {args.e} contradicts the Eisenstein polynomial degree {E.e}"
        )
    return E


def _default_cap(args) -> int:
    if getattr(args, "cap", None):
        return args.cap
    env = os.environ.get("RAMIBOUND_CAP")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"bad RAMIBOUND_CAP: {exc}") from None
    return solver_mod.DEFAULT_CAP


def _build_problem(args):
    p = _infer_prime(args)
    E = _eisenstein_from_args(args, p)
    if E is None:
        raise InputError("--eisenstein is required for this command")
    if args.matrix is None:
        raise InputError("--matrix is required for this command")
    matrix = _parse_matrix(args.matrix, p, args.n)
    module = kisin_mod.kisin_new(p, args.n, E, matrix, r_hint=max(args.r, 1))
    if args.model is None:
        raise InputError("--model is required for this command")
    g = eisenstein_validate(parse_poly(args.model), p)
    model = LocalFieldModel(g, args.prec, e_norm=E.e)
    return solver_mod.build_jset_problem(
        module,
        model,
        args.s,
        args.r,
        N=args.N,
        pi_s_power=args.pis,
        cap=_default_cap(args),
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_bounds(args) -> dict:
    p = _infer_prime(args)
    E = _eisenstein_from_args(args, p)
    e = E.e if E is not None else args.e
    if e is None:
        raise InputError("either --e or --eisenstein is required")
    N, prov = args.N, None
    if N is not None:
        prov = "explicit"
    elif E is not None:
        N = bounds_mod.exact_nilpotency_index(E, args.n, args.r)
        prov = "exact-brute-force"
    report = bounds_mod.ramification_report(p, e, args.n, args.r, N, prov)
    return report.as_dict()


def cmd_nilpotency(args) -> dict:
    p = _infer_prime(args)
    E = _eisenstein_from_args(args, p)
    if E is None:
        raise InputError("--eisenstein is required")
    return bounds_mod.nilpotency_summary(E, args.n, args.r)


def _parse_filtration(text: str, order: int) -> herbrand_mod.LowerFiltration:
    """'lam:card' pairs where card rules the segment ending at lam; the first
    card must be the full group order."""
    entries = []
    for part in text.split(","):
        lam_text, card_text = part.split(":")
        entries.append((parse_rat(lam_text.strip()), int(card_text)))
    if not entries:
        raise InputError("empty filtration")
    if entries[0][1] != order:
        raise InputError("first segment order must equal the group order")
    breaks = []
    for i in range(len(entries) - 1):
        breaks.append((entries[i][0], entries[i + 1][1]))
    if entries[-1][1] > 1:
        breaks.append((entries[-1][0], 1))
    return herbrand_mod.LowerFiltration(order, tuple(breaks))


def cmd_herbrand(args) -> dict:
    filt = _parse_filtration(args.filtration, args.order)
    phi = herbrand_mod.phi_from_filtration(filt)
    lam, mu = herbrand_mod.last_breaks(filt)
    return {
        "order": filt.order,
        "breaks": [[b, o] for b, o in filt.breaks],
        "phi_breakpoints": [[x, y] for x, y in phi.breaks],
        "phi_final_slope": phi.final_slope,
        "concave": phi.is_concave(),
        "last_lower_break": lam,
        "last_upper_break": mu,
    }


def cmd_tame_lift(args) -> dict:
    p = _check_prime(args.p)
    seq = _parse_int_list(args.seq)
    d = len(seq)
    spec = kisin_mod.tame_lift_build(p, d, seq, n=args.n)
    oracle = kisin_mod.tame_character_oracle(p, d, seq)
    return {
        "p": p,
        "period": d,
        "seq": list(seq),
        "matrix": [
            [list(entry) for entry in row] for row in spec.module.entries
        ],
        "filtration": list(spec.filtration_jumps),
        "filtered_frobenius": list(spec.filtered_frobenius),
        "height": spec.height,
        "exponent": spec.exponent,
        "oracle_exponent": oracle.exponent,
        "agree": spec.exponent == oracle.exponent,
        "oracle_field_modulus": list(oracle.field_modulus),
    }


def cmd_kisin_height(args) -> dict:
    p = _infer_prime(args)
    E = _eisenstein_from_args(args, p)
    if E is None or args.matrix is None:
        raise InputError("--eisenstein and --matrix are required")
    matrix = _parse_matrix(args.matrix, p, args.n)
    module = kisin_mod.kisin_new(
        p, args.n, E, matrix, uprec=args.uprec, r_hint=max(args.r, 1)
    )
    out = {
        "p": p,
        "n": args.n,
        "e": E.e,
        "r": args.r,
        "rank": module.rank,
    }
    try:
        wit = kisin_mod.height_witness(module, args.r)
    except NotHeightError as exc:
        out["has_height_witness"] = False
        out["reason"] = str(exc)
        return out
    out["has_height_witness"] = True
    out["B"] = [[list(e) for e in row] for row in wit.B]
    out["verified_uprec"] = wit.uprec
    N = bounds_mod.exact_nilpotency_index(E, args.n, args.r) if args.N is None else args.N
    out["N"] = N
    wu = kisin_mod.u_power_witness(module, wit, N)
    out["B_u_power"] = [[list(e) for e in row] for row in wu.B]
    return out


def cmd_jset(args) -> dict:
    prob = _build_problem(args)
    level = solver_mod.resolve_level(prob, args.c if args.c else "a")
    sol = solver_mod.jset_enumerate(prob, level)
    out = {
        "p": prob.p,
        "n": prob.n,
        "rank": prob.d,
        "s": prob.s,
        "r": prob.r,
        "N": prob.N,
        "a": prob.level_a,
        "b": prob.level_b,
        "level": level,
        "count": len(sol),
    }
    if level >= prob.level_b:
        image = solver_mod.rho_reduce(prob, sol, "b")
        out["count_b"] = len(solver_mod.jset_enumerate(prob, "b"))
        out["image_ab"] = len(image)
        expected = prob.p ** (prob.n * prob.d)
        out["T_size"] = expected
        out["splitting"] = len(image) == expected
    return out


def cmd_solve_lift(args) -> dict:
    prob = _build_problem(args)
    classes = solver_mod.jset_enumerate(prob, "a")
    exact, lifts = solver_mod.exact_solution_set(prob, target_digits=args.digits)
    gammas = [lr.gamma for lr in lifts if lr.gamma is not None]
    out = {
        "p": prob.p,
        "n": prob.n,
        "s": prob.s,
        "N": prob.N,
        "a": prob.level_a,
        "b": prob.level_b,
        "level_a_classes": len(classes),
        "exact_solutions": len(exact),
        "iterations_max": max((lr.iterations for lr in lifts), default=0),
        "gamma_min": min(gammas) if gammas else None,
        "certified_digits": args.digits,
        "all_residuals_zero_mod": f"p^{args.digits}",
    }
    if args.trace:
        out["lifts"] = [
            {
                "member": [[list(c) for c in vec] for vec in member],
                "iterations": lr.iterations,
                "gamma": lr.gamma,
                "congruence_defect": lr.a_prime,
                "residual_vp_at_least": lr.certified_digits,
                "trace": [
                    {"witt_level": lv, "iteration": it, "increment_vals": list(vals)}
                    for lv, it, vals in lr.trace
                ],
            }
            for member, lr in zip(classes.members, lifts)
        ]
    return out


_GRID_SHAPES = ("uep-minus", "uep-plus", "mixed")


def _grid_poly(shape: str, p: int, e: int) -> tuple[int, ...]:
    if shape == "uep-minus":
        return (-p,) + (0,) * (e - 1) + (1,)
    if shape == "uep-plus":
        return (p,) + (0,) * (e - 1) + (1,)
    if shape == "mixed":
        if e == 1:
            return (2 * p, 1)
        return (p,) + (0,) * (e - 2) + (p, 1)
    raise InputError(f"unknown shape {shape!r}")


def cmd_grid(args) -> list[dict]:
    ps = _parse_int_list(args.p_list)
    es = _parse_int_list(args.e_list)
    ns = _parse_int_list(args.n_list)
    rs = _parse_int_list(args.r_list)
    shapes = args.shapes.split(",") if args.shapes else list(_GRID_SHAPES)
    rows = []
    for p in ps:
        _check_prime(p)
        for e in es:
            for shape in shapes:
                E = eisenstein_validate(_grid_poly(shape, p, e), p)
                for n in ns:
                    for r in rs:
                        summary = bounds_mod.nilpotency_summary(E, n, r)
                        exact = summary["exact"]
                        closed = {
                            k: summary.get(k)
                            for k in ("ern", "ceil", "uep", "general")
                        }
                        closed = {k: v for k, v in closed.items()}
                        ok = all(
                            exact <= v for v in closed.values() if v is not None
                        )
                        if n == 1:
                            ok = ok and exact == e * r
                        report = bounds_mod.ramification_report(
                            p, e, n, r, exact, "exact-brute-force"
                        )
                        rows.append(
                            {
                                "p": p,
                                "e": e,
                                "shape": shape,
                                "n": n,
                                "r": r,
                                "exact_N": exact,
                                **closed,
                                "bounds_ok": ok,
                                "cor39_mu": report.cor39_mu,
                                "thm12_mu": report.thm12_mu,
                                "conj13_mu": report.conj13_mu,
                                "conj_le_thm": report.conj13_mu <= report.thm12_mu
                                and report.conj13_diff <= report.thm12_diff,
                            }
                        )
    return rows


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def _add_common(sp, *names):
    if "p" in names:
        sp.add_argument("--p", type=int, help="odd prime")
    if "p!" in names:
        sp.add_argument("--p", type=int, required=True, help="odd prime")
    if "e" in names:
        sp.add_argument("--e", type=int, help="absolute ramification index")
    if "n" in names:
        sp.add_argument("--n", type=int, default=1, help="p-adic length")
    if "r" in names:
        sp.add_argument("--r", type=int, default=1, help="height bound")
    if "N" in names:
        sp.add_argument("--N", type=int, help="annihilating exponent override")
    if "eisenstein" in names:
        sp.add_argument(
            "--eisenstein",
            "--E",
            dest="eisenstein",
            help="Eisenstein polynomial, ascending coefficients 'a0,a1,...,1'",
        )
    if "fmt" in names:
        sp.add_argument("--format", dest="fmt", default="json", choices=["json", "tsv"])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ramibound",
        description="exact nilpotency indices, ramification bounds, Herbrand "
        "calculus, height witnesses, tame lifts and Frobenius solution sets",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="ramification bound report")
    _add_common(b, "p", "e", "n", "r", "N", "eisenstein", "fmt")
    b.set_defaults(func=cmd_bounds)

    nl = sub.add_parser("nilpotency", help="exact and closed-form indices")
    _add_common(nl, "p", "n", "r", "eisenstein", "fmt")
    nl.set_defaults(func=cmd_nilpotency)

    h = sub.add_parser("herbrand", help="transition function of a filtration")
    h.add_argument("--filtration", required=True, help="'lam:order' comma list")
    h.add_argument("--order", type=int, required=True, help="group order")
    _add_common(h, "fmt")
    h.set_defaults(func=cmd_herbrand)

    t = sub.add_parser("tame-lift", help="cyclic tame lift and its character")
    _add_common(t, "p!", "fmt")
    t.add_argument("--seq", required=True, help="exponent sequence 'n0,n1,...'")
    t.add_argument("--n", type=int, default=1, help="p-adic length of the module")
    t.set_defaults(func=cmd_tame_lift)

    k = sub.add_parser("kisin-height", help="height witness for a Frobenius matrix")
    _add_common(k, "p", "n", "r", "N", "eisenstein", "fmt")
    k.add_argument("--matrix", help="rows ';', entries ',', u-coefficients ':'")
    k.add_argument("--uprec", type=int, help="u-adic working precision")
    k.set_defaults(func=cmd_kisin_height)

    j = sub.add_parser("jset", help="enumerate Frobenius congruence solutions")
    _add_common(j, "p", "n", "r", "N", "eisenstein", "fmt")
    j.add_argument("--matrix", help="Frobenius matrix")
    j.add_argument("--model", help="model generator polynomial 'a0,...,1'")
    j.add_argument("--s", type=int, required=True, help="Kummer level")
    j.add_argument("--c", help="truncation level: 'a', 'b' or a rational")
    j.add_argument("--pis", type=int, help="pi_s as this power of the model uniformizer")
    j.add_argument("--cap", type=int, help="enumeration cap (or RAMIBOUND_CAP)")
    j.add_argument("--prec", type=int, default=24, help="model p-digit precision")
    j.set_defaults(func=cmd_jset)

    sl = sub.add_parser("solve-lift", help="lift level-a classes to exact solutions")
    _add_common(sl, "p", "n", "r", "N", "eisenstein", "fmt")
    sl.add_argument("--matrix", help="Frobenius matrix")
    sl.add_argument("--model", help="model generator polynomial")
    sl.add_argument("--s", type=int, required=True)
    sl.add_argument("--c", help=argparse.SUPPRESS)
    sl.add_argument("--pis", type=int)
    sl.add_argument("--cap", type=int)
    sl.add_argument("--prec", type=int, default=24)
    sl.add_argument("--digits", type=int, default=6, help="certification digits")
    sl.add_argument("--trace", action="store_true", help="include iteration traces")
    sl.set_defaults(func=cmd_solve_lift)

    g = sub.add_parser("grid", help="sweep parameters and report verdicts")
    g.add_argument("--p", dest="p_list", default="3,5")
    g.add_argument("--e", dest="e_list", default="1,2,3")
    g.add_argument("--n", dest="n_list", default="1,2,3")
    g.add_argument("--r", dest="r_list", default="1,2,3")
    g.add_argument("--shapes", help=f"subset of {','.join(_GRID_SHAPES)}")
    _add_common(g, "fmt")
    g.set_defaults(func=cmd_grid)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        report = args.func(args)
        sys.stdout.write(emit_report(report, getattr(args, "fmt", "json")))
        return EXIT_OK
    except CapExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAP
    except (NonConvergenceError, PrecisionError, UndecidableError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC
    except (InputError, NotHeightError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except RamiboundError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
