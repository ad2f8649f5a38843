"""Command-line driver.

Exit codes: 0 ok/consistent, 1 usage error, 2 certified violation,
3 inconclusive or timeout.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .classify import UNKNOWN, classify_singularities, crosscheck, mld_route
from .groebner import EMPTY, GroebnerTimeout, ideal_dimension
from .jets import SubschemeSpec, jet_ideal
from .lifting import (NOT_IN_STRATUM, NOT_STABILIZED, LiftStatus, MinorProfile, NotInJetScheme,
                      ProfileError, brute_force_lift, greenberg_probe, liftable_denef,
                      minor_order_profile, reduced_lift_equations)
from .mld import (MldStatus, OracleKind, PairSpec, inversion_adjunction_check, monomial_mld_oracle,
                  mld_lower_bound_test, semicontinuity_probe)
from .parsing import ParseError, ProblemFile, parse_problem, parse_rational
from .poly import Polynomial, PolyMatrix, format_coeff, jacobi_minor_identity_residual, norm_coeff
from .series import parse_jet

OK, USAGE, VIOLATION, INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _json_default(o):
    if isinstance(o, Fraction):
        return format_coeff(norm_coeff(o))
    if o is EMPTY:
        return "EMPTY"
    if isinstance(o, Polynomial):
        return str(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


# -- problem helpers ----------------------------------------------------------

def load_problem(path: str) -> ProblemFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text)


def _option(prob: ProblemFile, flag, key, default):
    if flag is not None:
        return flag
    return prob.options.get(key, default)


def _origin(ring) -> SubschemeSpec:
    return SubschemeSpec(tuple(Polynomial.gens(ring)), "W")


def pair_from_problem(prob: ProblemFile) -> PairSpec:
    subs = tuple((SubschemeSpec(tuple(gens), f"Y{i}"), q) for i, (q, gens) in enumerate(prob.Y))
    W = SubschemeSpec(tuple(prob.W), "W") if prob.W else _origin(prob.ring)
    return PairSpec(prob.ring, tuple(prob.X), subs, W)


def _sweep(args, prob):
    return (int(_option(prob, args.max_level, "max_level", 6)),
            int(_option(prob, args.max_jac, "max_jac", 3)),
            int(_option(prob, args.max_contact, "max_contact", 4)))


def _taus(args, prob, default):
    if args.tau:
        return [parse_rational(t) for t in args.tau]
    if "tau" in prob.options:
        return [Fraction(prob.options["tau"])]
    return default


# -- subcommands ----------------------------------------------------------------

def cmd_jet_ideal(args, out):
    prob = load_problem(args.problem)
    I = jet_ideal(prob.X, len(prob.ring), args.m, prob.ring)
    if args.json:
        return OK, I.to_json()
    lines = [f"jet ring: {' '.join(I.jet_ring)}"]
    lines += [f"{k}[t^{i}]: {g}" for g, (k, i) in zip(I.generators, I.provenance)]
    return OK, "\n".join(lines)


def cmd_dim(args, out):
    prob = load_problem(args.problem)
    gens = [g for g in prob.X if not g.is_zero()]
    dim = ideal_dimension(gens, ring=prob.ring) if gens else len(prob.ring)
    rep = {"ring": list(prob.ring), "dim": dim}
    return OK, rep if args.json else f"dim V(X) = {dim}"


def cmd_classify(args, out):
    prob = load_problem(args.problem)
    if not prob.X:
        raise UsageError("classify needs equations in the X block")
    n, r = len(prob.ring), len(prob.X)
    M = int(_option(prob, args.max_level, "max_level", 4))
    rep = classify_singularities(prob.X, n - r, M)
    data = rep.to_json()
    if args.crosscheck:
        route = mld_route(prob.X)
        data["mld_route"] = {k: v.value for k, v in route.items()}
        data["agreement"] = crosscheck(rep, route)
    code = INCONCLUSIVE if UNKNOWN in rep.verdicts.values() else OK
    if args.json:
        return code, data
    lines = ["  m   dim  lc  can  term"]
    for row in data["levels"]:
        lines.append(f"{row['m']:>3} {str(row['dim']):>5} {row['threshold_lc']:>3} "
                     f"{row['threshold_can']:>4} {row['threshold_term']:>5}")
    lines += [f"{k}: {v}" for k, v in data["verdicts"].items()]
    if "agreement" in data:
        lines.append(f"mld route: {data['mld_route']}  agreement: {data['agreement']}")
    return code, "\n".join(lines)


def cmd_lift(args, out):
    prob = load_problem(args.problem)
    n = len(prob.ring)
    u = parse_jet(args.jet, n, args.p)
    prof = minor_order_profile(prob.X, u)
    rep = {"p": args.p, "jet": u.to_text()}
    if prof is NOT_IN_STRATUM:
        rep["profile"] = "NOT_IN_STRATUM"
        denef = None
    else:
        rep["profile"] = prof.to_json()
        try:
            denef = liftable_denef(prob.X, u, prof)
        except ProfileError as exc:
            rep["denef_skipped"] = str(exc)
            denef = None
    brute = brute_force_lift(prob.X, u)
    rep["brute"] = brute.to_json()
    if denef is not None:
        rep["denef"] = denef.to_json()
    verdicts = [v.liftable for v in (denef, brute) if v is not None and v.liftable is not None]
    if not verdicts:
        code, rep["liftable"] = INCONCLUSIVE, None
    elif len(set(verdicts)) > 1:
        code, rep["liftable"] = VIOLATION, None
    else:
        code, rep["liftable"] = OK, verdicts[0]
    rep["agree"] = denef is not None and brute.liftable is not None and denef.liftable == brute.liftable
    if args.json:
        return code, rep
    lines = [f"profile: {rep['profile']}"]
    if denef is not None:
        lines.append(f"criterion: {denef.status.value}")
    lines.append(f"brute force: {brute.status.value} ({brute.method})")
    lines.append(f"liftable={str(rep['liftable']).lower()}, methods agree: {rep['agree']}")
    return code, "\n".join(lines)


def cmd_lift_reduced(args, out):
    prob = load_problem(args.problem)
    n, r = len(prob.ring), len(prob.X)
    if r == 0:
        raise UsageError("lift-reduced needs equations in the X block")
    e = tuple(int(x) for x in args.profile.split(",")) if args.profile else (1,) * r
    cols = tuple(int(x) for x in args.cols.split(",")) if args.cols else tuple(range(n))
    prof = MinorProfile(e, cols, tuple(range(r)))
    eqs = reduced_lift_equations(prob.X, prof, args.p)
    rep = {"p": args.p, "profile": prof.to_json(), "count": len(eqs), "equations": [str(g) for g in eqs]}
    if args.json:
        return OK, rep
    return OK, "\n".join([f"{len(eqs)} equations"] + rep["equations"])


def cmd_mld(args, out):
    prob = load_problem(args.problem)
    pair = pair_from_problem(prob)
    sweep = _sweep(args, prob)
    taus = _taus(args, prob, [Fraction(0)])
    reports, code = [], OK
    for tau in taus:
        v = mld_lower_bound_test(pair, tau, sweep, residual=args.residual)
        reports.append(v.to_json())
        if v.status is MldStatus.CERTIFIED_VIOLATION:
            code = VIOLATION
        elif v.status is MldStatus.INCONCLUSIVE and code == OK:
            code = INCONCLUSIVE
    rep = {"pair": pair.to_json(), "results": reports}
    if not prob.X and prob.W is None:
        items = [(Y.gens, q) for Y, q in pair.subschemes]
        rep["oracle"] = monomial_mld_oracle(len(prob.ring), items).to_json()
    if args.json:
        return code, rep
    lines = []
    for r in reports:
        line = f"tau={r['tau']}: {r['status']}"
        if "witness" in r:
            w = r["witness"]
            line += f" (e={w['e']}, contacts={w['contacts']}, m={w['m']}, codim={w['codim']} < {w['bound']})"
        lines.append(line)
    if "oracle" in rep:
        o = rep["oracle"]
        lines.append(f"oracle: {o['kind']} {o['value'] or ''}".rstrip())
    return code, "\n".join(lines)


def _exact_oracle(pair: PairSpec):
    if pair.F or not all(len(g.terms) == 1 for Y, _ in pair.subschemes for g in Y.gens):
        return None
    if pair.W is None or sorted(pair.W.gens, key=str) != sorted(Polynomial.gens(pair.ring), key=str):
        return None
    res = monomial_mld_oracle(pair.n, [(Y.gens, q) for Y, q in pair.subschemes])
    return res if res.kind is OracleKind.EXACT else None


def cmd_invadj(args, out):
    prob = load_problem(args.problem)
    pair = pair_from_problem(prob)
    D = None
    if not args.corollary:
        if not prob.D or len(prob.D) != 1:
            raise UsageError("invadj needs a D block with exactly one equation")
        D = prob.D[0]
    elif not prob.X:
        raise UsageError("corollary mode needs equations in the X block")
    sweep = _sweep(args, prob)
    taus = _taus(args, prob, [Fraction(0), Fraction(1)])
    rows, left, right = inversion_adjunction_check(pair, D, taus, sweep, args.corollary)
    oracles = {"left": _exact_oracle(left), "right": _exact_oracle(right)}
    code = OK
    for row in rows:
        if row.agree:
            if MldStatus.INCONCLUSIVE in (row.left.status, row.right.status) and code == OK:
                code = INCONCLUSIVE
            continue
        # a disagreement is certified only if the passing side is pinned by an exact value
        passing = "left" if row.left.status is MldStatus.PASSED_SWEEP else "right"
        o = oracles[passing]
        if o is not None and o.value >= row.tau:
            code = VIOLATION
        elif code == OK:
            code = INCONCLUSIVE
    rep = {"mode": "corollary" if args.corollary else "adjunction",
           "left": left.to_json(), "right": right.to_json(), "rows": [r.to_json() for r in rows]}
    if args.json:
        return code, rep
    lines = [f"tau={format_coeff(norm_coeff(r.tau))}: left {r.left.status.value}, right {r.right.status.value}"
             f" -> {'agree' if r.agree else 'DISAGREE'}" for r in rows]
    return code, "\n".join(lines)


def _parse_points(text: str, n: int):
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vals = [parse_rational(x) for x in chunk.split(",")]
        if len(vals) != n:
            raise UsageError(f"point {chunk!r} has {len(vals)} coordinates, expected {n}")
        pts.append(tuple(vals))
    if not pts:
        raise UsageError("no points given")
    return pts


def cmd_semicont(args, out):
    prob = load_problem(args.problem)
    if prob.X:
        raise UsageError("semicont works over affine space; leave the X block empty")
    n = len(prob.ring)
    points = _parse_points(args.points, n)
    items = [(gens, q) for q, gens in prob.Y]
    rep = semicontinuity_probe(n, items, points)
    if rep["skipped"]:
        code = INCONCLUSIVE
    else:
        code = OK if rep["consistent"] else VIOLATION
    rep["points"] = [[format_coeff(norm_coeff(x)) for x in p] for p in points]
    if args.json:
        return code, rep
    if rep["skipped"]:
        return code, f"skipped: {rep['reason']}"
    lines = [f"{','.join(p)}: {v['kind']} {v['value'] if v['value'] is not None else ''}".rstrip()
             for p, v in zip(rep["points"], rep["values"])]
    lines.append("consistent" if rep["consistent"] else "semicontinuity violated")
    return code, "\n".join(lines)


def cmd_identity(args, out):
    rng = random.Random(args.seed)
    S = args.size
    if S < 2:
        raise UsageError("size must be at least 2")
    bad = 0
    for _ in range(args.trials):
        rows = [[Polynomial.constant(rng.randint(-9, 9), ()) for _ in range(S)] for _ in range(S)]
        A = PolyMatrix.from_rows(rows, ())
        i, k = sorted(rng.sample(range(S), 2))
        j, l = sorted(rng.sample(range(S), 2))
        if not jacobi_minor_identity_residual(A, i, k, j, l).is_zero():
            bad += 1
    rep = {"size": S, "trials": args.trials, "seed": args.seed, "zero_residuals": args.trials - bad}
    code = OK if bad == 0 else VIOLATION
    if args.json:
        return code, rep
    return code, f"{args.trials - bad}/{args.trials} zero residuals"


def cmd_greenberg(args, out):
    prob = load_problem(args.problem)
    seed = int(_option(prob, args.seed, "seed", 0))
    p = greenberg_probe(prob.X, args.m, args.p_max, n_samples=args.samples, seed=seed)
    stable = p is not NOT_STABILIZED
    rep = {"m": args.m, "p_max": args.p_max, "samples": args.samples, "seed": seed,
           "stabilized_at": p if stable else "NOT_STABILIZED"}
    code = OK if stable else INCONCLUSIVE
    if args.json:
        return code, rep
    return code, f"stabilized at p = {p}" if stable else "not stabilized"


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sweep = _Parser(add_help=False)
    sweep.add_argument("--tau", action="append", help="threshold (repeatable), e.g. 3/2")
    sweep.add_argument("--max-level", type=int, dest="max_level")
    sweep.add_argument("--max-contact", type=int, dest="max_contact")
    sweep.add_argument("--max-jac", type=int, dest="max_jac")

    p = _Parser(prog="jetspace", description="Jet schemes, liftability and minimal log discrepancies.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("jet-ideal", parents=[common], help="generators of the m-th jet scheme")
    s.add_argument("problem")
    s.add_argument("-m", type=int, required=True)
    s.set_defaults(func=cmd_jet_ideal)

    s = sub.add_parser("dim", parents=[common], help="dimension of V(X)")
    s.add_argument("problem")
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("classify", parents=[common], help="lc / canonical / terminal by jet dimensions")
    s.add_argument("problem")
    s.add_argument("--max-level", type=int, dest="max_level")
    s.add_argument("--crosscheck", action="store_true", help="also run the mld route")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("lift", parents=[common], help="decide liftability of a jet by both methods")
    s.add_argument("problem")
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--jet", required=True, help='components separated by ";", e.g. "0; t"')
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("lift-reduced", parents=[common], help="reduced lifting equations of a stratum")
    s.add_argument("problem")
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--profile", help="comma-separated minor orders e_1,...,e_r")
    s.add_argument("--cols", help="comma-separated column permutation")
    s.set_defaults(func=cmd_lift_reduced)

    s = sub.add_parser("mld", parents=[common, sweep], help="jet lower-bound test for mld")
    s.add_argument("problem")
    s.add_argument("--residual", action="store_true", help="report the stratum beyond --max-jac")
    s.set_defaults(func=cmd_mld)

    s = sub.add_parser("invadj", parents=[common, sweep], help="compare both sides of adjunction")
    s.add_argument("problem")
    s.add_argument("--corollary", action="store_true", help="compare (X, Y) with (A^n, Y + r X)")
    s.set_defaults(func=cmd_invadj)

    s = sub.add_parser("semicont", parents=[common], help="mld at points via the monomial oracle")
    s.add_argument("problem")
    s.add_argument("--points", required=True, help='e.g. "0,0; 0,1; 1,1"')
    s.set_defaults(func=cmd_semicont)

    s = sub.add_parser("identity", parents=[common], help="random checks of the minor identity")
    s.add_argument("--size", type=int, default=4)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_identity)

    s = sub.add_parser("greenberg", parents=[common], help="empirical lifting stabilization level")
    s.add_argument("problem")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("--p-max", type=int, required=True, dest="p_max")
    s.add_argument("--samples", type=int, default=12)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_greenberg)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, rep = args.func(args, out)
    except UsageError as exc:
        print(f"jetspace: {exc}", file=sys.stderr)
        return USAGE
    except ParseError as exc:
        print(f"jetspace: parse error: {exc}", file=sys.stderr)
        return USAGE
    except (ValueError, NotInJetScheme, ProfileError) as exc:
        print(f"jetspace: {exc}", file=sys.stderr)
        return USAGE
    except GroebnerTimeout as exc:
        print(f"jetspace: {exc}", file=sys.stderr)
        return INCONCLUSIVE
    print(dumps(rep) if isinstance(rep, dict) else rep, file=out)
    return code


if __name__ == "__main__":
    sys.exit(main())
