"""Command-line front end: ``waringlab <command> [options]``.

Exit codes: 0 success, 1 failed verification, 2 parse error,
3 precondition violation, 4 numeric search failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .apolarity import ann_degree, ann_jacobian_degree, is_concise
from .decompose import (
    Decomposition,
    DecompositionError,
    binary_decomposition,
    family_upper_decomposition,
    verify_partially_symmetric,
    verify_waring,
)
from .families import (
    classify_quartic,
    default_lambda,
    known_rank_bounds,
    normal_form,
    normal_form_factors,
    rank_table,
    resolve_family,
)
from .field import format_scalar
from .poly import MultiPoly, PolyParseError, parse_factors, parse_poly
from .ranks import (
    BoundReport,
    PreconditionError,
    StructuredInput,
    best_catalecticant_bound,
    catalecticant_bound,
    monomial_rank,
    partially_symmetric_bound,
    quadratic_rank,
    structured_bound,
    sylvester_rank,
    test_condition_a,
    test_condition_b,
)

EXIT_VERIFY, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERIC = 1, 2, 3, 4


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input helpers


def _read_text(args) -> str:
    if args.poly and args.file:
        raise UsageError("give either -f/--poly or --file, not both")
    if args.poly:
        return args.poly
    if args.file:
        with open(args.file) as fh:
            return fh.read().strip()
    raise UsageError("a polynomial is required (-f/--poly or --file)")


def _nvars(args):
    return None if getattr(args, "n", None) is None else args.n + 1


def _parse_lambda(text):
    if text is None:
        return None
    p = parse_poly(text, 1)
    if p.degree() > 0:
        raise PolyParseError("lambda must be a constant")
    return p.coeff((0,))


def load_form(args) -> tuple[MultiPoly, list]:
    text = _read_text(args)
    F = parse_poly(text, _nvars(args))
    factors = parse_factors(text, F.nvars)
    if F.is_zero() or not F.is_homogeneous():
        raise PreconditionError("expected a nonzero homogeneous form")
    return F, factors


def structure_of(factors):
    """Split factors into (linear factors with multiplicity, quadric) or None."""
    linear, quads = [], []
    for p, m in factors:
        if p.degree() == 1 and p.is_homogeneous():
            linear.append((p, m))
        elif p.degree() == 2 and p.is_homogeneous() and m == 1:
            quads.append(p)
        else:
            return None
    if len(quads) != 1 or not linear:
        return None
    return linear, quads[0]


def _expanded_linear(linear):
    out = []
    for ell, m in linear:
        out.extend([ell] * m)
    return out


# ---------------------------------------------------------------------------
# reports


def classify_from_factors(F: MultiPoly, factors, eps=None):
    st = structure_of(factors)
    if st is None:
        raise PreconditionError("classify needs a factored input l0*l1*q")
    lin = _expanded_linear(st[0])
    if len(lin) != 2:
        raise PreconditionError("classify needs exactly two linear factors (with multiplicity)")
    return classify_quartic(lin[0], lin[1], st[1], F.nvars - 1, eps)


def _high_multiplicity_exact(F, st, eps=None):
    """rk = prk for concise l^(d-2) q; returns the value or None."""
    linear, q = st
    if len(linear) != 1 or F.degree() < 3 or not is_concise(F, eps):
        return None
    ell, _ = linear[0]
    from .families import is_tangent

    n = F.nvars - 1
    if n < 2 or quadratic_rank(q, eps) < 3:
        return None
    tangent = quadratic_rank(q, eps) == n + 1 and is_tangent(q, ell, eps)
    return (F.degree() - 1) * n + (1 if tangent else 0)


def literal_example_shape(linear, q) -> bool:
    """x_{i0}^a0 ... x_{ik}^ak (g(x_K) + sum of c_j x_j^2 off K) with k >= 1.

    For this shape the hypotheses of the structured bound are proven by hand,
    so its value may count toward the lower bound.
    """
    K = set()
    for ell, _ in linear:
        if len(ell.terms) != 1:
            return False
        (e, _), = ell.terms.items()
        K.add(e.index(1))
    if len(K) < 2:
        return False
    seen = set()
    for e in q.terms:
        support = {i for i, a in enumerate(e) if a}
        if support <= K:
            continue
        if len(support) == 1 and max(e) == 2:
            seen |= support
            continue
        return False
    return seen == set(range(q.nvars)) - K


def bound_report(F: MultiPoly, factors, eps=None) -> BoundReport:
    d = F.degree()
    cat, t = best_catalecticant_bound(F, eps)
    lower, upper = cat, None
    methods = [f"catalecticant({t})"]
    notes = {f"catalecticant({t})": f"C(n+{t},n) - dim Ann(F)_{t} = {cat}"}

    def exact(value, tag, note):
        nonlocal lower, upper
        lower, upper = value, value
        methods.append(tag)
        notes[tag] = note

    if len(F.terms) == 1:
        (e, _), = F.terms.items()
        exact(monomial_rank(e), "monomial", f"exponents {list(e)}")
    elif d == 2:
        exact(quadratic_rank(F, eps), "quadratic", "rank of the Hessian")
    elif F.nvars - len(ann_degree(F, 1, eps)) <= 2:
        r = sylvester_rank(F, eps)
        exact(r.rank, "sylvester", f"delta1 = {r.delta1}, delta2 = {r.delta2}")
    st = structure_of(factors)
    if st is not None and upper is None and is_concise(F, eps):
        linear, q = st
        inp = StructuredInput.from_factors(linear, q, F=F, eps=eps)
        n = F.nvars - 1
        if inp.dim_L < n:
            value = structured_bound(inp, eps)
            tag = "structured(full)"
            proven = False
            hm = _high_multiplicity_exact(F, st, eps)
            if hm is not None:
                proven = True
                exact(hm, "structured(full)", f"l^(d-2) q with dim L = 0: rk = prk = {hm}")
            elif d == 4 and len(_expanded_linear(linear)) == 2 and n >= 3:
                try:
                    rep = classify_from_factors(F, factors, eps)
                except PreconditionError:
                    rep = None
                if rep is not None:
                    proven = True
                    fam = known_rank_bounds(rep.tag)
                    methods.append(tag)
                    notes[tag] = f"{value} (hypotheses proven for the quartic families)"
                    methods.append("family-table")
                    notes["family-table"] = f"{rep.tag.family}: [{fam.lower}, {fam.upper}]"
                    lower, upper = max(lower, fam.lower, value), fam.upper
            if not proven and literal_example_shape(linear, q):
                proven = True
                methods.append(tag)
                notes[tag] = f"{value} (hypotheses proven for this literal shape)"
                lower = max(lower, value)
            if not proven:
                notes["structured(conditional)"] = (
                    f"{value} if hypotheses (a)/(b) hold; not counted (use falsify to probe them)")
            notes["prk_lower"] = partially_symmetric_bound(inp, eps)
    return BoundReport(lower, upper, methods, notes)


def _ann_report(F, t, eps=None) -> dict:
    d = F.degree()
    basis = ann_degree(F, t, eps).basis
    out = {"t": t, "dim_ann": len(basis), "basis": [str(b) for b in basis],
           "catalecticant_bound": catalecticant_bound(F, t, eps)}
    if t <= d:
        jac = ann_jacobian_degree(F, t, eps)
        out["dim_ann_jacobian"] = jac.dim
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args, eps):
    F, factors = load_form(args)
    rep = classify_from_factors(F, factors, eps)
    data = rep.to_json()
    r0, r1 = rep.restricted_ranks
    lines = [
        f"rank q = {rep.quadric_rank}",
        f"rank q|l0 = {r0}",
        f"rank q|l1 = {r1}",
        f"tangent (l0, l1) = ({rep.tangent[0]}, {rep.tangent[1]})",
    ]
    if rep.vertex_on is not None:
        lines.append(f"vertex on (l0, l1) = ({rep.vertex_on[0]}, {rep.vertex_on[1]})")
    if rep.conjugate is not None:
        lines.append(f"pole of l0 on l1 = {rep.conjugate}")
    lines.append(f"tag: {rep.tag.family}")
    return data, "\n".join(lines), 0


def cmd_ann(args, eps):
    F, _ = load_form(args)
    ts = [args.t] if args.t is not None else list(range(0, F.degree() + 1))
    reports = [_ann_report(F, t, eps) for t in ts]
    lines = []
    for r in reports:
        line = f"t={r['t']}: dim Ann(F)_t = {r['dim_ann']}"
        if "dim_ann_jacobian" in r:
            line += f", dim Ann(J_F)_t = {r['dim_ann_jacobian']}"
        lines.append(line)
        if args.t is not None:
            lines += ["  " + b for b in r["basis"]]
    return {"concise": is_concise(F, eps), "pieces": reports}, "\n".join(lines), 0


def cmd_bound(args, eps):
    F, factors = load_form(args)
    rep = bound_report(F, factors, eps)
    data = rep.to_json()
    up = "unknown" if rep.upper is None else rep.upper
    lines = [f"lower = {rep.lower}", f"upper = {up}"]
    lines += [f"  [{k}] {v}" for k, v in rep.notes.items()]
    return data, "\n".join(lines), 0


def cmd_rank(args, eps):
    F, factors = load_form(args)
    rep = bound_report(F, factors, eps)
    data = rep.to_json()
    if rep.exact:
        text = f"rank = {rep.lower} ({', '.join(m for m in rep.methods if not m.startswith('catalecticant'))})"
    else:
        up = "unknown" if rep.upper is None else rep.upper
        text = f"rank in [{rep.lower}, {up}]"
    return data, text, 0


def _family_args(args):
    if args.family is None:
        raise UsageError("--family is required")
    if args.n is None:
        raise UsageError("-n is required with --family")
    lam = _parse_lambda(args.lam)
    fam = resolve_family(args.family, lam)
    return fam, lam


def cmd_decompose(args, eps):
    if args.family is not None:
        fam, lam = _family_args(args)
        if fam in ("F4", "F8-zero"):
            dec = family_upper_decomposition(fam, args.n, None, d=args.degree, seed=args.seed, eps=eps,
                                             mu=lam if lam is not None else 1)
        else:
            dec = family_upper_decomposition(fam, args.n, lam, d=args.degree, seed=args.seed, eps=eps)
    else:
        F, _ = load_form(args)
        if F.nvars != 2:
            raise PreconditionError("-f decomposition supports binary forms; use --family for the quartic families")
        dec = binary_decomposition(F, seed=args.seed, eps=eps)
    data = dec.to_json()
    lines = [f"length = {len(dec)}", f"field = {data['field']}", f"residual = {data['residual']}"]
    for p, c in zip(dec.points, dec.coeffs):
        lines.append(f"  {format_scalar(c)} * {p}")
    return data, "\n".join(lines), 0


def cmd_verify(args, eps):
    if not args.file:
        raise UsageError("verify needs --file with a decomposition JSON")
    with open(args.file) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PolyParseError(f"invalid JSON: {exc}") from exc
    dec = Decomposition.from_json(obj)
    if args.poly:
        F = parse_poly(args.poly, len(dec.points[0]))
    elif dec.poly is not None:
        F = dec.poly
    else:
        raise UsageError("the JSON has no 'poly' entry; pass -f")
    if args.partial:
        res = verify_partially_symmetric(F, dec, eps)
    else:
        res = verify_waring(F, dec, eps)
    data = res.to_json()
    text = f"{res.status}: length {res.length}, field {data['field']}, residual {data['residual']}"
    return data, text, 0 if res.verified else EXIT_VERIFY


def cmd_table(args, eps):
    ns = [args.n] if args.n is not None else [3, 4, 5, 6]
    tables = {}
    lines = []
    for n in ns:
        rows = rank_table(n)
        tables[str(n)] = rows
        lines.append(f"n = {n}")
        for r in rows:
            value = f"{r['lower']}" if r["exact"] else f"[{r['lower']}, {r['upper']}]"
            kind = "exact" if r["exact"] else "interval"
            lines.append(f"  {r['family']:<11} {value:<10} {kind:<9} prk >= {r['prk_lower']}")
            if "caveat" in r:
                lines.append(f"    note: {r['caveat']}")
    data = tables[str(ns[0])] if len(ns) == 1 else tables
    return data, "\n".join(lines), 0


def cmd_falsify(args, eps):
    if args.family is not None:
        fam, lam = _family_args(args)
        if lam is None:
            lam = default_lambda(fam)
        l0, l1, q = normal_form_factors(fam, args.n, lam)
        linear = [(l0, 2)] if fam in ("F1", "F2", "F3") else [(l0, 1), (l1, 1)]
        F = normal_form(fam, args.n, lam)
    else:
        F, factors = load_form(args)
        st = structure_of(factors)
        if st is None:
            raise PreconditionError("falsify needs a factored input l_0^a_0 ... l_k^a_k * q")
        linear, q = st
    inp = StructuredInput.from_factors(linear, q, mode=args.mode, gamma=args.gamma, F=F, eps=eps)
    a = test_condition_a(inp, args.trials, args.seed, eps)
    out = {"dim_L": inp.dim_L, "condition_a": a.to_json()}
    lines = [f"dim L = {inp.dim_L}", f"condition (a): {a.status} ({a.consistent} consistent draws of {a.trials}, seed {a.seed})"]
    if inp.dim_L > 0:
        b = test_condition_b(inp, eps)
        out["condition_b"] = b.to_json()
        lines.append(f"condition (b): {b.status}")
    else:
        out["condition_b"] = "not applicable"
        lines.append("condition (b): not applicable (dim L = 0)")
    return out, "\n".join(lines), 0


COMMANDS = {
    "classify": cmd_classify,
    "ann": cmd_ann,
    "bound": cmd_bound,
    "rank": cmd_rank,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "table": cmd_table,
    "falsify": cmd_falsify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--poly", help="polynomial expression over x0..xn")
    common.add_argument("--file", help="file holding an expression (or a decomposition JSON for verify)")
    common.add_argument("-n", type=int, help="projective dimension n (n+1 variables)")
    common.add_argument("-t", type=int, help="degree of the annihilator piece")
    common.add_argument("--family", help="normal form id: F1..F7, F8-zero, F8-nonzero (or F8 with --lambda), F9, F10")
    common.add_argument("--lambda", dest="lam", help="family parameter, or the free parameter of the F4/F8-zero constructions")
    common.add_argument("-d", "--degree", type=int, default=4, help="degree for F1-F3 constructions (default 4)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--mode", default="full", choices=["full", "k0", "extended", "gamma"])
    common.add_argument("--gamma", type=int)
    common.add_argument("--partial", action="store_true", help="verify a partially symmetric decomposition")
    common.add_argument("--tol", type=float, help="tolerance for approximate arithmetic")
    common.add_argument("-o", "--output", help="write the report to this file")
    common.add_argument("--format", choices=["text", "json"], default="text")
    parser = argparse.ArgumentParser(prog="waringlab", description="Waring rank tools for products of linear forms and a quadric.")
    parser.add_argument("--version", action="version", version=f"waringlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    eps = args.tol
    if eps is not None and eps <= 0:
        parser.error("--tol must be positive")
    try:
        data, text, code = COMMANDS[args.command](args, eps)
    except (PolyParseError, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DecompositionError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PreconditionError, ValueError, ArithmeticError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = json.dumps(data, indent=2, sort_keys=True) if args.format == "json" else text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
