"""Command line interface.

    bcpadic lp --form 11a --p 5 --N 20 --M 25
    bcpadic factor-check --form 11a --p 5 --disc 4
    bcpadic gauss
    bcpadic bc transfer --form 17a --p 3 --disc 4
    bcpadic bc lp-cyc --form 17a --p 3 --disc 4
    bcpadic bc factor-check --form 17a --p 3 --disc 4 --chars 27

Output is JSON with sorted keys.  p-adic numbers are
{prime, precision, order, digits} with digits base p starting at p^order;
cyclotomic numbers are {conductor, coeffs} in the power basis of
Q(zeta_conductor).  Exit codes: 0 success, 2 failed precondition,
3 precision budget exhausted, 4 no convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from .basechange import label_key
from .characters import DirichletCharacter, ImagQuadField, primitive_characters
from .eigenforms import DATA_ENV, load_eigenform
from .gauss import SQRT_CONVENTIONS, DEFAULT_CONVENTION, hasse_davenport_check, norm_identity_holds, tau_q
from .overconvergent import NonConvergence
from .padic import PrecisionError

EXIT_OK, EXIT_PRECONDITION, EXIT_PRECISION, EXIT_NONCONVERGENCE = 0, 2, 3, 4


class StageError(Exception):
    def __init__(self, stage: str, error: Exception):
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error


@contextmanager
def stage(name: str):
    try:
        yield
    except StageError:
        raise
    except (ValueError, KeyError, FileNotFoundError, PrecisionError, NonConvergence) as e:
        raise StageError(name, e) from e


# ---------------------------------------------------------------------------
# argument helpers


def parse_character(label: str) -> DirichletCharacter:
    parts = label.split(".")
    M = int(parts[0])
    exps = tuple(int(x) for x in parts[1:])
    if M <= 2 and exps == (1,):
        exps = ()
    return DirichletCharacter(M, exps)


def parse_battery(spec: str | None, p: int) -> list[DirichletCharacter]:
    """Comma separated labels (``25.3``) or conductors (``25``: all primitive characters)."""
    if spec is None:
        spec = f"{p},{p * p}"
    out = []
    for item in (s.strip() for s in spec.split(",")):
        if not item:
            continue
        if "." in item:
            out.append(parse_character(item))
        else:
            out.extend(primitive_characters(int(item)))
    seen = {}
    for chi in out:
        seen.setdefault(chi.label(), chi)
    return [seen[k] for k in sorted(seen, key=label_key)]


def manifest(args) -> dict:
    keys = ("form", "p", "N", "M", "Mw", "disc", "chars", "convention_sqrt")
    out = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    out["command"] = args.command + (f" {args.bc_command}" if getattr(args, "bc_command", None) else "")
    out["seed"] = 0
    return out


def emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise StageError("arguments", ValueError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing)))


# ---------------------------------------------------------------------------
# commands


def cmd_lp(args) -> dict:
    from .lfunction import (
        LValue, evaluate, form_lfunction, form_lifts, form_oracle, lvalue_from_exact, precision_overhead,
    )
    from .cyclotomic import CyclotomicElement

    _require(args, "form", "p")
    with stage("data"):
        f = load_eigenform(args.form)
    with stage("lift"):
        lifts = form_lifts(args.form, args.p, args.M, args.N)
    with stage("mellin"):
        L = form_lfunction(lifts)
    with stage("battery"):
        chars = parse_battery(args.chars, args.p)
    discs = []
    for b in sorted(L.discs):
        d = L.discs[b]
        moments = []
        for i in range(len(d.precision)):
            if d.precision[i] <= 0:
                break
            comps = tuple(CyclotomicElement.from_int(1, d.values[c][0][i]).reduce_mod(args.p ** (d.precision[i] + d.scale))
                          for c in range(len(d.values)))
            moments.append(LValue(args.p, comps, d.scale, d.precision[i], L.relation, L.h).to_json())
        discs.append({"centre": b, "moments": moments})
    values = []
    with stage("evaluate"):
        for chi in chars:
            r = evaluate(L, chi, 0)
            oracle = lvalue_from_exact(form_oracle(lifts, chi), args.p, r.precision,
                                       alpha=L.alpha if L.ordinary else None, h=L.h)
            entry = r.to_json()
            entry["oracle_agrees"] = r.value.agrees_with(oracle)
            values.append(entry)
    out = {
        "manifest": manifest(args),
        "form": {"label": f.label, "level": f.level, "weight": f.weight, "a_p": lifts.a_p},
        "eigenvalue": {"trace": lifts.a_p, "norm": args.p ** (lifts.k + 1), "slope": str(L.h),
                       "ordinary": L.ordinary},
        "ledger": {"N": args.N, "M": args.M,
                   "moment_precision": list(lifts.lifts[0].precision),
                   "iterations": [s.iterations for s in lifts.lifts],
                   "overhead": precision_overhead(L)},
        "discs": discs,
        "values": values,
    }
    if L.ordinary and args.Mw and args.Mw > 1:
        out["family"] = _family_json(lifts, args.Mw)
    return out


def _family_json(lifts, Mw: int) -> dict:
    from .lfunction import family_mellin, padic_json
    from .overconvergent import family_lift

    with stage("family"):
        fam = family_lift(lifts.lifts[0], Mw)
        fm = family_mellin(fam, R=3)
    p = fm.p
    W = fam.symbol.W
    prec = fam.symbol.precision
    series = fm.series()
    return {
        "Mw": Mw, "k0": fm.k0, "sign": 1,
        "alpha": [padic_json(a, p, 0, W) for a in fam.alpha],
        "discs": [{"centre": b, "moments": [[padic_json(c, p, -fm.scale, prec[j]) for c in mom]
                                            for j, mom in enumerate(series[b])]}
                  for b in sorted(series)],
    }


def cmd_factor_check(args) -> dict:
    from .basechange import cyc_base_change_L, factorisation_check
    from .lfunction import form_lifts

    _require(args, "form", "p", "disc")
    with stage("data"):
        f = load_eigenform(args.form)
        K = ImagQuadField(args.disc)
    with stage("battery"):
        chars = parse_battery(args.chars, args.p)
    with stage("lift"):
        lifts = form_lifts(args.form, args.p, args.M, args.N)
    with stage("base change"):
        bc = cyc_base_change_L(lifts, f, K)
    with stage("factorisation"):
        rep = factorisation_check(bc, lifts, chars, convention=args.convention_sqrt)
    return {"manifest": manifest(args), "transfer": bc.data.to_json(), "report": rep.to_json()}


def cmd_gauss(args) -> dict:
    from .basechange import constants_match

    primes = [args.p] if args.p else [3, 5, 7]
    discs = [args.disc] if args.disc else [3, 4, 7, 8, 11]
    norm_rows = []
    for cond in range(1, 46):
        for chi in primitive_characters(cond):
            norm_rows.append({"character": chi.label(), "holds": norm_identity_holds(chi),
                              "tau": tau_q(chi).value.to_json()})
    hd_rows, const_rows = [], []
    for p in primes:
        for n in (1, 2):
            for chi in primitive_characters(p**n):
                for d in discs:
                    if d % p == 0:
                        continue
                    K = ImagQuadField(d)
                    res = {c: hasse_davenport_check(chi, K, c).holds for c in SQRT_CONVENTIONS}
                    hd_rows.append({"character": chi.label(), "disc": -d, "holds": res})
                    const_rows.append({"character": chi.label(), "disc": -d,
                                       "holds": constants_match(K, 0, 0, chi, 0, args.convention_sqrt)})
    return {"manifest": manifest(args), "norm_identity": norm_rows,
            "hasse_davenport": hd_rows, "constant_matching": const_rows}


def cmd_bc_transfer(args) -> dict:
    from .basechange import transfer

    _require(args, "form", "disc")
    with stage("data"):
        f = load_eigenform(args.form)
        K = ImagQuadField(args.disc)
    primes = [args.p] if args.p else [q for q in range(3, 50) if all(q % r for r in range(2, q)) and f.level % q]
    rows = []
    with stage("transfer"):
        for q in primes:
            rows.append(transfer(f, q, K).to_json())
    return {"manifest": manifest(args), "transfer": rows}


def cmd_bc_lp_cyc(args) -> dict:
    from .basechange import cyc_base_change_L
    from .lfunction import form_lifts

    _require(args, "form", "p", "disc")
    with stage("data"):
        f = load_eigenform(args.form)
        K = ImagQuadField(args.disc)
    with stage("battery"):
        chars = parse_battery(args.chars, args.p)
    with stage("lift"):
        lifts = form_lifts(args.form, args.p, args.M, args.N)
    with stage("base change"):
        bc = cyc_base_change_L(lifts, f, K)
    values = []
    with stage("evaluate"):
        for chi in chars:
            values.append(bc.evaluate(chi, 0).to_json())
    adm = []
    with stage("admissibility"):
        H = 2 * bc.data.h
        for h in sorted({H, max(H - Fraction(1, 2), Fraction(0))}, reverse=True):
            r = bc.admissibility(h)
            adm.append({"h": str(h), "admissible": r.admissible,
                        "best_constant": None if r.best_constant is None else str(r.best_constant),
                        "minima": [None if m is None else str(m) for m in r.minima],
                        "depths": r.depths, "violations": r.violations, "slack": str(r.slack)})
    return {"manifest": manifest(args), "transfer": bc.data.to_json(), "values": values,
            "admissibility": adm}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--form", help="eigenform label, e.g. 11a (data directory: $%s)" % DATA_ENV)
    common.add_argument("--p", type=int, help="an odd prime not dividing the level")
    common.add_argument("--N", type=int, default=20, help="target p-adic precision")
    common.add_argument("--M", type=int, default=25, help="number of moments")
    common.add_argument("--Mw", type=int, default=1, help="weight-variable truncation for families")
    common.add_argument("--disc", type=int, help="d for K = Q(sqrt(-d)), d in 3, 4, 7, 8, 11, ...")
    common.add_argument("--chars", help="labels like 25.3 or conductors like 25, comma separated")
    common.add_argument("--convention-sqrt", dest="convention_sqrt", default=DEFAULT_CONVENTION,
                        choices=SQRT_CONVENTIONS, help="generator of the different in tau_K")
    common.add_argument("--out", help="write JSON here instead of stdout")
    parser = argparse.ArgumentParser(prog="bcpadic", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("lp", parents=[common], help="p-adic L-function of a form")
    sub.add_parser("factor-check", parents=[common], help="factorisation over K against Artin formalism")
    sub.add_parser("gauss", parents=[common], help="Gauss sum identity grids")
    bc = sub.add_parser("bc", help="base change to an imaginary quadratic field")
    bsub = bc.add_subparsers(dest="bc_command", required=True)
    bsub.add_parser("transfer", parents=[common], help="eigenvalues and slopes over K")
    bsub.add_parser("lp-cyc", parents=[common], help="cyclotomic L-function over K")
    bsub.add_parser("factor-check", parents=[common], help="same as the top-level factor-check")
    return parser


COMMANDS = {
    ("lp", None): cmd_lp,
    ("factor-check", None): cmd_factor_check,
    ("gauss", None): cmd_gauss,
    ("bc", "transfer"): cmd_bc_transfer,
    ("bc", "lp-cyc"): cmd_bc_lp_cyc,
    ("bc", "factor-check"): cmd_factor_check,
}


def _precheck(args) -> None:
    p = getattr(args, "p", None)
    if p is not None and (p < 3 or any(p % q == 0 for q in range(2, int(p**0.5) + 1))):
        raise StageError("arguments", ValueError(
            f"p = {p} is not supported: only odd primes are handled (p = 2 needs different Manin data and Teichmuller lifts)"))
    for name in ("N", "M", "Mw"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise StageError("arguments", ValueError(f"--{name} must be positive"))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[(args.command, getattr(args, "bc_command", None))]
    try:
        _precheck(args)
        result = fn(args)
    except StageError as e:
        err = e.error
        if isinstance(err, NonConvergence):
            code = EXIT_NONCONVERGENCE
        elif isinstance(err, PrecisionError):
            code = EXIT_PRECISION
        else:
            code = EXIT_PRECONDITION
        sys.stderr.write(json.dumps({"error": str(err), "stage": e.stage, "exit_code": code}, sort_keys=True) + "\n")
        return code
    emit(result, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
