"""``canheight`` command line.

Exit codes: 0 success, 2 domain or usage error, 3 resource exhausted or
inconclusive, 4 a certified height below a lower bound.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction

from .bounds import (BoundViolation, PreperiodicWithinN, integer_c_lower_bound, remark_bound_general_d,
                     theorem2_constants, theorem2_lower_bound, type_ii_count, verify_point)
from .dynamics import MapParams, Preperiodic, Undecided, Wandering, decide_preperiodic, orbit
from .errors import DomainError, ResourceError
from .families import PreperiodicCatalog, classify_integer_preperiodic, family_fixed, family_two_cycle
from .height import canonical_height
from .intervals import DEFAULT_PREC, CertInterval
from .local import classify_reduction
from .numerics import denominator_support, naive_height, parse_rational
from .survey import family_ratio_scan, figure1_dataset

PREC_ENV = "CANHEIGHT_PREC"
EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_VIOLATION = 0, 2, 3, 4

CSV_HEADER = ["c", "min_height_lo", "min_height_hi", "argmin_num", "argmin_den",
              "ratio_lo", "ratio_hi", "candidates", "preperiodic_excluded"]


# -- encoding ------------------------------------------------------------------


def interval_json(iv: CertInterval | None):
    if iv is None:
        return None
    lo, hi = iv.endpoints_str()
    return {"lo": lo, "hi": hi}


def rational_str(q: Fraction) -> str:
    return str(q)


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        if set(obj) == {"lo", "hi"}:
            return f"{pad}[{obj['lo']}, {obj['hi']}]"
        if set(obj) == {"p", "type"}:
            return f"{pad}{obj['p']}: {obj['type']}"
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not (isinstance(v, dict) and set(v) == {"lo", "hi"}):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_text(v).strip()}")
        return "\n".join(lines)
    if isinstance(obj, list):
        items = []
        for v in obj:
            if isinstance(v, dict) and set(v) not in ({"lo", "hi"}, {"p", "type"}):
                body = _text(v, indent + 1)
                items.append(f"{pad}- " + body.lstrip())
            else:
                items.append(f"{pad}- {_text(v).strip()}")
        return "\n".join(items)
    return f"{pad}{obj}"


def emit(obj, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(dump_json(obj))
    else:
        out.write(_text(obj) + "\n")


def verdict_json(v) -> dict:
    if isinstance(v, Preperiodic):
        return {"status": "Preperiodic", "i": v.i, "j": v.j, "tail": v.tail, "period": v.period}
    if isinstance(v, Undecided):
        return {"status": "Undecided", "budget": v.budget}
    cert = v.certificate
    body = {"status": "Wandering", "certificate": type(cert).__name__}
    for name in ("p", "step", "certified_prime", "k"):
        if hasattr(cert, name):
            body[name] = getattr(cert, name)
    if hasattr(cert, "place"):
        body["place"] = str(cert.place)
    return body


def local_json(lh) -> dict:
    ex = lh.exactness
    body = {"place": str(lh.place), "value": interval_json(lh.value), "exactness": ex.kind}
    if hasattr(ex, "steps"):
        body["steps"] = ex.steps
    return body


def catalog_json(cat: PreperiodicCatalog) -> dict:
    tag = {"kind": cat.family_tag.kind}
    if hasattr(cat.family_tag, "m"):
        tag["m"] = cat.family_tag.m
    return {
        "c": rational_str(cat.c),
        "family_tag": tag,
        "points": [{"point": rational_str(p.point), "tail": p.tail, "period": p.period} for p in cat.points],
        "outside_display": [rational_str(q) for q in cat.outside_display],
    }


def bound_json(name: str, iv: CertInterval) -> dict:
    return {"name": name, "value": interval_json(iv), "vacuous": bool(iv.hi <= 0)}


def survey_row_json(r) -> dict:
    return {
        "c": r.c,
        "min_height": interval_json(r.min_height),
        "argmin": None if r.argmin is None else rational_str(r.argmin),
        "ratio": interval_json(r.ratio),
        "candidates": r.candidates_examined,
        "heights_evaluated": r.heights_evaluated,
        "search_bound": r.search_bound,
        "preperiodic_excluded": [rational_str(q) for q in r.preperiodic_excluded],
        "ties": [rational_str(q) for q in r.ties],
        "error": r.error,
    }


def survey_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        if r.error is not None:
            w.writerow([r.c] + [""] * (len(CSV_HEADER) - 1))
            continue
        mlo, mhi = r.min_height.endpoints_str()
        rlo, rhi = r.ratio.endpoints_str()
        w.writerow([r.c, mlo, mhi, r.argmin.numerator, r.argmin.denominator, rlo, rhi,
                    r.candidates_examined, ";".join(rational_str(q) for q in r.preperiodic_excluded)])
    return buf.getvalue()


def survey_plot(rows) -> str:
    lines = ["# c ratio_mid"]
    for r in rows:
        if r.ratio is not None:
            lines.append(f"{r.c} {float(r.ratio.mid()):.12g}")
    return "\n".join(lines) + "\n"


# -- argument types ------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _eps(text: str) -> float:
    try:
        e = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not e > 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return e


def _integer(text: str) -> int:
    q = _rational(text)
    if q.denominator != 1:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text}")
    return q.numerator


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--prec", type=int, default=None, help=f"working precision in bits (env {PREC_ENV})")
    base.add_argument("--jobs", type=int, default=1)
    common = argparse.ArgumentParser(add_help=False, parents=[base])
    common.add_argument("--format", choices=["text", "json"], default="text")
    mp = argparse.ArgumentParser(add_help=False)
    mp.add_argument("--c", type=_rational, required=True)
    mp.add_argument("--d", type=int, default=2)

    p = _Parser(prog="canheight", description="Certified canonical heights for z^d + c over Q.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("height", parents=[common, mp], help="canonical height enclosure")
    s.add_argument("--alpha", type=_rational, required=True)
    s.add_argument("--eps", type=_eps, default=1e-8)
    s.add_argument("--method", choices=["exact", "place-sum"], default=None)
    s.add_argument("--decompose", action="store_true")

    s = sub.add_parser("orbit", parents=[common, mp], help="exact orbit")
    s.add_argument("--alpha", type=_rational, required=True)
    s.add_argument("--steps", type=int, required=True)

    sub.add_parser("classify", parents=[common, mp], help="reduction types at the bad primes")

    s = sub.add_parser("preperiodic", parents=[common, mp], help="decide preperiodicity")
    s.add_argument("--alpha", type=_rational, required=True)
    s.add_argument("--budget", type=int, default=None)

    s = sub.add_parser("families", parents=[common], help="preperiodic catalog")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--c", type=_integer)
    g.add_argument("--m", type=int)
    s.add_argument("--family", choices=["fixed", "two-cycle"], default="fixed")

    s = sub.add_parser("bound", parents=[common, mp], help="explicit lower bounds")
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--s", type=int, default=None)

    s = sub.add_parser("verify", parents=[common, mp], help="check a point against the bounds")
    s.add_argument("--alpha", type=_rational, required=True)
    s.add_argument("--eps", type=_eps, default=1e-6)

    s = sub.add_parser("survey", parents=[base], help="minimal wandering heights over a range of c")
    s.add_argument("--format", choices=["csv", "json", "plot", "text"], default="csv")
    s.add_argument("--from", dest="c_from", type=int, required=True)
    s.add_argument("--to", dest="c_to", type=int, required=True)
    s.add_argument("--eps", type=_eps, default=1e-4)
    s.add_argument("--out", default=None)

    s = sub.add_parser("family-scan", parents=[common], help="heights along c = -k^2 - k + 1")
    s.add_argument("--k-from", type=int, required=True)
    s.add_argument("--k-to", type=int, required=True)
    s.add_argument("--eps", type=_eps, default=1e-6)
    return p


def _prec(args) -> int:
    if args.prec is not None:
        prec = args.prec
    else:
        env = os.environ.get(PREC_ENV)
        try:
            prec = int(env) if env else DEFAULT_PREC
        except ValueError:
            raise DomainError(f"{PREC_ENV} must be an integer, got {env!r}")
    if prec < 53:
        raise DomainError("precision must be at least 53 bits")
    return prec


# -- commands ------------------------------------------------------------------


def cmd_height(args, prec):
    params = MapParams(args.c, args.d)
    rep = canonical_height(args.alpha, params, args.eps, method=args.method, prec=prec)
    method = {"kind": rep.method.kind}
    if hasattr(rep.method, "m"):
        method["m"] = rep.method.m
    body = {"alpha": rational_str(args.alpha), "c": rational_str(params.c), "d": params.d,
            "eps": repr(args.eps), "height": interval_json(rep.total), "method": method}
    if args.decompose:
        body["locals"] = [local_json(lh) for lh in rep.locals]
    return body, EXIT_OK


def cmd_orbit(args, prec):
    params = MapParams(args.c, args.d)
    return {"alpha": rational_str(args.alpha), "c": rational_str(params.c), "d": params.d,
            "orbit": [rational_str(q) for q in orbit(args.alpha, params, args.steps)]}, EXIT_OK


def cmd_classify(args, prec):
    params = MapParams(args.c, args.d)
    table = [{"p": p, "type": str(classify_reduction(params.c, p, params.d))}
             for p in sorted(denominator_support(params.c))]
    return {"c": rational_str(params.c), "d": params.d, "bad_primes": table,
            "s": type_ii_count(params.c, params.d)}, EXIT_OK


def cmd_preperiodic(args, prec):
    params = MapParams(args.c, args.d)
    v = decide_preperiodic(args.alpha, params, budget=args.budget)
    return {"alpha": rational_str(args.alpha), "c": rational_str(params.c), "d": params.d,
            "verdict": verdict_json(v)}, EXIT_RESOURCE if isinstance(v, Undecided) else EXIT_OK


def cmd_families(args, prec):
    if args.c is not None:
        cat = classify_integer_preperiodic(args.c)
    elif args.family == "fixed":
        cat = family_fixed(args.m)
    else:
        cat = family_two_cycle(args.m)
    return catalog_json(cat), EXIT_OK


def _bounds_for(c: Fraction, d: int, r: int, s: int | None, prec: int) -> list[dict]:
    out = [bound_json("theorem2", theorem2_lower_bound(c, d, r, s, prec))]
    if c.denominator == 1 and c != 0:
        if d == 2:
            out.append(bound_json("integer_c", integer_c_lower_bound(c.numerator, 2, prec)))
        else:
            out.append(bound_json("remark_general_d", remark_bound_general_d(c.numerator, d, prec)))
    return out


def cmd_bound(args, prec):
    params = MapParams(args.c, args.d)
    s = type_ii_count(params.c, params.d) if args.s is None else args.s
    prof = theorem2_constants(params.d, args.r, s)
    body = {
        "c": rational_str(params.c), "d": params.d,
        "profile": {"d": prof.d, "r": prof.r, "s": prof.s, "m": prof.m, "N": prof.N,
                    "coefficient": f"1/{params.d}^{prof.N + 2}", "offset": interval_json(prof.offset(prec))},
        "h_c": interval_json(naive_height(params.c, prec)),
        "bounds": _bounds_for(params.c, params.d, args.r, s, prec),
    }
    return body, EXIT_OK


def cmd_verify(args, prec):
    params = MapParams(args.c, args.d)
    v = verify_point(args.alpha, params, args.eps, prec=prec)
    body = {"alpha": rational_str(args.alpha), "c": rational_str(params.c), "d": params.d, "kind": v.kind}
    if isinstance(v, PreperiodicWithinN):
        body.update(i=v.i, j=v.j, N=v.N)
        return body, EXIT_OK
    body["margin"] = interval_json(v.margin)
    body["height"] = interval_json(v.height)
    body["bounds"] = [bound_json(n, b) for n, b in v.bounds]
    if isinstance(v, BoundViolation):
        body["violated"] = v.bound_name
        return body, EXIT_VIOLATION
    return body, EXIT_OK


def cmd_survey(args, prec):
    rows = figure1_dataset(args.c_from, args.c_to, args.eps, jobs=args.jobs)
    if args.format == "csv":
        text = survey_csv(rows)
    elif args.format == "plot":
        text = survey_plot(rows)
    elif args.format == "json":
        text = dump_json([survey_row_json(r) for r in rows])
    else:
        text = _text([survey_row_json(r) for r in rows]) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return None, EXIT_OK


def cmd_family_scan(args, prec):
    rows = family_ratio_scan(args.k_from, args.k_to, args.eps, prec)
    return [{"k": r.k, "c": r.c, "second_iterate_ok": r.second_iterate_ok,
             "height": interval_json(r.height), "ratio": interval_json(r.ratio)} for r in rows], EXIT_OK


COMMANDS = {
    "height": cmd_height, "orbit": cmd_orbit, "classify": cmd_classify, "preperiodic": cmd_preperiodic,
    "families": cmd_families, "bound": cmd_bound, "verify": cmd_verify, "survey": cmd_survey,
    "family-scan": cmd_family_scan,
}


_NEG_FRACTION = re.compile(r"^-\d+/\d+$")


def _glue_negative_fractions(argv: list[str]) -> list[str]:
    # argparse reads "-1/3" as an option; attach it to the flag before it
    out: list[str] = []
    for tok in argv:
        if _NEG_FRACTION.match(tok) and out and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_fractions(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_DOMAIN
    try:
        prec = _prec(args)
        body, code = COMMANDS[args.command](args, prec)
    except DomainError as exc:
        print(f"canheight: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceError as exc:
        print(f"canheight: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if body is not None:
        emit(body, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
