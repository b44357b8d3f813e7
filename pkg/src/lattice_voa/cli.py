"""Command-line front end: ``lattice-voa <command> [options]``.

Output is JSON by default (exact rationals as ``"p/q"`` strings, cyclotomic
scalars as coordinate vectors).  Exit codes: 0 success, 1 a verification
suite failed, 2 malformed input, 3 unsupported case or violated precondition.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .cyclotomic import CycScalar
from .fock import State
from .root_data import RootDataError, RootSystem

EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION = 1, 2, 3


class InputError(ValueError):
    """Malformed command-line input (exit code 2)."""


class PreconditionError(ValueError):
    """Well-formed input outside the supported range (exit code 3)."""


def parse_weight(text: str, rank: int) -> tuple:
    """``"1,1"`` -> ``(1, 1)`` in fundamental-weight coordinates."""
    try:
        w = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise InputError(f"bad weight {text!r}") from exc
    if len(w) != rank:
        raise InputError(f"weight {text!r} needs {rank} coordinates")
    return w


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}") from exc


def parse_state(text: str, rs: RootSystem, L: int, engine=None) -> State:
    """A state given as JSON, ``vac``, ``e^a,b,...`` or ``lift:i:k``."""
    t = text.strip()
    if t in ("vac", "|0>", "1"):
        return State.monomial(rs.zero)
    if t.startswith("e^"):
        return State.monomial(parse_weight(t[2:], rs.rank))
    if t.startswith("lift:"):
        try:
            _, i, k = t.split(":")
            i, k = int(i), int(k)
        except ValueError as exc:
            raise InputError(f"bad lift reference {text!r}") from exc
        lifts = engine.fundamental_lift(i)
        if not 0 <= k < len(lifts):
            raise PreconditionError(f"lift {i} has {len(lifts)} states")
        return lifts[k]
    try:
        return State.from_json(t, L, rs.rank)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad state {text!r}: {exc}") from exc


def _root_system(name: str) -> RootSystem:
    try:
        return RootSystem.from_string(name)
    except RootDataError as exc:
        raise InputError(str(exc)) from exc


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, CycScalar):
        return x.coords()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# -- commands ---------------------------------------------------------------------

def cmd_mode(args):
    from .vertex import LatticeVOA, ParityError
    from .filtration import engine
    rs = _root_system(args.rs)
    vac = LatticeVOA(rs)
    eng = engine(rs, args.experimental) if "lift:" in args.A + args.v else None
    A = parse_state(args.A, rs, vac.L, eng)
    v = parse_state(args.v, rs, vac.L, eng)
    n = parse_rational(args.n)
    try:
        if A and v and not vac.admissible(vac.parity(A), vac.parity(v), n):
            raise PreconditionError(f"mode index {n} is not admissible for these parities")
        out = vac.mode(A, n, v)
    except ParityError as exc:
        raise PreconditionError(str(exc)) from exc
    return {"root_system": rs.name, "n": str(n), "result": out.to_json(vac.L)}, str(out)


def cmd_span(args):
    from .filtration import engine
    rs = _root_system(args.rs)
    eng = engine(rs, args.experimental)
    lam = parse_weight(args.lam, rs.rank)
    if not rs.is_dominant(lam):
        raise PreconditionError(f"{lam} is not dominant")
    sp = eng.g_span(lam, args.cutoff)
    ch = sp.quotient_character()
    max_deg = max(ch, default=0)
    comps = sp.span.components()
    data = {
        "root_system": rs.name,
        "lambda": list(lam),
        "cutoff": args.cutoff,
        "span_rank": sp.span.rank(),
        "lower_rank": sp.lower.rank(),
        "quotient_dims": sp.quotient_dims(max_deg),
        "quotient_character": [
            {"q_degree": d, "weights": [{"coords": list(w), "mult": m}
                                        for w, m in sorted(ch[d].items())]}
            for d in sorted(ch)],
        "basis_fingerprint": sp.span.fingerprint(comps),
    }
    text = f"G_{list(lam)} / G_<: graded dims {data['quotient_dims']}"
    return data, text


def cmd_mult(args):
    from .filtration import engine
    rs = _root_system(args.rs)
    eng = engine(rs, args.experimental)
    factors = []
    for spec in args.factor:
        if "@" not in spec:
            raise InputError(f"factor {spec!r} must look like STATE@m")
        st, m = spec.rsplit("@", 1)
        try:
            m = int(m)
        except ValueError as exc:
            raise InputError(f"bad exponent in {spec!r}") from exc
        if m < 0:
            raise PreconditionError("exponents must be non-negative")
        factors.append((parse_state(st, rs, eng.vac.L, eng), m))
    if not factors:
        raise InputError("need at least one --factor")
    try:
        elem = eng.phi_product(factors, args.cutoff)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    return elem.to_json(), f"reduced: {elem.reduced}"


def cmd_verify(args):
    from . import suites
    rs = _root_system(args.rs)
    if args.suite not in suites.SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {sorted(suites.SUITES)}")
    checks = suites.SUITES[args.suite](rs, args.cutoff, args.seed)
    ok = all(c.passed for c in checks)
    data = {"root_system": rs.name, "suite": args.suite, "cutoff": args.cutoff,
            "seed": args.seed, "passed": ok, "checks": [c.to_json() for c in checks]}
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name} [{c.count}] {c.anchor}" for c in checks]
    return data, "\n".join(lines), (0 if ok else EXIT_FAIL)


def cmd_char(args):
    from .weyl_characters import CharacterUnavailable, ch_global
    rs = _root_system(args.rs)
    lam = parse_weight(args.lam, rs.rank)
    if not rs.is_dominant(lam):
        raise PreconditionError(f"{lam} is not dominant")
    try:
        ch = ch_global(rs, lam, args.cutoff)
    except (CharacterUnavailable, ValueError) as exc:
        raise PreconditionError(str(exc)) from exc
    dims = ch.graded_dims(args.cutoff)
    return ({"root_system": rs.name, "lambda": list(lam), "graded_dims": dims,
             "character": ch.to_json()}, f"graded dims {dims}")


def cmd_relations(args):
    from .plucker import quadratic_kernel, relation_series
    rs = _root_system(args.rs)
    if rs.kind != "A":
        raise PreconditionError("relations are implemented in type A")
    i, j = args.i, args.j
    if not (1 <= j <= i <= rs.rank):
        raise PreconditionError(f"need 1 <= j <= i <= {rs.rank}")
    out, lines = [], []
    for l in range(1, min(j, rs.rank + 1 - i) + 1):
        for kv in quadratic_kernel(rs, i, j, l):
            kernel = [{"I": list(I), "J": list(J), "coeff": str(c)} for (I, J), c in sorted(kv.items())]
            for s in range(1, l + 1):
                ser = relation_series(rs, kv, s, args.cutoff)
                out.append({"layer": l, "kernel": kernel, "series": ser.to_json()})
                lines.append(f"layer {l} s={s}: " + "; ".join(
                    f"z^{n}: {len(ser.coefficients[n])} terms" for n in sorted(ser.coefficients)))
    return out, "\n".join(lines) or "no relations"


def cmd_tableaux(args):
    from .plucker import is_admissible, k_statistic, tableau_with_k, p_set
    if args.col1 is not None:
        try:
            I = tuple(int(x) for x in args.col1.split(","))
            J = tuple(int(x) for x in args.col2.split(","))
        except (ValueError, AttributeError) as exc:
            raise InputError("columns must be comma-separated integers") from exc
        if not is_admissible(I, J):
            raise PreconditionError("column pair violates the length/order condition")
        P = p_set(I, J)
        k = k_statistic(I, J)
        return {"I": list(I), "J": list(J), "P": list(P), "k": k}, f"P={list(P)} k={k}"
    if args.r is None or args.i is None or args.j is None:
        raise InputError("need --col1/--col2 or --r/--i/--j")
    r, i, j = args.r, args.i, args.j
    if not (1 <= j <= i <= r):
        raise PreconditionError(f"need 1 <= j <= i <= {r}")
    rows, lines = [], []
    for l in range(0, min(j, r + 1 - i) + 1):
        C, D = tableau_with_k(r, i, j, l)
        rows.append({"l": l, "C": list(C), "D": list(D), "k": k_statistic(C, D)})
        lines.append(f"l={l}: C={list(C)} D={list(D)}")
    return {"r": r, "i": i, "j": j, "tableaux": rows}, "\n".join(lines)


# -- entry point ------------------------------------------------------------------

_NEGATIVE = re.compile(r"^-\d+(/\d+)?$")


def _glue_negative_values(argv: list) -> list:
    """Turn ``--n -3/2`` into ``--n=-3/2`` so argparse does not read a flag."""
    out, k = [], 0
    argv = list(argv)
    while k < len(argv):
        tok = argv[k]
        if tok.startswith("--") and "=" not in tok and k + 1 < len(argv) \
                and _NEGATIVE.match(argv[k + 1]):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
        else:
            out.append(tok)
            k += 1
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rs", default="A1", help="root system, e.g. A2 or D4")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--experimental", action="store_true",
                        help="allow lift-based computations outside type A")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    common.set_defaults(fmt="json")

    p = _Parser(prog="lattice-voa", description="Exact computations in P/Q-graded lattice VOAs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("mode", parents=[common], help="compute A_(n) v")
    s.add_argument("--A", required=True)
    s.add_argument("--n", required=True)
    s.add_argument("--v", required=True)
    s.set_defaults(func=cmd_mode)

    s = sub.add_parser("span", parents=[common], help="filtration piece G_lambda")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--cutoff", type=Fraction, default=Fraction(3))
    s.set_defaults(func=cmd_span)

    s = sub.add_parser("mult", parents=[common], help="product in the coordinate ring")
    s.add_argument("--factor", action="append", default=[],
                   help="STATE@m, with STATE as JSON, e^a,b or lift:i:k")
    s.add_argument("--cutoff", type=Fraction, default=None)
    s.set_defaults(func=cmd_mult)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", required=True)
    s.add_argument("--cutoff", type=int, default=4)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("char", parents=[common], help="global Weyl module character")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--cutoff", type=int, default=3, help="maximal q-degree")
    s.set_defaults(func=cmd_char)

    s = sub.add_parser("relations", parents=[common], help="quadratic Pluecker relation series")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--cutoff", type=int, default=2, help="highest z-power")
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("tableaux", parents=[common], help="k-statistic and two-column tableaux")
    s.add_argument("--r", type=int)
    s.add_argument("--i", type=int)
    s.add_argument("--j", type=int)
    s.add_argument("--col1")
    s.add_argument("--col2")
    s.set_defaults(func=cmd_tableaux)
    return p


def main(argv=None) -> int:
    from .filtration import HypothesisFailure, UnsupportedType
    from .vertex import ParityError
    from .weyl_characters import CharacterUnavailable

    try:
        args = build_parser().parse_args(_glue_negative_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        res = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, ParityError, UnsupportedType, CharacterUnavailable,
            HypothesisFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    data, text = res[0], res[1]
    code = res[2] if len(res) > 2 else 0
    if args.fmt == "text":
        print(text)
    else:
        print(json.dumps(_jsonable(data), sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
