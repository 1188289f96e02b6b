"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.

Defaults for truncation come from (highest precedence first) command line
flags, the QMZV_ORDER environment variable, a config file, and built-in
values.  The config file holds flat ``key = value`` lines::

    # qmzv.toml
    default_order = 40
    default_degree = 4
    default_depth = 2
    beta_source = "builtin"     # or a path to a beta table JSON file

It is read from ``--config PATH`` or, if present, ``./qmzv.toml``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .analysis import SUITES, find_relations, formal_limit, numeric_limit_check, run_suite
from .bimould import CHECKS, Predicate, TruncBimould, TruncationError
from .eisenstein import (
    REQUIRED_DEPTH, BalancedZetaQ, BetaTable, DepthError, MissingBetaError, _cached,
)
from .linalg import InconsistentSystemError
from .qseries import DEFAULT_ORDER, DivergentError, QSeries, format_qseries, generic_qzeta
from .quasishuffle import INSTANCES, qshuffle
from .regmaps import LeadingZeroError, phi_sharp, phi_sharp_inv, reg, tau_B, tau_PY
from .words import (
    B, PY, AlphabetError, LinComb, ParseError, format_lincomb, parse_lincomb, z,
)


@dataclass
class Config:
    default_order: int = DEFAULT_ORDER
    default_degree: int = 4
    default_depth: int = REQUIRED_DEPTH
    beta_source: str = "builtin"

    def validate(self) -> None:
        if self.default_order < 1 or self.default_degree < 1:
            raise ValueError("default_order and default_degree must be >= 1")
        if not 1 <= self.default_depth <= 3:
            raise ValueError("default_depth must be between 1 and 3")


def read_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        out[key] = value
    return out


def load_config(path: str | None) -> Config:
    cfg = Config()
    p = Path(path) if path else Path("qmzv.toml")
    if path or p.exists():
        for key, value in read_config_text(p.read_text()).items():
            if key not in Config.__dataclass_fields__:
                raise ValueError(f"unknown config key: {key}")
            setattr(cfg, key, value if key == "beta_source" else int(value))
    env = os.environ.get("QMZV_ORDER")
    if env:
        cfg.default_order = int(env)
    cfg.validate()
    return cfg


class UsageError(Exception):
    pass


# --- input parsing -------------------------------------------------------

_INDEX_RE = re.compile(r"\s*\d+(?:\s*,\s*\d+)*\s*")


def parse_b_input(text: str) -> LinComb:
    """``2,0,3`` (index tuple), a word, or a combination of words."""
    if _INDEX_RE.fullmatch(text):
        return LinComb({z(*(int(t) for t in text.split(","))): 1})
    return parse_lincomb(text)


_POLY_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<c>\d+(?:/\d+)?)?\s*\*?\s*(?P<t>t(?:\^(?P<e>\d+))?)?")


def parse_poly_t(text: str) -> list[Fraction]:
    """Parse a polynomial in t such as ``t``, ``t + t^2`` or ``1/2*t^3 - 1``."""
    coeffs: dict = {}
    pos, first = 0, True
    text = text.strip()
    while pos < len(text):
        m = _POLY_TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group("c") or m.group("t")):
            raise ParseError("malformed polynomial term", text, pos)
        if not first and not m.group("sign"):
            raise ParseError("expected '+' or '-'", text, pos)
        c = Fraction(m.group("c") or 1) * (-1 if m.group("sign") == "-" else 1)
        e = int(m.group("e") or 1) if m.group("t") else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos, first = m.end(), False
    if not coeffs:
        raise ParseError("empty polynomial", text, 0)
    return [coeffs.get(i, Fraction(0)) for i in range(max(coeffs) + 1)]


_QEXP_RE = re.compile(r"\s*zq\((?P<s>[^;]*);(?P<r>[^)]*)\)\s*")


def parse_generic(text: str) -> tuple[list[int], list[list[Fraction]]]:
    """``zq(s_1, .., s_l; R_1, .., R_l)`` with polynomials R_j in t."""
    m = _QEXP_RE.fullmatch(text)
    if not m:
        raise ParseError("expected zq(s_1,..,s_l; R_1,..,R_l)", text, 0)
    try:
        s = [int(v) for v in m.group("s").split(",")]
    except ValueError:
        raise ParseError("indices must be integers", text, m.start("s")) from None
    rs = [parse_poly_t(r) for r in m.group("r").split(",")]
    if len(rs) != len(s):
        raise ParseError("need one polynomial per index", text, m.start("r"))
    return s, rs


# --- output ----------------------------------------------------------------

def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, ensure_ascii=False))
    else:
        print(text)


def _emit_lincomb(args, x: LinComb) -> None:
    _emit(args, format_lincomb(x), x.to_json())


def _emit_series(args, f: QSeries) -> None:
    _emit(args, format_qseries(f), f.to_json())


# --- commands ----------------------------------------------------------------

def _beta(args, cfg: Config) -> BetaTable | None:
    src = args.beta or (None if cfg.beta_source == "builtin" else cfg.beta_source)
    return BetaTable.load(src) if src else None


def _order(args, cfg: Config) -> int:
    return cfg.default_order if args.order is None else args.order


def cmd_mul(args, cfg) -> int:
    _emit_lincomb(args, qshuffle(args.product, parse_lincomb(args.u), parse_lincomb(args.v)))
    return 0


def cmd_reg(args, cfg) -> int:
    _emit_lincomb(args, reg(parse_lincomb(args.word)))
    return 0


def cmd_tau(args, cfg) -> int:
    x = parse_lincomb(args.word)
    _emit_lincomb(args, tau_PY(x) if x.alphabet == PY else tau_B(x))
    return 0


def cmd_phi(args, cfg) -> int:
    x = parse_lincomb(args.word)
    _emit_lincomb(args, phi_sharp(x) if args.dir == "fwd" else phi_sharp_inv(x))
    return 0


def cmd_qexp(args, cfg) -> int:
    s, rs = parse_generic(args.expr)
    _emit_series(args, generic_qzeta(s, rs, _order(args, cfg)))
    return 0


def cmd_zq(args, cfg) -> int:
    order = _order(args, cfg)
    x = parse_b_input(args.word)
    if x.alphabet not in (None, B):
        raise UsageError("zq takes B-words")
    ev = BalancedZetaQ(order, _beta(args, cfg))
    _emit_series(args, ev(x, order))
    return 0


def cmd_check(args, cfg) -> int:
    depth = args.depth or cfg.default_depth
    degree = args.degree or cfg.default_degree
    order = _order(args, cfg)
    if args.file:
        M = TruncBimould.from_json(json.loads(Path(args.file).read_text()))
    else:
        data = _cached(depth, depth + degree, order, _beta(args, cfg))
        M = {"G": data.G, "Bal": data.Bal, "b": data.b}[args.mould]
    rep = CHECKS[Predicate(args.predicate)](M, depth, degree=degree)
    data = {"predicate": rep.predicate.value, "verdict": "PASS" if rep.verdict else "FAIL",
            "depth": rep.checked_depth, "degree": rep.checked_degree, "identities": rep.checks}
    if rep.first_failure:
        data["first_failure"] = {k: str(v) for k, v in rep.first_failure.items()}
    _emit(args, rep.summary(), data)
    return 0 if rep.verdict else 1


def cmd_verify(args, cfg) -> int:
    order = _order(args, cfg)
    results = run_suite(args.suite, args.maxwt, order, _beta(args, cfg), seed=args.seed)
    ok = all(results)
    if args.format == "json":
        print(json.dumps({"suite": args.suite, "ok": ok,
                          "results": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]}))
    else:
        for r in results:
            print(r.line())
    return 0 if ok else 1


def cmd_relations(args, cfg) -> int:
    order = _order(args, cfg)
    rels = find_relations(args.weight, args.maxdep, order, _beta(args, cfg))
    if args.format == "json":
        print(json.dumps([r.to_json() for r in rels]))
    else:
        for r in rels:
            print(f"{r} = 0")
    return 0


def cmd_limit(args, cfg) -> int:
    x = parse_b_input(args.word)
    sym = formal_limit(x)
    data = {"formal": sym.to_json()}
    text = str(sym)
    if args.numeric:
        if len(x.terms) != 1:
            raise UsageError("--numeric takes a single word")
        rep = numeric_limit_check(next(iter(x.terms)))
        text += "\n" + rep.line()
        data["numeric"] = {"extrapolated": rep.extrapolated, "target": rep.target,
                           "rel_error": rep.rel_error}
    _emit(args, text, data)
    return 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--order", type=int, help="truncation order N (q^0..q^N)")
    common.add_argument("--config", help="config file (flat key = value lines)")
    common.add_argument("--beta", help="beta table JSON file")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p = argparse.ArgumentParser(prog="qmzv", description="Balanced multiple q-zeta values "
                                "and quasi-shuffle algebra on words.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mul", parents=[common], help="quasi-shuffle product")
    s.add_argument("--product", choices=sorted(INSTANCES), default="balanced")
    s.add_argument("u")
    s.add_argument("v")
    s.set_defaults(func=cmd_mul)

    s = sub.add_parser("reg", parents=[common], help="regularize B-words (remove leading b0)")
    s.add_argument("word")
    s.set_defaults(func=cmd_reg)

    s = sub.add_parser("tau", parents=[common], help="the involution tau on B- or {p,y}-words")
    s.add_argument("word")
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("phi", parents=[common], help="isomorphism between Ybi-words and B-words")
    s.add_argument("--dir", choices=("fwd", "inv"), default="fwd")
    s.add_argument("word")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("qexp", parents=[common], help="generic q-zeta value zq(s; R)")
    s.add_argument("expr")
    s.set_defaults(func=cmd_qexp)

    s = sub.add_parser("zq", parents=[common], help="balanced q-zeta value")
    s.add_argument("word", help="index tuple like 2,0,3 or B-words")
    s.set_defaults(func=cmd_zq)

    s = sub.add_parser("check", parents=[common], help="bimould symmetry check")
    s.add_argument("--predicate", choices=[q.value for q in Predicate], required=True)
    s.add_argument("--depth", type=int)
    s.add_argument("--degree", type=int)
    s.add_argument("--mould", choices=("G", "Bal", "b"), default="G")
    s.add_argument("--file", help="bimould JSON file (instead of a built-in mould)")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=SUITES + ("random", "all"), default="all")
    s.add_argument("--maxwt", type=int, default=6)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("relations", parents=[common], help="linear relations in fixed weight")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--maxdep", type=int, default=REQUIRED_DEPTH)
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("limit", parents=[common], help="formal q -> 1 limit")
    s.add_argument("word")
    s.add_argument("--numeric", action="store_true", help="also run the numeric extrapolation")
    s.set_defaults(func=cmd_limit)
    return p


_INPUT_ERRORS = (
    ParseError, AlphabetError, LeadingZeroError, DepthError, MissingBetaError,
    DivergentError, TruncationError, UsageError, ValueError, KeyError, OSError,
)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        cfg = load_config(args.config)
        if args.order is not None and args.order < 0:
            raise UsageError("--order must be >= 0")
        return args.func(args, cfg)
    except InconsistentSystemError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
