"""Command-line front end: basis, duality, lift, hurwitz, weil-check, iso."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .borcherds import lift
from .discriminant import DiscriminantForm
from .errors import InconsistencyError, IntegralityError, UnsupportedLevelError
from .levels import level_data
from .scalar_forms import (
    EpsilonSpaceSpec,
    ReducedBasis,
    build_weak_basis,
    duality_check,
    elimination_bound,
    hurwitz_table,
)
from .vvmf import VectorForm, check_S, check_T, phi, psi
from .weil import WeilRep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LEVEL = 3
EXIT_MATH = 4
DEFAULT_ORDER = 200
DEFAULT_LIFT_ORDER = 20
WEIL_TOLERANCE = 1e-9
S_TOLERANCE = 1e-6


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    level: int | None = None
    weight: Fraction = Fraction(1, 2)
    eps: dict[int, int] | None = None
    genus: str | None = None
    dual: bool = False
    min_exp: int = 0
    order: int = DEFAULT_ORDER
    fmt: str = "json"
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weight = Fraction(self.weight)
        if self.weight.denominator != 2:
            raise UsageError(f"weight {self.weight} must have denominator 2")
        # For lift, order counts product factors rather than a series truncation.
        if self.subcommand in ("basis", "duality", "iso") and self.order < abs(self.min_exp) + 16:
            raise UsageError(f"order {self.order} must be at least |min-exp| + 16 = {abs(self.min_exp) + 16}")

    def discriminant_form(self) -> DiscriminantForm:
        """D from --genus, else from --level and --eps (default all +1); dualized by --dual."""
        if self.genus:
            D = DiscriminantForm.parse(self.genus)
            if self.level is not None and D.level != self.level:
                raise UsageError(f"genus {self.genus} has level {D.level}, not {self.level}")
        else:
            if self.level is None:
                raise UsageError("either --level or --genus is required")
            level_data(self.level)
            eps = self.eps if self.eps is not None else None
            D = DiscriminantForm.from_level(self.level) if eps is None else DiscriminantForm.from_epsilon(self.level, eps)
        level_data(D.level)
        return D.dual() if self.dual else D


# -- argument parsing -------------------------------------------------------------------


def _parse_eps(text: str) -> dict[int, int]:
    out = {}
    for item in text.split(","):
        p, _, s = item.partition("=")
        try:
            p_int = int(p)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad eps entry {item!r}") from None
        if s.strip() not in ("+1", "1", "-1", "+", "-"):
            raise argparse.ArgumentTypeError(f"bad eps sign in {item!r}")
        out[p_int] = -1 if s.strip().startswith("-") else 1
    return out


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _parse_pool(text: str) -> list[int]:
    try:
        pool = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad divisor pool {text!r}") from None
    if not pool or any(d <= 0 for d in pool):
        raise argparse.ArgumentTypeError("divisor pool needs positive integers")
    return pool


_TERM = re.compile(r"([+-]?)\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?f_(-?[0-9]+)")


def parse_form_expression(text: str) -> dict[int, Fraction]:
    """'f_-3+f_0', '12*f_0', '1/2*f_-8 - f_0' -> {m: coefficient}."""
    compact = text.replace(" ", "")
    out: dict[int, Fraction] = {}
    pos = 0
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or (pos and not m.group(1)):
            raise UsageError(f"cannot parse form expression {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        key = int(m.group(3))
        out[key] = out.get(key, Fraction(0)) + sign * c
        pos = m.end()
    if not out:
        raise UsageError("empty form expression")
    return {m: c for m, c in sorted(out.items()) if c}


def _default_order() -> int:
    env = os.environ.get("WEILFORM_ORDER")
    if env is None:
        return DEFAULT_ORDER
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"WEILFORM_ORDER={env!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weilform", description="Scalar and vector-valued forms for the Weil representation.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, weight=True, min_exp=True, order=True):
        p.add_argument("--level", type=int)
        p.add_argument("--eps", type=_parse_eps, help="signs such as 2=+1,3=+1")
        p.add_argument("--genus", help="genus symbol such as 2_7^+1.3^-1")
        p.add_argument("--dual", action="store_true", help="use the dual discriminant form")
        if weight:
            p.add_argument("--weight", type=_parse_fraction, default=Fraction(1, 2))
        if min_exp:
            p.add_argument("--min-exp", type=int, default=0)
        if order:
            p.add_argument("--order", type=int)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--output")

    common(sub.add_parser("basis", help="reduced basis f_m for m >= min-exp"))

    p = sub.add_parser("duality", help="Zagier duality table between weights k and 2 - k")
    common(p, min_exp=False)
    p.add_argument("--range", type=int, default=12, dest="range_")
    p.add_argument("--input", help="weight-k basis JSON to check instead of computing it")
    p.add_argument("--dual-input", help="dual basis JSON to check instead of computing it")

    p = sub.add_parser("lift", help="Borcherds product of a weight-1/2 form")
    common(p, weight=False, min_exp=False)
    p.add_argument("--form", required=True, help="expression such as f_-3+f_0 or 12*f_0")
    p.add_argument("--eta-pool", type=_parse_pool)

    p = sub.add_parser("hurwitz", help="Hurwitz class numbers H(n)")
    p.add_argument("--min", type=int, default=0, dest="min_n")
    p.add_argument("--max", type=int, required=True, dest="max_n")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output")

    p = sub.add_parser("weil-check", help="residuals of the Weil representation relations")
    common(p, weight=False, min_exp=False, order=False)

    p = sub.add_parser("iso", help="map between scalar and vector-valued forms")
    common(p)
    p.add_argument("--direction", choices=("psi", "phi"), default="psi")
    p.add_argument("--form", help="f_m expression to send through psi")
    p.add_argument("--input", help="vector-valued form JSON to send through phi")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    order = getattr(args, "order", None)
    if args.subcommand == "lift":
        order = order if order is not None else DEFAULT_LIFT_ORDER
        min_exp = 0
    else:
        order = order if order is not None else _default_order()
        min_exp = getattr(args, "min_exp", 0)
        if args.subcommand == "duality":
            min_exp = -args.range_
    extra = {
        k: v
        for k, v in vars(args).items()
        if k in ("range_", "input", "dual_input", "form", "eta_pool", "direction", "min_n", "max_n")
    }
    if args.subcommand == "hurwitz":
        return RunConfig("hurwitz", fmt=args.format, output=args.output, extra=extra)
    return RunConfig(
        args.subcommand,
        level=args.level,
        weight=getattr(args, "weight", Fraction(1, 2)),
        eps=args.eps,
        genus=args.genus,
        dual=args.dual,
        min_exp=min_exp,
        order=order,
        fmt=args.format,
        output=args.output,
        extra=extra,
    )


# -- commands ---------------------------------------------------------------------------


def _build_basis(config: RunConfig, D: DiscriminantForm, weight: Fraction, min_exp: int, order: int) -> ReducedBasis:
    spec = EpsilonSpaceSpec(D, weight)
    return build_weak_basis(spec, min_exp, order)


def cmd_basis(config: RunConfig) -> tuple[int, dict, str]:
    D = config.discriminant_form()
    B = _build_basis(config, D, config.weight, config.min_exp, config.order)
    payload = B.to_json()
    lines = [f"# {D.symbol()}  weight {B.spec.k}  level {B.spec.N}  O(q^{B.order})"]
    for m, f in sorted(B.forms.items()):
        lines.append(f"f_{m} = {f}")
    lines.append(f"exists: {sorted(B.exists_set)}")
    lines.append(f"obstructed: {sorted(B.obstructed_set)}")
    return EXIT_OK, payload, "\n".join(lines)


def _load_basis(path: str) -> ReducedBasis:
    try:
        with open(path, encoding="utf-8") as fh:
            return ReducedBasis.from_json(json.load(fh))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def cmd_duality(config: RunConfig) -> tuple[int, dict, str]:
    R = config.extra["range_"]
    if config.extra.get("input"):
        A = _load_basis(config.extra["input"])
    else:
        A = _build_basis(config, config.discriminant_form(), config.weight, -R, config.order)
    if config.extra.get("dual_input"):
        B = _load_basis(config.extra["dual_input"])
    else:
        B = _build_basis(config, A.spec.D.dual(), 2 - A.spec.k, -R, config.order)
    report = duality_check(A, B)
    pairs = [(m, d, x, y) for m, d, x, y in report.pairs if abs(m) <= R and abs(d) <= R]
    payload = {
        "genus": A.spec.D.symbol(),
        "weight": str(A.spec.k),
        "dual_weight": str(B.spec.k),
        "range": R,
        "pairs": [[m, d, str(x), str(y)] for m, d, x, y in pairs],
        "violations": [[m, d, str(x), str(y)] for m, d, x, y in report.violations],
        "ok": report.ok,
    }
    lines = [f"# a_m(-d) vs -a*_d(-m) for {A.spec.D.symbol()}, |m|, |d| <= {R}"]
    for m, d, x, y in pairs:
        mark = "ok" if x == -y else "VIOLATION"
        lines.append(f"m={m:4d} d={d:4d}  a_m(-d)={x}  a*_d(-m)={y}  {mark}")
    lines.append(f"{len(pairs)} pairs, {len(report.violations)} violations")
    return (EXIT_OK if report.ok else EXIT_MATH), payload, "\n".join(lines)


def cmd_lift(config: RunConfig) -> tuple[int, dict, str]:
    D = config.discriminant_form()
    if config.dual:
        raise UsageError("lift works on the weight-1/2 lattice form; --dual is not allowed")
    terms = parse_form_expression(config.extra["form"])
    T = config.order
    need = (T - 1) ** 2 + 1
    low = min(min(terms), 0)
    base_order = max(elimination_bound(EpsilonSpaceSpec(D, Fraction(1, 2)), low), abs(low) + 16)
    B = _build_basis(config, D, Fraction(1, 2), low, base_order)
    f = None
    for m, c in terms.items():
        g = B.evaluate(m, max(need, B.order)).scale(c)
        f = g if f is None else f + g
    result = lift(D, f, T, eta_pool=config.extra.get("eta_pool"))
    payload = result.to_json()
    payload["form"] = config.extra["form"]
    match = result.eta_match
    lines = [
        f"Psi({config.extra['form']}) on {D.symbol()}",
        f"weight {result.weight}, rho {result.weyl_rho}",
        "exponents " + " ".join(f"e_{n}={e}" for n, e in sorted(result.exponents.items())),
        f"expansion {result.expansion}",
        f"divisors {result.divisors}",
        f"eta match {match.kind} {match.exponents}",
    ]
    if match.cofactor is not None:
        lines.append(f"cofactor {match.cofactor}")
    return EXIT_OK, payload, "\n".join(lines)


def cmd_hurwitz(config: RunConfig) -> tuple[int, dict, str]:
    lo, hi = config.extra["min_n"], config.extra["max_n"]
    if lo < 0 or hi < lo:
        raise UsageError("need 0 <= min <= max")
    table = {n: h for n, h in hurwitz_table(hi).items() if n >= lo}
    payload = {"hurwitz": {str(n): str(h) for n, h in sorted(table.items())}}
    lines = [f"H({n}) = {h}" for n, h in sorted(table.items())]
    return EXIT_OK, payload, "\n".join(lines)


def cmd_weil_check(config: RunConfig) -> tuple[int, dict, str]:
    if config.genus:
        D = DiscriminantForm.parse(config.genus)
        D = D.dual() if config.dual else D
    else:
        D = config.discriminant_form()
    res = WeilRep(D).relation_residuals()
    worst = max(res.values())
    ok = worst < WEIL_TOLERANCE
    payload = {
        "genus": D.symbol(),
        "order": D.order,
        "residuals": {k: f"{v:.3e}" for k, v in sorted(res.items())},
        "max_residual": f"{worst:.3e}",
        "ok": ok,
    }
    lines = [f"# Weil relations for {D.symbol()} (|D| = {D.order})"]
    lines += [f"{k}: {v:.3e}" for k, v in sorted(res.items())]
    lines.append(f"max residual {worst:.3e} {'ok' if ok else 'FAIL'}")
    return (EXIT_OK if ok else EXIT_MATH), payload, "\n".join(lines)


def cmd_iso(config: RunConfig) -> tuple[int, dict, str]:
    if config.extra["direction"] == "phi":
        path = config.extra.get("input")
        if not path:
            raise UsageError("iso --direction phi needs --input with a vector-valued form")
        with open(path, encoding="utf-8") as fh:
            F = VectorForm.from_json(json.load(fh))
        f = phi(F)
        return EXIT_OK, {"genus": F.D.symbol(), "weight": str(F.weight), "series": f.to_json()}, str(f)
    expr = config.extra.get("form")
    if not expr:
        raise UsageError("iso --direction psi needs --form")
    terms = parse_form_expression(expr)
    D = config.discriminant_form()
    low = min(min(terms), config.min_exp, 0)
    B = _build_basis(config, D, config.weight, low, config.order)
    f = None
    for m, c in terms.items():
        g = B.form(m).scale(c)
        f = g if f is None else f + g
    F = psi(D, f, config.weight)
    residual = check_S(F, num_terms=config.order)
    roundtrip = phi(F) == f
    ok = check_T(F) and roundtrip and residual < S_TOLERANCE
    payload = F.to_json()
    payload["checks"] = {"T": check_T(F), "S_residual": f"{residual:.3e}", "roundtrip": roundtrip}
    lines = [f"psi({expr}) on {D.symbol()}, weight {F.weight}"]
    lines += [f"[{nu}] {s}" for nu, s in sorted(F.components.items())]
    lines.append(f"check_T {check_T(F)}  check_S {residual:.3e}  roundtrip {roundtrip}")
    return (EXIT_OK if ok else EXIT_MATH), payload, "\n".join(lines)


COMMANDS = {
    "basis": cmd_basis,
    "duality": cmd_duality,
    "lift": cmd_lift,
    "hurwitz": cmd_hurwitz,
    "weil-check": cmd_weil_check,
    "iso": cmd_iso,
}


def render(payload: dict, text: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return text + "\n"


def run(config: RunConfig) -> tuple[int, str]:
    status, payload, text = COMMANDS[config.subcommand](config)
    return status, render(payload, text, config.fmt)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        status, out = run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedLevelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LEVEL
    except (InconsistencyError, IntegralityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
