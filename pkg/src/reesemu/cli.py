"""Command-line front end.

    reesemu decide --triple 17,503,169
    reesemu triangle --triple 17,503,169 --m 2 --json
    reesemu scan --max 40 --jobs 4 --out scan.csv

Exit codes: 0 ok, 1 internal error, 2 hypothesis violation, 3 complete
intersection.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Any, Iterable

from .classify import (
    ClassificationDatum,
    ConstructionExhausted,
    NotApplicable,
    SlopeTriple,
    classify,
    construct_triple,
    phi,
)
from .corpus import CorpusEntry, corpus
from .herzog import CompleteIntersectionError, MonomialTriple, herzog_generators
from .oracle import _curve_exists, cross_validate, curve_search, vanishing_order
from .triangle import (
    ConeProfile,
    EMUHolds,
    HypothesisError,
    RationalTriangle,
    column_counts,
    minimal_degree,
    negative_curve_holds,
    triangle_from_generators,
    triangle_from_slopes,
)
from .truncring import CHAR0, CoefficientField, factor_decision

EXIT_OK, EXIT_INTERNAL, EXIT_HYPOTHESIS, EXIT_CI = 0, 1, 2, 3

CSV_COLUMNS = (
    "a", "b", "c", "u", "u2", "emu", "min_degree",
    "class_n", "class_lambda", "class_gamma", "class_delta", "oracle_agree",
)


# -- parsing and formatting --------------------------------------------------


def parse_triple(text: str) -> MonomialTriple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a,b,c, got {text!r}")
    try:
        return MonomialTriple(*(int(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_slopes(text: str) -> SlopeTriple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected t,u,s, got {text!r}")
    try:
        return SlopeTriple(*(Fraction(p) for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def fmt_fraction(q: Fraction) -> str:
    return str(q) if q.denominator != 1 else f"{q.numerator}"


def jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return fmt_fraction(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def datum_dict(result: ClassificationDatum | NotApplicable) -> dict[str, Any]:
    if isinstance(result, ClassificationDatum):
        return {"n": result.n, "lambda": result.lam, "gamma": result.gamma,
                "delta": result.delta, "mirrored": result.mirrored}
    return {"not_applicable": result.case, "first": result.first,
            "last": result.last, "mirrored": result.mirrored}


# -- verdicts ------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    triple: list[int]
    gens: dict[str, int] | None
    slopes: list[str] | None
    negative_curve: bool | None
    emu: bool | None
    noetherian: bool | str
    minimal_degree: dict[str, int] | None = None
    classification: dict[str, Any] | None = None
    oracle_agreement: bool | None = None
    characteristic: int = 0
    basis: str | None = None
    reason: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Verdict":
        return cls(**json.loads(text))


def cmd_decide(triple: MonomialTriple, char: int = 0, cross_check: bool = False) -> tuple[Verdict, int]:
    CoefficientField(char)  # rejects non-prime characteristics early
    base = dict(triple=list(triple.as_tuple()), characteristic=char)
    try:
        gens = herzog_generators(triple)
    except CompleteIntersectionError as exc:
        return Verdict(gens=None, slopes=None, negative_curve=None, emu=None,
                       noetherian="out-of-scope", reason=f"complete intersection: {exc}", **base), EXIT_CI
    tri = triangle_from_generators(gens)
    slopes = [fmt_fraction(q) for q in tri.slopes()]
    if not negative_curve_holds(tri):
        return Verdict(gens=gens.as_dict(), slopes=slopes, negative_curve=False, emu=None,
                       noetherian="out-of-scope",
                       reason="z^u - x^s3 y^t3 is not a negative curve (u^2 c >= ab)", **base), EXIT_HYPOTHESIS
    profile = column_counts(tri, 1)
    holds = profile.emu()
    md = None
    if not holds:
        datum = minimal_degree(tri, 1)
        md = {"d": datum.d, "f": datum.f, "fprime": datum.fprime}
    agreement = cross_validate(triple).agree if cross_check else None
    if char == 0:
        noetherian, basis = holds, "EMU criterion"
    else:
        noetherian, basis = True, "char-p theorem"
    verdict = Verdict(
        gens=gens.as_dict(), slopes=slopes, negative_curve=True, emu=holds,
        noetherian=noetherian, minimal_degree=md, classification=datum_dict(classify(triple)),
        oracle_agreement=agreement, basis=basis, **base,
    )
    return verdict, EXIT_OK


def cmd_triangle(tri: RationalTriangle, m: int = 1) -> dict[str, Any]:
    profile = column_counts(tri, m)
    out: dict[str, Any] = {
        "slopes": [fmt_fraction(q) for q in tri.slopes()],
        "u": tri.u, "u2": tri.u2, "m": m,
        "counts": list(profile.counts), "sorted": list(profile.sorted),
        "emu": profile.emu(), "negative_curve": negative_curve_holds(tri),
    }
    if not profile.emu():
        try:
            md = minimal_degree(tri, m)
            out["minimal_degree"] = {"d": md.d, "f": md.f, "fprime": md.fprime}
        except EMUHolds:
            pass
    return out


def cmd_classify(triple: MonomialTriple) -> dict[str, Any]:
    return {"triple": list(triple.as_tuple()), "classification": datum_dict(classify(triple))}


def cmd_construct(datum: ClassificationDatum, max_denominator: int = 10**6) -> dict[str, Any]:
    triple = construct_triple(datum, max_denominator=max_denominator)
    return {"datum": datum_dict(datum), "triple": list(triple.as_tuple()),
            "classification": datum_dict(classify(triple))}


def cmd_oracle(triple: MonomialTriple, m: int = 1, seed: int = 0, coefficients: bool = False) -> dict[str, Any]:
    g = curve_search(triple, m, seed=seed)
    out: dict[str, Any] = {"triple": list(triple.as_tuple()), "m": m, "found": g is not None}
    if g is not None:
        out["support_size"] = len(g.coeffs)
        out["vanishing_order"] = vanishing_order(g)
        if coefficients:
            out["coefficients"] = [[a, b, fmt_fraction(c)] for (a, b), c in sorted(g.coeffs.items())]
    return out


def cmd_reduce(triple: MonomialTriple, m: int = 1, char: int = 0) -> dict[str, Any]:
    field = CoefficientField(char) if char else CHAR0
    decision = factor_decision(triple, m, field)
    nonzero = sorted((p, c) for p, c in decision.obstructions.items() if c)
    return {
        "triple": list(triple.as_tuple()), "m": m, "characteristic": char,
        "status": decision.status, "level": decision.level,
        "witness": list(decision.witness) if decision.witness else None,
        "obstruction": jsonable(decision.obstruction),
        "nonzero_obstructions": [[a, n, jsonable(c)] for (a, n), c in nonzero],
    }


# -- scanning ------------------------------------------------------------------

_curve_cache: dict[tuple, bool] = {}
_factor_cache: dict[tuple, str] = {}


def _factor_key(tri: RationalTriangle) -> tuple:
    profile = ConeProfile(tri)
    u = tri.u
    return (tri.ubar, tuple(profile.a(i) for i in range(u)), tuple(profile.b(-i) for i in range(u)))


def scan_row(entry: CorpusEntry) -> list[str]:
    """One CSV row; the two oracles are memoised on the data they depend on."""
    tri = entry.triangle
    holds = column_counts(tri, 1).emu()
    key = tuple(tri.lattice_points(1))
    curve = _curve_cache.get(key)
    if curve is None:
        curve = _curve_cache[key] = _curve_exists(tri, 1).exists
    fkey = _factor_key(tri)
    status = _factor_cache.get(fkey)
    if status is None:
        status = _factor_cache[fkey] = factor_decision(entry.triple, 1).status
    agree = holds == (status == "factors") == curve
    row: list[Any] = [*entry.triple.as_tuple(), tri.u, tri.u2, holds]
    if holds:
        row += ["", "", "", "", ""]
    else:
        row.append(minimal_degree(tri, 1).d)
        datum = classify(entry.triple)
        if isinstance(datum, ClassificationDatum):
            row += [datum.n, datum.lam, datum.gamma, datum.delta]
        else:
            row += ["", "", "", ""]
    row.append(agree)
    return [str(x).lower() if isinstance(x, bool) else str(x) for x in row]


def _scan_chunk(triples: list[tuple[int, int, int]]) -> list[list[str]]:
    from .corpus import in_scope

    return [scan_row(in_scope(t)) for t in triples]


def _chunks(entries: Iterable[CorpusEntry], size: int) -> Iterable[list[tuple[int, int, int]]]:
    chunk: list[tuple[int, int, int]] = []
    for e in entries:
        chunk.append(e.triple.as_tuple())
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def scan_rows(max_value: int, jobs: int = 1) -> Iterable[list[str]]:
    if max_value < 3:
        raise ValueError("max must be at least 3")
    if jobs <= 1:
        for entry in corpus(max_value):
            yield scan_row(entry)
        return
    with Pool(jobs) as pool:
        # imap keeps submission order, so the output does not depend on jobs
        for rows in pool.imap(_scan_chunk, _chunks(corpus(max_value), 64)):
            yield from rows


def cmd_scan(max_value: int, jobs: int = 1, out: io.TextIOBase | None = None) -> int:
    out = out or sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    count = 0
    for row in scan_rows(max_value, jobs):
        writer.writerow(row)
        count += 1
    return count


# -- argument handling -----------------------------------------------------------


def _target(args: argparse.Namespace) -> MonomialTriple:
    if args.triple is not None:
        return args.triple
    if args.slopes is not None:
        return phi(args.slopes)
    raise HypothesisError("give --triple a,b,c or --slopes t,u,s")


def _emit(args: argparse.Namespace, payload: dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(jsonable(payload), sort_keys=True))
        return
    for key, value in payload.items():
        print(f"{key}: {jsonable(value)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reesemu", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, slopes: bool = True) -> None:
        p.add_argument("--triple", type=parse_triple)
        if slopes:
            p.add_argument("--slopes", type=parse_slopes)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("decide", help="Noetherian verdict for one triple")
    common(p)
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--cross-check", action="store_true", help="also run both oracles")

    p = sub.add_parser("triangle", help="column counts of m*Delta")
    common(p)
    p.add_argument("--m", type=int, default=1)

    p = sub.add_parser("classify", help="(n, lambda, gamma, delta) of an EMU-failing triple")
    common(p)

    p = sub.add_parser("construct", help="a triple realizing (n, lambda, gamma, delta)")
    p.add_argument("--datum", required=True, help="n,lambda,gamma,delta")
    p.add_argument("--mirrored", action="store_true")
    p.add_argument("--max-denominator", type=int, default=10**6)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("oracle", help="exact curve search")
    common(p)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coefficients", action="store_true")

    p = sub.add_parser("reduce", help="truncated-ring factorization of xi^m")
    common(p)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--char", type=int, default=0)

    p = sub.add_parser("scan", help="CSV over all in-scope triples up to --max")
    p.add_argument("--max", type=int, required=True, dest="max_value")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    return parser


def run(args: argparse.Namespace) -> int:
    if args.command == "decide":
        verdict, code = cmd_decide(_target(args), args.char, args.cross_check)
        if args.json:
            print(verdict.to_json())
        else:
            for key, value in asdict(verdict).items():
                if value is not None:
                    print(f"{key}: {value}")
        return code
    if args.command == "triangle":
        if args.triple is not None:
            tri = triangle_from_generators(herzog_generators(args.triple))
        elif args.slopes is not None:
            tri = triangle_from_slopes(*args.slopes.as_tuple())
        else:
            raise HypothesisError("give --triple a,b,c or --slopes t,u,s")
        _emit(args, cmd_triangle(tri, args.m))
        return EXIT_OK
    if args.command == "classify":
        _emit(args, cmd_classify(_target(args)))
        return EXIT_OK
    if args.command == "construct":
        n, lam, gamma, delta = (int(x) for x in args.datum.split(","))
        datum = ClassificationDatum(n, lam, gamma, delta, args.mirrored)
        _emit(args, cmd_construct(datum, args.max_denominator))
        return EXIT_OK
    if args.command == "oracle":
        _emit(args, cmd_oracle(_target(args), args.m, args.seed, args.coefficients))
        return EXIT_OK
    if args.command == "reduce":
        _emit(args, cmd_reduce(_target(args), args.m, args.char))
        return EXIT_OK
    if args.command == "scan":
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                cmd_scan(args.max_value, args.jobs, fh)
        else:
            cmd_scan(args.max_value, args.jobs)
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except CompleteIntersectionError as exc:
        print(f"complete intersection: {exc}", file=sys.stderr)
        return EXIT_CI
    except (HypothesisError, ValueError) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except ConstructionExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
