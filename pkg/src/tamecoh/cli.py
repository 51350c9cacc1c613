"""Command line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import cech, families, grading
from .families import FamilySpec
from .grading import GradingSpec, InputError

OUTPUT_DIR_ENV = "TAMECOH_OUTPUT_DIR"
EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class Mismatch(Exception):
    pass


# -- parsing helpers ---------------------------------------------------------

def parse_range(text) -> list[int]:
    """'1..500', '7', '1,4,9' or '1..10,20..30'."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(x) for x in text]
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise InputError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise InputError(f"empty range {text!r}")
    return out


def parse_vector(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    return tuple(int(x) for x in str(text).split(","))


def load_json(path_or_text):
    text = str(path_or_text)
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    with open(text) as fh:
        return json.load(fh)


def _fraction_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else str(c)


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def emit(args, text: str):
    target = getattr(args, "output", None)
    if not target:
        sys.stdout.write(text)
        return
    path = Path(target)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def family_from_args(args) -> FamilySpec:
    if not args.family:
        raise InputError("--family is required")
    return FamilySpec(
        args.family.upper(),
        p=args.p,
        r2=args.r2 if args.r2 is not None else 1,
        a=args.a if args.a is not None else 1,
        l=args.ch_l if args.ch_l is not None else 1,
        allow_any_prime=bool(args.allow_any_prime),
    )


def series_text(s: families.DimensionSeries, fmt: str) -> str:
    if fmt == "json":
        return dump_json(s.to_json())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "dim"])
    w.writerows(s.entries)
    return buf.getvalue()


# -- family commands ---------------------------------------------------------

def cmd_family_table(args):
    fam = family_from_args(args)
    i = args.i if args.i is not None else fam.index
    s = families.series(fam, i, parse_range(args.j or "1..20"), args.method, args.jobs)
    emit(args, series_text(s, args.out))
    return EXIT_OK


def cmd_family_verify(args):
    fam = family_from_args(args)
    i = args.i if args.i is not None else fam.index
    lines, bad = [], 0
    if args.against:
        ref = families.DimensionSeries.from_json(load_json(args.against))
        if ref.i != i:
            raise InputError(f"file holds H^{ref.i}, not H^{i}")
        for j, d in ref.entries:
            got = families.family_dim(fam, i, j)
            if got != d:
                bad += 1
                lines.append(f"j={j}: file {d}, computed {got}")
        checked = len(ref.entries)
    else:
        rep = families.verify_theorem(fam, i, parse_range(args.j or "1..100"))
        for j, w, c in rep.mismatches:
            lines.append(f"j={j}: window {w}, closed form {c}")
        bad, checked = len(rep.mismatches), rep.checked
    lines.append(f"{fam.label()} H^{i}: {checked} degrees checked, {bad} mismatches")
    emit(args, "\n".join(lines) + "\n")
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_family_tameness(args):
    fam = family_from_args(args)
    rep = families.tameness_classify(fam, args.i)
    emit(args, dump_json({"family": fam.label(), "verdict": rep.verdict,
                          "support": rep.support,
                          "witnesses": [{"j": j, "dim": d} for j, d in rep.witnesses]}))
    return EXIT_OK


def cmd_family_asymptote(args):
    rep = families.asymptotic_bracket(args.j, args.precision)
    lo, hi = rep.deviation
    rel = {1: ">", 0: "=", -1: "<"}[rep.sign]
    text = (
        f"j = {rep.j}\n"
        f"sigma(j) = {rep.sigma}\n"
        f"sigma(j)/j^3 = {rep.ratio.numerator}/{rep.ratio.denominator}\n"
        f"sigma(j)/j^3 {rel} 54*sqrt(2)  (exact: ({rep.ratio})^2 vs 5832)\n"
        f"deviation in [{lo}, {hi}]\n"
        f"deviation ~ {float(lo + hi) / 2:.{args.precision}e}  (bracket width 1e-{args.precision})\n"
    )
    emit(args, text)
    return EXIT_OK


def cmd_rees(args):
    fam = family_from_args(args)
    l = args.l if args.l in (None, "auto") else int(args.l)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        tab = families.rees_table(fam, l or "auto", parse_range(args.i or "0..49"),
                                  parse_range(args.j or "1..50"))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    out = {
        "family": tab.family, "l": tab.l, "skipped_cells": tab.skipped, "ok": tab.ok,
        "cells": [{"i": i, "j": j, "T": t, "R": r} for i, j, t, r in tab.cells],
        "local_cohomology": [{"j": j, "B_side": b, "Q_side": q} for j, b, q in tab.series],
    }
    emit(args, dump_json(out))
    return EXIT_OK if tab.ok else EXIT_MISMATCH


def cmd_duality(args):
    fam = family_from_args(args)
    i = args.i if args.i is not None else 2 if fam.tag != "A2" else 3
    rep = families.duality_series_check(fam, i, parse_range(args.n or "1..50"))
    out = {"family": rep.family, "i": i, "n0": rep.n0, "ok": rep.ok,
           "rows": [{"n": n, "lhs": a, "rhs": b, "equal": e} for n, a, b, e in rep.rows]}
    emit(args, dump_json(out))
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def cmd_witness(args):
    fam = family_from_args(args)
    h1 = families.gcm_witness(fam)
    emit(args, dump_json({"family": fam.label(), "h1_O_X": h1}))
    return EXIT_OK


# -- grading and cech commands ----------------------------------------------

def _spec(args) -> GradingSpec:
    if not args.spec:
        raise InputError("--spec is required")
    return GradingSpec.from_json(load_json(args.spec))


def _complex(args) -> cech.FreeComplex:
    if not args.complex:
        raise InputError("--complex is required")
    return cech.FreeComplex.from_json(load_json(args.complex))


def _gammas(args, k: int):
    if args.gamma is not None:
        g = parse_vector(args.gamma)
        if len(g) != k:
            raise InputError(f"gamma must have {k} coordinates")
        return [g]
    return list(cech.box(k, args.box if args.box is not None else 2))


def cmd_grading_sharp(args):
    spec = _spec(args)
    sharp = grading.is_sharp(spec)
    emit(args, dump_json({"sharp": sharp, "certificate": list(spec.certificate or []) or None,
                          "sigma": list(spec.sigma)}))
    return EXIT_OK


def cmd_grading_fiber(args):
    spec = _spec(args)
    sols = grading.fiber_enumerate(spec, parse_vector(args.gamma))
    emit(args, dump_json([{"xexp": list(a), "yexp": list(b)} for a, b in sols]))
    return EXIT_OK


def cmd_cech_basis(args):
    spec = _spec(args)
    shift = parse_vector(args.shift) if args.shift else spec.zero
    fn = cech.hp_basis if args.side == "P" else cech.hq_basis
    out = []
    for g in _gammas(args, spec.k):
        piece = fn(spec, shift, g)
        if args.side == "P":  # x^(-s-1) y^p
            mons = [([-c - 1 for c in s], list(q)) for _, s, q in piece.basis]
        else:  # x^t y^(-q-1)
            mons = [(list(t), [-c - 1 for c in q]) for _, t, q in piece.basis]
        out.append({"gamma": list(g), "dimension": piece.dimension,
                    "basis": [{"xexp": x, "yexp": y} for x, y in mons]})
    emit(args, dump_json(out))
    return EXIT_OK


def cmd_cech_matrix(args):
    cx = _complex(args)
    if not 1 <= args.map <= len(cx.maps):
        raise InputError(f"--map must be in 1..{len(cx.maps)}")
    d = cx.maps[args.map - 1]
    fn = cech.hp_matrix if args.side == "P" else cech.hq_matrix
    out = []
    for g in _gammas(args, cx.spec.k):
        mat = fn(d, g)
        out.append({"gamma": list(g), "shape": list(mat.shape),
                    "rows": [[_fraction_str(c) for c in r] for r in mat.rows]})
    emit(args, dump_json(out))
    return EXIT_OK


def cmd_cech_homology(args):
    cx = _complex(args)
    m = cx.spec.m
    indices = [args.i] if args.i is not None else list(range(0, m + 1))
    out = []
    for g in _gammas(args, cx.spec.k):
        hom = cech.chain_homology(cx, g, args.char)
        dims = {str(i): (hom[m - i] if 0 <= m - i <= cx.length else 0) for i in indices}
        out.append({"gamma": list(g), "H_P": dims})
    emit(args, dump_json(out))
    return EXIT_OK


def cmd_cech_verify_duality(args):
    cx = _complex(args)
    gammas = _gammas(args, cx.spec.k)
    bad = [g for g in gammas if not cech.verify_complex_duality(cx, g, args.char)]
    pairing_bad = [(i, g) for i, d in enumerate(cx.maps, start=1) for g in gammas
                   if not cech.pairing_check(d, g, args.char)]
    lines = [f"duality fails at gamma={list(g)}" for g in bad]
    lines += [f"pairing fails for d_{i} at gamma={list(g)}" for i, g in pairing_bad]
    lines.append(f"{len(gammas)} degrees checked, {len(bad) + len(pairing_bad)} failures")
    emit(args, "\n".join(lines) + "\n")
    return EXIT_MISMATCH if bad or pairing_bad else EXIT_OK


def cmd_cech_taylor(args):
    spec = _spec(args)
    gens = load_json(args.gens)
    cx = cech.taylor_complex(spec, [(g[0], g[1]) for g in gens])
    emit(args, dump_json(cx.to_json()))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _family_flags(p):
    p.add_argument("--family", help="A0, A1, A2 or A3")
    p.add_argument("--p", type=int, help="characteristic for A1")
    p.add_argument("--r2", type=int, help="A0 constant r2 (odd)")
    p.add_argument("--a", type=int, help="A0 constant a")
    p.add_argument("--ch-l", type=int, dest="ch_l", help="A0 constant l")
    p.add_argument("--allow-any-prime", action="store_true", default=None)


def _common(p):
    p.add_argument("--output", help=f"output file (relative paths go under ${OUTPUT_DIR_ENV})")
    p.add_argument("--config", help="JSON file with default flag values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tamecoh", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fam = sub.add_parser("family", help="local cohomology series of the example families")
    fsub = fam.add_subparsers(dest="action", required=True)
    for name, fn in [("table", cmd_family_table), ("verify", cmd_family_verify),
                     ("tameness", cmd_family_tameness)]:
        p = fsub.add_parser(name)
        _family_flags(p)
        _common(p)
        p.add_argument("--i", type=int)
        p.set_defaults(func=fn)
        if name != "tameness":
            p.add_argument("--j", help="degrees, e.g. 1..500")
            p.add_argument("--jobs", type=int, default=1)
        if name == "table":
            p.add_argument("--out", choices=("csv", "json"), default="csv")
            p.add_argument("--method", choices=("window", "closed-form"), default="window")
        if name == "verify":
            p.add_argument("--against", help="JSON series written by 'family table --out json'")
    p = fsub.add_parser("asymptote")
    _common(p)
    p.add_argument("--j", type=int, default=10000)
    p.add_argument("--precision", type=int, default=12)
    p.set_defaults(func=cmd_family_asymptote)

    p = sub.add_parser("rees", help="Rees regrading table")
    _family_flags(p)
    _common(p)
    p.add_argument("--l", default="auto", help="shift l, or 'auto'")
    p.add_argument("--i", help="T first degrees")
    p.add_argument("--j", help="T second degrees")
    p.set_defaults(func=cmd_rees)

    p = sub.add_parser("duality", help="dimension-level duality series check")
    _family_flags(p)
    _common(p)
    p.add_argument("--i", type=int)
    p.add_argument("--n", help="degrees, e.g. 1..200")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("witness", help="h^1(X, O_X) for the family")
    _family_flags(p)
    _common(p)
    p.set_defaults(func=cmd_witness)

    gr = sub.add_parser("grading", help="gradings of K[x, y]")
    gsub = gr.add_subparsers(dest="action", required=True)
    p = gsub.add_parser("sharp")
    p.add_argument("--spec")
    _common(p)
    p.set_defaults(func=cmd_grading_sharp)
    p = gsub.add_parser("fiber")
    p.add_argument("--spec")
    p.add_argument("--gamma", required=True, help="use --gamma=-1,2 for negative entries")
    _common(p)
    p.set_defaults(func=cmd_grading_fiber)

    ce = sub.add_parser("cech", help="Čech local cohomology of free complexes")
    csub = ce.add_subparsers(dest="action", required=True)
    for name, fn in [("basis", cmd_cech_basis), ("matrix", cmd_cech_matrix),
                     ("homology", cmd_cech_homology), ("verify-duality", cmd_cech_verify_duality),
                     ("taylor", cmd_cech_taylor)]:
        p = csub.add_parser(name)
        _common(p)
        p.add_argument("--char", type=int, default=0, help="0 for Q, or a prime q")
        p.set_defaults(func=fn)
        if name in ("basis", "taylor"):
            p.add_argument("--spec")
        else:
            p.add_argument("--complex")
        if name != "taylor":
            p.add_argument("--gamma", help="one degree, e.g. --gamma=-2,0")
            p.add_argument("--box", type=int, help="scan all degrees with |coords| <= BOX")
        if name in ("basis", "matrix"):
            p.add_argument("--side", choices=("P", "Q"), default="P")
        if name == "basis":
            p.add_argument("--shift")
        if name == "matrix":
            p.add_argument("--map", type=int, default=1, help="which differential d_i")
        if name == "homology":
            p.add_argument("--i", type=int)
        if name == "taylor":
            p.add_argument("--gens", required=True,
                           help="JSON list of [xexp, yexp] monomials, or a file")
    return parser


def _apply_config(parser, args, argv):
    """Fill flags the user did not pass from the --config JSON file."""
    if not getattr(args, "config", None):
        return args
    cfg = load_json(args.config)
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    given = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        flag = "--" + key.replace("_", "-")
        if not hasattr(args, dest):
            raise InputError(f"unknown config key {key!r}")
        if flag in given:
            continue
        if isinstance(value, list) and dest in ("j", "n"):
            value = ",".join(str(v) for v in value)
        setattr(args, dest, value)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(parser, args, argv)
        return args.func(args)
    except (InputError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
