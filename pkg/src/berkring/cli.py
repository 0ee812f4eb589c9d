"""Command-line front end.

Exit codes: 0 success, 1 a verification failed (witness printed),
2 input error.  Output is JSON by default, CSV where it makes sense
(--format csv).  All sampling is seeded (--seed, default 0) so runs are
reproducible.  --jobs is accepted for compatibility with batch drivers;
work is executed sequentially regardless since the checks are exact and
fast at desk scale.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Sequence

from .affinoid import (
    AffinoidPresentation,
    RationalDomainSpec,
    derive_substitutions,
    domain_membership,
)
from .coverings import (
    Covering,
    check_is_covering,
    check_refinement,
    laurent_covering,
    refine_rational_to_laurent,
    refine_units_to_laurent,
    standard_covering,
    surviving_generator_check,
)
from .polynomials import ParseError, Poly, parse_poly
from .rings import BaseRing
from .seminorms import poly_l1, poly_linf, poly_trivial_gauss
from .spectrum import (
    ArchCoord,
    BranchProfile,
    DensitySpec,
    FiberPoint,
    GaussCoord,
    SpectrumPoint,
    branch_profile,
    sample_points,
    spectral_norm_report,
)
from .tate import cech_complex, check_exactness, drop_member

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _parse_base(label: str) -> BaseRing:
    try:
        return BaseRing.from_label(label)
    except ValueError as e:
        raise InputError(str(e))


def _parse_rho(entries: Sequence[str]) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for entry in entries or ():
        if "=" not in entry:
            raise InputError(f"--rho wants name=value, got {entry!r}")
        name, _, val = entry.partition("=")
        try:
            out[name.strip()] = Fraction(val.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad radius {val!r} for {name!r}")
    return out


def _parse_pair(text: str, base: BaseRing, variables: tuple[str, ...] | None):
    """'f : rho' with rho defaulting to 1."""
    f_text, sep, rho_text = text.partition(":")
    try:
        f = parse_poly(f_text.strip(), base, variables)
    except ParseError as e:
        raise InputError(f"bad pair polynomial {f_text.strip()!r}: {e}")
    rho = Fraction(1)
    if sep:
        try:
            rho = Fraction(rho_text.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad pair radius {rho_text.strip()!r}")
    return f, rho


_ALGEBRA_RE = re.compile(r"\s*(Q|Z)\s*\[\s*([A-Za-z_0-9\s,]*)\]\s*(?:/\s*\((.*)\)\s*)?$")


def parse_algebra(
    text: str,
    radii: dict[str, Fraction] | None = None,
    base: BaseRing | None = None,
    dagger: bool = False,
) -> AffinoidPresentation:
    """'Q[T]' or 'Q[T,S]/(S^2-T)'; radii default to 1."""
    m = _ALGEBRA_RE.match(text)
    if not m:
        raise InputError(f"cannot read algebra {text!r}; expected like Q[T]/(S^2-T)")
    letter, var_text, rel_text = m.groups()
    if base is None:
        base = BaseRing.Q_TRIV if letter == "Q" else BaseRing.Z_TRIV
    names = tuple(v.strip() for v in var_text.split(",") if v.strip())
    if not names:
        raise InputError("algebra needs at least one variable")
    radii = radii or {}
    pres = AffinoidPresentation.polydisc(
        base, [(n, radii.get(n, Fraction(1))) for n in names], dagger
    )
    if rel_text:
        relations = []
        for part in rel_text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                relations.append(parse_poly(part, base, names))
            except ParseError as e:
                raise InputError(f"bad relation {part!r}: {e}")
        pres = derive_substitutions(replace(pres, relations=tuple(relations)))
    return pres


_GAUSS_RE = re.compile(r"gauss\(\s*([^,]+)\s*,\s*([^)]+)\s*\)$")
_ARCH_RE = re.compile(r"arch\(\s*([^,]+)\s*,\s*([^)]+)\s*\)$")


def _parse_coord(text: str, pt: SpectrumPoint):
    text = text.strip()
    m = _GAUSS_RE.match(text)
    if m:
        return GaussCoord(Fraction(m.group(1)), Fraction(m.group(2)))
    m = _ARCH_RE.match(text)
    if m:
        return ArchCoord(Fraction(m.group(1)), Fraction(m.group(2)))
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot read coordinate {text!r}")
    if pt.kind == "arch":
        return ArchCoord(value, Fraction(0))
    return GaussCoord(value, Fraction(0))


def _parse_point(point_text: str, coord_entries: Sequence[str], base: BaseRing) -> FiberPoint:
    try:
        pt = SpectrumPoint.parse(point_text)
    except ValueError as e:
        raise InputError(str(e))
    coords = {}
    for entry in coord_entries or ():
        if "=" not in entry:
            raise InputError(f"--coord wants name=value, got {entry!r}")
        name, _, val = entry.partition("=")
        coords[name.strip()] = _parse_coord(val, pt)
    try:
        return FiberPoint.make(pt, coords)
    except ValueError as e:
        raise InputError(str(e))


def _density(args) -> DensitySpec:
    kwargs = {"seed": args.seed}
    for flag, field in (
        ("eps_grid", "eps_grid"),
        ("prime_cutoff", "prime_cutoff"),
        ("torus_grid", "torus_grid"),
        ("radius_grid", "radius_grid"),
        ("extra_random", "extra_random"),
    ):
        if getattr(args, flag, None) is not None:
            kwargs[field] = getattr(args, flag)
    return DensitySpec(**kwargs)


def _emit(args, payload: dict, csv_lines: list[str] | None = None) -> None:
    if args.format == "csv" and csv_lines is not None:
        sys.stdout.write("\n".join(csv_lines) + ("\n" if csv_lines else ""))
    else:
        json.dump(payload, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")


def _fraction_str(x) -> str:
    return str(x)


# -- verb implementations ----------------------------------------------------


def _cmd_norm(args) -> int:
    base = _parse_base(args.base)
    radii = _parse_rho(args.rho)
    try:
        f = parse_poly(args.expr, base)
    except ParseError as e:
        raise InputError(str(e))
    for name in f.used_variables():
        if name not in radii:
            raise InputError(f"missing --rho {name}=...")
    if args.kind == "l1":
        value = poly_l1(f, radii)
    elif args.kind == "linf":
        value = poly_linf(f, radii)
    else:
        value = poly_trivial_gauss(f, radii)
    _emit(
        args,
        {"norm": args.kind, "expr": str(f), "value": _fraction_str(value),
         "value_float": float(value)},
        ["norm,value", f"{args.kind},{value}"],
    )
    return EXIT_OK


def _cmd_spectral(args) -> int:
    base = _parse_base(args.base)
    radii = _parse_rho(args.rho)
    try:
        f = parse_poly(args.expr, base)
    except ParseError as e:
        raise InputError(str(e))
    for name in f.used_variables():
        if name not in radii:
            raise InputError(f"missing --rho {name}=...")
    report = spectral_norm_report(f, radii)
    payload = {
        "expr": str(f),
        "value": report.value,
        "nonarch_value": report.nonarch_value,
        "arch_value": report.arch_value,
        "tolerance": report.tolerance,
        "witness": report.witness.label() if report.witness else None,
    }
    _emit(args, payload, ["quantity,value", f"spectral,{report.value!r}"])
    return EXIT_OK


def _cmd_spectrum_sample(args) -> int:
    base = _parse_base(args.base)
    radii = _parse_rho(args.rho)
    points = sample_points(base, radii, _density(args))
    labels = [x.label() for x in points]
    _emit(
        args,
        {"base": base.label, "count": len(labels), "points": labels},
        ["point"] + labels,
    )
    return EXIT_OK


def _cmd_domain_member(args) -> int:
    with open(args.spec, encoding="utf-8") as fh:
        spec = RationalDomainSpec.from_json(fh.read())
    x = _parse_point(args.point, args.coord, spec.parent.base)
    inside = domain_membership(x, spec)
    _emit(args, {"point": x.label(), "member": inside},
          ["point,member", f"{x.label()},{inside}"])
    return EXIT_OK if inside or not args.expect_member else EXIT_VERIFICATION


def _load_algebra(args) -> AffinoidPresentation:
    radii = _parse_rho(getattr(args, "rho", None))
    if getattr(args, "algebra_file", None):
        with open(args.algebra_file, encoding="utf-8") as fh:
            return AffinoidPresentation.from_json(fh.read())
    base = _parse_base(args.base) if getattr(args, "base", None) else None
    if getattr(args, "algebra", None):
        return parse_algebra(args.algebra, radii, base)
    if base is None:
        raise InputError("need --algebra, --algebra-file, or --base with --rho")
    if not radii:
        raise InputError("need --rho to define the polydisc variables")
    return AffinoidPresentation.polydisc(base, list(radii.items()))


def _cmd_cover_standard(args) -> int:
    parent = _load_algebra(args)
    pairs = [_parse_pair(p, parent.base, parent.variable_names) for p in args.pair]
    cert = None
    if args.certificate:
        cert = [parse_poly(c, parent.base, parent.variable_names) for c in args.certificate]
    cov = standard_covering(parent, pairs, cert)
    report = check_is_covering(cov, density=_density(args))
    payload = {
        "covering": cov.to_json_dict(),
        "is_covering": report.to_json_dict(),
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(cov.to_json())
    _emit(args, payload)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def _cmd_cover_laurent(args) -> int:
    parent = _load_algebra(args)
    pairs = [_parse_pair(p, parent.base, parent.variable_names) for p in args.pair]
    cov = laurent_covering(parent, pairs)
    report = check_is_covering(cov, density=_density(args))
    payload = {"covering": cov.to_json_dict(), "is_covering": report.to_json_dict()}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(cov.to_json())
    _emit(args, payload)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def _cmd_cover_refine(args) -> int:
    parent = _load_algebra(args)
    pairs = [_parse_pair(p, parent.base, parent.variable_names) for p in args.pair]
    density = _density(args)
    if args.mode == "rational":
        cov = standard_covering(parent, pairs)
        result = refine_rational_to_laurent(cov, density=density, max_retries=args.retries)
        check = surviving_generator_check(result, density=density)
        rows = ["member,survivors,points"]
        for label, surv, n in result.rows():
            cell = f'"{surv}"' if "," in surv else surv
            rows.append(f"{label},{cell},{n}")
        payload = result.to_json_dict()
        payload["surviving_check"] = check.to_json_dict()
        _emit(args, payload, rows)
        return EXIT_OK if result.ok and check.ok else EXIT_VERIFICATION
    # units mode
    inverses: list[Poly | str] = []
    for w in args.inverse or ():
        if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", w.strip()) and w.strip() in parent.variable_names:
            inverses.append(w.strip())
        else:
            inverses.append(parse_poly(w, parent.base, parent.variable_names))
    cov = standard_covering(parent, pairs)
    refined = refine_units_to_laurent(cov, inverses)
    check = check_refinement(refined, cov, density=density)
    payload = {
        "covering": refined.to_json_dict(),
        "refinement_check": check.to_json_dict(),
    }
    _emit(args, payload)
    return EXIT_OK if check.ok else EXIT_VERIFICATION


def _cmd_cover_check(args) -> int:
    density = _density(args)
    if args.fine and args.coarse:
        with open(args.fine, encoding="utf-8") as fh:
            fine = Covering.from_json(fh.read())
        with open(args.coarse, encoding="utf-8") as fh:
            coarse = Covering.from_json(fh.read())
        report = check_refinement(fine, coarse, density=density)
        _emit(args, report.to_json_dict())
        return EXIT_OK if report.ok else EXIT_VERIFICATION
    if not args.covering:
        raise InputError("need --covering, or --fine with --coarse")
    with open(args.covering, encoding="utf-8") as fh:
        cov = Covering.from_json(fh.read())
    report = check_is_covering(cov, density=density)
    _emit(args, report.to_json_dict())
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def _cmd_tate_check(args) -> int:
    parent = _load_algebra(args)
    if parent.base is not BaseRing.Q_TRIV:
        raise InputError("tate-check runs over base Q_triv")
    if args.laurent:
        pairs = [_parse_pair(p, parent.base, parent.variable_names) for p in args.laurent]
        cov = laurent_covering(parent, pairs)
    elif args.standard:
        pairs = [_parse_pair(p, parent.base, parent.variable_names) for p in args.standard]
        cov = standard_covering(parent, pairs)
    else:
        raise InputError("need --laurent or --standard pairs")
    cx = cech_complex(parent, cov)
    if args.drop_member is not None:
        cx = drop_member(cx, args.drop_member)
    report = check_exactness(cx, args.degree)
    _emit(args, report.to_json_dict())
    return EXIT_OK if report.exact else EXIT_VERIFICATION


def _cmd_plot(args) -> int:
    base = _parse_base(args.base)
    radii = _parse_rho(args.rho)
    try:
        f = parse_poly(args.expr, base)
    except ParseError as e:
        raise InputError(str(e))
    for name in f.used_variables():
        if name not in radii:
            raise InputError(f"missing --rho {name}=...")
    try:
        profile = branch_profile(f, radii, args.branch, args.grid)
    except ValueError as e:
        raise InputError(str(e))
    csv_text = profile.to_csv()
    if args.svg:
        _write_svg(profile, args.svg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        _emit(args, {"branch": args.branch, "rows": len(profile.rows), "out": args.out})
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def _write_svg(profile: BranchProfile, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    def as_float(text: str, fallback: int) -> float:
        try:
            return float(Fraction(text))
        except (ValueError, ZeroDivisionError):
            return float(fallback)

    xs = [as_float(p, i) for i, (p, _) in enumerate(profile.rows)]
    ys = [v for _, v in profile.rows]
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.plot(xs, ys, marker="o", markersize=3)
    ax.set_xlabel("param")
    ax.set_ylabel("value")
    ax.set_title(profile.branch)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# -- argument wiring ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)


def _add_density(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps-grid", dest="eps_grid", type=int)
    p.add_argument("--prime-cutoff", dest="prime_cutoff", type=int)
    p.add_argument("--torus-grid", dest="torus_grid", type=int)
    p.add_argument("--radius-grid", dest="radius_grid", type=int)
    p.add_argument("--extra-random", dest="extra_random", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berkring",
        description="Seminorms, Berkovich-style spectra, rational domains,"
        " Laurent refinement and Tate exactness checks at desk scale.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("norm", help="l1 / linf / trivial-Gauss norm of a polynomial")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--l1", dest="kind", action="store_const", const="l1")
    group.add_argument("--linf", dest="kind", action="store_const", const="linf")
    group.add_argument("--trivial", dest="kind", action="store_const", const="trivial")
    p.set_defaults(kind="l1")
    p.add_argument("--base", default="Z_arch")
    p.add_argument("--rho", action="append", default=[])
    p.add_argument("expr")
    _add_common(p)
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("spectral", help="spectral norm over the full spectrum")
    p.add_argument("--base", default="Z_arch")
    p.add_argument("--rho", action="append", default=[])
    p.add_argument("expr")
    _add_common(p)
    p.set_defaults(func=_cmd_spectral)

    p = sub.add_parser("spectrum-sample", help="deterministic sample of fiber points")
    p.add_argument("--base", required=True)
    p.add_argument("--rho", action="append", default=[])
    _add_density(p)
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum_sample)

    p = sub.add_parser("domain-member", help="exact rational-domain membership")
    p.add_argument("--spec", required=True, help="RationalDomainSpec JSON file")
    p.add_argument("--point", required=True, help="e.g. Padic(2,1) or Arch(1)")
    p.add_argument("--coord", action="append", default=[],
                   help="T=1/2, T=gauss(0,1), or T=arch(re,im)")
    p.add_argument("--expect-member", action="store_true",
                   help="exit 1 when the point is outside")
    _add_common(p)
    p.set_defaults(func=_cmd_domain_member)

    for verb, fn in (("cover-standard", _cmd_cover_standard),
                     ("cover-laurent", _cmd_cover_laurent)):
        p = sub.add_parser(verb, help=f"build a {verb.split('-')[1]} covering")
        p.add_argument("--base")
        p.add_argument("--algebra")
        p.add_argument("--algebra-file")
        p.add_argument("--rho", action="append", default=[])
        p.add_argument("--pair", action="append", required=True, help="'f : rho'")
        if verb == "cover-standard":
            p.add_argument("--certificate", action="append", default=[])
        p.add_argument("--out", help="write the covering JSON here")
        _add_density(p)
        _add_common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("cover-refine", help="run a refinement lemma construction")
    p.add_argument("--mode", choices=("rational", "units"), default="rational")
    p.add_argument("--base")
    p.add_argument("--algebra")
    p.add_argument("--algebra-file")
    p.add_argument("--rho", action="append", default=[])
    p.add_argument("--pair", action="append", required=True)
    p.add_argument("--inverse", action="append", default=[],
                   help="units mode: inverse polynomial or localization variable per pair")
    p.add_argument("--retries", type=int, default=8)
    _add_density(p)
    _add_common(p)
    p.set_defaults(func=_cmd_cover_refine)

    p = sub.add_parser("cover-check", help="verify covering or refinement from JSON")
    p.add_argument("--covering")
    p.add_argument("--fine")
    p.add_argument("--coarse")
    _add_density(p)
    _add_common(p)
    p.set_defaults(func=_cmd_cover_check)

    p = sub.add_parser("tate-check", help="Cech exactness over Q_triv")
    p.add_argument("--base", default="Q_triv")
    p.add_argument("--algebra")
    p.add_argument("--algebra-file")
    p.add_argument("--rho", action="append", default=[])
    p.add_argument("--laurent", action="append", default=[], help="Laurent pair 'f : rho'")
    p.add_argument("--standard", action="append", default=[], help="standard pair 'f : rho'")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--drop-member", dest="drop_member", type=int,
                   help="deliberately break the complex for demonstration")
    _add_common(p)
    p.set_defaults(func=_cmd_tate_check)

    p = sub.add_parser("plot", help="branch profile as CSV (or SVG)")
    p.add_argument("--base", default="Z_arch")
    p.add_argument("--rho", action="append", default=[])
    p.add_argument("--branch", required=True,
                   help="trivial | residue:p | padic:p | arch:eps=E")
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--svg", help="also render an SVG to this path")
    p.add_argument("expr")
    _add_common(p)
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage already; normalize other codes
        return EXIT_INPUT if e.code not in (0,) else 0
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
