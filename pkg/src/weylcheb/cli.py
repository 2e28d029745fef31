"""Command-line entry point: reproducible verification runs with JSON output.

Subcommands: roots, weyl, chebmap, verify-functional, verify-postcritical,
img-verify, automaton, act.  Every randomized check takes --seed (default 0);
exit codes reflect pass/fail.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import chebmap as cm
from . import critical as cr
from . import monodromy as mo
from . import selfsim as ss
from .errors import WeylchebError
from .rootsys import (
    affine_compose,
    affine_identity,
    build_root_system,
    reflection_element,
    translation_element,
    verify_axioms,
    weyl_group_elements,
)


def _emit(args, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_roots(args) -> int:
    rs = build_root_system(args.type)
    report = verify_axioms(rs)
    payload = {
        "type": rs.type_spec,
        "rank": rs.rank,
        "cartan": [list(r) for r in rs.cartan],
        "gram": [[str(x) for x in row] for row in rs.gram],
        "roots": [
            {
                "weight_coords": list(v.weight_coords),
                "coroot_coords": list(v.coroot_coords),
                "length_sq": v.length_sq,
            }
            for v in rs.roots
        ],
        "axioms": report.as_dict(),
        "pass": report.all_pass,
    }
    _emit(args, payload)
    return 0 if report.all_pass else 1


def cmd_weyl(args) -> int:
    from .rootsys import WEYL_CAP
    rs = build_root_system(args.type)
    elements = weyl_group_elements(rs, cap=args.cap_group or WEYL_CAP)
    payload = {
        "type": rs.type_spec,
        "order": len(elements),
        "elements": [[list(r) for r in w.weight_matrix] for w in elements],
    }
    _emit(args, payload)
    return 0


def cmd_chebmap(args) -> int:
    rs = build_root_system(args.type)
    pmap = cm.build_cheb_map(rs, args.d)
    rep = cm.verify_functional_equation(rs, args.d, pmap,
                                        samples=args.samples, tol=args.tol,
                                        seed=args.seed)
    payload = cm.poly_map_as_dict(rs, args.d, pmap)
    payload["verification"] = rep.as_dict()
    _emit(args, payload)
    return 0 if rep.passed else 1


def cmd_verify_functional(args) -> int:
    rs = build_root_system(args.type)
    pmap = cm.build_cheb_map(rs, args.d)
    rep = cm.verify_functional_equation(rs, args.d, pmap,
                                        samples=args.samples, tol=args.tol,
                                        seed=args.seed)
    _emit(args, rep.as_dict())
    return 0 if rep.passed else 1


def cmd_verify_postcritical(args) -> int:
    rs = build_root_system(args.type)
    pmap = cm.build_cheb_map(rs, args.d)
    rep = cr.post_critical_check(rs, args.d, pmap, samples=args.samples,
                                 tol=args.tol, seed=args.seed)
    inv = cr.diagram_invariance_check(
        rs, args.d, cr.sample_diagram_points(rs, args.samples, seed=args.seed))
    payload = rep.as_dict(args.tol)
    payload["diagram_invariance"] = {"pass": inv["pass"]}
    if rs.type_spec == "A2":
        residuals = cr.deltoid_check(rs, samples=args.samples, seed=args.seed)
        payload["deltoid_max_residual"] = float(max(residuals))
        payload["deltoid_pass"] = bool(max(residuals) <= args.tol)
    ok = payload["pass"] and inv["pass"] and payload.get("deltoid_pass", True)
    _emit(args, payload)
    return 0 if ok else 1


def cmd_img_verify(args) -> int:
    rs = build_root_system(args.type)
    vertex_cap = args.cap_vertices or mo.VERTEX_CAP
    group_cap = args.cap_group or mo.GROUP_ORDER_CAP
    mo.check_img_caps(rs, args.d, args.levels, vertex_cap=vertex_cap,
                      group_cap=group_cap)
    rep = mo.img_verification(rs, args.d, args.levels, seed=args.seed,
                              vertex_cap=vertex_cap, group_cap=group_cap)
    _emit(args, rep.as_dict())
    return 0 if rep.passed else 1


def _parse_generator_word(rs, word: str):
    """Words over named generators: s<j> (simple reflections), a<b> (highest
    root wall of factor b at level 1), t<j> (unit coroot translations), id;
    "t" alone abbreviates t1 in rank one.  Tokens separated by '*' or spaces."""
    gens = dict(mo.standard_affine_generators(rs))
    g = affine_identity(rs.rank)
    tokens = [t for t in word.replace("*", " ").split() if t]
    for tok in tokens:
        if tok == "id":
            continue
        if tok == "t" and rs.rank == 1:
            tok = "t1"
        if tok.startswith("t") and tok[1:].isdigit():
            j = int(tok[1:]) - 1
            if not 0 <= j < rs.rank:
                raise WeylchebError(f"no coordinate {tok!r}")
            elem = translation_element(
                tuple(1 if i == j else 0 for i in range(rs.rank)))
        elif tok in gens:
            elem = gens[tok]
        else:
            raise WeylchebError(f"unknown generator {tok!r}")
        g = affine_compose(g, elem)
    return g


def _parse_tree_word(rs, d: int, digits: str) -> ss.TreeWord:
    if d > 10:
        raise WeylchebError("flat digit words support d <= 10 only")
    if len(digits) % rs.rank != 0:
        raise WeylchebError(
            f"word length {len(digits)} is not a multiple of rank {rs.rank}")
    vals = [int(c) for c in digits]
    letters = tuple(tuple(vals[i:i + rs.rank])
                    for i in range(0, len(vals), rs.rank))
    return ss.TreeWord(letters, d, rs.rank)


def cmd_act(args) -> int:
    rs = build_root_system(args.type)
    g = _parse_generator_word(rs, args.word)
    tw = _parse_tree_word(rs, args.d, args.treeword)
    out = ss.act_on_word(ss.TreeAutomorphism(g, args.d), tw)
    print("".join(str(c) for letter in out.letters for c in letter))
    return 0


def cmd_automaton(args) -> int:
    rs = build_root_system(args.type)
    gens = [ss.TreeAutomorphism(g, args.d)
            for _, g in mo.standard_affine_generators(rs)]
    text = ss.export_automaton(gens, args.d, fmt=args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylcheb",
        description="Root systems, Chebyshev-like maps, and tree monodromy")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, d=False, levels=False, sampled=False):
        # positional and --flag spellings both work: `img-verify A2 2 2` or
        # `img-verify --type A2 --d 2 --levels 2`
        p.add_argument("type", nargs="?", default=None,
                       help="root system type spec, e.g. A2 or B3xA1")
        p.add_argument("--type", dest="type_flag", default=None,
                       help=argparse.SUPPRESS)
        if d:
            p.add_argument("d", nargs="?", type=int, default=None,
                           help="degree parameter (>= 2)")
            p.add_argument("--d", dest="d_flag", type=int, default=None,
                           help=argparse.SUPPRESS)
        if levels:
            p.add_argument("levels", nargs="?", type=int, default=None,
                           help="tree depth to verify")
            p.add_argument("--levels", dest="levels_flag", type=int,
                           default=None, help=argparse.SUPPRESS)
        if sampled:
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--cap-vertices", type=int, default=None)
        p.add_argument("--cap-group", type=int, default=None)

    p = sub.add_parser("roots", help="dump a root system and its axiom report")
    common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("weyl", help="enumerate the finite Weyl group")
    common(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("chebmap", help="synthesize and verify a polynomial map")
    common(p, d=True, sampled=True)
    p.set_defaults(func=cmd_chebmap)

    p = sub.add_parser("verify-functional",
                       help="check the defining functional equation")
    common(p, d=True, sampled=True)
    p.set_defaults(func=cmd_verify_functional)

    p = sub.add_parser("verify-postcritical",
                       help="check critical/post-critical structure")
    common(p, d=True, sampled=True)
    p.set_defaults(func=cmd_verify_postcritical)
    # postcritical tolerances default looser than the functional equation
    p.set_defaults(tol=1e-7, samples=50)

    p = sub.add_parser("img-verify",
                       help="compare numeric and algebraic monodromy")
    common(p, d=True, levels=True)
    p.set_defaults(func=cmd_img_verify)

    p = sub.add_parser("automaton", help="export the generators' automaton")
    common(p, d=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_automaton)

    p = sub.add_parser("act", help="act on a tree word by a generator word")
    p.add_argument("type")
    p.add_argument("d", type=int)
    p.add_argument("word", help="generator word, e.g. 's1*a0' or 't'")
    p.add_argument("treeword", help="flat digit string, rank digits per letter")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_act)

    return parser


def _resolve_positionals(parser, args):
    for name in ("type", "d", "levels"):
        flag = getattr(args, f"{name}_flag", None)
        if getattr(args, name, None) is None and flag is not None:
            setattr(args, name, flag)
        if hasattr(args, name) and getattr(args, name) is None:
            parser.error(f"missing required argument: {name}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "act":
        _resolve_positionals(parser, args)
    try:
        return args.func(args)
    except WeylchebError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
