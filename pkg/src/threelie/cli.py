"""Command-line front end.

Exit status: 0 on success, 2 when an input fails an algebraic check (the JSON
report carries a witness), 1 on unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import sys

from . import io
from .algebra import (check_fundamental_identity, check_morphism, quotient_split,
                      subspace_closure_check)
from .cohomology import (MAX_DEGREE, MorphismComplex, RepresentationComplex,
                         cohomology_table, graph_correspondence, rigidity, stability,
                         subalgebra_complex, subalgebra_stability)
from .deformation import Jet1Map, Jet1Subspace, jet_subalgebra_check, tangent_cocycle
from .errors import (DegreeOverflowGuard, FundamentalIdentityViolation, NotAMorphism,
                     NotASubalgebra, NotFirstOrderDeformation, SchemaError,
                     ThreeLieError, ValidationFailure)
from .nr import morphism_mc_residual, structure_mc_residual
from .representations import adjoint_rep

ONE_BASED = ("tuple", "triple", "pair")


class _Failure(Exception):
    def __init__(self, error: ValidationFailure, report: dict | None = None):
        self.error = error
        self.report = report or {}


def _one_based(witness: dict) -> dict:
    return {k: [i + 1 for i in v] if k in ONE_BASED else v for k, v in witness.items()}


def _one_based_message(err: ThreeLieError) -> str:
    """Library messages quote 0-based index tuples; files and reports are 1-based."""
    msg = str(err)
    for k in ONE_BASED:
        v = err.witness.get(k)
        if v:
            msg = msg.replace(str(tuple(v)), str(tuple(i + 1 for i in v)))
    return msg


def _algebra(path, validate=True):
    return io.parse_algebra(io.load_json(path), path, validate=validate)


def _map(path):
    return io.parse_map(io.load_json(path), path)


def _morphism_inputs(args):
    return _algebra(args.source), _algebra(args.target), _map(args.map)


def _guard_degree(n):
    if n > MAX_DEGREE:
        raise DegreeOverflowGuard(f"degree bound {n} exceeds the maximum {MAX_DEGREE}",
                                  {"degree": n, "max_degree": MAX_DEGREE})


# -- commands ------------------------------------------------------------------

def cmd_check_algebra(args):
    A = _algebra(args.file, validate=False)
    chk = check_fundamental_identity(A)
    if not chk.ok:
        err = FundamentalIdentityViolation(
            f"fundamental identity fails at basis tuple {tuple(chk.witness)}",
            {"tuple": list(chk.witness), "residual": io.vector_json(chk.residual, A.dim)})
        raise _Failure(err, {"tuples_checked": chk.tuples_checked})
    return {"dim": A.dim, "fundamental_identity": "OK", "tuples_checked": chk.tuples_checked,
            "report": f"fundamental identity: OK ({chk.tuples_checked} tuples)"}


def cmd_check_morphism(args):
    g, h, f = _morphism_inputs(args)
    res = check_morphism(f, g, h)
    defects = [{"triple": [i + 1 for i in t], "defect": io.vector_json(v, h.dim)}
               for t, v in sorted(res.defects.items())]
    if defects:
        first = defects[0]
        t = tuple(i - 1 for i in first["triple"])
        err = NotAMorphism(f"map is not a morphism: defect at basis triple {t}",
                           {"triple": list(t), "defect": first["defect"]})
        raise _Failure(err, {"is_morphism": False, "defects": defects})
    return {"is_morphism": True, "defects": []}


def _residual_entries(c, one_based_pairs):
    pairs = one_based_pairs
    out = []
    for key, vec in sorted(c.table.items()):
        a, b = pairs[key[0]]
        out.append({"pair": [a + 1, b + 1], "x": key[-1] + 1,
                    "value": io.vector_json(vec, c.target_dim)})
    return out


def cmd_mc_residual(args):
    if args.algebra:
        A = _algebra(args.algebra, validate=False)
        r = structure_mc_residual(A)
        return {"kind": "structure", "is_zero": r.is_zero(), "nonzero_entries": r.nnz}
    if not (args.source and args.target and args.map):
        raise SchemaError("mc-residual needs --algebra, or --source, --target and --map")
    g, h, f = _morphism_inputs(args)
    r = morphism_mc_residual(f, g, h)
    return {"kind": "morphism", "is_zero": r.is_zero(), "nonzero_entries": r.nnz,
            "entries": _residual_entries(r, g.pairs.pairs)}


def cmd_cohomology_morphism(args):
    _guard_degree(args.max_degree)
    g, h, f = _morphism_inputs(args)
    cx = MorphismComplex(f, g, h)
    return {"complex": cx.descriptor(args.max_degree),
            "reports": [r.to_json() for r in cohomology_table(cx, args.max_degree)]}


def cmd_cohomology_rep(args):
    _guard_degree(args.max_degree)
    A = _algebra(args.algebra)
    if args.subspace:
        H, comp = io.parse_subspace(io.load_json(args.subspace), A, args.subspace)
        cx = subalgebra_complex(A, H, _split(A, H, comp))
    elif args.rep:
        rho = io.parse_representation(io.load_json(args.rep), A, args.rep)
        cx = RepresentationComplex(rho)
    else:
        cx = RepresentationComplex(adjoint_rep(A))
    return {"complex": cx.descriptor(args.max_degree),
            "reports": [r.to_json() for r in cohomology_table(cx, args.max_degree)]}


def cmd_rigidity(args):
    g, h, f = _morphism_inputs(args)
    r = rigidity(f, g, h)
    return {"dimH1": r.dimH, "dimZ1": r.dimZ, "dimB1": r.dimB, "verdict": r.verdict}


def cmd_stability(args):
    g, h, f = _morphism_inputs(args)
    r = stability(f, g, h)
    return {"dimH2": r.dimH, "dimZ2": r.dimZ, "dimB2": r.dimB,
            "dimZ1": r.extra["dimZ1"], "verdict": r.verdict}


def _split(A, H, comp):
    return quotient_split(A, H, comp) if comp else quotient_split(A, H)


def _closed_subalgebra(A, path):
    H, comp = io.parse_subspace(io.load_json(path), A, path)
    chk = subspace_closure_check(A, H)
    if not chk.closed:
        err = NotASubalgebra("subspace is not closed under the bracket",
                             {"triple": list(chk.witness),
                              "residual": io.vector_json(chk.residual, A.dim)})
        raise _Failure(err, {"is_subalgebra": False})
    return H, comp


def cmd_subalgebra(args):
    A = _algebra(args.algebra)
    H, comp = _closed_subalgebra(A, args.subspace)
    out = {"is_subalgebra": True, "dim": H.rank, "quotient_dim": A.dim - H.rank}
    if args.stability:
        r = subalgebra_stability(A, H, _split(A, H, comp))
        out.update({"dimH2": r.dimH, "dimZ2": r.dimZ, "dimB2": r.dimB,
                    "dimZ1": r.extra["dimZ1"], "verdict": r.verdict})
    return out


def cmd_graph_iso(args):
    if args.degree < 1:
        raise SchemaError("--degree must be at least 1")
    _guard_degree(args.degree + 1)
    g, h, f = _morphism_inputs(args)
    return graph_correspondence(f, g, h, args.degree).to_json()


def cmd_jet(args):
    if args.algebra and args.subspace:
        A = _algebra(args.algebra)
        H, comp = _closed_subalgebra(A, args.subspace)
        split = _split(A, H, comp)
        vel = io.parse_velocity(io.load_json(args.alpha), split.quotient_dim, H.rank, args.alpha)
        chk = jet_subalgebra_check(Jet1Subspace.build(A, H, vel, split), A)
        residual = [{"triple": [i + 1 for i in t], "value": io.vector_json(v, split.quotient_dim)}
                    for t, v in sorted(chk.residual.items())]
        if not chk.passes:
            first = residual[0]
            err = NotFirstOrderDeformation(
                "deformed span is not closed to first order",
                {"triple": [i - 1 for i in first["triple"]], "residual": first["value"]})
            raise _Failure(err, {"kind": "subalgebra", "is_cocycle": False, "residual": residual})
        return {"kind": "subalgebra", "is_cocycle": True, "residual": []}
    if not (args.source and args.target and args.map):
        raise SchemaError("jet needs --source, --target and --map, or --algebra and --subspace")
    g, h, f = _morphism_inputs(args)
    alpha = io.parse_map(io.load_json(args.alpha), args.alpha)
    if (alpha.source_dim, alpha.target_dim) != (f.source_dim, f.target_dim):
        raise SchemaError(f"{args.alpha}: velocity must have the shape of the map",
                          path=args.alpha)
    try:
        tangent_cocycle(Jet1Map(f, alpha), g, h)
    except NotFirstOrderDeformation as exc:
        raise _Failure(exc, {"kind": "morphism", "is_cocycle": False}) from None
    return {"kind": "morphism", "is_cocycle": True}


# -- plumbing --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threelie",
        description="Exact checks and cohomology for 3-Lie algebras, morphisms and subalgebras.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def morphism_args(p, required=True):
        p.add_argument("--source", required=required, help="source algebra JSON")
        p.add_argument("--target", required=required, help="target algebra JSON")
        p.add_argument("--map", required=required, help="linear map JSON")

    p = sub.add_parser("check-algebra", help="verify the fundamental identity")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_algebra)

    p = sub.add_parser("check-morphism", help="verify f(pi(x,y,z)) = mu(fx,fy,fz)")
    morphism_args(p)
    p.set_defaults(func=cmd_check_morphism)

    p = sub.add_parser("mc-residual", help="Maurer-Cartan residual of a bracket or a map")
    p.add_argument("--algebra")
    morphism_args(p, required=False)
    p.set_defaults(func=cmd_mc_residual)

    p = sub.add_parser("cohomology-morphism", help="dimensions of H^n(f), n = 0..N")
    morphism_args(p)
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(func=cmd_cohomology_morphism)

    p = sub.add_parser("cohomology-rep", help="dimensions of H^n(g, V), n = 1..N")
    p.add_argument("--algebra", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--rep", help="representation JSON (default: adjoint)")
    group.add_argument("--subspace", help="use the quotient representation of this subalgebra")
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(func=cmd_cohomology_rep)

    p = sub.add_parser("rigidity", help="H^1(f) and the rigidity verdict")
    morphism_args(p)
    p.set_defaults(func=cmd_rigidity)

    p = sub.add_parser("stability", help="H^2(f), Z^1(f) and the stability verdict")
    morphism_args(p)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("subalgebra", help="closure check, optionally H^2(h, g/h)")
    p.add_argument("--algebra", required=True)
    p.add_argument("--subspace", required=True)
    p.add_argument("--stability", action="store_true")
    p.set_defaults(func=cmd_subalgebra)

    p = sub.add_parser("graph-iso", help="compare H^k(f) with the graph subalgebra cohomology")
    morphism_args(p)
    p.add_argument("--degree", type=int, default=1)
    p.set_defaults(func=cmd_graph_iso)

    p = sub.add_parser("jet", help="is a velocity a first-order deformation?")
    morphism_args(p, required=False)
    p.add_argument("--algebra")
    p.add_argument("--subspace")
    p.add_argument("--alpha", required=True, help="velocity matrix JSON")
    p.set_defaults(func=cmd_jet)
    return parser


def _text(report: dict) -> str:
    if "report" in report:
        return report["report"] + "\n"
    lines = []
    for k in sorted(report):
        lines.append(f"{k}: {io.dumps(report[k]).strip() if isinstance(report[k], (dict, list)) else report[k]}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, fmt: str, stream):
    stream.write(io.dumps(report) if fmt == "json" else _text(report))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except _Failure as fail:
        err = fail.error
        out = dict(fail.report)
        out.update({"error": type(err).__name__, "message": _one_based_message(err),
                    "witness": _one_based(err.witness)})
        _emit(out, args.format, sys.stdout)
        return 2
    except ValidationFailure as err:
        out = {"error": type(err).__name__, "message": _one_based_message(err),
               "witness": _one_based(err.witness)}
        _emit(out, args.format, sys.stdout)
        return 2
    except (ThreeLieError, ValueError) as err:
        out = {"error": type(err).__name__, "message": str(err),
               "location": getattr(err, "witness", {})}
        _emit(out, args.format, sys.stdout)
        print(f"threelie: {err}", file=sys.stderr)
        return 1
    _emit(report, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
