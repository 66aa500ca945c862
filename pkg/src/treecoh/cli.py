"""Command-line surface.

One self-contained input document per instance; reports go to standard
output as JSON (sorted keys, so identical invocations are byte
identical) or as indented text with --format text.  Exit codes: 0 the
requested property holds / result computed, 1 the property fails
(verdict, not error), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import betti as betti_mod
from . import boundary as boundary_mod
from . import corpus, cover, documents, haagerup, words
from . import cohomology as coh
from .errors import DocumentError, TreecohError
from .gog import reduce as reduce_gog
from .gog import is_reduced, validate


def _jsonable(x):
    if isinstance(x, Fraction):
        return documents.format_rational(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(report: dict, fmt: str) -> None:
    report = _jsonable(report)
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _emit_text(report, 0)


def _emit_text(x, depth: int, label=None) -> None:
    pad = "  " * depth
    head = f"{pad}{label}: " if label is not None else pad
    if isinstance(x, dict):
        if label is not None:
            print(f"{pad}{label}:")
        for k in sorted(x):
            _emit_text(x[k], depth + (label is not None), k)
    elif isinstance(x, list):
        if label is not None:
            print(f"{pad}{label}:")
        for v in x:
            _emit_text(v, depth + (label is not None), "-")
    else:
        print(f"{head}{x}")


def _load(path: str) -> documents.Document:
    return documents.load_path(path)


def _module_spec(doc: documents.Document, name_or_path: str) -> coh.ModuleSpec:
    if name_or_path in doc.modules:
        return coh.parse_module_spec(doc.gog, doc.modules[name_or_path])
    try:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise DocumentError(f"module {name_or_path!r}: not a bundled name and {exc}")
    except json.JSONDecodeError as exc:
        raise DocumentError(f"module file {name_or_path!r}: {exc}")
    return coh.parse_module_spec(doc.gog, raw)


# -- handlers: each returns (report dict, exit code) ------------------------


def _cmd_validate(args):
    doc = _load(args.document)
    rep = validate(doc.gog)
    return (
        {
            "valid": rep.valid,
            "violations": [
                {"code": v.code, "subject": v.subject, "message": v.message}
                for v in rep.violations
            ],
        },
        0 if rep.valid else 1,
    )


def _cmd_reduce(args):
    doc = _load(args.document)
    reduced, log = reduce_gog(doc.gog)
    rep = is_reduced(reduced)
    out = {
        "contractions": [
            {"edge": s.edge, "removed": s.removed_vertex, "kept": s.kept_vertex}
            for s in log.steps
        ],
        "reduced": rep.reduced,
        "vertices": list(reduced.graph.vertices),
    }
    if args.emit_doc:
        out["document"] = documents.to_document(reduced)
    return out, 0


def _cmd_present(args):
    doc = _load(args.document)
    pres = words.presentation(doc.gog)
    return (
        {
            "generators": list(pres.generators),
            "relations": [str(r) for r in pres.relations],
            "killed": list(pres.killed),
            "symbolic": [{"vertex": v, "presentation": p} for v, p in pres.symbolic],
        },
        0,
    )


def _cmd_cover(args):
    doc = _load(args.document)
    ball = cover.build_ball(doc.gog, args.radius)
    if args.format == "dot":
        print(cover.ball_to_dot(ball), end="")
        return None, 0
    return cover.ball_to_json(ball), 0


def _cmd_word(args):
    doc = _load(args.document)
    w = words.parse_word(doc.gog, args.word)
    nf = words.britton_reduce(doc.gog, w)
    return {"input": str(w), "normal_form": str(nf.word), "is_identity": nf.is_identity}, 0


def _cmd_act(args):
    doc = _load(args.document)
    w = words.parse_word(doc.gog, args.word)
    ball = cover.build_ball(doc.gog, args.radius)
    start = ball.vertex(args.vertex) if args.vertex else ball.vertex(ball.base_uid)
    image = cover.act(ball, w, start)
    return {"vertex": start.uid, "image": image.uid, "distance_moved": cover.distance(ball, start, image)}, 0


def _cmd_isometry(args):
    doc = _load(args.document)
    w = words.parse_word(doc.gog, args.word)
    rep = cover.isometry_report(doc.gog, w)
    out = {
        "word": str(w),
        "normal_form": str(rep.normal.word),
        "kind": rep.kind,
        "displacement": rep.displacement,
        "translation_length": rep.translation_length,
    }
    if rep.kind == "elliptic":
        out["fixed_vertex"] = rep.fixed_vertex.key()
    else:
        out["axis_segment"] = [p.key() for p in rep.axis_segment]
    return out, 0


def _cmd_classify_action(args):
    doc = _load(args.document)
    gens = [words.parse_word(doc.gog, part) for part in args.gens.split(";") if part.strip()]
    cls = cover.classify_action(doc.gog, gens, budget=args.budget)
    out = {"verdict": cls.verdict, "budget": cls.budget}
    if cls.fixed_vertex is not None:
        out["fixed_vertex"] = cls.fixed_vertex.key()
    if cls.pingpong is not None:
        c = cls.pingpong
        out["pingpong"] = {
            "g1": str(c.g1),
            "g2": str(c.g2),
            "power": c.power,
            "overlap": c.overlap,
            "ell1": c.ell1,
            "ell2": c.ell2,
        }
    if cls.endpair is not None:
        out["endpair"] = {
            "axis_word": str(cls.endpair.axis_word),
            "confirmations": [list(c) for c in cls.endpair.confirmations],
        }
    out["certificate_verified"] = cover.check_classification(doc.gog, gens, cls)
    code = 0 if out["certificate_verified"] else 1
    return out, code


def _cmd_haagerup(args):
    doc = _load(args.document)
    w = words.parse_word(doc.gog, args.word)
    ball = cover.build_ball(doc.gog, args.radius)
    vec = haagerup.haagerup_cocycle(doc.gog, ball, w)
    eng = words.engine_for(doc.gog)
    dist = eng.vertex_coset(w, doc.gog.base_vertex).depth
    out = {
        "word": str(w),
        "norm_sq": vec.norm_sq(),
        "support_size": vec.support_size,
        "support": [{"edge": k, "value": v} for k, v in vec.describe()],
    }
    ok = True
    if args.check_norm:
        out["norm_identity"] = vec.norm_sq() == 2 * dist
        ok = ok and out["norm_identity"]
    if args.verify_omega:
        rep = haagerup.verify_omega_lift(doc.gog, ball, [w])
        out["omega_lift"] = rep.ok
        ok = ok and rep.ok
    return out, 0 if ok else 1


def _cmd_mv(args):
    doc = _load(args.document)
    spec = _module_spec(doc, args.module)
    gog = doc.gog
    if args.check == "exactness":
        vrep = coh.validate_module(gog, spec)
        if not vrep.valid:
            return {"module_valid": False, "violations": list(vrep.violations)}, 1
        rep = coh.check_exactness(gog, spec)
        return {"module_valid": True, "checks": rep.checks, "ranks": rep.ranks}, 0 if rep.ok else 1
    if args.check == "h1":
        res = coh.h1(gog, spec)
        return {"dim_z1": res.dim_z1, "dim_b1": res.dim_b1, "dim_h1": res.dim_h1}, 0
    if args.check == "iota":
        io = coh.iota_matrix(gog, spec)
        return (
            {
                "rank": io.rank,
                "coker_dim": io.coker_dim,
                "surjective": io.surjective,
                "vertex_dims": {v: len(io.vertex_bases[v]) for v in io.vertex_order},
                "edge_dims": {e: len(io.edge_bases[e]) for e in io.edge_order},
            },
            0,
        )
    if args.check == "semidirect":
        v = coh.semidirect_criterion(gog, spec)
        return (
            {
                "fixed_dim": v.fixed_dim,
                "has_eigenvalue_one": v.has_eigenvalue_one,
                "predicted_h1_zero": v.predicted_h1_zero,
                "dim_h1": v.dim_h1,
                "consistent": v.consistent,
            },
            0 if v.consistent else 1,
        )
    if args.check == "validate":
        vrep = coh.validate_module(gog, spec)
        return {"valid": vrep.valid, "violations": list(vrep.violations)}, 0 if vrep.valid else 1
    raise DocumentError(f"unknown check {args.check!r}")


def _cmd_betti1(args):
    doc = _load(args.document)
    value = betti_mod.beta1(doc.gog)
    out = {"beta1": value}
    if args.expect_zero:
        return out, 0 if value == 0 else 1
    return out, 0


def _cmd_betti(args):
    doc = _load(args.document)
    table = None
    if args.edge_betti:
        with open(args.edge_betti, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        table = {
            e: {int(k): documents.parse_rational(v) for k, v in entry.items()}
            for e, entry in raw.items()
        }
    value = betti_mod.beta_higher(doc.gog, args.degree, table)
    return {"degree": args.degree, "value": value}, 0


def _cmd_betti_classify(args):
    doc = _load(args.document)
    cls = betti_mod.classify_beta1(doc.gog)
    out = {"case": cls.case, "zero": cls.zero, "reason": cls.reason}
    if cls.witness:
        out["witness"] = cls.witness
    return out, 0


def _parse_s(text):
    if text is None:
        return None
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text)
    except ValueError:
        raise DocumentError(f"cannot parse s value {text!r}")


def _cmd_boundary(args):
    desc = boundary_mod.RepDescriptor(
        orbit_count=args.orbits,
        q=args.q,
        q2=args.q2,
        rep_class=args.rep_class,
        s=_parse_s(args.s),
        variant=args.variant,
    )
    out = {
        "fixed_dims": list(boundary_mod.fixed_dims(desc)),
        "h1_dim": boundary_mod.h1_dim(desc),
    }
    if desc.rep_class in ("trivial", "spherical"):
        io = boundary_mod.iota_surjectivity(desc)
        out["iota"] = {
            "determinant": io.determinant,
            "exact": io.exact,
            "surjective": io.surjective,
        }
    if args.truncated:
        rep = boundary_mod.truncated_check(args.q, args.q2 or args.q, args.truncated)
        out["truncated"] = {
            "boundary_size": rep.boundary_size,
            "orbits_stab_a": rep.orbits_stab_a,
            "orbits_stab_e": rep.orbits_stab_e,
            "orbits_stab_b": rep.orbits_stab_b,
            "ratio": rep.ratio,
            "ratio_reference": rep.ratio_reference,
            "matches_regular_square": rep.matches_regular_square,
        }
    return out, 0


def _cmd_examples(args):
    doc = corpus.document(args.name)
    text = json.dumps(doc, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return {"written": args.out}, 0
    print(text)
    return None, 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treecoh", description=__doc__)
    p.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(handler=handler)
        return sp

    sp = add("validate", _cmd_validate, help="check every structural invariant")
    sp.add_argument("document")

    sp = add("reduce", _cmd_reduce, help="contract collapsible edges")
    sp.add_argument("document")
    sp.add_argument("--emit-doc", action="store_true")

    sp = add("present", _cmd_present, help="emit the fundamental group presentation")
    sp.add_argument("document")

    sp = add("cover", _cmd_cover, help="build a universal cover ball")
    sp.add_argument("document")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--format", dest="format", choices=("dot", "json"), default="json")

    sp = add("word", _cmd_word, help="normal form and word problem")
    sp.add_argument("document")
    sp.add_argument("--word", required=True)

    sp = add("act", _cmd_act, help="act on a cover vertex")
    sp.add_argument("document")
    sp.add_argument("--word", required=True)
    sp.add_argument("--vertex")
    sp.add_argument("--radius", type=int, default=6)

    sp = add("isometry", _cmd_isometry, help="translation length and axis")
    sp.add_argument("document")
    sp.add_argument("--word", required=True)

    sp = add("classify-action", _cmd_classify_action, help="elementarity classifier")
    sp.add_argument("document")
    sp.add_argument("--gens", required=True, help="words separated by ';'")
    sp.add_argument("--budget", type=int, default=24)

    sp = add("haagerup", _cmd_haagerup, help="the Haagerup cocycle of a word")
    sp.add_argument("document")
    sp.add_argument("--word", required=True)
    sp.add_argument("--radius", type=int, default=8)
    sp.add_argument("--check-norm", action="store_true")
    sp.add_argument("--verify-omega", action="store_true")

    sp = add("mv", _cmd_mv, help="module cohomology checks")
    sp.add_argument("document")
    sp.add_argument("--module", required=True, help="bundled module name or JSON file")
    sp.add_argument(
        "--check",
        required=True,
        choices=("exactness", "h1", "iota", "semidirect", "validate"),
    )

    sp = add("betti1", _cmd_betti1, help="first L2-Betti number")
    sp.add_argument("document")
    sp.add_argument("--expect-zero", action="store_true")

    sp = add("betti", _cmd_betti, help="higher L2-Betti numbers")
    sp.add_argument("document")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--edge-betti", help="JSON file of per-edge Betti tables")

    sp = add("betti-classify", _cmd_betti_classify, help="vanishing classification")
    sp.add_argument("document")

    sp = add("boundary", _cmd_boundary, help="boundary representation bookkeeping")
    sp.add_argument("--orbits", type=int, choices=(1, 2), required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--q2", type=int)
    sp.add_argument(
        "--class",
        dest="rep_class",
        required=True,
        choices=("trivial", "spherical", "special", "cuspidal"),
    )
    sp.add_argument("--s")
    sp.add_argument("--variant", choices=("plus", "minus", "unique"))
    sp.add_argument("--truncated", type=int, help="also run the shadow model at this depth")

    sp = add("examples", _cmd_examples, help="emit a bundled example document")
    sp.add_argument("name")
    sp.add_argument("--out")

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.handler(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TreecohError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 2
    if report is not None:
        _emit({"command": args.command, "result": report}, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
