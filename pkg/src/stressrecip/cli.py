"""Command-line interface: analyze, reciprocal, lift, laman, generate, verify-good, batch.

Exit codes: 0 ok, 2 parse/validation error, 3 geometric invalidity,
4 condition-check failure, 5 numerical-tolerance ambiguity.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures
from .geometry import Tolerance
from .io import DocumentError, FrameworkDocument, load_document, save_document
from .lifting import LiftingError, coplanarity_check, extremum_report, level_curve, maxwell_lifting
from .pebble import is_laman, is_laman_circuit, pebble_game_rank
from .plane_graph import (
    EmbeddingError,
    FrameworkError,
    build_embedding,
    classify_faces,
    classify_vertices,
    counting_check,
    is_non_crossing,
)
from .reciprocal import ReciprocalError, cremona_reciprocal, maxwell_reciprocal, reciprocal_noncrossing_report
from .rigidity import is_good_self_stress, self_stress_space
from .svg import render_svg

EXIT_OK, EXIT_PARSE, EXIT_GEOMETRY, EXIT_CONDITIONS, EXIT_AMBIGUOUS = 0, 2, 3, 4, 5


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _tolerance(args) -> Tolerance:
    return Tolerance(args.tol_geom, args.tol_rank, args.tol_stress)


def _load(path, tol) -> FrameworkDocument:
    try:
        return load_document(path, tol)
    except FileNotFoundError as exc:
        raise CliFailure(EXIT_PARSE, f"cannot read {path}: {exc}")
    except DocumentError as exc:
        raise CliFailure(EXIT_PARSE, f"{path}: {exc}")


def _embed(fw, tol):
    if not is_non_crossing(fw, tol):
        raise CliFailure(EXIT_GEOMETRY, "framework has crossing edges")
    try:
        return build_embedding(fw, tol)
    except EmbeddingError as exc:
        raise CliFailure(EXIT_GEOMETRY, str(exc))


def _pick_stress(doc: FrameworkDocument, emb, tol) -> np.ndarray | None:
    """Explicit stress from the document, else the unique one, else None."""
    if doc.stress is not None:
        return doc.stress
    basis = self_stress_space(doc.framework, tol, emb)
    if len(basis) == 1:
        return basis[0].omega
    if len(basis) == 0:
        return None
    raise CliFailure(EXIT_AMBIGUOUS,
                     f"stress space has dimension {len(basis)}; supply an explicit "
                     "stress in the document to select one")


def analyze_document(doc: FrameworkDocument, tol: Tolerance) -> dict:
    fw = doc.framework
    report: dict = {"n": fw.n, "e": fw.m}
    report["non_crossing"] = is_non_crossing(fw, tol)
    if not report["non_crossing"]:
        raise CliFailure(EXIT_GEOMETRY, "framework has crossing edges")
    emb = _embed(fw, tol)
    faces = classify_faces(emb)
    verts = classify_vertices(emb)
    cc = counting_check(emb)
    pg = pebble_game_rank(fw.edges, fw.n)
    report["faces"] = {
        "outer": faces[emb.outer_face].klass,
        "interior": sorted(faces[f].klass for f in emb.interior_faces()),
    }
    report["vertices"] = {
        "pointed": [v.vertex for v in verts if v.pointed],
        "non_pointed": [v.vertex for v in verts if not v.pointed],
    }
    report["counting"] = {"e": cc.e, "t": cc.t, "q": cc.q, "x": cc.x, "y": cc.y,
                          "holds": cc.holds, "applicable": cc.applicable}
    report["laman"] = {"rank": pg.rank, "independent": pg.independent,
                       "is_laman": is_laman(fw.edges, fw.n),
                       "is_laman_circuit": is_laman_circuit(fw.edges, fw.n)}
    basis = self_stress_space(fw, tol, emb)
    report["stress_space"] = {
        "dimension": len(basis),
        "basis": [[round(float(w), 12) for w in st.omega] for st in basis],
        "residuals": [float(st.residual) for st in basis],
    }
    omega = doc.stress
    if omega is None and len(basis) == 1:
        omega = basis[0].omega
    if omega is not None:
        good = is_good_self_stress(fw, emb, omega, tol)
        report["conditions"] = {
            "nonzero_everywhere": good.nonzero_everywhere,
            "face_conditions_ok": good.face_conditions_ok,
            "vertex_conditions_ok": good.vertex_conditions_ok,
            "distinguished_vertex": good.distinguished_vertex,
            "bad_quadrangle_vertices": list(good.bad_quadrangle_vertices),
            "good": good.good,
        }
        try:
            rep = reciprocal_noncrossing_report(fw, emb, omega, tol)
            report["reciprocal"] = {
                "noncrossing": rep.noncrossing,
                "orientation": rep.orientation,
                "dual_embedding_consistent": rep.dual_embedding_consistent,
                "closure_defect": float(rep.diagram.max_closure_defect),
            }
            lift = maxwell_lifting(fw, emb, omega, tol)
            ext = extremum_report(lift, good.distinguished_vertex, tol)
            report["lifting"] = {
                "peak_height": float(lift.peak_height()),
                "flip_applied": lift.flip_applied,
                "coplanarity_residual": float(coplanarity_check(lift)),
                "unique_max_at_distinguished": bool(ext.peak_is_distinguished),
                "outer_face_is_min": ext.outer_face_is_min,
            }
        except (ReciprocalError, LiftingError) as exc:
            report["reciprocal"] = {"error": str(exc)}
    else:
        report["conditions"] = {"status": "no usable stress"
                                if len(basis) == 0 else "ambiguous stress space"}
    return report


def cmd_analyze(args) -> int:
    tol = _tolerance(args)
    doc = _load(args.input, tol)
    report = analyze_document(doc, tol)
    text = json.dumps(report, indent=2)
    if args.json:
        Path(args.json).write_text(text + "\n")
    print(text)
    if args.svg:
        emb = _embed(doc.framework, tol)
        stress = doc.stress
        if stress is None and report["stress_space"]["dimension"] == 1:
            stress = np.array(report["stress_space"]["basis"][0])
        Path(args.svg).write_text(render_svg(doc.framework, stress, emb))
    if args.check_good:
        cond = report.get("conditions", {})
        if not cond.get("good", False):
            print("condition checks failed", file=sys.stderr)
            return EXIT_CONDITIONS
    return EXIT_OK


def cmd_reciprocal(args) -> int:
    tol = _tolerance(args)
    doc = _load(args.input, tol)
    emb = _embed(doc.framework, tol)
    omega = _pick_stress(doc, emb, tol)
    if omega is None:
        raise CliFailure(EXIT_CONDITIONS, "framework has no self-stress")
    try:
        rec = (cremona_reciprocal if args.mode == "cremona" else maxwell_reciprocal)(
            doc.framework, emb, omega, tol)
    except ReciprocalError as exc:
        raise CliFailure(EXIT_CONDITIONS, str(exc))
    dual = rec.framework(tol)
    meta = {"mode": rec.mode, "anchor": rec.anchor,
            "fused_faces": [list(g) for g in rec.fused_faces],
            "closure_defect": float(rec.max_closure_defect)}
    out = FrameworkDocument(dual, metadata=meta)
    if args.out:
        save_document(out, args.out)
    else:
        print(json.dumps(out.to_dict(), indent=2))
    if args.svg:
        Path(args.svg).write_text(render_svg(
            doc.framework, omega, emb, companion=dual))
    return EXIT_OK


def cmd_lift(args) -> int:
    tol = _tolerance(args)
    doc = _load(args.input, tol)
    emb = _embed(doc.framework, tol)
    omega = _pick_stress(doc, emb, tol)
    if omega is None:
        raise CliFailure(EXIT_CONDITIONS, "framework has no self-stress")
    try:
        lift = maxwell_lifting(doc.framework, emb, omega, tol)
    except LiftingError as exc:
        raise CliFailure(EXIT_CONDITIONS, str(exc))
    data = {
        "heights": [round(float(z), 12) for z in lift.heights],
        "gradients": [[round(float(g), 12) for g in row] for row in lift.gradients],
        "offsets": [round(float(b), 12) for b in lift.offsets],
        "flip_applied": lift.flip_applied,
        "coplanarity_residual": float(coplanarity_check(lift)),
        "support_vertices": list(lift.support.vertex_map),
        "support_edges": list(lift.support.edge_map),
    }
    text = json.dumps(data, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.svg:
        peak = lift.peak_height()
        curves = []
        for z in np.linspace(0.0, peak, 12)[1:-1]:
            try:
                curves.append(level_curve(lift, float(z), tol).points)
            except ValueError:
                pass
        Path(args.svg).write_text(render_svg(doc.framework, omega, emb, curves=curves))
    return EXIT_OK


def cmd_laman(args) -> int:
    tol = _tolerance(args)
    doc = _load(args.input, tol)
    fw = doc.framework
    pg = pebble_game_rank(fw.edges, fw.n)
    print(json.dumps({
        "n": fw.n, "e": fw.m, "rank": pg.rank, "independent": pg.independent,
        "is_laman": is_laman(fw.edges, fw.n),
        "is_laman_circuit": is_laman_circuit(fw.edges, fw.n),
    }, indent=2))
    return EXIT_OK


def generate_fixture(kind: str, seed: int, n: int | None = None) -> FrameworkDocument:
    """Deterministic fixture instances; see fixtures module for the families."""
    if kind == "k4":
        fw = fixtures.fix_k4()
        return FrameworkDocument(fw, metadata={"kind": kind})
    if kind == "wheel":
        inst = fixtures.wheel(n or 4, seed)
        return FrameworkDocument(inst.framework, inst.omega,
                                 {"kind": kind, "seed": seed})
    if kind == "triangulated-polygon-circuit":
        inst = fixtures.serpentine_circuit(n or 6, seed)
        return FrameworkDocument(inst.framework, inst.omega,
                                 {"kind": kind, "seed": seed})
    if kind == "singular-concurrent":
        fw = fixtures.singular_concurrent()
        return FrameworkDocument(fw, metadata={
            "kind": kind, "dropped_edge": fixtures.SINGULAR_DROPPED_EDGE})
    if kind == "bad-quadrangle-search":
        fw, _, omega = fixtures.bad_quadrangle_witness(seed)
        return FrameworkDocument(fw, omega, {"kind": kind, "seed": seed})
    if kind == "pointed-pt":
        fw = fixtures.pointed_pt(n or 8, seed)
        return FrameworkDocument(fw, metadata={"kind": kind, "seed": seed})
    if kind == "two-nonpointed":
        fw = fixtures.two_nonpointed_pt()
        return FrameworkDocument(fw, metadata={"kind": kind})
    if kind == "nonconvex-wheel":
        fw = fixtures.nonconvex_wheel()
        return FrameworkDocument(fw, metadata={"kind": kind})
    raise CliFailure(EXIT_PARSE, f"unknown fixture kind {kind!r}")


def cmd_generate(args) -> int:
    try:
        doc = generate_fixture(args.kind, args.seed, args.n)
    except fixtures.GenerationError as exc:
        raise CliFailure(EXIT_CONDITIONS, str(exc))
    if args.out:
        save_document(doc, args.out)
    else:
        print(json.dumps(doc.to_dict(), indent=2))
    return EXIT_OK


def cmd_verify_good(args) -> int:
    tol = _tolerance(args)
    doc = _load(args.input, tol)
    emb = _embed(doc.framework, tol)
    omega = _pick_stress(doc, emb, tol)
    if omega is None:
        raise CliFailure(EXIT_CONDITIONS, "framework has no self-stress")
    good = is_good_self_stress(doc.framework, emb, omega, tol)
    rep = reciprocal_noncrossing_report(doc.framework, emb, omega, tol)
    geometric = rep.noncrossing and rep.dual_embedding_consistent \
        and rep.orientation == "reversed" and good.nonzero_everywhere
    print(json.dumps({
        "good": good.good,
        "vertex_conditions_ok": good.vertex_conditions_ok,
        "face_conditions_ok": good.face_conditions_ok,
        "bad_quadrangle_vertices": list(good.bad_quadrangle_vertices),
        "distinguished_vertex": good.distinguished_vertex,
        "geometric_noncrossing": rep.noncrossing,
        "orientation": rep.orientation,
        "dual_embedding_consistent": rep.dual_embedding_consistent,
        "verdicts_agree": good.good == geometric,
    }, indent=2))
    if good.good != geometric:
        raise CliFailure(EXIT_AMBIGUOUS, "combinatorial and geometric verdicts disagree")
    return EXIT_OK if good.good else EXIT_CONDITIONS


def cmd_batch(args) -> int:
    tol = _tolerance(args)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    worst = EXIT_OK
    for path in args.inputs:
        try:
            doc = _load(path, tol)
            report = analyze_document(doc, tol)
            code = EXIT_OK
        except CliFailure as exc:
            report = {"error": str(exc), "exit_code": exc.code}
            code = exc.code
        (outdir / (Path(path).stem + ".json")).write_text(
            json.dumps(report, indent=2) + "\n")
        print(f"{path}: exit {code}")
        worst = max(worst, code)
    return worst


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stressrecip",
                                description="Self-stresses, reciprocal diagrams and "
                                            "liftings of planar frameworks")
    p.add_argument("--tol-geom", type=float, default=1e-9)
    p.add_argument("--tol-rank", type=float, default=1e-9)
    p.add_argument("--tol-stress", type=float, default=1e-8)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full pipeline report")
    a.add_argument("input")
    a.add_argument("--json", help="write the report to this path")
    a.add_argument("--svg", help="write a rendering to this path")
    a.add_argument("--check-good", action="store_true",
                   help="exit 4 unless the stress is good")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("reciprocal", help="construct the reciprocal diagram")
    r.add_argument("input")
    r.add_argument("--mode", choices=("cremona", "maxwell"), default="cremona")
    r.add_argument("--out")
    r.add_argument("--svg")
    r.set_defaults(func=cmd_reciprocal)

    l = sub.add_parser("lift", help="construct the standard lifting")
    l.add_argument("input")
    l.add_argument("--out")
    l.add_argument("--svg")
    l.set_defaults(func=cmd_lift)

    lm = sub.add_parser("laman", help="pebble-game rank and circuit tests")
    lm.add_argument("input")
    lm.set_defaults(func=cmd_laman)

    g = sub.add_parser("generate", help="write a fixture document")
    g.add_argument("--kind", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify-good", help="combinatorial vs geometric goodness")
    v.add_argument("input")
    v.set_defaults(func=cmd_verify_good)

    b = sub.add_parser("batch", help="analyze many documents")
    b.add_argument("inputs", nargs="+")
    b.add_argument("--out-dir", required=True)
    b.set_defaults(func=cmd_batch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (FrameworkError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmbeddingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
