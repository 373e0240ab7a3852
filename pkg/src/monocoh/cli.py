"""Command-line interface: ``monocoh <command> <graph file> [options]``."""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

from . import __version__
from .algebra import AlgebraError, parse_algebra
from .cochain import FunctorSpec, cohomology, euler_characteristic, monotone_cochain, verify_source_resolution_iso
from .complexes import (build_complex, complex_stats, predicted_homotopy, reduced_homology,
                        union_decomposition_check)
from .graphcore import (GraphFormatError, OrientedGraph, analyze, enumerate_free_flow, format_graph,
                        load_graph, random_digraph, source_resolution)
from .linalg import CompositionError, parse_coefficients
from .orientedhomology import boolean_decomposition_check, freeflow_histogram, oriented_homology
from .poset import PosetError, face_poset, monotone_poset, poset_isomorphic, sign_assignment

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

SUITES = ("signs", "dsq", "iso-sr", "decomposition", "match-multipath", "wedge", "oh-oracle")
COHOMOLOGY_PROPERTIES = ("multipath", "oriented-matching", "spanning", "indeg-le-one")
COMPLEX_KINDS = ("graph-matching", "matching", "oriented-matching", "multipath", "oriented-matching-filtered")
DEFAULT_SEED = 2024
# exhaustive per-orientation suites stop here
ORIENTATION_SUITE_EDGES = 10


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    report: dict
    text: list[str]
    ok: bool = True


# ---------------------------------------------------------------------------
# helpers

def _parse_flips(g: OrientedGraph, spec: str | None) -> int:
    """Comma-separated edge indices or ``a-b`` vertex-name pairs (either direction)."""
    if not spec:
        return 0
    mask = 0
    by_pair = {}
    for k, (s, t) in enumerate(g.edges):
        by_pair[(g.names[s], g.names[t])] = k
        by_pair[(g.names[t], g.names[s])] = k
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.isdigit():
            k = int(tok)
            if k >= g.m:
                raise UsageError(f"--flip: edge index {k} out of range (graph has {g.m} edges)")
        else:
            parts = tok.replace("->", "-").split("-")
            if len(parts) != 2 or tuple(parts) not in by_pair:
                raise UsageError(f"--flip: {tok!r} is not an edge index or an a-b vertex pair of the graph")
            k = by_pair[tuple(parts)]
        mask |= 1 << k
    return mask


def _betti_text(betti: dict, torsion: dict | None = None, label: str = "H_") -> list[str]:
    lines = []
    for d, b in sorted(betti.items()):
        tors = (torsion or {}).get(d, ())
        if b or tors:
            extra = "".join(f" + Z/{t}" for t in tors)
            lines.append(f"  {label}{d}: rank {b}{extra}")
    return lines or ["  (all zero)"]


def _spec(args) -> FunctorSpec:
    return FunctorSpec(parse_algebra(args.algebra), "zero" if args.variant == "zero" else "identity")


# ---------------------------------------------------------------------------
# commands

def cmd_info(g: OrientedGraph, args) -> Outcome:
    rep = analyze(g)
    ff = enumerate_free_flow(g)
    report = {"vertices": list(g.names), "edges": [[g.names[s], g.names[t]] for s, t in g.edges],
              "free_flow_orientations": len(ff), **rep.as_dict(g.names)}
    text = [f"vertices: {g.n}   edges: {g.m}",
            "indegree: " + " ".join(f"{g.names[v]}={d}" for v, d in enumerate(rep.indegree)),
            "outdegree: " + " ".join(f"{g.names[v]}={d}" for v, d in enumerate(rep.outdegree)),
            f"components: {len(rep.components)} ({', '.join(rep.classes) or 'none'})",
            f"free-flow: {'yes' if rep.is_free_flow else 'no'}   alternating: {'yes' if rep.is_alternating else 'no'}",
            f"free-flow orientations of the underlying graph: {len(ff)}"]
    return Outcome(report, text)


def cmd_free_flow(g: OrientedGraph, args) -> Outcome:
    ff = enumerate_free_flow(g)
    items = [{"flips": [k for k in range(g.m) if (o.flips >> k) & 1], "distance": o.hamming,
              "edges": [[o.graph().names[s], o.graph().names[t]] for s, t in o.graph().edges]} for o in ff]
    report = {"count": len(ff)} if args.count else {"count": len(ff), "orientations": items}
    text = [f"free-flow orientations: {len(ff)}"]
    if not args.count:
        for it in items:
            text.append(f"  flip {it['flips'] or '-'} (distance {it['distance']}): "
                        + ", ".join(f"{s}->{t}" for s, t in it["edges"]))
    return Outcome(report, text)


def cmd_source_resolution(g: OrientedGraph, args) -> Outcome:
    sr, bij = source_resolution(g)
    out = format_graph(sr)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    report = {"graph": out, "edge_map": list(bij.forward),
              "sources": sum(1 for d in analyze(g).indegree if d == 0)}
    text = out.rstrip("\n").splitlines() if not args.output else [f"wrote {args.output}"]
    return Outcome(report, text)


def cmd_complex(g: OrientedGraph, args) -> Outcome:
    kind = args.kind.replace("-", "_")
    if kind == "oriented_matching_filtered" and args.max_cycles is None:
        raise UsageError("--kind oriented-matching-filtered needs --max-cycles")
    x = build_complex(g, kind, args.max_cycles)
    stats = complex_stats(x)
    report = {"kind": args.kind, **stats.as_dict()}
    text = [f"{args.kind} complex: {len(x)} simplices, dimension {x.dimension}",
            f"f-vector: {list(stats.f_vector)}   euler characteristic: {stats.euler_characteristic}",
            f"pure: {'yes' if stats.is_pure else 'no'}"]
    ok = True
    h = None
    if args.homology:
        h = reduced_homology(x, args.homology)
        report["reduced_homology"] = h.as_dict()
        text.append(f"reduced homology over {h.coefficients}:")
        text += _betti_text(h.betti, h.torsion)
    if args.predict:
        if kind != "oriented_matching":
            raise UsageError("--predict applies to --kind oriented-matching only")
        pred = predicted_homotopy(g)
        report["prediction"] = {"kind": pred.kind, "q": pred.q, "sphere_dim": pred.sphere_dim}
        text.append(f"predicted: {pred.kind}" + (f", {pred.q} sphere(s) of dimension {pred.sphere_dim}"
                                                if pred.kind == "wedge" else ""))
        if h is None:
            h = reduced_homology(x, "q")
        agree = h.dims() == pred.reduced_betti()
        report["prediction"]["agrees"] = agree
        text.append(f"homology agrees with prediction: {'yes' if agree else 'NO'}")
        ok = agree
    return Outcome(report, text, ok)


def cmd_cohomology(g: OrientedGraph, args) -> Outcome:
    spec = _spec(args)
    prop = args.property.replace("-", "_")
    c = monotone_cochain(g, prop, spec)
    h = cohomology(c, args.over)
    report = {"property": args.property, "algebra": spec.algebra.name, "variant": spec.variant,
              "dims": list(c.dims), "euler_characteristic": euler_characteristic(c), "cohomology": h.as_dict()}
    text = [f"{args.property} cochain complex, algebra {spec.algebra.describe()}, variant {spec.variant}",
            f"chain group dimensions: {list(c.dims)}   euler characteristic: {euler_characteristic(c)}",
            f"cohomology over {h.coefficients}:"]
    text += _betti_text(h.betti, h.torsion, "H^")
    return Outcome(report, text)


def cmd_oriented_homology(g: OrientedGraph, args) -> Outcome:
    flips = _parse_flips(g, args.flip)
    augmented = g.m == 0
    table = oriented_homology(g, flips, args.over, augmented=augmented)
    hist = freeflow_histogram(g, flips)
    agree = table.dims == hist.as_table(g.m)
    report = {"base_flips": [k for k in range(g.m) if (flips >> k) & 1], "table": table.as_dict(),
              "histogram": list(hist.counts), "free_flow_total": hist.total(), "agrees": agree}
    text = [f"base orientation: flip {report['base_flips'] or '-'}",
            "bigraded dimensions (i = flips, b = simplicial degree):"]
    text += [f"  ({i}, {b}): {v}" for (i, b), v in sorted(table.dims.items())] or ["  (all zero)"]
    text += [f"free-flow histogram by distance: {list(hist.counts)}   total {hist.total()}",
             f"verdict: {'agree' if agree else 'DISAGREE'}"]
    return Outcome(report, text, agree)


# ---------------------------------------------------------------------------
# verification suites

def _suite_signs(g, args) -> tuple[bool, str]:
    from .graphcore import coherent_barycentric
    checked = 0
    for label, h, prop in (("spanning", g, "spanning"), ("multipath", g, "multipath"),
                           ("indeg_le_one", g, "indeg_le_one"),
                           ("oriented matching", coherent_barycentric(g), "multipath")):
        if prop == "spanning" and h.m > 12:
            continue
        p = monotone_poset(h, prop)
        bad = sign_assignment(p).violations(p)
        if bad:
            return False, f"{label} poset: {len(bad)} squares violate the sign rule"
        checked += len(p)
    return True, f"sign rule holds on all squares ({checked} poset elements)"


def _suite_dsq(g, args) -> tuple[bool, str]:
    spec = _spec(args)
    built = []
    for prop in ("multipath", "oriented_matching", "indeg_le_one"):
        c = monotone_cochain(g, prop, spec, check=False)
        bad = c.first_nonzero_composition()
        if bad is not None:
            return False, f"{prop} cochain complex: d∘d != 0 leaving degree {bad}"
        built.append(prop)
    for kind in ("graph_matching", "oriented_matching", "multipath"):
        x = build_complex(g, kind)
        mats = x.boundary_matrices()
        for k in range(len(mats) - 1):
            if not (mats[k] @ mats[k + 1]).is_zero():
                return False, f"{kind} complex: boundary∘boundary != 0 at degree {k}"
    if g.m <= 8:
        from .orientedhomology import build_oh_complex
        if not build_oh_complex(g, 0).d_squared_zero():
            return False, "oriented homology complex: d∘d != 0"
    return True, f"d∘d = 0 on {', '.join(built)} cochain complexes and the simplicial complexes"


def _suite_iso_sr(g, args) -> tuple[bool, str]:
    spec = _spec(args)
    r = verify_source_resolution_iso(g, spec, args.over)
    if not r.ok:
        return False, f"source-resolution comparison fails at {r.message}"
    return True, f"dims {list(r.oriented_dims)} and cohomology {r.oriented_cohomology} agree (s = {r.sources})"


def _suite_decomposition(g, args) -> tuple[bool, str]:
    u = union_decomposition_check(g)
    if not u.ok:
        return False, f"matching complex != union of oriented pieces ({len(u.missing)} missing, {len(u.extra)} extra)"
    b = boolean_decomposition_check(g, 0, augmented=g.m == 0)
    if not b.ok:
        return False, "Boolean block decomposition: " + "; ".join(b.problems[:3])
    table = oriented_homology(g, 0, augmented=g.m == 0)
    pred = {k: v for k, v in b.predicted.items()}
    if g.m == 0:
        pred = {(0, -1): 1}
    if table.dims != pred:
        return False, f"oriented homology {table.dims} differs from the full-matching blocks {pred}"
    return True, f"{u.matching_simplices} simplices covered; {len(b.blocks)} Boolean blocks closed under d"


def _check_orientations(g: OrientedGraph) -> None:
    if g.m > ORIENTATION_SUITE_EDGES:
        raise PosetError(f"suite runs over all orientations: {g.m} edges exceeds the guard of {ORIENTATION_SUITE_EDGES}")


def _suite_match_multipath(g, args) -> tuple[bool, str]:
    _check_orientations(g)
    matching = face_poset(build_complex(g, "graph_matching"))
    hits = 0
    for flips in range(1 << g.m):
        h = g.flipped(flips)
        iso = poset_isomorphic(matching, monotone_poset(h, "multipath").without_bottom()) is not None
        alt = analyze(h).is_alternating
        if iso != alt:
            return False, f"orientation flip {flips:b}: isomorphic={iso} but alternating={alt}"
        hits += iso
    return True, f"isomorphism holds exactly for the {hits} alternating orientation(s) of {1 << g.m}"


def _suite_wedge(g, args) -> tuple[bool, str]:
    x = build_complex(g, "oriented_matching")
    h = reduced_homology(x, args.over if args.over != "z" else "q")
    pred = predicted_homotopy(g)
    if h.dims() != pred.reduced_betti():
        return False, f"reduced betti {h.dims()} vs predicted {pred.reduced_betti()} ({pred.kind})"
    return True, f"{pred.kind}: reduced betti {h.dims() or '{}'} as predicted"


def _suite_oh_oracle(g, args) -> tuple[bool, str]:
    _check_orientations(g)
    augmented = g.m == 0
    for flips in range(1 << g.m):
        t = oriented_homology(g, flips, args.over, augmented=augmented)
        hist = freeflow_histogram(g, flips).as_table(g.m)
        if t.dims != hist:
            return False, f"base flip {flips:b}: oriented homology {t.dims} vs free-flow histogram {hist}"
    return True, f"oriented homology equals the free-flow histogram for all {1 << g.m} base orientations"


SUITE_FUNCS: dict[str, Callable] = {
    "signs": _suite_signs, "dsq": _suite_dsq, "iso-sr": _suite_iso_sr, "decomposition": _suite_decomposition,
    "match-multipath": _suite_match_multipath, "wedge": _suite_wedge, "oh-oracle": _suite_oh_oracle,
}


def _random_graphs(seed: int, count: int) -> list[OrientedGraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, 4)
        out.append(random_digraph(rng, n, rng.randint(0, min(5, n * (n - 1) // 2))))
    return out


def cmd_verify(g: OrientedGraph | None, args) -> Outcome:
    suites = SUITES if args.suite == "all" else (args.suite,)
    graphs: list[tuple[str, OrientedGraph]] = []
    if g is not None:
        graphs.append((args.graph, g))
    if args.random:
        graphs += [(f"random[{k}]", h) for k, h in enumerate(_random_graphs(args.seed, args.random))]
    results = []
    text = []
    if args.random:
        text.append(f"seed: {args.seed}")
    ok = True
    for name, h in graphs:
        for suite in suites:
            passed, msg = SUITE_FUNCS[suite](h, args)
            ok &= passed
            results.append({"graph": name, "suite": suite, "passed": passed, "detail": msg})
            text.append(f"[{'PASS' if passed else 'FAIL'}] {suite} on {name}: {msg}")
    report = {"seed": args.seed if args.random else None, "results": results, "passed": ok}
    return Outcome(report, text, ok)


COMMANDS = {
    "info": cmd_info, "free-flow": cmd_free_flow, "source-resolution": cmd_source_resolution,
    "complex": cmd_complex, "cohomology": cmd_cohomology, "oriented-homology": cmd_oriented_homology,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing

def _coeff(value: str) -> str:
    try:
        parse_coefficients(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monocoh", description="Monotone cohomology, matching complexes and "
                                                            "oriented homology of directed graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, graph_optional: bool = False) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("graph", nargs="?" if graph_optional else None, help="graph file (v/e line format)")
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        return sp

    add("info", "degrees, components, free-flow status")
    sp = add("free-flow", "list free-flow orientations of the underlying graph")
    sp.add_argument("--count", action="store_true", help="only print the count")
    sp = add("source-resolution", "print the source resolution as a graph file")
    sp.add_argument("-o", "--output", help="write the graph file here")
    sp = add("complex", "build a simplicial complex")
    sp.add_argument("--kind", required=True, choices=COMPLEX_KINDS)
    sp.add_argument("--homology", type=_coeff, metavar="{q,z,fp:p}", help="also compute reduced homology")
    sp.add_argument("--predict", action="store_true", help="compare with the wedge-of-spheres prediction")
    sp.add_argument("--max-cycles", type=int, help="cycle bound for oriented-matching-filtered")
    for name, help_text, opt in (("cohomology", "monotone cohomology with algebra coefficients", False),
                                 ("verify", "run a verification suite", True)):
        sp = add(name, help_text, opt)
        sp.add_argument("--algebra", default="trunc:2", help="ground, trunc:<n> or file:<path> (default trunc:2)")
        sp.add_argument("--variant", choices=("identity", "zero"), default="identity")
        sp.add_argument("--over", type=_coeff, default="q", metavar="{q,z,fp:p}")
        if name == "cohomology":
            sp.add_argument("--property", required=True, choices=COHOMOLOGY_PROPERTIES)
        else:
            sp.add_argument("--suite", required=True, choices=SUITES + ("all",))
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
            sp.add_argument("--random", type=int, default=0, metavar="N", help="also run on N seeded random digraphs")
    sp = add("oriented-homology", "bigraded oriented homology and the free-flow histogram")
    sp.add_argument("--flip", help="base orientation: edges to reverse (indices or a-b pairs, comma-separated)")
    sp.add_argument("--over", type=_coeff, default="q", metavar="{q,fp:p}")
    return p


def _emit(outcome: Outcome, as_json: bool, stream) -> None:
    if as_json:
        stream.write(json.dumps(outcome.report, sort_keys=True, indent=2, default=str) + "\n")
    else:
        stream.write("\n".join(outcome.text) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "oriented-homology" and parse_coefficients(args.over) == "z":
            raise UsageError("oriented homology is computed over a field; use --over q or fp:<p>")
        if args.graph is None:
            if args.command != "verify" or not args.random:
                raise UsageError("a graph file is required (or --random N for verify)")
            g = None
        else:
            g = load_graph(args.graph)
        outcome = COMMANDS[args.command](g, args)
    except CompositionError as exc:
        print(f"monocoh: internal consistency: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (UsageError, GraphFormatError, AlgebraError, PosetError, OSError, ValueError) as exc:
        kind = type(exc).__name__
        prefix = {"GraphFormatError": "graph file", "AlgebraError": "algebra", "PosetSizeError": "size guard",
                  "PosetError": "poset", "OSError": "file"}.get(kind, "error")
        if isinstance(exc, OSError):
            prefix = "file"
        print(f"monocoh: {prefix}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(outcome, args.json, sys.stdout)
    return EXIT_OK if outcome.ok else EXIT_MISMATCH


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
