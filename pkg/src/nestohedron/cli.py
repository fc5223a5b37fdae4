"""Command-line interface.

Every command reads a building (or, with ``--graph``, a graph) as JSON.
Without ``--output`` the artifact goes to stdout in the chosen format; with
``--output DIR`` artifacts are written there and a short human-readable
report (1-based labels) goes to stdout.

Exit codes: 0 success, 1 invalid input or cap violation, 2 a verification
check found a counterexample.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import bitsets
from .bitsets import label, members
from .building import BuildingSet, Graph, from_lists, graphical_from_graph, is_graphical
from .errors import InvalidInput, TooLarge, VerificationError
from .fan import QuotientLattice, verify_fan
from .nested import DEFAULT_MAX_FACES, DualGraph, check_f_recursion, dual_graph, enumerate_complex
from .polytope import dual_coordinates, realize, verify_normal_fan, vertices

COMMANDS = ("validate", "complex", "fan", "polytope", "verify", "render")
FORMATS = ("json", "dot", "svg")


class InputError(InvalidInput):
    """Unreadable or malformed input file."""


# ---------------------------------------------------------------- input


def _read_text(source: str) -> tuple[str, str]:
    if source == "-":
        return sys.stdin.read(), "<stdin>"
    if source.lstrip().startswith("{"):
        return source, "<inline>"
    try:
        return Path(source).read_text(encoding="utf-8"), source
    except OSError as exc:
        raise InputError(f"{source}: {exc.strerror or exc}") from None


def _parse_json(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _index(x, n: int, what: str, where: str) -> int:
    if type(x) is not int:
        raise InputError(f"{where}: {what} must contain integers, got {x!r}")
    if not 0 <= x < n:
        raise InputError(f"{where}: index {x} in {what} is outside 0..{n - 1}")
    return x


def _size(data: dict, field: str, where: str) -> int:
    n = data.get(field)
    if type(n) is not int or n < 1:
        raise InputError(f"{where}: \"{field}\" must be a positive integer")
    return n


def _expect_keys(data, allowed: set, where: str) -> None:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    extra = sorted(set(data) - allowed)
    if extra:
        raise InputError(f"{where}: unknown field {extra[0]!r}")


def parse_building(data, where: str = "<input>") -> BuildingSet:
    """``{"ground_set": n, "sets": [[i, ...], ...]}`` with 0-based indices."""
    _expect_keys(data, {"ground_set", "sets"}, where)
    n = _size(data, "ground_set", where)
    sets = data.get("sets")
    if not isinstance(sets, list):
        raise InputError(f"{where}: \"sets\" must be a list of lists")
    family = []
    for k, s in enumerate(sets):
        if not isinstance(s, list):
            raise InputError(f"{where}: sets[{k}] is not a list")
        family.append([_index(x, n, f"sets[{k}]", where) for x in s])
    return from_lists(family, n)


def parse_graph(data, where: str = "<input>") -> Graph:
    """``{"vertices": n, "edges": [[i, j], ...]}`` with 0-based indices."""
    _expect_keys(data, {"vertices", "edges"}, where)
    n = _size(data, "vertices", where)
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise InputError(f"{where}: \"edges\" must be a list of pairs")
    seen = set()
    for k, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"{where}: edges[{k}] is not a pair")
        a, c = (_index(x, n, f"edges[{k}]", where) for x in e)
        if a == c:
            raise InputError(f"{where}: edges[{k}] is a loop")
        pair = (min(a, c), max(a, c))
        if pair in seen:
            raise InputError(f"{where}: edges[{k}] repeats an edge")
        seen.add(pair)
    return Graph(n, frozenset(seen))


def load(source: str, graph: bool = False) -> BuildingSet:
    text, where = _read_text(source)
    data = _parse_json(text, where)
    if graph:
        return graphical_from_graph(parse_graph(data, where))
    return parse_building(data, where)


# ---------------------------------------------------------------- output


def subset_json(mask: int) -> list[int]:
    return list(members(mask))


def subset_key(mask: int) -> str:
    return ",".join(str(i) for i in members(mask))


def rational(x) -> str:
    q = Fraction(x)
    return f"{q.numerator}/{q.denominator}"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def complex_json(cx) -> dict:
    return {
        "f_vector": list(cx.f_vector),
        "maximal_faces": [[subset_json(s) for s in n] for n in cx.maximal_faces],
    }


def dual_graph_dot(dg: DualGraph) -> str:
    lines = ["graph dual {"]
    for k, n in enumerate(dg.nodes):
        lines.append(f'  n{k} [label="{bitsets.family_label(n)}"];')
    for a, c, rec in sorted(dg.edges, key=lambda e: (e[0], e[1])):
        lines.append(f'  n{a} -- n{c} [label="{label(rec.i1)}/{label(rec.i2)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def fan_json(ql: QuotientLattice, cx) -> dict:
    return {
        "dim": ql.dim,
        "rays": {subset_key(s): list(ql.ray(s)) for s in cx.vertices},
        "maximal_cones": [[subset_key(s) for s in n] for n in cx.maximal_faces],
    }


def polytope_json(b: BuildingSet, cx) -> dict:
    p = realize(b)
    pts = vertices(p, cx)
    return {
        "equalities": [subset_json(c) for c in p.equalities],
        "inequalities": [{"set": subset_json(s), "rhs": r} for s, r in p.inequalities],
        "vertices": [
            {"nested_set": [subset_json(s) for s in n], "point": [rational(v) for v in x]}
            for n, x in pts.items()
        ],
    }


def validate_json(b: BuildingSet) -> dict:
    graphical, g = is_graphical(b)
    out = {
        "components": [subset_json(c) for c in b.components],
        "graphical": graphical,
        "ground_set": b.n,
        "rank": b.rank,
        "sets": [subset_json(s) for s in b.sets],
    }
    if graphical:
        out["edges"] = [list(e) for e in g.sorted_edges()]
    return out


# ---------------------------------------------------------------- svg


def _cycle_order(dg: DualGraph) -> list[int]:
    """Nodes of a cycle graph in traversal order (a path or point for rank < 2)."""
    adj = dg.adjacency()
    if not adj:
        return []
    start = min(range(len(adj)), key=lambda k: (len(adj[k]), k))
    order, prev = [start], None
    while True:
        nxt = [k for k in adj[order[-1]] if k != prev and k not in order]
        if not nxt:
            return order
        prev = order[-1]
        order.append(nxt[0])


def _panel(points: Sequence[tuple[float, float]], cx: float, cy: float, radius: float):
    scale = max((math.hypot(x, y) for x, y in points), default=0.0) or 1.0
    return [(cx + radius * x / scale, cy - radius * y / scale) for x, y in points]


def _pad(v: Sequence) -> tuple[float, float]:
    w = [float(x) for x in v] + [0.0, 0.0]
    return w[0], w[1]


def render_svg(b: BuildingSet, cx, dg: DualGraph) -> str:
    """Fan (left) and polytope (right) in the lattice and dual coordinates."""
    ql = QuotientLattice(b)
    size, r = 320, 120
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * size}" height="{size}" '
        f'viewBox="0 0 {2 * size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    # fan
    c0 = (size / 2, size / 2)
    rays = [_pad(ql.ray(s)) for s in cx.vertices]
    ends = _panel(rays, c0[0], c0[1], r)
    for s, (x, y) in zip(cx.vertices, ends):
        out.append(
            f'<line x1="{c0[0]:.3f}" y1="{c0[1]:.3f}" x2="{x:.3f}" y2="{y:.3f}" '
            'stroke="black" stroke-width="2"/>'
        )
        lx, ly = c0[0] + 1.15 * (x - c0[0]), c0[1] + 1.15 * (y - c0[1])
        out.append(
            f'<text x="{lx:.3f}" y="{ly:.3f}" font-size="14" text-anchor="middle" '
            f'dominant-baseline="middle">{label(s)}</text>'
        )
    out.append(f'<circle cx="{c0[0]:.3f}" cy="{c0[1]:.3f}" r="3" fill="black"/>')
    # polytope, vertices in dual-graph cycle order
    pts = vertices(realize(b), cx)
    order = _cycle_order(dg)
    corners = [_pad(dual_coordinates(ql, pts[dg.nodes[k]])) for k in order]
    mid = (size + size / 2, size / 2)
    placed = _panel(corners, mid[0], mid[1], r)
    poly = " ".join(f"{x:.3f},{y:.3f}" for x, y in placed)
    if len(placed) >= 3:
        out.append(f'<polygon points="{poly}" fill="#cfe3f5" stroke="black" stroke-width="2"/>')
    elif len(placed) == 2:
        out.append(f'<polyline points="{poly}" fill="none" stroke="black" stroke-width="2"/>')
    for x, y in placed:
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- commands


def _complex(b: BuildingSet, args):
    return enumerate_complex(b, max_faces=args.max_faces)


def cmd_validate(b, args):
    data = validate_json(b)
    lines = [
        "components: " + " ".join(label(c) for c in b.components),
        f"rank: {b.rank}",
        "graphical: " + ("yes" if data["graphical"] else "no"),
    ]
    if data["graphical"]:
        lines.append("edges: " + " ".join(f"{{{a + 1},{c + 1}}}" for a, c in data["edges"]))
    if args.format == "json":
        return {"validate.json": dumps(data)}, lines
    return {"validate.txt": "\n".join(lines) + "\n"}, lines


def cmd_complex(b, args):
    cx = _complex(b, args)
    dg = dual_graph(b, cx)
    files = {"complex.json": dumps(complex_json(cx)), "dual_graph.dot": dual_graph_dot(dg)}
    lines = [
        "f-vector: " + " ".join(str(x) for x in cx.f_vector),
        f"maximal nested sets: {len(cx.maximal_faces)}",
        f"dual graph edges: {len(dg.edges)}",
    ]
    return files, lines


def cmd_fan(b, args):
    cx = _complex(b, args)
    ql = QuotientLattice(b)
    lines = [f"dim: {ql.dim}", f"rays: {len(cx.vertices)}", f"maximal cones: {len(cx.maximal_faces)}"]
    return {"fan.json": dumps(fan_json(ql, cx))}, lines


def cmd_polytope(b, args):
    cx = _complex(b, args)
    data = polytope_json(b, cx)
    lines = [
        f"equalities: {len(data['equalities'])}",
        f"inequalities: {len(data['inequalities'])}",
        f"vertices: {len(data['vertices'])}",
    ]
    return {"polytope.json": dumps(data)}, lines


def cmd_verify(b, args):
    cx = _complex(b, args)
    dg = dual_graph(b, cx)
    ql = QuotientLattice(b)
    fan = verify_fan(ql, samples=args.samples, seed=args.seed, cx=cx)
    nf = verify_normal_fan(b, cx, dg)
    check_f_recursion(b, cx)
    report = {
        "dual_graph": {"nodes": len(dg.nodes), "edges": len(dg.edges)},
        "f_recursion": True,
        "f_vector": list(cx.f_vector),
        "fan": fan.as_dict(),
        "normal_fan": nf.as_dict(),
    }
    lines = [
        f"fan: {fan.cones} cones, {fan.pairs} pairs, {fan.samples} samples ok",
        f"normal fan: {nf.vertices} vertices, {nf.edges} edges, min margin {nf.min_margin}",
        "f-vector recursion: ok",
    ]
    if args.oracle:
        from .oracle import compare_all

        try:
            rep = compare_all(b, samples=20, seed=args.seed)
        except TooLarge as exc:
            report["oracle"] = {"skipped": str(exc)}
            lines.append(f"oracle: skipped ({exc})")
        else:
            report["oracle"] = {"checks": rep.checks, "passed": rep.passed}
            if not rep.passed:
                raise VerificationError(
                    f"oracle disagrees on {rep.checks[-1]}", witness=rep.witness
                )
            lines.append("oracle: " + ", ".join(rep.checks) + " ok")
    return {"verify.json": dumps(report)}, lines


def cmd_render(b, args):
    cx = _complex(b, args)
    if b.rank > 2 or args.format == "json":
        ql = QuotientLattice(b)
        data = {"fan": fan_json(ql, cx), "polytope": polytope_json(b, cx)}
        return {"render.json": dumps(data)}, [f"rank {b.rank}: wrote JSON"]
    dg = dual_graph(b, cx)
    return {"render.svg": render_svg(b, cx, dg)}, [f"rank {b.rank}: wrote SVG"]


HANDLERS = {
    "validate": cmd_validate,
    "complex": cmd_complex,
    "fan": cmd_fan,
    "polytope": cmd_polytope,
    "verify": cmd_verify,
    "render": cmd_render,
}


def _pick(files: dict[str, str], fmt: str | None) -> str:
    """The artifact that goes to stdout when no output directory is given."""
    if fmt is not None:
        for name in sorted(files):
            if name.endswith("." + fmt):
                return files[name]
        raise InvalidInput(f"format {fmt} is not available for this command")
    return files[sorted(files)[0]]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nestohedron", description="Nested set complexes, fans and polytopes."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, metavar="FILE",
                        help="JSON file, '-' for stdin, or an inline JSON object")
    parser.add_argument("--graph", action="store_true", help="input is a graph")
    parser.add_argument("--output", metavar="DIR", help="write artifacts into DIR")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--max-faces", type=int, default=DEFAULT_MAX_FACES)
    parser.add_argument("--oracle", action="store_true", help="also run brute-force oracles")
    parser.add_argument("--format", choices=FORMATS)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    if args.samples < 0 or args.max_faces < 0:
        print("error: --samples and --max-faces must be nonnegative", file=sys.stderr)
        return 1
    try:
        b = load(args.input, graph=args.graph)
        files, lines = HANDLERS[args.command](b, args)
        stdout = None if args.output else _pick(files, args.format)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness (0-based masks): {exc.witness!r}", file=sys.stderr)
        return 2
    except (InvalidInput, TooLarge) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for name in sorted(files):
            (out / name).write_text(files[name], encoding="utf-8")
        for line in lines:
            print(line)
    else:
        sys.stdout.write(stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
