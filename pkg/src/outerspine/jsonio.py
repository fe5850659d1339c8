"""JSON (de)serialization for graphs, automorphisms and currents.

Graph files carry rank, vertices, edges (id/from/to/length), basepoint and
the marking as oriented-edge strings ("e1+", "e2-").  The comarking is not
stored: it is recomputed on load by expressing each marking loop in the
based-loop basis of a deterministic spanning tree and inverting that basis
(words.invert_basis), then verified exactly by the graph constructor.

Edge lengths given as decimal strings round-trip bit-exactly; numeric
lengths are re-emitted as their shortest float form.
"""

from __future__ import annotations

import json
from typing import Any

from .currents import RationalCurrent
from .graphs import Edge, MarkedGraph, OrientedEdge
from .words import (
    _LETTER_NAMES,
    Automorphism,
    NielsenMove,
    Word,
    format_word,
    invert_basis,
    parse_word,
)

FORMAT = 1


def _check_format(data: dict, what: str) -> None:
    v = data.get("format", FORMAT)
    if v != FORMAT:
        raise ValueError(f"unsupported {what} format {v!r} (expected {FORMAT})")


# -- oriented edge strings ----------------------------------------------------


def _parse_step(s: str) -> OrientedEdge:
    if len(s) < 2 or s[-1] not in "+-":
        raise ValueError(f"malformed oriented edge {s!r} (want e.g. 'e1+')")
    return s[:-1], 1 if s[-1] == "+" else -1


def _format_step(step: OrientedEdge) -> str:
    return step[0] + ("+" if step[1] > 0 else "-")


# -- graphs --------------------------------------------------------------------


def graph_to_obj(g: MarkedGraph) -> dict:
    edges = []
    for e in g.edges:
        length: Any = e.raw_length if e.raw_length is not None else e.length
        edges.append({"id": e.id, "from": e.src, "to": e.dst, "length": length})
    marking = {
        _LETTER_NAMES[k]: [_format_step(s) for s in g.marking[k]]
        for k in range(g.rank)
    }
    return {
        "format": FORMAT,
        "rank": g.rank,
        "vertices": list(g.vertices),
        "edges": edges,
        "basepoint": g.basepoint,
        "marking": marking,
    }


def _bfs_tree(adj: dict[str, list[tuple[str, str]]], base: str, n_vertices: int) -> set[str]:
    """First-edge-by-id spanning tree, deterministic in the input graph."""
    seen = {base}
    tree: set[str] = set()
    frontier = [base]
    while frontier:
        nxt = []
        for v in frontier:
            for eid, u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    tree.add(eid)
                    nxt.append(u)
        frontier = nxt
    if len(seen) != n_vertices:
        raise ValueError("graph is not connected")
    return tree


def graph_from_obj(data: dict) -> MarkedGraph:
    _check_format(data, "graph")
    rank = int(data["rank"])
    edges = []
    for e in data["edges"]:
        raw = e["length"]
        if isinstance(raw, str):
            edges.append(Edge(e["id"], e["from"], e["to"], float(raw), raw))
        else:
            edges.append(Edge(e["id"], e["from"], e["to"], float(raw)))
    basepoint = data["basepoint"]
    marking_paths = []
    for k in range(rank):
        name = _LETTER_NAMES[k]
        if name not in data["marking"]:
            raise ValueError(f"marking lacks generator {name!r}")
        marking_paths.append(tuple(_parse_step(s) for s in data["marking"][name]))

    declared = set(data.get("vertices", []))
    touched = {e.src for e in edges} | {e.dst for e in edges}
    if declared and declared != touched:
        raise ValueError("vertex list disagrees with edge endpoints")

    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in sorted(touched)}
    for e in sorted(edges, key=lambda e: e.id):
        adj[e.src].append((e.id, e.dst))
        adj[e.dst].append((e.id, e.src))
    for v in adj:
        adj[v].sort()
    tree = _bfs_tree(adj, basepoint, len(touched))

    # express each marking loop in the based-loop basis of the non-tree edges
    nontree = sorted(e.id for e in edges if e.id not in tree)
    if len(nontree) != rank:
        raise ValueError(
            f"first Betti number {len(nontree)} does not match rank {rank}"
        )
    index = {eid: j + 1 for j, eid in enumerate(nontree)}
    basis_words = []
    for path in marking_paths:
        letters = [index[eid] * s for eid, s in path if eid in index]
        basis_words.append(Word(rank, letters))

    inverse = invert_basis(basis_words)  # raises if the marking is no basis
    comarking = {eid: Word(rank) for eid in tree}
    for j, eid in enumerate(nontree):
        comarking[eid] = inverse[j]

    return MarkedGraph(rank, edges, basepoint, marking_paths, tree, comarking)


def dump_graph(g: MarkedGraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(graph_to_obj(g)))


def load_graph(path: str) -> MarkedGraph:
    with open(path) as fh:
        return graph_from_obj(json.load(fh))


# -- automorphisms ---------------------------------------------------------------


_KINDS = {"invert", "transpose", "right_multiply"}


def automorphism_to_obj(phi: Automorphism) -> dict:
    if phi.moves is None:
        return {
            "format": FORMAT,
            "rank": phi.rank,
            "images": [format_word(w) for w in phi.image_words()],
        }
    moves = []
    for m in phi.moves:
        entry: dict[str, Any] = {"kind": m.kind, "target": _LETTER_NAMES[m.target - 1]}
        if m.kind != "invert":
            entry["by"] = _LETTER_NAMES[m.other - 1]
        if m.kind == "right_multiply":
            entry["inverse"] = m.inverse
        moves.append(entry)
    return {"format": FORMAT, "rank": phi.rank, "moves": moves}


def automorphism_from_obj(data: dict) -> Automorphism:
    _check_format(data, "automorphism")
    rank = int(data["rank"])
    if "moves" in data:
        moves = []
        for m in data["moves"]:
            kind = m["kind"]
            if kind not in _KINDS:
                raise ValueError(f"unknown move kind {kind!r}")
            target = _LETTER_NAMES.index(m["target"]) + 1
            other = _LETTER_NAMES.index(m["by"]) + 1 if "by" in m else None
            moves.append(
                NielsenMove(kind, target, other, bool(m.get("inverse", False)))
            )
        return Automorphism.from_moves(rank, moves)
    if "images" in data:
        return Automorphism.from_images(
            rank, [parse_word(s, rank) for s in data["images"]]
        )
    raise ValueError("automorphism needs 'moves' or 'images'")


def load_automorphism(path: str) -> Automorphism:
    with open(path) as fh:
        return automorphism_from_obj(json.load(fh))


# -- currents ----------------------------------------------------------------------


def current_to_obj(nu: RationalCurrent) -> dict:
    atoms = [
        {"class": format_word(Word(nu.rank, letters)), "weight": weight}
        for letters, weight in nu.atoms
    ]
    return {"format": FORMAT, "rank": nu.rank, "atoms": atoms}


def current_from_obj(data: dict) -> RationalCurrent:
    _check_format(data, "current")
    atoms = data["atoms"]
    if "rank" in data:
        rank = int(data["rank"])
    else:
        rank = 2
        for a in atoms:
            for ch in a["class"]:
                if ch.lower() in _LETTER_NAMES:
                    rank = max(rank, _LETTER_NAMES.index(ch.lower()) + 1)
    pairs = [(parse_word(a["class"], rank), float(a["weight"])) for a in atoms]
    return RationalCurrent(rank, pairs)


def dump_current(nu: RationalCurrent, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(current_to_obj(nu)))


def load_current(path: str) -> RationalCurrent:
    with open(path) as fh:
        return current_from_obj(json.load(fh))


# -- shared helpers -------------------------------------------------------------------


def dumps(obj: dict) -> str:
    """Canonical file form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
