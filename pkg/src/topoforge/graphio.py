"""Edge-list, JSON and DOT serialisation of RegularGraph."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseError
from .graph import RegularGraph, build_graph


def to_edgelist(g: RegularGraph) -> str:
    lines = [f"{g.n} {g.k} {int(g.ring)}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str, name: str = "") -> RegularGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 3:
        raise ParseError("edge-list header must be 'N k R'")
    try:
        n, k, r = (int(x) for x in rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise ParseError(f"malformed edge list: {exc}") from None
    if r not in (0, 1):
        raise ParseError(f"ring flag must be 0 or 1, got {r}")
    return build_graph(n, k, edges, ring=bool(r), name=name)


def to_json_doc(g: RegularGraph) -> dict:
    return {"name": g.name, "n": g.n, "k": g.k, "ring": g.ring, "edges": [list(e) for e in g.edges]}


def to_json(g: RegularGraph) -> str:
    return json.dumps(to_json_doc(g), indent=None, separators=(",", ":")) + "\n"


def from_json_doc(doc: dict) -> RegularGraph:
    try:
        return build_graph(doc["n"], doc["k"], [tuple(e) for e in doc["edges"]],
                           ring=bool(doc.get("ring", False)), name=doc.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed graph document: {exc!r}") from None


def to_dot(g: RegularGraph) -> str:
    ring = g.ring_edges()
    label = g.name or f"g{g.n}_{g.k}"
    out = [f'graph "{label}" {{']
    for v in range(g.n):
        out.append(f"  {v};")
    for u, v in g.edges:
        attr = " [style=bold]" if (u, v) in ring else ""
        out.append(f"  {u} -- {v}{attr};")
    out.append("}")
    return "\n".join(out) + "\n"


def load_graph(path: str | Path) -> RegularGraph:
    """Read a graph file; ``.json`` is parsed as a graph document, anything
    else as an edge list named after the file stem."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if path.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
        return from_json_doc(doc)
    return parse_edgelist(text, name=path.stem)


def write_graph_files(g: RegularGraph, stem: str | Path) -> list[Path]:
    """Write ``stem.edges``, ``stem.json`` and ``stem.dot``; return the paths."""
    stem = Path(stem)
    if stem.parent != Path("."):
        stem.parent.mkdir(parents=True, exist_ok=True)
    outputs = [
        (stem.with_name(stem.name + ".edges"), to_edgelist(g)),
        (stem.with_name(stem.name + ".json"), to_json(g)),
        (stem.with_name(stem.name + ".dot"), to_dot(g)),
    ]
    for p, text in outputs:
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return [p for p, _ in outputs]
