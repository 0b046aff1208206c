"""Deterministic constructors for the canonical comparison topologies.

Spec strings (CLI grammar)::

    ring:N  wagner:N  bidiakis:N  chvatal  circulant:N:o1,o2,...
    torus:d1xd2x...  hypercube:D  dragonfly:a,h
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .errors import BadParams, OverlapEdge, ParseError
from .graph import RegularGraph, build_graph

# Chvátal graph, 12 vertices, 4-regular, triangle-free.
CHVATAL_EDGES = (
    (0, 1), (0, 4), (0, 6), (0, 9), (1, 2), (1, 5), (1, 7), (2, 3), (2, 6), (2, 8),
    (3, 4), (3, 7), (3, 9), (4, 5), (4, 8), (5, 10), (5, 11), (6, 10), (6, 11),
    (7, 8), (7, 11), (8, 10), (9, 10), (9, 11),
)

KINDS = ("ring", "wagner", "bidiakis", "chvatal", "circulant", "torus", "hypercube", "dragonfly")


@dataclass(frozen=True)
class TopologySpec:
    kind: str
    params: tuple = ()

    def __str__(self) -> str:
        p = self.params
        if self.kind == "chvatal":
            return "chvatal"
        if self.kind == "circulant":
            return f"circulant:{p[0]}:{','.join(map(str, p[1]))}"
        if self.kind == "torus":
            return "torus:" + "x".join(map(str, p))
        if self.kind == "dragonfly":
            return f"dragonfly:{p[0]},{p[1]}"
        return f"{self.kind}:{p[0]}"

    @classmethod
    def parse(cls, text: str) -> TopologySpec:
        return parse_spec(text)


def parse_spec(text: str) -> TopologySpec:
    kind, _, rest = text.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "chvatal" and not rest:
            return TopologySpec("chvatal")
        if kind in ("ring", "wagner", "bidiakis", "hypercube"):
            return TopologySpec(kind, (int(rest),))
        if kind == "torus":
            return TopologySpec(kind, tuple(int(x) for x in rest.split("x")))
        if kind == "dragonfly":
            a, h = rest.split(",")
            return TopologySpec(kind, (int(a), int(h)))
        if kind == "circulant":
            n, offs = rest.split(":")
            return TopologySpec(kind, (int(n), tuple(int(x) for x in offs.split(","))))
    except ValueError:
        raise ParseError(f"malformed topology spec {text!r}") from None
    raise ParseError(f"unknown topology spec {text!r}; kinds: {', '.join(KINDS)}")


def ring(n: int) -> RegularGraph:
    if n < 3:
        raise BadParams(f"ring needs n >= 3, got {n}")
    return build_graph(n, 2, [(i, (i + 1) % n) for i in range(n)], ring=True, name=f"ring:{n}")


def _ring_plus_chords(n: int, k: int, chords, name: str) -> RegularGraph:
    ring_edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    chord_set = set()
    for u, v in chords:
        e = tuple(sorted((u % n, v % n)))
        if e in ring_edges or e[0] == e[1]:
            raise OverlapEdge(f"{name}: chord {e} coincides with a ring edge")
        chord_set.add(e)
    return build_graph(n, k, sorted(ring_edges | chord_set), ring=True, name=name)


def wagner(n: int) -> RegularGraph:
    """Möbius ladder: even cycle plus antipodal chords."""
    if n < 4 or n % 2:
        raise BadParams(f"wagner needs even n >= 4, got {n}")
    return _ring_plus_chords(n, 3, [(i, i + n // 2) for i in range(n // 2)], f"wagner:{n}")


def bidiakis(n: int) -> RegularGraph:
    """Cubic Hamiltonian graph with LCF pattern [n/2, 4, -4] repeated n/3 times.

    At n = 12 this is the Bidiakis cube.
    """
    if n < 6 or n % 6:
        raise BadParams(f"bidiakis needs n divisible by 6, got {n}")
    pattern = (n // 2, 4, -4)
    chords = {tuple(sorted((j, (j + pattern[j % 3]) % n))) for j in range(n)}
    if len(chords) != n // 2:
        raise OverlapEdge(f"bidiakis:{n}: LCF chords do not form a perfect matching")
    return _ring_plus_chords(n, 3, chords, f"bidiakis:{n}")


def chvatal() -> RegularGraph:
    return build_graph(12, 4, CHVATAL_EDGES, name="chvatal")


def circulant(n: int, offsets) -> RegularGraph:
    offsets = tuple(offsets)
    if n < 3 or len(set(offsets)) != len(offsets) or any(not 1 <= o <= n // 2 for o in offsets):
        raise BadParams(f"circulant offsets must be distinct and in [1, {n // 2}]: {offsets}")
    k = sum(1 if 2 * o == n else 2 for o in offsets)
    edges = {tuple(sorted((i, (i + o) % n))) for i in range(n) for o in offsets}
    name = f"circulant:{n}:{','.join(map(str, offsets))}"
    return build_graph(n, k, sorted(edges), ring=1 in offsets, name=name)


def torus(dims) -> RegularGraph:
    """k-ary n-cube with row-major vertex ids (last coordinate fastest)."""
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 3 for d in dims):
        raise BadParams(f"torus dims must all be >= 3, got {dims}")
    n = prod(dims)
    strides = [prod(dims[i + 1:]) for i in range(len(dims))]
    edges = set()
    for v in range(n):
        for d, s in zip(dims, strides):
            c = (v // s) % d
            w = v + (((c + 1) % d) - c) * s
            edges.add((min(v, w), max(v, w)))
    return build_graph(n, 2 * len(dims), sorted(edges), name="torus:" + "x".join(map(str, dims)))


def hypercube(d: int) -> RegularGraph:
    if d < 1:
        raise BadParams(f"hypercube needs d >= 1, got {d}")
    n = 1 << d
    if n < 3:
        raise BadParams("hypercube(1) has 2 vertices; graphs need n >= 3")
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)]
    return build_graph(n, d, edges, name=f"hypercube:{d}")


def dragonfly(a: int, h: int) -> RegularGraph:
    """Groups of ``a`` fully connected routers, ``h`` global links per router.

    There are g = a*h + 1 groups and exactly one global link between every
    pair of groups. Global port p = r*h + j of group G points at group
    G + p + 1 (mod g); its peer is port a*h - 1 - p of that group.
    """
    if a < 2 or h < 1:
        raise BadParams(f"dragonfly needs a >= 2, h >= 1, got a={a}, h={h}")
    g = a * h + 1
    n = a * g
    edges = set()
    for grp in range(g):
        base = grp * a
        for r in range(a):
            for s in range(r + 1, a):
                edges.add((base + r, base + s))
        for p in range(a * h):
            other = (grp + p + 1) % g
            q = a * h - 1 - p
            u, v = base + p // h, other * a + q // h
            edges.add((min(u, v), max(u, v)))
    return build_graph(n, a - 1 + h, sorted(edges), name=f"dragonfly:{a},{h}")


def dragonfly_params(n: int, k: int) -> tuple[int, int] | None:
    """Invert N = a(ah+1), k = a-1+h; largest ``a`` wins. None if no solution."""
    for a in range(k + 1, 1, -1):
        h = k - a + 1
        if h >= 1 and a * (a * h + 1) == n:
            return a, h
    return None


def generate(spec: TopologySpec | str) -> RegularGraph:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    p = spec.params
    kind = spec.kind
    if kind == "ring":
        return ring(*p)
    if kind == "wagner":
        return wagner(*p)
    if kind == "bidiakis":
        return bidiakis(*p)
    if kind == "chvatal":
        return chvatal()
    if kind == "circulant":
        return circulant(*p)
    if kind == "torus":
        return torus(p)
    if kind == "hypercube":
        return hypercube(*p)
    if kind == "dragonfly":
        return dragonfly(*p)
    raise BadParams(f"unknown topology kind {kind!r}")
