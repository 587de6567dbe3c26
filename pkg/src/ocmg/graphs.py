"""Immutable graph core: adjacency, distances, balls, deletion chains, I/O.

Vertex classes: "key" vertices are the retained soccer-ball vertices, all
other vertices are "added" and belong to exactly one face.  Vertex sets are
plain Python ints used as bitsets (bit i = vertex i).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

KEY = 0
ADDED = 1

UNREACHABLE = 0xFFFF


class GraphError(ValueError):
    pass


def bits(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class FaceRecord:
    face_id: int
    kind: str  # "pentagon" | "hexagon"
    boundary_key_vertices: tuple[int, ...]
    added_vertices: tuple[int, ...]


@dataclass(frozen=True)
class EmbeddingAtlas:
    coords: tuple[tuple[float, float], ...]
    faces: tuple[tuple[int, ...], ...]  # facial cycles of the embedding

    def euler_characteristic(self, n_vertices: int, n_edges: int) -> int:
        return n_vertices - n_edges + len(self.faces)


class Graph:
    """Undirected graph with per-vertex class tags and an optional face map.

    Adjacency is immutable after construction; derived tables (distance
    matrix, neighbor bitsets) are memoised and safe for concurrent readers.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        vertex_class: Optional[Sequence[int]] = None,
        face_of: Optional[Sequence[Optional[int]]] = None,
        name: str = "",
    ):
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop edge at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in adj)
        self.vertex_class = tuple(vertex_class) if vertex_class is not None else tuple([ADDED] * n)
        self.face_of = tuple(face_of) if face_of is not None else tuple([None] * n)
        self.name = name
        self._nbr_bits: Optional[list[int]] = None
        self._dist: Optional[np.ndarray] = None

    # -- basic accessors ---------------------------------------------------

    def __repr__(self) -> str:
        return f"Graph({self.name or 'unnamed'}, n={self.n}, m={self.edge_count})"

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def key_vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.vertex_class[v] == KEY]

    def neighbor_bits(self, v: int) -> int:
        if self._nbr_bits is None:
            self._nbr_bits = [bits(a) for a in self.adj]
        return self._nbr_bits[v]

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"unknown vertex {v}")

    # -- metric ------------------------------------------------------------

    def bfs_from(self, source: int) -> np.ndarray:
        self._check_vertex(source)
        dist = np.full(self.n, UNREACHABLE, dtype=np.uint16)
        dist[source] = 0
        q = deque([source])
        adj = self.adj
        while q:
            u = q.popleft()
            du = dist[u] + 1
            for w in adj[u]:
                if dist[w] == UNREACHABLE:
                    dist[w] = du
                    q.append(w)
        return dist

    @property
    def dist(self) -> np.ndarray:
        """All-pairs distance matrix (uint16, UNREACHABLE for disconnected)."""
        if self._dist is None:
            d = np.empty((self.n, self.n), dtype=np.uint16)
            for v in range(self.n):
                d[v] = self.bfs_from(v)
            self._dist = d
        return self._dist

    def distance(self, u: int, v: int) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        if self._dist is not None:
            return int(self._dist[u, v])
        return int(self.bfs_from(u)[v])

    def ball(self, center: int, radius: int, excluded: int = 0) -> int:
        """Bitset of vertices within `radius` of center, minus `excluded`."""
        if radius < 0:
            raise GraphError("radius must be >= 0")
        self._check_vertex(center)
        d = self.dist[center] if self._dist is not None else self.bfs_from(center)
        m = 0
        for v in np.flatnonzero(d <= radius):
            m |= 1 << int(v)
        return m & ~excluded

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return int((self.bfs_from(0) != UNREACHABLE).sum()) == self.n

    def component_masks(self, forbidden: int = 0) -> list[int]:
        """Connected components of the graph minus `forbidden` vertices."""
        seen = forbidden
        comps = []
        for v in range(self.n):
            if (seen >> v) & 1:
                continue
            comp = 1 << v
            frontier = [v]
            seen |= 1 << v
            while frontier:
                nxt = []
                for u in frontier:
                    for w in self.adj[u]:
                        if not (seen >> w) & 1:
                            seen |= 1 << w
                            comp |= 1 << w
                            nxt.append(w)
                frontier = nxt
            comps.append(comp)
        return comps

    # -- structure ---------------------------------------------------------

    def cut_vertices(self) -> int:
        """Articulation points, as a bitset (Hopcroft-Tarjan, iterative)."""
        if not self.is_connected():
            raise GraphError("cut_vertices requires a connected graph")
        n = self.n
        disc = [-1] * n
        low = [0] * n
        parent = [-1] * n
        result = 0
        timer = 0
        for root in range(n):
            if disc[root] != -1:
                continue
            stack = [(root, iter(self.adj[root]))]
            disc[root] = low[root] = timer
            timer += 1
            root_children = 0
            while stack:
                v, it = stack[-1]
                advanced = False
                for w in it:
                    if disc[w] == -1:
                        parent[w] = v
                        disc[w] = low[w] = timer
                        timer += 1
                        if v == root:
                            root_children += 1
                        stack.append((w, iter(self.adj[w])))
                        advanced = True
                        break
                    elif w != parent[v]:
                        low[v] = min(low[v], disc[w])
                if not advanced:
                    stack.pop()
                    if stack:
                        p = stack[-1][0]
                        low[p] = min(low[p], low[v])
                        if p != root and low[v] >= disc[p]:
                            result |= 1 << p
            if root_children > 1:
                result |= 1 << root
        return result

    def delete_vertex(self, v: int) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on V-{v}; returns (graph, old->new index map)."""
        self._check_vertex(v)
        remap = {}
        for u in range(self.n):
            if u != v:
                remap[u] = len(remap)
        edges = [(remap[a], remap[b]) for a, b in self.edges() if a != v and b != v]
        cls = [self.vertex_class[u] for u in range(self.n) if u != v]
        fo = [self.face_of[u] for u in range(self.n) if u != v]
        g = Graph(self.n - 1, edges, cls, fo, name=f"{self.name}-{v}")
        return g, remap

    def deletion_chain(self) -> list[tuple[int, "Graph"]]:
        """Delete non-cut vertices (smallest eligible id first) down to K1.

        Returned ids refer to the graph at the step where the deletion
        happened (indices shift after each deletion).
        """
        if not self.is_connected():
            raise GraphError("deletion_chain requires a connected graph")
        chain = []
        g = self
        while g.n > 1:
            cuts = g.cut_vertices()
            victim = next(v for v in range(g.n) if not (cuts >> v) & 1)
            g, _ = g.delete_vertex(victim)
            chain.append((victim, g))
        return chain

    # -- exports -----------------------------------------------------------

    def to_json(self, faces: Sequence[FaceRecord] = (), atlas: Optional[EmbeddingAtlas] = None) -> str:
        doc = {
            "n": self.n,
            "edges": sorted([u, v] for u, v in self.edges()),
            "key": self.key_vertices(),
            "faces": [
                {
                    "id": f.face_id,
                    "kind": f.kind,
                    "boundary": list(f.boundary_key_vertices),
                    "added": list(f.added_vertices),
                }
                for f in faces
            ],
            "coords": [list(c) for c in atlas.coords] if atlas else None,
        }
        return json.dumps(doc)

    def to_edgelist(self) -> str:
        return "\n".join(f"{u} {v}" for u, v in sorted(self.edges())) + "\n"

    def to_dot(self, atlas: Optional[EmbeddingAtlas] = None) -> str:
        out = ["graph arena {", "  node [shape=point];"]
        for v in range(self.n):
            attrs = []
            if self.vertex_class[v] == KEY:
                attrs.append('color="blue"')
            if atlas is not None:
                x, y = atlas.coords[v]
                attrs.append(f'pos="{x:.4f},{y:.4f}!"')
            out.append(f"  {v} [{', '.join(attrs)}];")
        for u, v in sorted(self.edges()):
            out.append(f"  {u} -- {v};")
        out.append("}")
        return "\n".join(out) + "\n"


def from_json(text: str) -> tuple[Graph, list[FaceRecord], Optional[EmbeddingAtlas]]:
    doc = json.loads(text)
    n = doc["n"]
    keys = set(doc.get("key", []))
    face_of: list[Optional[int]] = [None] * n
    faces = []
    for f in doc.get("faces", []):
        for v in f["added"]:
            face_of[v] = f["id"]
        faces.append(FaceRecord(f["id"], f["kind"], tuple(f["boundary"]), tuple(f["added"])))
    cls = [KEY if v in keys else ADDED for v in range(n)]
    g = Graph(n, [tuple(e) for e in doc["edges"]], cls, face_of)
    atlas = None
    if doc.get("coords"):
        atlas = EmbeddingAtlas(tuple((x, y) for x, y in doc["coords"]), ())
    return g, faces, atlas


def shortest_path_dag_levels(g: Graph, source: int, target: int) -> list[list[int]]:
    """Vertices on *some* shortest source->target path, grouped by index.

    levels[i] = every vertex at distance i from source that lies on at
    least one geodesic to target.
    """
    ds = g.bfs_from(source) if g._dist is None else g.dist[source]
    dt = g.bfs_from(target) if g._dist is None else g.dist[target]
    total = int(ds[target])
    if total >= UNREACHABLE:
        raise GraphError("target unreachable")
    levels: list[list[int]] = [[] for _ in range(total + 1)]
    for v in range(g.n):
        if int(ds[v]) + int(dt[v]) == total:
            levels[int(ds[v])].append(v)
    return levels


def lex_least_shortest_path(g: Graph, source: int, target: int) -> list[int]:
    """Lexicographically least vertex sequence among shortest paths."""
    dt = g.bfs_from(target) if g._dist is None else g.dist[target]
    if dt[source] >= UNREACHABLE:
        raise GraphError("target unreachable")
    path = [source]
    cur = source
    while cur != target:
        cur = min(w for w in g.adj[cur] if dt[w] == dt[cur] - 1)
        path.append(cur)
    return path
