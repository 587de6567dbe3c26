"""Construction of the soccer-ball graph B and the 720-vertex arena graph.

B is the truncated icosahedron.  The arena replaces every face of B with a
fixed vertex pattern:

* pentagon (15 added): a 15-ring of corner pairs ``pL/pR`` and side
  midpoints ``m``; each corner key hangs off its pair.
* hexagon (24 added): a 24-ring of side triples (``a,b,c`` along the three
  pentagon-facing sides, ``x,y,z`` along the three hexagon-facing sides),
  a central triangle ``U1,U3,U5`` and three axis vertices ``R0,R2,R4``
  linking each pentagon-facing side's midpoint ``b`` to the triangle,
  plus a chord across both ring neighbours of every corner key.
* gap edges across each pentagon/hexagon boundary: ``m-b`` on the axis and
  a corner pair on each flank.

Every former B-edge becomes a pair of internally disjoint 4-step paths, all
key vertices get degree 6, and the whole pattern is invariant under the full
icosahedral symmetry group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graphs import ADDED, KEY, EmbeddingAtlas, FaceRecord, Graph

PHI = (1 + math.sqrt(5)) / 2

GRAPH_FORMAT_VERSION = "ocmg-graph v1"


# ---------------------------------------------------------------------------
# icosahedron scaffolding
# ---------------------------------------------------------------------------


def _icosahedron() -> tuple[list[np.ndarray], list[list[int]], list[tuple[int, int, int]]]:
    """Vertices (unit sphere), cyclic neighbor order per vertex, oriented faces."""
    raw = []
    for a in (-1.0, 1.0):
        for b in (-PHI, PHI):
            raw.append((0.0, a, b))
            raw.append((a, b, 0.0))
            raw.append((b, 0.0, a))
    pts = sorted(set(raw))
    verts = [np.array(p) / np.linalg.norm(p) for p in pts]
    n = len(verts)
    adj = [
        [w for w in range(n) if w != v and np.linalg.norm(verts[v] - verts[w]) < 1.2]
        for v in range(n)
    ]
    assert all(len(a) == 5 for a in adj)

    # cyclic CCW order of neighbors around each vertex (seen from outside)
    cyc = []
    for v in range(n):
        nv = verts[v]
        ref = verts[adj[v][0]] - nv
        ref -= nv * (ref @ nv)
        ref /= np.linalg.norm(ref)
        ortho = np.cross(nv, ref)

        def angle(w):
            d = verts[w] - nv
            d -= nv * (d @ nv)
            return math.atan2(d @ ortho, d @ ref)

        cyc.append(sorted(adj[v], key=angle))

    faces = set()
    for v in range(n):
        ring = cyc[v]
        for i in range(5):
            a, b = ring[i], ring[(i + 1) % 5]
            if b in adj[a]:
                tri = tuple(sorted((v, a, b)))
                faces.add(tri)
    faces = sorted(faces)
    assert len(faces) == 20

    oriented = []
    for (u, v, w) in faces:
        c = (verts[u] + verts[v] + verts[w]) / 3
        if np.cross(verts[v] - verts[u], verts[w] - verts[u]) @ c < 0:
            u, v, w = u, w, v
        oriented.append((u, v, w))
    return verts, cyc, oriented


@dataclass(frozen=True)
class BallStructure:
    """Truncated icosahedron combinatorics plus key-vertex numbering."""

    key_index: dict[tuple[int, int], int]  # (icosa vertex, icosa neighbor) -> key id
    key_pair: list[tuple[int, int]]
    pentagons: list[list[int]]  # 12 cyclic key lists (CCW from outside)
    hexagons: list[list[int]]  # 20 cyclic key lists, even sides face pentagons
    edges: list[tuple[int, int]]  # the 90 B edges
    coords: list[np.ndarray]  # key coordinates on the unit sphere


def ball_structure() -> BallStructure:
    verts, cyc, faces = _icosahedron()
    key_index: dict[tuple[int, int], int] = {}
    key_pair: list[tuple[int, int]] = []
    for u in range(12):
        for w in cyc[u]:
            key_index[(u, w)] = len(key_pair)
            key_pair.append((u, w))
    coords = []
    for (u, w) in key_pair:
        p = verts[u] + (verts[w] - verts[u]) / 3
        coords.append(p / np.linalg.norm(p))

    pentagons = [[key_index[(u, w)] for w in cyc[u]] for u in range(12)]

    hexagons = []
    for (u, v, w) in faces:
        ring = [(v, u), (v, w), (w, v), (w, u), (u, w), (u, v)]
        hexagons.append([key_index[p] for p in ring])

    edges = set()
    for u in range(12):
        ring = cyc[u]
        for i in range(5):
            a = key_index[(u, ring[i])]
            b = key_index[(u, ring[(i + 1) % 5])]
            edges.add((min(a, b), max(a, b)))
    for (u, w) in key_pair:
        a, b = key_index[(u, w)], key_index[(w, u)]
        edges.add((min(a, b), max(a, b)))
    edges = sorted(edges)
    assert len(edges) == 90

    # orient pentagons CCW from outside; hexagons already follow face orientation
    oriented_pent = []
    for u in range(12):
        ring = pentagons[u]
        c = sum(coords[k] for k in ring) / 5
        v0, v1 = coords[ring[0]] - c, coords[ring[1]] - c
        if np.cross(v0, v1) @ c < 0:
            ring = [ring[0]] + ring[1:][::-1]
        oriented_pent.append(ring)
    oriented_hex = []
    for ring in hexagons:
        c = sum(coords[k] for k in ring) / 6
        v0, v1 = coords[ring[0]] - c, coords[ring[1]] - c
        if np.cross(v0, v1) @ c < 0:
            ring = [ring[0]] + ring[1:][::-1]
        # rotate so side 0 (ring[0]-ring[1]) is a pentagon side
        pent_sides = {tuple(sorted(e)) for e in _pentagon_side_set(oriented_pent)}
        for shift in range(6):
            r = ring[shift:] + ring[:shift]
            if tuple(sorted((r[0], r[1]))) in pent_sides:
                ring = r
                break
        oriented_hex.append(ring)

    return BallStructure(key_index, key_pair, oriented_pent, oriented_hex, edges, coords)


def _pentagon_side_set(pentagons) -> list[tuple[int, int]]:
    out = []
    for ring in pentagons:
        for i in range(5):
            out.append((ring[i], ring[(i + 1) % 5]))
    return out


def build_truncated_icosahedron() -> tuple[Graph, list[FaceRecord]]:
    """The 60-vertex soccer ball graph with its 32 face records."""
    bs = ball_structure()
    g = Graph(60, bs.edges, [KEY] * 60, name="B")
    faces = []
    for i, ring in enumerate(bs.pentagons):
        faces.append(FaceRecord(i, "pentagon", tuple(ring), ()))
    for i, ring in enumerate(bs.hexagons):
        faces.append(FaceRecord(12 + i, "hexagon", tuple(ring), ()))
    return g, faces


# ---------------------------------------------------------------------------
# the arena graph
# ---------------------------------------------------------------------------


@dataclass
class ArenaNames:
    """Structured vertex ids for one arena build (used by charts & scripts)."""

    pent_base: list[int]  # base id of each pentagon's 15 added vertices
    hex_base: list[int]  # base id of each hexagon's 24 added vertices

    def pL(self, p: int, s: int) -> int:
        return self.pent_base[p] + 3 * (s % 5)

    def pR(self, p: int, s: int) -> int:
        return self.pent_base[p] + 3 * (s % 5) + 1

    def m(self, p: int, s: int) -> int:
        return self.pent_base[p] + 3 * (s % 5) + 2

    def side(self, h: int, j: int, k: int) -> int:
        """k-th vertex (0..2) of hexagon h's side j (a,b,c or x,y,z)."""
        return self.hex_base[h] + 3 * (j % 6) + k

    def R(self, h: int, j: int) -> int:
        assert j % 2 == 0
        return self.hex_base[h] + 18 + j // 2

    def U(self, h: int, j: int) -> int:
        assert j % 2 == 1
        return self.hex_base[h] + 21 + (j - 1) // 2


@dataclass
class Arena:
    graph: Graph
    faces: list[FaceRecord]
    atlas: EmbeddingAtlas
    ball: BallStructure
    names: ArenaNames
    # per pentagon side (p, s): the (hexagon, side) facing it
    pent_to_hex: dict[tuple[int, int], tuple[int, int]]
    hex_to_pent: dict[tuple[int, int], tuple[int, int]]
    coords3d: np.ndarray


def build_arena() -> Arena:
    bs = ball_structure()
    names = ArenaNames(
        pent_base=[60 + 15 * p for p in range(12)],
        hex_base=[240 + 24 * h for h in range(20)],
    )
    n = 720

    # map every pentagon side to the hexagon side it faces (and back)
    hex_side_of: dict[tuple[int, int], tuple[int, int]] = {}
    for h, ring in enumerate(bs.hexagons):
        for j in range(0, 6, 2):
            e = (ring[j], ring[(j + 1) % 6])
            hex_side_of[e] = (h, j)
    pent_to_hex = {}
    hex_to_pent = {}
    for p, ring in enumerate(bs.pentagons):
        for s in range(5):
            e = (ring[s], ring[(s + 1) % 5])
            rev = (e[1], e[0])
            assert rev in hex_side_of, "face orientations must be consistent"
            pent_to_hex[(p, s)] = hex_side_of[rev]
            hex_to_pent[hex_side_of[rev]] = (p, s)

    edges: list[tuple[int, int]] = []

    # pentagon patterns: a 20-ring through the corner keys with side midpoints
    for p, ring in enumerate(bs.pentagons):
        for s in range(5):
            k = ring[s]
            pL, pR, m = names.pL(p, s), names.pR(p, s), names.m(p, s)
            edges += [(k, pL), (k, pR)]
            edges += [(pR, m), (m, names.pL(p, s + 1))]

    # hexagon patterns
    for h, ring in enumerate(bs.hexagons):
        for j in range(6):
            kj, kn = ring[j], ring[(j + 1) % 6]
            v0, v1, v2 = (names.side(h, j, t) for t in range(3))
            edges += [(kj, v0), (v0, v1), (v1, v2), (v2, kn)]
        for j in range(0, 6, 2):  # axis: b - R - flanking centrals
            b = names.side(h, j, 1)
            r = names.R(h, j)
            edges += [(b, r), (r, names.U(h, (j - 1) % 6)), (r, names.U(h, (j + 1) % 6))]
        edges += [
            (names.U(h, 1), names.U(h, 3)),
            (names.U(h, 3), names.U(h, 5)),
            (names.U(h, 5), names.U(h, 1)),
        ]

    # gap edges across every pentagon side (the m-b gates)
    for (p, s), (h, j) in pent_to_hex.items():
        # pentagon traverses the side ks -> ks1, hexagon traverses ks1 -> ks
        b = names.side(h, j, 1)
        edges.append((names.m(p, s), b))

    cls = [KEY] * 60 + [ADDED] * 660
    face_of: list[Optional[int]] = [None] * n
    faces: list[FaceRecord] = []
    for p, ring in enumerate(bs.pentagons):
        added = tuple(range(names.pent_base[p], names.pent_base[p] + 15))
        for v in added:
            face_of[v] = p
        faces.append(FaceRecord(p, "pentagon", tuple(ring), added))
    for h, ring in enumerate(bs.hexagons):
        added = tuple(range(names.hex_base[h], names.hex_base[h] + 24))
        for v in added:
            face_of[v] = 12 + h
        faces.append(FaceRecord(12 + h, "hexagon", tuple(ring), added))

    coords3d = _arena_coords(bs, names)
    g = Graph(n, edges, cls, face_of, name="arena")
    atlas = _trace_embedding(g, coords3d)
    return Arena(g, faces, atlas, bs, names, pent_to_hex, hex_to_pent, coords3d)


def _arena_coords(bs: BallStructure, names: ArenaNames) -> np.ndarray:
    coords = np.zeros((720, 3))
    for k in range(60):
        coords[k] = bs.coords[k]

    def put(v, point):
        coords[v] = point / np.linalg.norm(point)

    for p, ring in enumerate(bs.pentagons):
        kc = [bs.coords[k] for k in ring]
        centre = sum(kc) / 5
        for s in range(5):
            cur, nxt, prv = kc[s], kc[(s + 1) % 5], kc[(s - 1) % 5]
            put(names.pL(p, s), 0.60 * cur + 0.14 * prv + 0.26 * centre)
            put(names.pR(p, s), 0.60 * cur + 0.14 * nxt + 0.26 * centre)
            put(names.m(p, s), 0.38 * cur + 0.38 * nxt + 0.24 * centre)
    for h, ring in enumerate(bs.hexagons):
        kc = [bs.coords[k] for k in ring]
        centre = sum(kc) / 6
        for j in range(6):
            cur, nxt = kc[j], kc[(j + 1) % 6]
            inset = 0.18 if j % 2 == 0 else 0.14
            put(names.side(h, j, 0), (0.68 * cur + 0.32 * nxt) * (1 - inset) + inset * centre)
            put(names.side(h, j, 1), (0.50 * cur + 0.50 * nxt) * (1 - inset - 0.04) + (inset + 0.04) * centre)
            put(names.side(h, j, 2), (0.32 * cur + 0.68 * nxt) * (1 - inset) + inset * centre)
        for j in range(0, 6, 2):
            mid = (kc[j] + kc[(j + 1) % 6]) / 2
            put(names.R(h, j), 0.55 * centre + 0.45 * mid)
        for j in range(1, 6, 2):
            mid = (kc[j] + kc[(j + 1) % 6]) / 2
            put(names.U(h, j), 0.82 * centre + 0.18 * mid)
    return coords


def _trace_embedding(g: Graph, coords3d: np.ndarray) -> EmbeddingAtlas:
    """Planar embedding from the spherical rotation system.

    Faces come from tracing the rotation system; 2D coordinates from an
    azimuthal projection centred on vertex 0's antipode.
    """
    n = g.n
    rotation: list[list[int]] = []
    for v in range(n):
        nv = coords3d[v]
        nbrs = g.adj[v]
        ref = coords3d[nbrs[0]] - nv
        ref = ref - nv * (ref @ nv)
        ref = ref / np.linalg.norm(ref)
        ortho = np.cross(nv, ref)

        def angle(w):
            d = coords3d[w] - nv
            d = d - nv * (d @ nv)
            return math.atan2(d @ ortho, d @ ref)

        rotation.append(sorted(nbrs, key=angle))

    pos_in = [{w: i for i, w in enumerate(rot)} for rot in rotation]
    seen: set[tuple[int, int]] = set()
    faces: list[tuple[int, ...]] = []
    for u0 in range(n):
        for w0 in rotation[u0]:
            if (u0, w0) in seen:
                continue
            face = []
            u, w = u0, w0
            while (u, w) not in seen:
                seen.add((u, w))
                face.append(u)
                rot = rotation[w]
                i = pos_in[w][u]
                u, w = w, rot[(i - 1) % len(rot)]
            faces.append(tuple(face))

    # azimuthal equidistant projection from the south pole of vertex 0
    pole = -coords3d[0]
    axis = np.array([1.0, 0, 0])
    if abs(axis @ pole) > 0.9:
        axis = np.array([0, 1.0, 0])
    e1 = axis - pole * (axis @ pole)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(pole, e1)
    flat = []
    for v in range(n):
        p = coords3d[v]
        cosang = max(-1.0, min(1.0, p @ pole))
        theta = math.acos(cosang)
        d = p - pole * cosang
        norm = np.linalg.norm(d)
        if norm < 1e-12:
            flat.append((0.0, 0.0))
        else:
            d = d / norm
            flat.append((theta * (d @ e1), theta * (d @ e2)))
    return EmbeddingAtlas(tuple(flat), tuple(faces))


# ---------------------------------------------------------------------------
# asset text format
# ---------------------------------------------------------------------------


def arena_to_asset_text(arena: Arena) -> str:
    g = arena.graph
    lines = [GRAPH_FORMAT_VERSION, f"n {g.n}"]
    for k in g.key_vertices():
        lines.append(f"key {k}")
    for f in arena.faces:
        boundary = " ".join(map(str, f.boundary_key_vertices))
        added = " ".join(map(str, f.added_vertices))
        lines.append(f"face {f.face_id} {f.kind} {boundary} | {added}")
    for u, v in sorted(g.edges()):
        lines.append(f"e {u} {v}")
    for v, (x, y) in enumerate(arena.atlas.coords):
        lines.append(f"coord {v} {x:.6f} {y:.6f}")
    for cyc in arena.atlas.faces:
        lines.append("faceCycle " + " ".join(map(str, cyc)))
    return "\n".join(lines) + "\n"


def parse_asset_text(text: str) -> tuple[Graph, list[FaceRecord], EmbeddingAtlas]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != GRAPH_FORMAT_VERSION:
        raise ValueError(f"bad or missing asset header (want {GRAPH_FORMAT_VERSION!r})")
    n = None
    keys: set[int] = set()
    faces: list[FaceRecord] = []
    edges: list[tuple[int, int]] = []
    coords: dict[int, tuple[float, float]] = {}
    cycles: list[tuple[int, ...]] = []
    for ln in lines[1:]:
        parts = ln.split()
        tag = parts[0]
        if tag == "n":
            n = int(parts[1])
        elif tag == "key":
            keys.add(int(parts[1]))
        elif tag == "face":
            fid, kind = int(parts[1]), parts[2]
            rest = parts[3:]
            bar = rest.index("|")
            faces.append(
                FaceRecord(fid, kind, tuple(map(int, rest[:bar])), tuple(map(int, rest[bar + 1:])))
            )
        elif tag == "e":
            edges.append((int(parts[1]), int(parts[2])))
        elif tag == "coord":
            coords[int(parts[1])] = (float(parts[2]), float(parts[3]))
        elif tag == "faceCycle":
            cycles.append(tuple(map(int, parts[1:])))
        else:
            raise ValueError(f"unknown asset line: {ln!r}")
    if n is None:
        raise ValueError("missing n line")
    face_of: list[Optional[int]] = [None] * n
    for f in faces:
        for v in f.added_vertices:
            face_of[v] = f.face_id
    cls = [KEY if v in keys else ADDED for v in range(n)]
    g = Graph(n, edges, cls, face_of, name="arena")
    atlas = EmbeddingAtlas(tuple(coords.get(v, (0.0, 0.0)) for v in range(n)), tuple(cycles))
    return g, faces, atlas
