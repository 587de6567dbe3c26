"""Structural validation of the arena asset against every published claim."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .autos import automorphism_group
from .build import build_truncated_icosahedron
from .graphs import KEY, EmbeddingAtlas, FaceRecord, Graph


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)
    info: dict[str, object] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.passed), None)

    def render(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            detail = f"  ({c.detail})" if c.detail else ""
            lines.append(f"[{mark}] {c.name}{detail}")
        for k, v in self.info.items():
            lines.append(f"[info] {k}: {v}")
        return "\n".join(lines)


def b_edges_from_faces(faces: list[FaceRecord]) -> set[tuple[int, int]]:
    """Soccer-ball edges recovered from the face boundaries."""
    edges = set()
    for f in faces:
        ring = f.boundary_key_vertices
        for i in range(len(ring)):
            a, b = ring[i], ring[(i + 1) % len(ring)]
            edges.add((min(a, b), max(a, b)))
    return edges


def validate_game_graph(
    g: Graph, faces: list[FaceRecord], atlas: EmbeddingAtlas, check_automorphisms: bool = True
) -> ValidationReport:
    rep = ValidationReport()
    keys = g.key_vertices()

    rep.add("vertex count 720", g.n == 720, f"n={g.n}")
    rep.add("key count 60", len(keys) == 60, f"keys={len(keys)}")
    bad_deg = [v for v in keys if g.degree(v) != 6]
    rep.add("key vertex degree = 6", not bad_deg, f"violations={bad_deg[:5]}")

    pents = [f for f in faces if f.kind == "pentagon"]
    hexes = [f for f in faces if f.kind == "hexagon"]
    rep.add("12 pentagon faces", len(pents) == 12, f"{len(pents)}")
    rep.add("20 hexagon faces", len(hexes) == 20, f"{len(hexes)}")
    rep.add(
        "15 added vertices per pentagon",
        all(len(f.added_vertices) == 15 for f in pents),
    )
    rep.add(
        "24 added vertices per hexagon",
        all(len(f.added_vertices) == 24 for f in hexes),
    )
    seen: set[int] = set()
    dup = False
    for f in faces:
        for v in f.added_vertices:
            if v in seen:
                dup = True
            seen.add(v)
    non_keys = {v for v in range(g.n) if g.vertex_class[v] != KEY}
    rep.add(
        "added vertices partition the non-key vertices",
        not dup and seen == non_keys,
        f"covered={len(seen)} expected={len(non_keys)} dup={dup}",
    )

    rep.add("connected", g.is_connected())

    # declared embedding
    cyc_ok = True
    for cyc in atlas.faces:
        for i in range(len(cyc)):
            if cyc[(i + 1) % len(cyc)] not in g.adj[cyc[i]]:
                cyc_ok = False
    rep.add("facial cycles are graph cycles", cyc_ok)
    euler = g.n - g.edge_count + len(atlas.faces)
    rep.add("Euler relation V-E+F = 2", euler == 2, f"V-E+F={euler}")

    # metric claim: former soccer-ball edges all at distance 4
    bedges = b_edges_from_faces(faces)
    rep.add("recovered 90 soccer-ball edges", len(bedges) == 90, f"{len(bedges)}")
    bad = [(a, b, g.distance(a, b)) for a, b in bedges if g.distance(a, b) != 4]
    rep.add("distance 4 across every soccer-ball edge", not bad, f"violations={bad[:5]}")

    # key vertices keep disjoint closed neighbourhoods (placement guarantee)
    min_kk = min(g.distance(a, b) for a in keys for b in keys if a < b)
    rep.add("key closed neighbourhoods disjoint", min_kk >= 3, f"min key-key distance={min_kk}")

    if check_automorphisms:
        aut = automorphism_group(g)
        rep.add("automorphism group order 120", aut.order == 120, f"order={aut.order}")
        restr = {tuple(p[k] for k in range(60)) for p in aut.elements}
        b_graph, _ = build_truncated_icosahedron()
        aut_b = automorphism_group(b_graph)
        rep.add(
            "key restriction equals soccer-ball symmetry group",
            restr == set(tuple(p) for p in aut_b.elements),
            f"restrictions={len(restr)}",
        )

    rep.info["edge count"] = g.edge_count
    try:
        cuts = g.cut_vertices()
        rep.info["cut vertices"] = bin(cuts).count("1")
    except Exception:
        rep.info["cut vertices"] = "n/a (disconnected)"
    return rep


class AssetInvariantError(ValueError):
    """Raised when a loaded asset violates a named structural invariant."""

    def __init__(self, check: Check):
        super().__init__(f"invariant violated: {check.name} {check.detail}".strip())
        self.check = check


def load_game_graph(text: str) -> tuple[Graph, list[FaceRecord], EmbeddingAtlas]:
    """Parse an asset and enforce the structural invariants (not Aut/metric)."""
    from .build import parse_asset_text

    g, faces, atlas = parse_asset_text(text)
    rep = ValidationReport()
    keys = g.key_vertices()
    rep.add("vertex count 720", g.n == 720, f"n={g.n}")
    rep.add("key count 60", len(keys) == 60)
    bad_deg = [v for v in keys if g.degree(v) != 6]
    rep.add("key vertex degree = 6", not bad_deg, f"violations={bad_deg[:5]}")
    pents = [f for f in faces if f.kind == "pentagon"]
    hexes = [f for f in faces if f.kind == "hexagon"]
    rep.add("12 pentagon faces with 15 added", len(pents) == 12 and all(len(f.added_vertices) == 15 for f in pents))
    rep.add("20 hexagon faces with 24 added", len(hexes) == 20 and all(len(f.added_vertices) == 24 for f in hexes))
    rep.add("connected", g.is_connected())
    fail = rep.first_failure()
    if fail is not None:
        raise AssetInvariantError(fail)
    return g, faces, atlas
