"""Hexagon guarding: label charts, deviation, and solved guard automata.

Each hexagon of the underlying soccer ball guards its three pentagon-facing
sides.  A guarded side has a four-vertex "red path" running from the facing
pentagon's side midpoint through the corridor midpoint and axis vertex to
one central vertex, with cop labels 1,3,5,7 (stored doubled).  The robber is
tracked through a labelled proximal region wrapped around the facing
pentagon; labels are half-integers stored doubled so 4.5 is exact.

Safety of a guard (and of any co-guardable pair sharing a pentagon) is not
argued by hand: the local pursuit game - cop(s) restricted to their wall
stations, robber anywhere near, at most one cop step per turn - is solved
exactly as a safety game, and the runtime guard responses come from the
solved tables.  The label/deviation formalism is kept as the chart data that
the solved behaviour is checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .build import Arena
from .graphs import Graph

FAR = -1  # abstract robber position outside a chart's zone

# doubled labels
L0, L2, L4, L45, L5, L6 = 0, 4, 8, 9, 10, 12
COP_LABELS = (2, 6, 10, 14)  # 1, 3, 5, 7 doubled


@dataclass
class SideChart:
    hexagon: int
    side: int  # 0, 2, 4
    pentagon: int
    red_path: tuple[int, ...]  # (m, b, R, U+) with labels 1,3,5,7
    cop_label: dict[int, int]
    flex_centrals: tuple[int, ...]  # centrals adjacent to the 5-vertex
    region: dict[int, int]  # robber vertex -> doubled label


@dataclass
class HexChart:
    hexagon: int
    centrals: tuple[int, int, int]
    allowed: frozenset[int]
    sides: dict[int, SideChart]
    wall: frozenset[int]  # all red-path vertices of the three sides
    region_of: dict[int, tuple[int, int]]  # vertex -> (side, doubled label)
    zone: frozenset[int]  # robber positions the automaton distinguishes


def side_chart(arena: Arena, h: int, j: int) -> SideChart:
    nm = arena.names
    g = arena.graph
    p, s = arena.hex_to_pent[(h, j)]

    def pl(t):
        return nm.pL(p, t)

    def pr(t):
        return nm.pR(p, t)

    def m(t):
        return nm.m(p, t)

    pent_ring = []  # the 15-ring in order: pR_s, m_s, pL_{s+1}, pR_{s+1}, ...
    for t in range(5):
        pent_ring += [pr(s + t), m(s + t), pl(s + t + 1)]
    # offsets from m_s along the ring (index 1 in pent_ring)
    def at(off):
        return pent_ring[(1 + off) % 15]

    region: dict[int, int] = {}
    ring_labels = {1: L0, 2: L2, 3: L4, 4: L45, 5: L5, 6: L6, 7: L6}
    for off, lab in ring_labels.items():
        region[at(off)] = lab
        region[at(-off)] = lab

    pent_keys = arena.ball.pentagons[p]
    kA, kB = pent_keys[s % 5], pent_keys[(s + 1) % 5]  # side runs kA -> kB
    region[kA] = L2
    region[kB] = L2
    for t in range(5):
        kk = pent_keys[t]
        if kk not in (kA, kB):
            region[kk] = L6

    a, b_, c = (nm.side(h, j, t) for t in range(3))
    region[a] = L2  # a is adjacent to kB (hexagon traverses the side reversed)
    region[c] = L2

    # strip flanks next to the side's corner keys, in this hexagon
    region[nm.side(h, (j - 1) % 6, 2)] = L4  # z-flank at corner kB
    region[nm.side(h, (j + 1) % 6, 0)] = L4  # x-flank at corner kA

    # ring neighbours of kA/kB inside their other hexagons
    for key, other_side in ((kB, (s + 1) % 5), (kA, (s - 1) % 5)):
        oh, oj = arena.pent_to_hex[(p, other_side)]
        oring = arena.ball.hexagons[oh]
        pos = oring.index(key)
        for nb in (nm.side(oh, pos, 0), nm.side(oh, (pos - 1) % 6, 2)):
            region[nb] = L4

    r = nm.R(h, j)
    u_plus = nm.U(h, (j + 1) % 6)
    u_minus = nm.U(h, (j - 1) % 6)
    red_path = (m(s), b_, r, u_plus)
    cop_label = dict(zip(red_path, COP_LABELS))

    # hysteresis halo: anything touching a label <= 5 joins the region at 6,
    # so a cop parked on the path tolerates the robber stepping one layer out
    own_wall = set(red_path) | {u_minus, nm.U(h, (j + 3) % 6)}
    for _ in range(2):
        for v in [v for v, lab in region.items() if lab <= L5]:
            for w in g.adj[v]:
                if w not in region and w not in own_wall:
                    region[w] = L6
    return SideChart(h, j, p, red_path, cop_label, (u_minus, u_plus), region)


def hexagon_chart(arena: Arena, h: int) -> HexChart:
    nm = arena.names
    sides = {j: side_chart(arena, h, j) for j in (0, 2, 4)}
    centrals = (nm.U(h, 1), nm.U(h, 3), nm.U(h, 5))
    wall = frozenset(v for sc in sides.values() for v in sc.red_path) | frozenset(centrals)
    allowed = frozenset(wall)
    region_of: dict[int, tuple[int, int]] = {}
    for j, sc in sides.items():
        for v in list(sc.region):
            if v in wall:
                del sc.region[v]
    for j, sc in sides.items():
        for v, lab in sc.region.items():
            prev = region_of.get(v)
            if prev is None or lab < prev[1]:
                region_of[v] = (j, lab)
    g = arena.graph
    zone = set(wall) | set(region_of)
    for v in list(zone):
        zone.update(g.adj[v])
    return HexChart(h, centrals, allowed, sides, frozenset(wall) - frozenset(centrals), region_of, frozenset(zone))


BIG = 99


def deviation(chart: HexChart, cop: int, robber: int, g: Graph) -> int:
    """Doubled deviation per the published rules; BIG when out of position.

    A vertex may carry labels for more than one side of the hexagon (the
    halos meet between walls); the deviation is the best reading.
    """
    if cop not in chart.allowed:
        raise ValueError(f"cop at {cop} is outside the allowed region")
    if robber in chart.wall or robber in chart.centrals:
        d = g.distance(cop, robber)
        return 4 * d + 2  # 2d+1 doubled
    best = None
    for j, sc in chart.sides.items():
        rlab = sc.region.get(robber)
        if rlab is None:
            continue
        if cop in sc.cop_label:
            dev = abs(sc.cop_label[cop] - rlab)
        elif cop in sc.flex_centrals:
            dev = max(abs(10 - rlab), abs(14 - rlab))  # 5 or 7, whichever furthest
        else:
            dev = BIG
        if best is None or dev < best:
            best = dev
    if best is None:
        d = min(g.distance(cop, u) for u in chart.centrals)
        return 4 * d + 2
    return best


# ---------------------------------------------------------------------------
# solved guard automata
# ---------------------------------------------------------------------------


@dataclass
class GuardAutomaton:
    """Safety-game solution for one or two cops holding their walls.

    States are (cop position(s), robber position or FAR) with the robber to
    move.  ``safe`` holds every state from which the cops can forever prevent
    an uncaptured wall entry.  ``respond`` maps a post-robber-move state to
    the single cop move (cop slot, destination), None for pass, or a capture.
    """

    charts: tuple[HexChart, ...]
    zone: frozenset[int]
    safe: set[tuple]
    response: dict[tuple, Optional[tuple[int, int]]]

    def is_safe(self, cops: tuple[int, ...], robber: int) -> bool:
        r = robber if robber in self.zone else FAR
        return (cops, r) in self.safe

    def abstract(self, robber: int) -> int:
        return robber if robber in self.zone else FAR

    def respond(self, cops: tuple[int, ...], robber: int) -> Optional[tuple[int, int]]:
        """Cop reply after the robber moved: capture, pass (None) or one step."""
        g = self._g
        r = self.abstract(robber)
        key = (cops, r)
        if key in self.response:
            return self.response[key]
        # capture if adjacent (use the true robber vertex)
        for i, cv in enumerate(cops):
            if robber == cv or robber in g.adj[cv]:
                move = (i, robber)
                self.response[key] = move
                return move
        best = None
        options: list[Optional[tuple[int, int]]] = [None]
        for i, cv in enumerate(cops):
            for w in g.adj[cv]:
                if w in self.charts[i].allowed:
                    options.append((i, w))
        for opt in options:
            if opt is None:
                c2 = cops
            else:
                i, w = opt
                c2 = cops[:i] + (w,) + cops[i + 1:]
            if (c2, r) not in self.safe:
                continue
            if r == FAR:
                dev = sum(
                    min(g.distance(cv, u) for u in self.charts[i].centrals) * 4 + 2
                    for i, cv in enumerate(c2)
                )
            else:
                dev = sum(min(deviation(self.charts[i], cv, r, g), BIG) for i, cv in enumerate(c2))
            rank = (dev, 0 if opt is None else 1, opt or (0, 0))
            if best is None or rank < best[0]:
                best = (rank, opt)
        if best is None:
            raise RuntimeError(f"guard automaton has no safe reply at {key}")
        self.response[key] = best[1]
        return best[1]


def _robber_moves(g: Graph, zone: frozenset[int], v: int) -> list[int]:
    if v == FAR:
        # re-enter anywhere on the boundary, or stay far
        out = [FAR]
        out += [w for w in zone if any(x not in zone for x in g.adj[w])]
        return out
    moves = [v]
    for w in g.adj[v]:
        moves.append(w if w in zone else FAR)
    return list(dict.fromkeys(moves))


def _cop_options(g: Graph, charts: tuple[HexChart, ...], cops: tuple[int, ...], robber: int):
    """All (slot, dest) single-cop moves plus pass; capture moves included."""
    opts: list[Optional[tuple[int, int]]] = [None]
    for i, cv in enumerate(cops):
        for w in g.adj[cv]:
            if w in charts[i].allowed or w == robber:
                opts.append((i, w))
    return opts


def solve_guard(g: Graph, charts: tuple[HexChart, ...]) -> GuardAutomaton:
    """Exact safety fixpoint for the product guard game.

    Backward attractor with counters: a cop-to-respond position is lost when
    every in-room reply (pass or one cop step) leads to a lost robber-to-move
    position; a robber-to-move position is lost as soon as one robber move
    reaches a lost reply position.  Capture ends the game for the cops.
    """
    zone = frozenset().union(*(c.zone for c in charts))
    walls = [c.wall | frozenset(c.centrals) for c in charts]
    cop_room = [sorted(c.allowed) for c in charts]
    cop_tuples = list(itertools.product(*cop_room))
    robber_room = sorted(zone) + [FAR]
    ct_index = {t: i for i, t in enumerate(cop_tuples)}
    rv_index = {r: i for i, r in enumerate(robber_room)}
    n_ct, n_rv = len(cop_tuples), len(robber_room)

    def sid(ci: int, ri: int) -> int:
        return ci * n_rv + ri

    # cop-tuple adjacency inside the allowed rooms (single step or pass)
    ct_moves: list[list[int]] = []
    for ct in cop_tuples:
        outs = [ct_index[ct]]
        for i, cv in enumerate(ct):
            for w in g.adj[cv]:
                if w in charts[i].allowed:
                    outs.append(ct_index[ct[:i] + (w,) + ct[i + 1:]])
        ct_moves.append(sorted(set(outs)))

    rv_moves: list[list[int]] = [
        [rv_index[r2] for r2 in _robber_moves(g, zone, r)] for r in robber_room
    ]

    def capture_available(ct: tuple[int, ...], r: int) -> bool:
        if r == FAR:
            return False
        return any(r == cv or r in g.adj[cv] for cv in ct)

    def crossed(ct: tuple[int, ...], r: int) -> bool:
        if r == FAR:
            return False
        return any(r in walls[i] and g.distance(ct[i], r) > 1 for i, cv in enumerate(ct))

    # lost flags per mover: mover 0 = cops to respond, mover 1 = robber to move
    lost_c = bytearray(n_ct * n_rv)
    lost_r = bytearray(n_ct * n_rv)
    good_c = bytearray(n_ct * n_rv)  # capture available: terminal, never lost
    counters = [0] * (n_ct * n_rv)
    queue: list[tuple[int, int, int]] = []  # (mover, ci, ri)

    for ci, ct in enumerate(cop_tuples):
        for ri, r in enumerate(robber_room):
            s = sid(ci, ri)
            if capture_available(ct, r):
                good_c[s] = 1
            elif crossed(ct, r):
                lost_c[s] = 1
                queue.append((0, ci, ri))
            else:
                counters[s] = len(ct_moves[ci])

    qi = 0
    while qi < len(queue):
        mover, ci, ri = queue[qi]
        qi += 1
        if mover == 0:
            # predecessors: robber-to-move positions that can step here
            for rj in rv_moves[ri]:
                s = sid(ci, rj)
                if not lost_r[s]:
                    lost_r[s] = 1
                    queue.append((1, ci, rj))
        else:
            # predecessors: cop-respond positions one cop-step away
            for cj in ct_moves[ci]:
                s = sid(cj, ri)
                if lost_c[s] or good_c[s]:
                    continue
                counters[s] -= 1
                if counters[s] == 0:
                    lost_c[s] = 1
                    queue.append((0, cj, ri))

    safe = {
        (ct, r)
        for ci, ct in enumerate(cop_tuples)
        for ri, r in enumerate(robber_room)
        if not lost_r[sid(ci, ri)] and (r == FAR or r not in ct)
    }

    auto = GuardAutomaton(charts, zone, safe, {})
    auto._g = g
    auto._walls = walls
    auto._lost_c = lost_c
    auto._ct_index = ct_index
    auto._rv_index = rv_index
    auto._n_rv = n_rv
    return auto


# ---------------------------------------------------------------------------
# chart-level validation
# ---------------------------------------------------------------------------


def validate_chart(arena: Arena, h: int) -> list[tuple[str, bool, str]]:
    g = arena.graph
    chart = hexagon_chart(arena, h)
    checks = []
    for j, sc in chart.sides.items():
        path_ok = all(sc.red_path[i + 1] in g.adj[sc.red_path[i]] for i in range(3))
        checks.append((f"side {j}: red path is a path", path_ok, ""))
        labs = [sc.cop_label[v] for v in sc.red_path]
        checks.append((f"side {j}: cop labels strictly monotone", labs == sorted(labs) and len(set(labs)) == 4, str(labs)))
        flex_ok = all(
            u in chart.centrals and sc.red_path[2] in g.adj[u] for u in sc.flex_centrals
        )
        checks.append((f"side {j}: flex centrals flank the 5-vertex", flex_ok, ""))
        bad = []
        for v, lab in sc.region.items():
            for w in g.adj[v]:
                lab2 = sc.region.get(w)
                if lab2 is not None and abs(lab - lab2) > 4:
                    bad.append((v, w, lab, lab2))
        checks.append((f"side {j}: labels 2-Lipschitz along edges", not bad, str(bad[:4])))
        # abutment: a labelled vertex next to a red-path vertex must be close
        # enough in label that every legal cop is within one step of the wall
        bad2 = []
        for v, lab in sc.region.items():
            for w in g.adj[v]:
                if w in sc.cop_label and w not in chart.centrals:
                    if abs(lab - sc.cop_label[w]) > 2:
                        bad2.append((v, w, lab, sc.cop_label[w]))
        checks.append((f"side {j}: wall abutment labels", not bad2, str(bad2[:4])))
    in_allowed = all(u in chart.allowed for u in chart.centrals)
    checks.append(("central vertices lie in the allowed region", in_allowed, ""))
    return checks


# ---------------------------------------------------------------------------
# caches
# ---------------------------------------------------------------------------


class ChartSet:
    """All twenty hexagon charts plus lazily solved guard automata."""

    def __init__(self, arena: Arena):
        self.arena = arena
        self.charts = {h: hexagon_chart(arena, h) for h in range(20)}
        self._single: dict[int, GuardAutomaton] = {}
        self._pair: dict[tuple[int, int], GuardAutomaton] = {}

    def single(self, h: int) -> GuardAutomaton:
        if h not in self._single:
            self._single[h] = solve_guard(self.arena.graph, (self.charts[h],))
        return self._single[h]

    def pair(self, h1: int, h2: int) -> GuardAutomaton:
        key = (min(h1, h2), max(h1, h2))
        if key not in self._pair:
            self._pair[key] = solve_guard(
                self.arena.graph, (self.charts[key[0]], self.charts[key[1]])
            )
        return self._pair[key]

    def overlapping(self, h1: int, h2: int) -> bool:
        return bool(self.charts[h1].zone & self.charts[h2].zone)

    def hex_adjacent(self, h1: int, h2: int) -> bool:
        r1 = set(self.arena.ball.hexagons[h1])
        r2 = set(self.arena.ball.hexagons[h2])
        return len(r1 & r2) == 2
