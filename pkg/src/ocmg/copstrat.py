"""The seven-cop strategy: guard runtime, guard expansion, movement phases.

Guard behaviour is driven by the solved per-hexagon automata (charts.py).
Each guarded hexagon computes its own reply to the robber's last move; a
reply is *needed* when passing would leave that hexagon's local state
outside its solved safe set.  The composition theorem checked by
`verify_pair_composition` - at most one co-guarded hexagon ever needs a
move after any robber step - is what lets seven cops share one move per
turn, and is exactly the published strong-guarding argument in solved form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .build import Arena
from .charts import FAR, ChartSet, GuardAutomaton, HexChart, deviation
from .graphs import Graph, iter_bits, popcount


# ---------------------------------------------------------------------------
# cube layout
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubeLayout:
    red: tuple[int, ...]  # 6 hexagon ids
    yellow: tuple[int, int]  # 2 hexagon ids, antipodal
    cube: tuple[int, ...]  # all 8


def hexagon_centers(arena: Arena) -> np.ndarray:
    out = np.zeros((20, 3))
    for h, ring in enumerate(arena.ball.hexagons):
        c = sum(arena.ball.coords[k] for k in ring) / 6
        out[h] = c / np.linalg.norm(c)
    return out


def hexagon_adjacent(arena: Arena, h1: int, h2: int) -> bool:
    return len(set(arena.ball.hexagons[h1]) & set(arena.ball.hexagons[h2])) == 2


def find_cube_layouts(arena: Arena) -> list[CubeLayout]:
    """All inscribed cubes of the hexagon-centre dodecahedron."""
    ctr = hexagon_centers(arena)
    n = 20

    def ang(i, j):
        return float(np.clip(ctr[i] @ ctr[j], -1, 1))

    COS_EDGE = -1 / 3  # cube face diagonal pairs: ~109.47 deg? see below
    # For a cube inscribed in the unit sphere: adjacent corners have dot 1/3,
    # face diagonals -1/3, space diagonal -1.
    cubes = set()
    for v0 in range(n):
        near = [u for u in range(n) if abs(ang(v0, u) - 1 / 3) < 1e-6]
        for trio in itertools.combinations(near, 3):
            if any(abs(ang(a, b) + 1 / 3) > 1e-6 for a, b in itertools.combinations(trio, 2)):
                continue
            rest = []
            ok = True
            for a, b in itertools.combinations(trio, 2):
                cand = [
                    u
                    for u in range(n)
                    if u not in (v0, *trio)
                    and abs(ang(u, a) - 1 / 3) < 1e-6
                    and abs(ang(u, b) - 1 / 3) < 1e-6
                    and abs(ang(u, v0) + 1 / 3) < 1e-6
                ]
                if len(cand) != 1:
                    ok = False
                    break
                rest.append(cand[0])
            if not ok:
                continue
            anti = [u for u in range(n) if abs(ang(u, v0) + 1) < 1e-6]
            if len(anti) != 1:
                continue
            cube = tuple(sorted((v0, *trio, *rest, anti[0])))
            cubes.add(cube)
    layouts = []
    for cube in sorted(cubes):
        for y1 in cube:
            y2 = next(u for u in cube if abs(ang(u, y1) + 1) < 1e-9)
            if y1 < y2:
                red = tuple(h for h in cube if h not in (y1, y2))
                layouts.append(CubeLayout(red, (y1, y2), cube))
    return layouts


def canonical_cube_layout(arena: Arena) -> CubeLayout:
    return find_cube_layouts(arena)[0]


def validate_cube_layout(arena: Arena, layout: CubeLayout) -> list[tuple[str, bool, str]]:
    checks = []
    non_adj = all(
        not hexagon_adjacent(arena, a, b)
        for a, b in itertools.combinations(layout.cube, 2)
    )
    checks.append(("cube hexagons pairwise non-adjacent", non_adj, ""))
    bad = []
    for other in range(20):
        cnt = sum(1 for r in layout.red if hexagon_adjacent(arena, r, other))
        if cnt >= 3:
            bad.append((other, cnt))
    checks.append(("no three red hexagons adjacent to one hexagon", not bad, str(bad)))
    ctr = hexagon_centers(arena)
    anti = abs(float(ctr[layout.yellow[0]] @ ctr[layout.yellow[1]]) + 1) < 1e-9
    checks.append(("yellow hexagons antipodal through the cube centre", anti, ""))
    return checks


# ---------------------------------------------------------------------------
# guard runtime
# ---------------------------------------------------------------------------


class GuardConflict(RuntimeError):
    """Two guards need the single cop move at once (must never happen)."""

    def __init__(self, assignments, robber):
        super().__init__(f"guard conflict at robber={robber}: {assignments}")
        self.assignments = assignments
        self.robber = robber


@dataclass
class GuardState:
    cop: int  # cop index in the match
    hexagon: int
    vertex: int

    def doubled_deviation(self, charts: ChartSet, robber: int, g: Graph) -> int:
        return deviation(charts.charts[self.hexagon], self.vertex, robber, g)


class GuardBench:
    """Per-hexagon guard logic on top of the solved automata.

    The shared discipline is the published strong-guarding invariant: after
    the cops' turn every guard's doubled deviation is at most 4 and at most
    one exceeds 2.  `arbitrate` restores it with at most one cop step.
    """

    def __init__(self, charts: ChartSet):
        self.charts = charts
        self.g = charts.arena.graph

    def abstract(self, h: int, robber: int) -> int:
        return robber if robber in self.charts.charts[h].zone else FAR

    def doubled_dev(self, h: int, cop: int, robber: int) -> int:
        ch = self.charts.charts[h]
        r = self.abstract(h, robber)
        if r == FAR:
            return 4 * min(self.g.distance(cop, u) for u in ch.centrals) + 2
        return deviation(ch, cop, robber, self.g)

    def pass_is_safe(self, h: int, cop: int, robber: int) -> bool:
        auto = self.charts.single(h)
        r = self.abstract(h, robber)
        if r != FAR and self._crossed(h, cop, r):
            return False
        return ((cop,), r) in auto.safe

    def _crossed(self, h: int, cop: int, r: int) -> bool:
        ch = self.charts.charts[h]
        return (r in ch.wall or r in ch.centrals) and self.g.distance(cop, r) > 1

    def reply(self, h: int, cop: int, robber: int) -> Optional[int]:
        """This hexagon's preferred reply vertex (None = pass)."""
        auto = self.charts.single(h)
        mv = auto.respond((cop,), robber)
        return None if mv is None else mv[1]

    def invariant_holds(self, assignments: list[tuple[int, int]], robber: int) -> bool:
        """Every active guard's local solved state is safe under pass."""
        return all(self.pass_is_safe(h, c, robber) for h, c in assignments)

    def arbitrate(
        self, assignments: list[tuple[int, int]], robber: int
    ) -> Optional[tuple[int, int]]:
        """One guard move (index into assignments, destination) or None.

        A guard whose solved state would become unsafe under pass must move;
        otherwise the guard with the worst doubled deviation above 4 tracks
        the robber (the halo labels give this rule its hysteresis).  The
        one-mover sufficiency is what `verify_pair_composition` certifies.
        """
        needed = [i for i, (h, c) in enumerate(assignments) if not self.pass_is_safe(h, c, robber)]
        if len(needed) >= 2:
            raise GuardConflict(assignments, robber)
        if needed:
            i = needed[0]
            h, c = assignments[i]
            mv = self.reply(h, c, robber)
            return None if mv is None else (i, mv)
        devs = [self.doubled_dev(h, c, robber) for h, c in assignments]
        laggards = [i for i, d in enumerate(devs) if d > 4]
        if not laggards:
            return None
        i = max(laggards, key=lambda i: (devs[i], -assignments[i][0]))
        h, c = assignments[i]
        mv = self.reply(h, c, robber)
        if mv is None or not self.pass_is_safe(h, mv, robber):
            return None
        return (i, mv)

    def capture_move(self, cop: int, robber: int) -> Optional[int]:
        if robber == cop or robber in self.g.adj[cop]:
            return robber
        return None


class GuardTeam:
    """Joint guard bookkeeping: pair units, needed moves, virtual guides.

    A hexagon is guarded by a real cop or by a virtual guide (during guard
    expansion).  Co-guarded overlapping hexagons form pair units driven by
    their solved pair automata; a unit fails when its product state leaves
    the solved safe set, and `needed_move` finds one single-cop step that
    restores every failing unit at once.
    """

    def __init__(self, charts: ChartSet):
        self.charts = charts
        self.g = charts.arena.graph
        self.assignment: dict[int, tuple[str, int]] = {}  # hexagon -> ("cop", slot) | ("virtual", id)
        self.virtual_pos: dict[int, int] = {}  # hexagon -> guide vertex

    def guarded(self) -> list[int]:
        return sorted(self.assignment)

    def position(self, h: int, cops: tuple[int, ...]) -> int:
        kind, ref = self.assignment[h]
        return self.virtual_pos[h] if kind == "virtual" else cops[ref]

    def units(self) -> list[tuple[int, ...]]:
        hs = self.guarded()
        out = []
        paired = set()
        for i, h1 in enumerate(hs):
            for h2 in hs[i + 1:]:
                if self.charts.overlapping(h1, h2) and not self.charts.hex_adjacent(h1, h2):
                    out.append((h1, h2))
                    paired.update((h1, h2))
        for h in hs:
            if h not in paired:
                out.append((h,))
        return out

    def _unit_state(self, unit, cops):
        auto = self.charts.single(unit[0]) if len(unit) == 1 else self.charts.pair(*unit)
        pos = tuple(self.position(h, cops) for h in unit)
        return auto, pos

    def unit_ok(self, unit, cops, robber: int) -> bool:
        auto, pos = self._unit_state(unit, cops)
        return auto.is_safe(pos, robber)

    def all_ok(self, cops, robber: int) -> bool:
        return all(self.unit_ok(u, cops, robber) for u in self.units())

    def needed_move(self, cops: tuple[int, ...], robber: int):
        """One-step restore: ("cop", slot, dest) | ("virtual", hexagon, dest) | None."""
        units = self.units()
        failing = [u for u in units if not self.unit_ok(u, cops, robber)]
        if not failing:
            return None
        candidates = []
        for h in self.guarded():
            kind, ref = self.assignment[h]
            cur = self.position(h, cops)
            for w in self.g.adj[cur]:
                if w in self.charts.charts[h].allowed:
                    candidates.append((h, kind, ref, cur, w))
        best = None
        for h, kind, ref, cur, w in candidates:
            moved = dict(self.virtual_pos) if kind == "virtual" else None

            def pos_of(hh):
                if hh == h:
                    return w
                k2, r2 = self.assignment[hh]
                return self.virtual_pos[hh] if k2 == "virtual" else cops[r2]

            ok = True
            for u in units:
                auto = self.charts.single(u[0]) if len(u) == 1 else self.charts.pair(*u)
                if not auto.is_safe(tuple(pos_of(x) for x in u), robber):
                    ok = False
                    break
            if not ok:
                continue
            dev = deviation(self.charts.charts[h], w, robber, self.g) if robber >= 0 else 0
            key = (min(dev, 99), h, w)
            if best is None or key < best[0]:
                best = (key, (h, kind, ref, w))
        if best is None:
            raise GuardConflict([(h, self.position(h, cops)) for h in self.guarded()], robber)
        h, kind, ref, w = best[1]
        return (kind, ref if kind == "cop" else h, w)


# ---------------------------------------------------------------------------
# the seven-cop policy
# ---------------------------------------------------------------------------


_subgame_cache: dict = {}


def _solve_subgame(g: Graph, region: frozenset[int], n_cops: int):
    """Exact chase table on the induced confinement region (cached)."""
    from .solver import classify_states

    key = (region, n_cops)
    if key not in _subgame_cache:
        verts = sorted(region)
        index = {v: i for i, v in enumerate(verts)}
        edges = [(index[u], index[v]) for u in verts for v in g.adj[u] if v in region and u < v]
        sub = Graph(len(verts), edges, name=f"chase{len(verts)}")
        table = classify_states(sub, n_cops, 1)
        _subgame_cache[key] = (sub, index, verts, table)
    return _subgame_cache[key]


class PhaseError(RuntimeError):
    pass


class SevenCopPolicy:
    """Phase-driven winning strategy for seven cops (k = 1).

    Phase 1 expands strong guarding over the six red hexagons, phase 2 adds
    the yellow hexagon of the robber's half and posts two cops on the keys
    shared by the square's two interior hexagons, phase 3 releases spare
    guards and runs an exactly-solved chase inside the residual region.
    """

    role = "cops"

    def __init__(self, arena: Arena, charts: Optional[ChartSet] = None,
                 layout: Optional[CubeLayout] = None, skip_phase2: bool = False):
        self.arena = arena
        self.g = arena.graph
        self.charts = charts or ChartSet(arena)
        self.layout = layout or canonical_cube_layout(arena)
        self.skip_phase2 = skip_phase2
        self.team = GuardTeam(self.charts)
        self.phase = 0
        self.pending: list[tuple[int, int]] = []  # (hexagon, cop slot) expansions waiting
        self.active_runner: Optional[tuple[int, int]] = None  # (hexagon, slot)
        self.free: list[int] = []
        self.pink_targets: list[int] = []
        self.pink_runners: dict[int, int] = {}  # slot -> target key
        self.posts: dict[int, int] = {}  # slot -> vertex
        self.chasers: list[int] = []
        self.region: Optional[int] = None  # bitset
        self.flags: list[str] = []
        self.marching: Optional[tuple[int, int]] = None
        self.yellow: Optional[int] = None

    # -- placement ----------------------------------------------------------

    def place(self, config, state):
        spots = [min(self.charts.charts[h].centrals) for h in self.layout.red]
        spots.append(min(v for v in range(self.g.n) if self.g.vertex_class[v] == 0))
        return spots

    # -- helpers -------------------------------------------------------------

    def _walls_mask(self, hexes: Iterable[int]) -> int:
        m = 0
        for h in hexes:
            ch = self.charts.charts[h]
            for v in ch.wall:
                m |= 1 << v
            for v in ch.centrals:
                m |= 1 << v
        return m

    def _component_of(self, v: int, forbidden: int) -> int:
        if (forbidden >> v) & 1:
            return 1 << v
        for comp in self.g.component_masks(forbidden):
            if (comp >> v) & 1:
                return comp
        raise PhaseError("robber vanished")

    def _init_team(self, cops, robber):
        self.team.assignment = {}
        for slot, h in enumerate(self.layout.red):
            self.team.assignment[h] = ("cop", slot)
        # drop hexagons whose units fail until stable; they become expansions
        while True:
            bad = None
            for u in self.team.units():
                if not self.team.unit_ok(u, cops, robber):
                    bad = max(
                        u,
                        key=lambda h: 0 if robber not in self.charts.charts[h].zone else 1,
                    )
                    break
            if bad is None:
                break
            slot = self.team.assignment[bad][1]
            del self.team.assignment[bad]
            self.pending.append((bad, slot))
        self.phase = 1

    def _virtual_spot(self, h: int, cops, robber) -> Optional[int]:
        """A wall vertex where a guard of h would be safe right now, if any."""
        ch = self.charts.charts[h]
        best = None
        for v in sorted(ch.allowed):
            saved = self.team.assignment.get(h)
            self.team.assignment[h] = ("virtual", h)
            self.team.virtual_pos[h] = v
            ok = self.team.all_ok(cops, robber)
            if saved is None:
                del self.team.assignment[h]
            else:
                self.team.assignment[h] = saved
            self.team.virtual_pos.pop(h, None)
            if not ok:
                continue
            dev = deviation(ch, v, robber, self.g)
            key = (min(dev, 99), v)
            if best is None or key < best[0]:
                best = (key, v)
        return None if best is None else best[1]

    def _start_expansion(self, h: int, slot: int, cops, robber):
        spot = self._virtual_spot(h, cops, robber)
        if spot is None:
            # robber is camped on the pending hexagon's own walls; march at a
            # central and flush it out (the central triangle is a clique, so
            # standing there dominates the interior)
            self.marching = (h, slot)
            self.active_runner = None
            return
        self.team.assignment[h] = ("virtual", h)
        self.team.virtual_pos[h] = spot
        self.active_runner = (h, slot)
        self.marching = None

    def _step_towards(self, src: int, dst: int) -> Optional[int]:
        if src == dst:
            return None
        from .graphs import lex_least_shortest_path

        return lex_least_shortest_path(self.g, src, dst)[1]

    # -- the move ------------------------------------------------------------

    def act(self, config, state):
        from .game import CopAction

        cops = state.cops
        robber = state.robber
        if state.captured() or robber is None:
            return CopAction(())

        # 0. capture whenever adjacent
        for slot, cv in enumerate(cops):
            if robber == cv or robber in self.g.adj[cv]:
                return CopAction(((slot, robber),))

        if self.phase == 0:
            self._init_team(cops, robber)

        # 1. guard maintenance (a real move ends the turn, a guide move not)
        try:
            mv = self.team.needed_move(cops, robber)
        except GuardConflict:
            if self.active_runner is not None:
                # the robber trampled the virtual guide; fall back to marching
                h, slot = self.active_runner
                self.team.assignment.pop(h, None)
                self.team.virtual_pos.pop(h, None)
                self.active_runner = None
                self.marching = (h, slot)
                mv = self.team.needed_move(cops, robber)
            else:
                raise
        if mv is not None:
            kind, ref, dest = mv
            if kind == "cop":
                return CopAction(((ref, dest),))
            self.team.virtual_pos[ref] = dest

        self._advance_phase(cops, robber)

        # 2. one scripted mover: expansion runner, pink runner, or chaser
        if self.marching is not None:
            h, slot = self.marching
            spot = self._virtual_spot(h, cops, robber)
            if spot is not None:
                self.team.assignment[h] = ("virtual", h)
                self.team.virtual_pos[h] = spot
                self.active_runner = (h, slot)
                self.marching = None
            else:
                target = min(
                    self.charts.charts[h].centrals,
                    key=lambda u: (self.g.distance(cops[slot], u), u),
                )
                step = self._step_towards(cops[slot], target)
                if step is not None:
                    return CopAction(((slot, step),))
                return CopAction(())
        if self.active_runner is None and self.pending:
            h, slot = self.pending.pop(0)
            self._start_expansion(h, slot, cops, robber)
        if self.active_runner is not None:
            h, slot = self.active_runner
            guide = self.team.virtual_pos[h]
            if cops[slot] != guide:
                step = self._step_towards(cops[slot], guide)
                return CopAction(((slot, step),))
            self.team.assignment[h] = ("cop", slot)
            del self.team.virtual_pos[h]
            self.active_runner = None
            self._advance_phase(cops, robber)

        for slot, target in self.pink_runners.items():
            step = self._step_towards(cops[slot], target)
            if step is not None:
                return CopAction(((slot, step),))

        if self.phase == 4:
            return self._chase_move(cops, robber)
        return CopAction(())

    def _advance_phase(self, cops, robber) -> None:
        """Pure bookkeeping between the numbered movement phases."""
        if (
            self.phase == 1
            and self.active_runner is None
            and self.marching is None
            and not self.pending
            and set(self.layout.red) <= set(self.team.guarded())
        ):
            half = self._component_of(robber, self._walls_mask(self.layout.red))
            self.region = half
            if self.skip_phase2:
                self.flags.append("phase2-skipped")
                self.free = [6]
                self.chasers = [6]
                self.phase = 4
                return
            self.yellow = next(
                y
                for y in self.layout.yellow
                if (half >> self.charts.charts[y].centrals[0]) & 1
            )
            self.pending.append((self.yellow, 6))
            self.phase = 2
        if (
            self.phase == 2
            and self.active_runner is None
            and self.marching is None
            and not self.pending
            and self.yellow in self.team.guarded()
        ):
            square = self._component_of(robber, self._walls_mask(self.team.guarded()))
            self.region = square
            self._release_spares(square)
            inner = [
                h
                for h in range(20)
                if all((square >> v) & 1 for v in self.arena.faces[12 + h].added_vertices)
            ]
            if len(inner) == 2:
                self.pink_targets = sorted(
                    set(self.arena.ball.hexagons[inner[0]])
                    & set(self.arena.ball.hexagons[inner[1]])
                )
            else:  # fall back to chasing inside the whole square
                self.flags.append(f"unexpected square interior {inner}")
                self.pink_targets = []
            for t in self.pink_targets:
                if self.free:
                    self.pink_runners[self.free.pop(0)] = t
            self.phase = 3
        if self.phase == 3:
            for slot, target in list(self.pink_runners.items()):
                if slot < len(cops) and cops[slot] == target:
                    self.posts[slot] = target
                    del self.pink_runners[slot]
            if not self.pink_runners:
                self.region = self._component_of(robber, self._forbidden_mask())
                self._release_spares(self.region)
                self.chasers = [s for s in self.free if s not in self.posts]
                self.phase = 4

    def _forbidden_mask(self) -> int:
        forb = self._walls_mask(self.team.guarded())
        for v in self.posts.values():
            forb |= 1 << v  # a standing cop seals its closed neighbourhood
            for w in self.g.adj[v]:
                forb |= 1 << w
        return forb

    def _release_spares(self, region: int) -> None:
        """Drop guards whose walls no longer bound the region."""
        for h in list(self.team.guarded()):
            ch = self.charts.charts[h]
            walls = set(ch.wall) | set(ch.centrals)
            touches = any(
                any((region >> w) & 1 for w in self.g.adj[wv]) for wv in walls
            )
            if touches:
                continue
            kind, slot = self.team.assignment[h]
            del self.team.assignment[h]
            self.team.virtual_pos.pop(h, None)
            # releasing must not let the region spill beyond h's own walls
            low = region & -region
            comp = self._component_of(low.bit_length() - 1, self._forbidden_mask())
            own = 0
            for v in walls:
                own |= 1 << v
            if comp & ~(region | own):
                self.team.assignment[h] = (kind, slot)  # still load-bearing
            elif kind == "cop" and slot not in self.free:
                self.free.append(slot)

    def _chase_move(self, cops, robber):
        from .game import CopAction
        from .solver import INF

        forb = self._forbidden_mask()
        if (forb >> robber) & 1:
            raise PhaseError("robber on a guarded vertex without capture")
        region = self._component_of(robber, forb)
        self.region = region
        self._release_spares(region)
        self.chasers = [s for s in self.free if s not in self.posts]
        if not self.chasers:
            return CopAction(())
        verts = frozenset(iter_bits(region))
        inside = [s for s in self.chasers if (region >> cops[s]) & 1]
        want = min(2 if len(verts) < 200 else 3, len(self.chasers))
        if len(inside) < want:
            for s in self.chasers:
                if (region >> cops[s]) & 1:
                    continue
                target = min(verts, key=lambda v: (self.g.distance(cops[s], v), v))
                step = self._step_towards(cops[s], target)
                if step is not None:
                    return CopAction(((s, step),))
            return CopAction(())
        use = sorted(inside)[:3]
        for n_c in (min(2, len(use)), min(3, len(use))):
            chosen = use[:n_c]
            sub, index, vlist, table = _solve_subgame(self.g, verts, n_c)
            subcops = tuple(sorted(index[cops[s]] for s in chosen))
            if table.capture_distance(subcops, index[robber], 0) != INF:
                break
        best = None
        for i, s in enumerate(chosen):
            for w in sub.adj[index[cops[s]]]:
                sc = sorted(index[cops[x]] if x != s else w for x in chosen)
                if index[robber] in sc:
                    key = (-1, i, w)
                else:
                    key = (table.capture_distance(tuple(sc), index[robber], 1), i, w)
                if best is None or key < best[0]:
                    best = (key, (s, vlist[w]))
        pass_d = table.capture_distance(subcops, index[robber], 1)
        if best is None or pass_d <= best[0][0]:
            return CopAction(())
        return CopAction(((best[1][0], best[1][1]),))


def verify_pair_composition(
    charts: ChartSet, h1: int, h2: int, starts: Optional[list[tuple[int, int]]] = None
) -> dict:
    """Check the one-mover discipline for a co-guarded pair, exhaustively.

    Explores every configuration reachable from central parking against an
    arbitrary robber; fails if both hexagons ever need a move at once, or if
    the composed response ever leaves either solved safe set.
    """
    g = charts.arena.graph
    bench = GuardBench(charts)
    c1, c2 = charts.charts[h1], charts.charts[h2]
    zone = c1.zone | c2.zone
    if starts is None:
        starts = [(u1, u2) for u1 in c1.centrals for u2 in c2.centrals]

    def robber_moves(r):
        if r == FAR:
            out = [FAR] + [w for w in zone if any(x not in zone for x in g.adj[w])]
            return out
        moves = [r] + [w if w in zone else FAR for w in g.adj[r]]
        return list(dict.fromkeys(moves))

    seen = set()
    stack = [(v1, v2, FAR) for v1, v2 in starts]
    conflicts = []
    unsafe = []
    explored = 0
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        explored += 1
        v1, v2, r = s
        for r2 in robber_moves(r):
            if r2 != FAR and (r2 == v1 or r2 == v2):
                continue  # suicide
            if r2 != FAR and (r2 in g.adj[v1] or r2 in g.adj[v2]):
                continue  # captured next turn
            need1 = bench.needed(h1, v1, r2 if r2 == FAR or r2 in c1.zone else FAR)
            need2 = bench.needed(h2, v2, r2 if r2 == FAR or r2 in c2.zone else FAR)
            if need1 and need2:
                conflicts.append((s, r2))
                continue
            w1, w2 = v1, v2
            if need1:
                mv = bench.reply(h1, v1, r2 if r2 != FAR else FAR)
                if mv is not None:
                    w1 = mv
            elif need2:
                mv = bench.reply(h2, v2, r2 if r2 != FAR else FAR)
                if mv is not None:
                    w2 = mv
            else:
                # optional tidy move for the higher-deviation side
                mv1 = bench.reply(h1, v1, r2)
                mv2 = bench.reply(h2, v2, r2)
                if mv1 is not None:
                    w1 = mv1
                elif mv2 is not None:
                    w2 = mv2
            ok1 = bench.pass_is_safe(h1, w1, r2)
            ok2 = bench.pass_is_safe(h2, w2, r2)
            if not (ok1 and ok2):
                unsafe.append((s, r2, (w1, w2)))
                continue
            stack.append((w1, w2, r2))
    return {
        "explored": explored,
        "conflicts": conflicts[:5],
        "conflict_count": len(conflicts),
        "unsafe": unsafe[:5],
        "unsafe_count": len(unsafe),
        "ok": not conflicts and not unsafe,
    }
