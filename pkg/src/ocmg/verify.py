"""Mechanical verification: nearness lemma, travel episodes, campaigns.

The episode checker replays the deterministic robber brain against every
cop behaviour from a family of start configurations, with far cops held as
lower-bound vectors that only tighten when moved and that materialise into
every consistent vertex once they could matter.  Safety-game semantics:
a revisited state counts for the robber, capture or a policy breakdown is a
counterexample.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .autos import AutomorphismGroup, canonicalize_configuration
from .build import Arena
from .graphs import KEY, Graph, iter_bits, shortest_path_dag_levels
from .robber import FarCop, RegionLayout, TravelBrain, region_layout


# ---------------------------------------------------------------------------
# nearness lemma
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    outcome: str  # "proven-safe" | "counterexample" | "budget-exceeded"
    explored: int = 0
    trace: Optional[list] = None
    notes: dict = field(default_factory=dict)


def check_nearness(g: Graph, cop_radius: int = 6, pair_limit: Optional[int] = None) -> Verdict:
    """Exhaustive local nearness check over all key pairs at distance <= 4.

    For each (start v, target t) and each cop placement strictly farther from
    t, the interception inequality d(u, w) > i must hold for every vertex w
    at index i of any shortest path; being adjacent to t at arrival time is
    reported, not failed.
    """
    keys = g.key_vertices()
    pairs = [
        (v, t)
        for v in keys
        for t in keys
        if v != t and g.distance(v, t) <= 4
    ]
    if pair_limit:
        pairs = pairs[:pair_limit]
    explored = 0
    arrival_adjacency = 0
    for v, t in pairs:
        dvt = g.distance(v, t)
        levels = shortest_path_dag_levels(g, v, t)
        ball = g.ball(t, cop_radius)
        for u in iter_bits(ball):
            if g.distance(u, t) <= dvt:
                continue  # precondition: the robber is strictly nearer
            explored += 1
            du = g.dist[u]
            for i, level in enumerate(levels):
                for w in level:
                    if int(du[w]) <= i:
                        return Verdict(
                            "counterexample",
                            explored,
                            trace=[("v", v), ("t", t), ("cop", u), ("w", w), ("index", i)],
                        )
            if int(du[t]) - dvt == 1:
                arrival_adjacency += 1
    return Verdict(
        "proven-safe",
        explored,
        notes={"pairs": len(pairs), "arrivalAdjacency": arrival_adjacency},
    )


# ---------------------------------------------------------------------------
# episode model checking
# ---------------------------------------------------------------------------


@dataclass
class EpisodeSpec:
    case_id: str
    marker: int  # canonical adjacent-cop vertex
    starts: list[tuple]  # tuples of cop positions / FarCop for cops 2 and 3
    pivot: int = 0


MATERIALIZE_MARGIN = 2
ABSTRACT_RADIUS = 8


def _far_cop_consistent(g: Graph, brain: TravelBrain, fc: FarCop, radius: int) -> list[int]:
    out = []
    for x in range(g.n):
        if int(g.dist[x][brain.pivot]) > ABSTRACT_RADIUS:
            continue
        if all(int(g.dist[x][t]) >= b for t, b in zip(brain.targets, fc.bounds)):
            out.append(x)
    return out


def _far_floors(g: Graph, brain: TravelBrain) -> tuple[int, ...]:
    """Per-target minimum distances over vertices outside the abstract radius."""
    key = ("floors", brain.pivot)
    cache = getattr(brain, "_floor_cache", None)
    if cache is None:
        cache = brain._floor_cache = {}
    if key not in cache:
        outside = [x for x in range(g.n) if int(g.dist[x][brain.pivot]) > ABSTRACT_RADIUS]
        cache[key] = tuple(min(int(g.dist[x][t]) for x in outside) for t in brain.targets)
    return cache[key]


def _cop_transitions(g: Graph, brain: TravelBrain, cops: tuple, robber: int, radius: int):
    """All single-cop-step successors; a far cop may tighten its bounds by one
    (clamped to the true outside-radius minima) or materialise at any vertex
    consistent with them."""
    outs = [cops]
    floors = _far_floors(g, brain)
    for i, c in enumerate(cops):
        rest_pre, rest_post = cops[:i], cops[i + 1:]
        if isinstance(c, FarCop):
            for x in _far_cop_consistent(g, brain, c, radius):
                outs.append(tuple(sorted(rest_pre + (x,) + rest_post, key=_ckey)))
            moved = FarCop(tuple(max(b - 1, f) for b, f in zip(c.bounds, floors)))
            outs.append(tuple(sorted(rest_pre + (moved,) + rest_post, key=_ckey)))
        else:
            for w in g.adj[c]:
                outs.append(tuple(sorted(rest_pre + (w,) + rest_post, key=_ckey)))
    return list(dict.fromkeys(outs))


def _ckey(c):
    return (1, c.bounds) if isinstance(c, FarCop) else (0, c)


def model_check_episode(
    arena: Arena,
    brain: TravelBrain,
    spec: EpisodeSpec,
    budget: int = 2_000_000,
    radius: int = 14,
) -> Verdict:
    """Exhaustive adversarial search over cop behaviours vs the fixed brain."""
    g = arena.graph
    pivot = spec.pivot

    seen: set = set()
    stack: list[tuple] = []
    parent: dict = {}
    outcomes = {"stay": 0, "handoff": 0}

    for extra in spec.starts:
        cops = tuple(sorted((spec.marker,) + tuple(extra), key=_ckey))
        stack.append((0, pivot, cops, (), 0))
    explored = 0
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        explored += 1
        if explored > budget:
            return Verdict("budget-exceeded", explored)
        mover, r, cops, run, started = s
        concrete = [c for c in cops if not isinstance(c, FarCop)]
        if mover == 0:
            # robber's move is fixed by the policy
            if any(c == r for c in concrete):
                return Verdict("counterexample", explored, trace=_trace(parent, s, "captured"))
            if started and g.vertex_class[r] == KEY and not run:
                # every key touch must be a calm stay state or a trigger
                # configuration inside the family F0 verified by induction
                if brain.calm_key(r, cops):
                    outcomes["stay"] += 1
                    continue
                if brain.handoff_key(r, cops):
                    outcomes["handoff"] += 1
                    continue
                return Verdict(
                    "counterexample", explored, trace=_trace(parent, s, "handoff outside family")
                )
            if run:
                nxt = run[0]
                if all(nxt != c and nxt not in g.adj[c] for c in concrete):
                    dest, run2 = nxt, run[1:]
                else:
                    return Verdict(
                        "counterexample", explored, trace=_trace(parent, s, "run aborted")
                    )
            else:
                kind, val = brain.choose(r, cops)
                started = 1
                if kind == "run":
                    from .graphs import lex_least_shortest_path

                    path = lex_least_shortest_path(g, r, val)
                    dest, run2 = path[1], tuple(path[2:])
                elif kind == "step":
                    dest, run2 = val, ()
                else:
                    return Verdict(
                        "counterexample", explored, trace=_trace(parent, s, f"no move at {r}")
                    )
            if any(dest == c for c in concrete):
                return Verdict("counterexample", explored, trace=_trace(parent, s, "walked into a cop"))
            if run2 and g.vertex_class[dest] == KEY:
                run2 = ()  # key vertices interrupt a run
            t = (1, dest, cops, run2, 1)
            if t not in seen:
                parent[t] = s
                stack.append(t)
        else:
            for cops2 in _cop_transitions(g, brain, cops, r, radius):
                conc2 = [c for c in cops2 if not isinstance(c, FarCop)]
                if any(c == r for c in conc2):
                    return Verdict(
                        "counterexample", explored, trace=_trace(parent, s, "captured")
                    )
                # cops drifting far from the pivot collapse to bound vectors
                cops3 = tuple(
                    sorted(
                        (
                            brain.far_cop_at(c)
                            if not isinstance(c, FarCop)
                            and int(g.dist[c][pivot]) > ABSTRACT_RADIUS
                            else c
                            for c in cops2
                        ),
                        key=_ckey,
                    )
                )
                t = (0, r, cops3, run, started)
                if t not in seen:
                    parent[t] = s
                    stack.append(t)
    return Verdict("proven-safe", explored, notes=dict(outcomes))


def _trace(parent, s, label):
    out = [label]
    cur = s
    while cur in parent:
        out.append(cur)
        cur = parent[cur]
    out.append(cur)
    out.reverse()
    return out


# ---------------------------------------------------------------------------
# adversaries for the campaigns
# ---------------------------------------------------------------------------


class RandomCops:
    role = "cops"

    def __init__(self, g: Graph, c: int, seed: int = 0):
        self.g = g
        self.c = c
        self.rng = random.Random(seed)

    def place(self, config, state):
        return [self.rng.randrange(self.g.n) for _ in range(self.c)]

    def act(self, config, state):
        from .game import CopAction

        i = self.rng.randrange(self.c)
        moves = list(self.g.adj[state.cops[i]])
        if not moves or self.rng.random() < 0.2:
            return CopAction(())
        return CopAction(((i, self.rng.choice(moves)),))


class GreedyCops:
    """Each turn, the move that most reduces some cop's distance to the robber."""

    role = "cops"

    def __init__(self, g: Graph, c: int, placements: Optional[Sequence[int]] = None):
        self.g = g
        self.c = c
        self.placements = placements

    def place(self, config, state):
        if self.placements is not None:
            return list(self.placements)
        n = self.g.n
        return [(i * n) // self.c for i in range(self.c)]

    def act(self, config, state):
        from .game import CopAction

        g, r = self.g, state.robber
        best = None
        for i, c in enumerate(state.cops):
            for w in g.adj[c]:
                key = (int(g.dist[w][r]), int(g.dist[c][r]), i, w)
                if best is None or key < best[0]:
                    best = (key, (i, w))
        if best is None:
            return CopAction(())
        return CopAction((best[1],))


class MinimaxCops:
    """Depth-limited alpha-beta with a capture-distance evaluation."""

    role = "cops"

    def __init__(self, g: Graph, c: int, depth: int = 4, placements: Optional[Sequence[int]] = None):
        self.g = g
        self.c = c
        self.depth = depth
        self.placements = placements

    def place(self, config, state):
        if self.placements is not None:
            return list(self.placements)
        n = self.g.n
        return [(i * n) // self.c for i in range(self.c)]

    def _eval(self, cops, r):
        d = self.g.dist
        dists = sorted(int(d[c][r]) for c in cops)
        return dists[0] * 4 + dists[1 if len(dists) > 1 else 0]

    def act(self, config, state):
        from .game import CopAction

        g, r = self.g, state.robber
        cops = state.cops

        def cop_moves(cs):
            yield None
            for i, c in enumerate(cs):
                for w in sorted(g.adj[c], key=lambda w: int(g.dist[w][r])):
                    yield (i, w)

        def search(cs, rv, depth, alpha, beta, cop_turn):
            if rv in cs:
                return -1000 + (self.depth - depth)
            if depth == 0:
                return self._eval(cs, rv)
            if cop_turn:
                best = beta
                for mv in cop_moves(cs):
                    cs2 = cs if mv is None else cs[: mv[0]] + (mv[1],) + cs[mv[0] + 1:]
                    val = search(cs2, rv, depth - 1, alpha, best, False)
                    if val < best:
                        best = val
                    if best <= alpha:
                        break
                return best
            best = alpha
            for w in itertools.chain((rv,), g.adj[rv]):
                if w in cs:
                    continue
                val = search(cs, w, depth - 1, best, beta, True)
                if val > best:
                    best = val
                if best >= beta:
                    break
            return best

        best = None
        for mv in cop_moves(cops):
            cs2 = cops if mv is None else cops[: mv[0]] + (mv[1],) + cops[mv[0] + 1:]
            val = search(cs2, r, self.depth - 1, -10_000, 10_000, False)
            key = (val, 0 if mv is None else 1)
            if best is None or key < best[0]:
                best = (key, mv)
        mv = best[1]
        return CopAction(() if mv is None else (mv,))


class GreedyEvader:
    """Maximises distance to the nearest cop, preferring roomy vertices."""

    role = "robber"

    def __init__(self, g: Graph, start: Optional[int] = None):
        self.g = g
        self.start = start

    def place(self, config, state):
        g = self.g
        free = [v for v in range(g.n) if v not in state.cops]
        if self.start is not None:
            if self.start in state.cops:
                raise ValueError("start occupied by a cop")
            return self.start
        return max(free, key=lambda v: min(int(g.dist[v][c]) for c in state.cops))

    def act(self, config, state):
        from .game import RobberAction

        g, cops = self.g, state.cops
        moves = [state.robber] + list(g.adj[state.robber])
        return RobberAction(
            max(
                moves,
                key=lambda w: (
                    min(int(g.dist[w][c]) for c in cops),
                    g.degree(w),
                    -w,
                ),
            )
        )


class MinimaxEvader:
    """Depth-limited alpha-beta evader with the same evaluation."""

    role = "robber"

    def __init__(self, g: Graph, depth: int = 4, start: Optional[int] = None):
        self.g = g
        self.depth = depth
        self.start = start

    def place(self, config, state):
        g = self.g
        if self.start is not None:
            if self.start in state.cops:
                raise ValueError("start occupied by a cop")
            return self.start
        free = [v for v in range(g.n) if v not in state.cops]
        return max(free, key=lambda v: min(int(g.dist[v][c]) for c in state.cops))

    def act(self, config, state):
        from .game import RobberAction

        g = self.g
        cops = state.cops
        r = state.robber

        def search(cs, rv, depth, alpha, beta, robber_turn):
            if rv in cs:
                return -1000 + (self.depth - depth)
            if depth == 0:
                return min(int(g.dist[c][rv]) for c in cs) * 4 + g.degree(rv)
            if robber_turn:
                best = alpha
                for w in itertools.chain((rv,), g.adj[rv]):
                    if w in cs:
                        continue
                    val = search(cs, w, depth - 1, best, beta, False)
                    best = max(best, val)
                    if best >= beta:
                        break
                return best
            best = beta
            options = [None] + [
                (i, w) for i, c in enumerate(cs) for w in g.adj[c]
            ]
            options.sort(key=lambda mv: 0 if mv is None else int(g.dist[mv[1]][rv]))
            for mv in options:
                cs2 = cs if mv is None else cs[: mv[0]] + (mv[1],) + cs[mv[0] + 1:]
                val = search(cs2, rv, depth - 1, alpha, best, True)
                best = min(best, val)
                if best <= alpha:
                    break
            return best

        best = None
        for w in itertools.chain((r,), g.adj[r]):
            if w in cops:
                continue
            val = search(cops, w, self.depth - 1, -10_000, 10_000, False)
            key = (-val, w)
            if best is None or key < best[0]:
                best = (key, w)
        return RobberAction(best[1])


# ---------------------------------------------------------------------------
# campaigns
# ---------------------------------------------------------------------------


def endurance_campaign(arena, robber_factory, adversaries, turns: int) -> list[dict]:
    """Run the robber policy against each cop adversary; report survival."""
    from .game import GameConfig, play_match

    g = arena.graph
    rows = []
    for name, cop_policy in adversaries:
        config = GameConfig(3, 1, g)
        robber = robber_factory()
        t = play_match(config, cop_policy, robber, turn_budget=turns)
        rows.append(
            {
                "adversary": name,
                "outcome": t.outcome,
                "turns": t.turns,
                "survived": "RobberSurvived" in t.outcome,
                "flags": list(getattr(robber, "flags", [])),
            }
        )
    return rows


def capture_campaign(
    arena, cop_factory, evader_factory, starts: Iterable[int], budget: int
) -> list[dict]:
    """Run the cop policy against an evader from each robber start."""
    from .game import GameConfig, play_match

    g = arena.graph
    rows = []
    for start in starts:
        config = GameConfig(7, 1, g)
        cop_policy = cop_factory()
        placements = cop_policy.place(config, None)
        if start in placements:
            rows.append({"start": start, "outcome": "skipped (occupied)", "turns": 0, "captured": True})
            continue
        evader = evader_factory(start)
        t = play_match(config, cop_policy, evader, turn_budget=budget)
        rows.append(
            {
                "start": start,
                "outcome": t.outcome,
                "turns": t.turns,
                "captured": "CopsWin" in t.outcome,
            }
        )
    return rows
