"""Exact retrograde solver for the (c, k) cop game on small graphs.

States are (sorted cop multiset, robber vertex, mover).  The capture distance
of a cop-win state counts cop turns; robber-safe states keep the sentinel.
Propagation runs backwards from captured states with the usual min/max
counters, processed in 0/1-Dijkstra layers.
"""

from __future__ import annotations

import itertools
import json
import struct
from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from .game import (
    COPS_TO_MOVE,
    CopAction,
    GameConfig,
    GameState,
    ROBBER_TO_MOVE,
    RobberAction,
    graph_hash,
)
from .graphs import Graph

INF = 0xFFFF
COPS, ROBBER = 0, 1


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"state space {required} exceeds budget {budget}")
        self.required = required


def _multisets(n: int, c: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(n), c))


def _cop_moves(ms: tuple[int, ...], g: Graph, k: int) -> Iterable[tuple[int, ...]]:
    """All multisets reachable by moving up to k cops one step (incl. none)."""
    out = {ms}
    positions = list(ms)
    idxs = range(len(ms))
    for size in range(1, k + 1):
        for subset in itertools.combinations(idxs, size):
            for dests in itertools.product(*(g.adj[positions[i]] for i in subset)):
                nxt = positions[:]
                for i, d in zip(subset, dests):
                    nxt[i] = d
                out.add(tuple(sorted(nxt)))
    return out


@dataclass
class WinTable:
    graph: Graph
    c: int
    k: int
    dist: np.ndarray  # shape (n_multisets, n, 2), uint16
    multisets: list[tuple[int, ...]]
    ms_index: dict[tuple[int, ...], int]

    def capture_distance(self, cops: Sequence[int], robber: int, mover: int) -> int:
        return int(self.dist[self.ms_index[tuple(sorted(cops))], robber, mover])

    def is_cop_win(self, cops: Sequence[int], robber: int, mover: int) -> bool:
        return self.capture_distance(cops, robber, mover) != INF

    def cop_win_fraction(self) -> float:
        return float((self.dist != INF).mean())

    def save(self, path: str) -> None:
        head = json.dumps(
            {"graphHash": graph_hash(self.graph), "n": self.graph.n,
             "c": self.c, "k": self.k, "version": 1}
        ).encode()
        with open(path, "wb") as f:
            f.write(struct.pack("<I", len(head)))
            f.write(head)
            f.write(self.dist.astype("<u2").tobytes())

    def summary(self) -> dict:
        finite = self.dist[self.dist != INF]
        return {
            "copWinFraction": self.cop_win_fraction(),
            "maxCaptureDistance": int(finite.max()) if finite.size else None,
        }


def load_win_table(path: str, graph: Graph) -> WinTable:
    with open(path, "rb") as f:
        (hlen,) = struct.unpack("<I", f.read(4))
        head = json.loads(f.read(hlen))
        if head["graphHash"] != graph_hash(graph):
            raise ValueError("win table was computed for a different graph")
        c, k = head["c"], head["k"]
        ms = _multisets(graph.n, c)
        dist = np.frombuffer(f.read(), dtype="<u2").reshape(len(ms), graph.n, 2).copy()
    return WinTable(graph, c, k, dist, ms, {m: i for i, m in enumerate(ms)})


def classify_states(
    g: Graph, c: int, k: int, symmetry: str = "off", budget: int = 200_000_000
) -> WinTable:
    if not (1 <= k <= c):
        raise ValueError("need 1 <= k <= c")
    n = g.n
    n_ms = comb(n + c - 1, c)
    if n_ms * n * 2 > budget:
        raise BudgetExceeded(n_ms * n * 2, budget)
    if symmetry == "on":
        return _classify_symmetric(g, c, k)

    multisets = _multisets(n, c)
    ms_index = {m: i for i, m in enumerate(multisets)}
    dist = np.full((len(multisets), n, 2), INF, dtype=np.uint16)

    # counters for robber-to-move states: number of robber actions
    counters = np.zeros((len(multisets), n), dtype=np.int32)
    for r in range(n):
        counters[:, r] = len(g.adj[r]) + 1

    cop_move_cache: dict[tuple[int, ...], list[int]] = {}

    def cop_neighbors(mi: int) -> list[int]:
        ms = multisets[mi]
        got = cop_move_cache.get(ms)
        if got is None:
            got = [ms_index[m2] for m2 in _cop_moves(ms, g, k)]
            cop_move_cache[ms] = got
        return got

    current: list[tuple[int, int]] = []
    nxt: list[tuple[int, int]] = []
    for mi, ms in enumerate(multisets):
        for r in set(ms):
            dist[mi, r, COPS] = 0
            dist[mi, r, ROBBER] = 0
            current.append((mi, r))

    layer = 0
    processed_cops: set[tuple[int, int]] = set()
    while current:
        # mover=ROBBER entries of this layer feed cop states of the next layer;
        # mover=COPS entries feed robber states of this same layer.
        queue = list(current)
        current = []
        qi = 0
        while qi < len(queue):
            mi, r = queue[qi]
            qi += 1
            d_rob = int(dist[mi, r, ROBBER])
            d_cop = int(dist[mi, r, COPS])
            if d_rob == layer:
                for mj in cop_neighbors(mi):
                    if dist[mj, r, COPS] == INF:
                        dist[mj, r, COPS] = layer + 1
                        nxt.append((mj, r))
            if d_cop == layer and (mi, r) not in processed_cops:
                processed_cops.add((mi, r))
                for r2 in itertools.chain((r,), g.adj[r]):
                    if dist[mi, r2, ROBBER] == INF:
                        counters[mi, r2] -= 1
                        if counters[mi, r2] == 0:
                            dist[mi, r2, ROBBER] = layer
                            queue.append((mi, r2))
        current = nxt
        nxt = []
        layer += 1

    return WinTable(g, c, k, dist, multisets, ms_index)


def _classify_symmetric(g: Graph, c: int, k: int) -> WinTable:
    """Canonical-state solve; results re-expanded to the full table."""
    from .autos import automorphism_group

    aut = automorphism_group(g)
    n = g.n
    multisets = _multisets(n, c)
    ms_index = {m: i for i, m in enumerate(multisets)}

    def canon(ms: tuple[int, ...], r: int) -> tuple[tuple[int, ...], int]:
        best = None
        for p in aut.elements:
            cand = (tuple(sorted(p[v] for v in ms)), p[r])
            if best is None or cand < best:
                best = cand
        return best

    reps: dict[tuple[tuple[int, ...], int], int] = {}
    rep_list: list[tuple[tuple[int, ...], int]] = []
    for ms in multisets:
        for r in range(n):
            key = canon(ms, r)
            if key not in reps:
                reps[key] = len(rep_list)
                rep_list.append(key)

    succ: list[list[list[int]]] = [[[], []] for _ in rep_list]  # [cops succ][robber succ]
    for si, (ms, r) in enumerate(rep_list):
        succ[si][COPS] = sorted({reps[canon(m2, r)] for m2 in _cop_moves(ms, g, k)})
        succ[si][ROBBER] = sorted({reps[canon(ms, r2)] for r2 in itertools.chain((r,), g.adj[r])})

    pred: list[list[list[int]]] = [[[], []] for _ in rep_list]
    for si in range(len(rep_list)):
        for sj in succ[si][COPS]:
            pred[sj][ROBBER].append(si)  # cop move leads to robber-to-move state
        for sj in succ[si][ROBBER]:
            pred[sj][COPS].append(si)

    dist = np.full((len(rep_list), 2), INF, dtype=np.uint16)
    counters = np.array([len(succ[si][ROBBER]) for si in range(len(rep_list))], dtype=np.int32)
    current = []
    for si, (ms, r) in enumerate(rep_list):
        if r in ms:
            dist[si, COPS] = 0
            dist[si, ROBBER] = 0
            current.append(si)
    layer = 0
    done_cops = set()
    while current:
        queue = list(current)
        current = []
        nxt = []
        qi = 0
        while qi < len(queue):
            si = qi and None  # placeholder to appease linters
            si = queue[qi]
            qi += 1
            if dist[si, ROBBER] == layer:
                for sj in pred[si][ROBBER]:
                    if dist[sj, COPS] == INF:
                        dist[sj, COPS] = layer + 1
                        nxt.append(sj)
            if dist[si, COPS] == layer and si not in done_cops:
                done_cops.add(si)
                for sj in pred[si][COPS]:
                    if dist[sj, ROBBER] == INF:
                        counters[sj] -= 1
                        if counters[sj] == 0:
                            dist[sj, ROBBER] = layer
                            queue.append(sj)
        current = nxt
        layer += 1

    full = np.full((len(multisets), n, 2), INF, dtype=np.uint16)
    for mi, ms in enumerate(multisets):
        for r in range(n):
            si = reps[canon(ms, r)]
            full[mi, r, COPS] = dist[si, COPS]
            full[mi, r, ROBBER] = dist[si, ROBBER]
    return WinTable(g, c, k, full, multisets, ms_index)


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------


def cops_win_from_placement(table: WinTable, cops: Sequence[int]) -> bool:
    """Do the cops win however the robber places (cops then move first)?"""
    g = table.graph
    ms = tuple(sorted(cops))
    free = [r for r in range(g.n) if r not in ms]
    if not free:
        return True
    return all(table.is_cop_win(ms, r, COPS) for r in free)


def optimal_placements(table: WinTable) -> list[tuple[int, ...]]:
    return [ms for ms in table.multisets if cops_win_from_placement(table, ms)]


def min_cops(g: Graph, k: int, c_max: int, budget: int = 200_000_000) -> Optional[int]:
    for c in range(1, c_max + 1):
        table = classify_states(g, c, min(k, c), budget=budget)
        if optimal_placements(table):
            return c
    return None


def cop_number(g: Graph, c_max: int = 6, budget: int = 200_000_000) -> Optional[int]:
    for c in range(1, c_max + 1):
        table = classify_states(g, c, c, budget=budget)
        if optimal_placements(table):
            return c
    return None


def check_vertex_guard_lemma(g: Graph, v: int, c_max: int = 5) -> dict:
    """cop_1(G) <= cop_1(G - v) + 1, both sides by brute force."""
    sub, _ = g.delete_vertex(v)
    if not sub.is_connected():
        raise ValueError(f"deleting {v} disconnects the graph")
    c_full = min_cops(g, 1, c_max)
    c_sub = min_cops(sub, 1, c_max)
    ok = c_full is not None and c_sub is not None and c_full <= c_sub + 1
    return {"cop1": c_full, "cop1_minus_v": c_sub, "pass": ok}


# ---------------------------------------------------------------------------
# table-driven policies
# ---------------------------------------------------------------------------


@dataclass
class TablePolicy:
    table: WinTable
    role: str

    def place(self, config: GameConfig, state: GameState):
        g = config.graph
        if self.role == "cops":
            best = None
            for ms in self.table.multisets:
                wins = cops_win_from_placement(self.table, ms)
                score = (0 if wins else 1, ms)
                if best is None or score < best[0]:
                    best = (score, ms)
            return list(best[1])
        free = [v for v in range(g.n) if v not in state.cops]
        safe = [v for v in free if not self.table.is_cop_win(state.cops, v, COPS)]
        pool = safe or free
        # prefer staying far from the cops among equally classified cells
        return max(pool, key=lambda v: min(g.distance(v, cv) for cv in state.cops))

    def act(self, config: GameConfig, state: GameState):
        t = self.table
        if self.role == "cops":
            if state.captured() or state.robber is None:
                return CopAction(())
            from .game import enumerate_cop_actions, apply_action

            best = None
            for a in enumerate_cop_actions(config, state):
                s2 = apply_action(config, state, a)
                d = 0 if s2.captured() else t.capture_distance(s2.cops, s2.robber, ROBBER)
                key = (d, len(a.moves), a.moves)
                if best is None or key < best[0]:
                    best = (key, a)
            return best[1]
        from .game import enumerate_robber_actions, apply_action

        best = None
        for a in enumerate_robber_actions(config, state):
            s2 = apply_action(config, state, a)
            d = 0 if s2.captured() else t.capture_distance(s2.cops, s2.robber, COPS)
            score = -1 if d == INF else d  # prefer robber-safe, then slowest capture
            key = (0 if score == -1 else 1, -score, a.destination)
            if best is None or key < best[0]:
                best = (key, a)
        return best[1]
