"""The k-cop-move game: states, legal actions, match play, transcripts.

Rules: the cop player places first, the robber places on a cop-free vertex,
then the cop player moves first.  On a cop turn at most k cops move, each by
one step; on a robber turn the robber moves by at most one step.  Nobody is
forced to move.  Capture is co-location, in either direction.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Protocol, Sequence

from .graphs import Graph

COP_PLACEMENT = "cop-placement"
ROBBER_PLACEMENT = "robber-placement"
COPS_TO_MOVE = "cops-to-move"
ROBBER_TO_MOVE = "robber-to-move"
CAPTURED = "captured"


class IllegalAction(ValueError):
    pass


@dataclass(frozen=True)
class GameConfig:
    cop_count: int
    moves_per_turn: int
    graph: Graph

    def __post_init__(self):
        if not (1 <= self.moves_per_turn <= self.cop_count):
            raise ValueError("need 1 <= k <= c")


@dataclass(frozen=True)
class GameState:
    cops: tuple[int, ...]
    robber: Optional[int]
    phase: str
    turn_count: int = 0

    def captured(self) -> bool:
        return self.phase == CAPTURED


@dataclass(frozen=True)
class CopAction:
    moves: tuple[tuple[int, int], ...]  # (cop index, destination)


@dataclass(frozen=True)
class RobberAction:
    destination: int


PASS_COPS = CopAction(())


def initial_state(config: GameConfig, cop_placements: Sequence[int]) -> GameState:
    g = config.graph
    if len(cop_placements) != config.cop_count:
        raise IllegalAction(f"need {config.cop_count} placements, got {len(cop_placements)}")
    for v in cop_placements:
        if not (0 <= v < g.n):
            raise IllegalAction(f"unknown vertex {v}")
    cops = tuple(cop_placements)
    if len(set(cops)) >= g.n:
        # no free vertex for the robber: a cop win at placement time
        return GameState(cops, None, CAPTURED, 0)
    return GameState(cops, None, ROBBER_PLACEMENT, 0)


def place_robber(state: GameState, v: int) -> GameState:
    if state.phase != ROBBER_PLACEMENT:
        raise IllegalAction(f"cannot place robber in phase {state.phase}")
    if v in state.cops:
        raise IllegalAction(f"vertex {v} occupied by a cop")
    return GameState(state.cops, v, COPS_TO_MOVE, state.turn_count + 1)


def enumerate_cop_actions(config: GameConfig, state: GameState) -> list[CopAction]:
    if state.phase != COPS_TO_MOVE:
        raise IllegalAction(f"not the cop player's turn ({state.phase})")
    g = config.graph
    k = config.moves_per_turn
    actions = [PASS_COPS]
    indices = range(config.cop_count)
    for size in range(1, k + 1):
        for subset in itertools.combinations(indices, size):
            for dests in itertools.product(*(g.adj[state.cops[i]] for i in subset)):
                actions.append(CopAction(tuple(zip(subset, dests))))
    return actions


def enumerate_robber_actions(config: GameConfig, state: GameState) -> list[RobberAction]:
    if state.phase != ROBBER_TO_MOVE:
        raise IllegalAction(f"not the robber's turn ({state.phase})")
    assert state.robber is not None
    return [RobberAction(state.robber)] + [
        RobberAction(w) for w in config.graph.adj[state.robber]
    ]


def apply_action(config: GameConfig, state: GameState, action) -> GameState:
    g = config.graph
    if isinstance(action, CopAction):
        if state.phase != COPS_TO_MOVE:
            raise IllegalAction(f"cop action in phase {state.phase}")
        if len(action.moves) > config.moves_per_turn:
            raise IllegalAction("moves_per_turn exceeded")
        seen = set()
        cops = list(state.cops)
        for idx, dest in action.moves:
            if idx in seen:
                raise IllegalAction(f"cop {idx} moved twice")
            seen.add(idx)
            if not (0 <= idx < config.cop_count):
                raise IllegalAction(f"no cop {idx}")
            if dest not in g.adj[cops[idx]]:
                raise IllegalAction(f"cop {idx}: {cops[idx]} -> {dest} is not an edge")
            cops[idx] = dest
        captured = state.robber is not None and state.robber in cops
        return GameState(
            tuple(cops),
            state.robber,
            CAPTURED if captured else ROBBER_TO_MOVE,
            state.turn_count + 1,
        )
    if isinstance(action, RobberAction):
        if state.phase != ROBBER_TO_MOVE:
            raise IllegalAction(f"robber action in phase {state.phase}")
        assert state.robber is not None
        dest = action.destination
        if dest != state.robber and dest not in g.adj[state.robber]:
            raise IllegalAction(f"robber: {state.robber} -> {dest} is not an edge")
        captured = dest in state.cops
        return GameState(
            state.cops,
            dest,
            CAPTURED if captured else COPS_TO_MOVE,
            state.turn_count + 1,
        )
    raise IllegalAction(f"unknown action {action!r}")


# ---------------------------------------------------------------------------
# policies and match play
# ---------------------------------------------------------------------------


class Policy(Protocol):
    role: str  # "cops" | "robber"

    def place(self, config: GameConfig, state: GameState):
        """Placement decision: list of vertices (cops) or one vertex (robber)."""

    def act(self, config: GameConfig, state: GameState):
        """Move decision for the declared role."""


def graph_hash(g: Graph) -> str:
    blob = json.dumps(sorted(g.edges())).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class Transcript:
    graph_hash: str
    c: int
    k: int
    seed: int
    records: list[dict] = field(default_factory=list)
    outcome: Optional[str] = None
    turns: int = 0

    def to_jsonl(self) -> str:
        lines = [json.dumps({"format": "ocmg-transcript v1", "graphHash": self.graph_hash,
                             "c": self.c, "k": self.k, "seed": self.seed})]
        lines += [json.dumps(r) for r in self.records]
        lines.append(json.dumps({"outcome": self.outcome, "turns": self.turns}))
        return "\n".join(lines) + "\n"


def _encode_action(action) -> dict:
    if isinstance(action, CopAction):
        return {"type": "cop", "moves": [list(m) for m in action.moves]}
    if isinstance(action, RobberAction):
        return {"type": "robber", "dest": action.destination}
    return {"type": "place", "at": action}


def play_match(
    config: GameConfig,
    cop_policy: Policy,
    robber_policy: Policy,
    turn_budget: int,
    seed: int = 0,
    on_state: Optional[Callable[[GameState], None]] = None,
) -> Transcript:
    if turn_budget < 1:
        raise ValueError("turn budget must be >= 1")
    t = Transcript(graph_hash(config.graph), config.cop_count, config.moves_per_turn, seed)
    placements = cop_policy.place(config, GameState((), None, COP_PLACEMENT))
    state = initial_state(config, placements)
    t.records.append({"phase": COP_PLACEMENT, "actor": "cops", "action": _encode_action(list(placements)),
                      "cops": list(state.cops), "robber": None})
    if state.phase == ROBBER_PLACEMENT:
        rv = robber_policy.place(config, state)
        state = place_robber(state, rv)
        t.records.append({"phase": ROBBER_PLACEMENT, "actor": "robber", "action": _encode_action(rv),
                          "cops": list(state.cops), "robber": state.robber})
    if on_state:
        on_state(state)
    while not state.captured() and state.turn_count < turn_budget:
        actor = "cops" if state.phase == COPS_TO_MOVE else "robber"
        policy = cop_policy if actor == "cops" else robber_policy
        action = policy.act(config, state)
        try:
            state = apply_action(config, state, action)
        except IllegalAction as e:
            raise IllegalAction(f"{actor} policy returned illegal action {action!r} at {state!r}: {e}")
        t.records.append({"phase": state.phase, "actor": actor, "action": _encode_action(action),
                          "cops": list(state.cops), "robber": state.robber})
        if on_state:
            on_state(state)
    t.turns = state.turn_count
    t.outcome = f"CopsWin({state.turn_count})" if state.captured() else f"RobberSurvived({turn_budget})"
    return t


def replay(config: GameConfig, transcript: Transcript) -> GameState:
    """Re-apply a transcript's actions; returns the final state."""
    state: Optional[GameState] = None
    for rec in transcript.records:
        act = rec["action"]
        if rec["phase"] == COP_PLACEMENT:
            state = initial_state(config, act["at"])
        elif rec["phase"] == ROBBER_PLACEMENT:
            state = place_robber(state, act["at"])
        elif act["type"] == "cop":
            state = apply_action(config, state, CopAction(tuple((i, d) for i, d in act["moves"])))
        elif act["type"] == "robber":
            state = apply_action(config, state, RobberAction(act["dest"]))
        assert (list(state.cops), state.robber) == (rec["cops"], rec["robber"]), "transcript divergence"
    return state
