"""Turn loop for the (p:q) orientation game.

Maker moves first and orients at least 1 and at most p undirected pairs;
Breaker answers with at least 1 and at most q.  When every pair is
oriented the board is a tournament and the configured property decides
the winner.  The engine validates every move, can stop early once the
verdict is forced, and produces a replayable record.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .board import Board
from .errors import BadConfig, CorruptTranscript, NotATournament, ParseError
from .oracles import (
    PatternGraph,
    contains_embedding,
    find_cycle,
    is_strongly_connected,
    k_colorable,
    max_scc_size,
)

MAKER = "maker"
BREAKER = "breaker"

RECORD_FORMAT = "orientgames-record/1"


def other(role: str) -> str:
    return BREAKER if role == MAKER else MAKER


# ---------------------------------------------------------------------------
# Target properties
# ---------------------------------------------------------------------------


class Property:
    """What Maker wants to be true of the final tournament."""

    def key(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Cycle(Property):
    def key(self):
        return "cycle"


@dataclass(frozen=True)
class Hamiltonicity(Property):
    def key(self):
        return "hamiltonicity"


@dataclass(frozen=True)
class MinInDegreePositive(Property):
    def key(self):
        return "min-indegree-positive"


@dataclass(frozen=True)
class CycleLengthK(Property):
    k: int

    def key(self):
        return f"ck:{self.k}"


@dataclass(frozen=True)
class NonKColorable(Property):
    k: int

    def key(self):
        return f"nonkcol:{self.k}"


@dataclass(frozen=True)
class ContainsH(Property):
    pattern: PatternGraph

    def key(self):
        arcs = ",".join(f"{u}>{v}" for (u, v) in sorted(self.pattern.arcs))
        return f"contains:{self.pattern.t}:{arcs}"


def property_from_key(key: str) -> Property:
    if key == "cycle":
        return Cycle()
    if key in ("hamiltonicity", "hamilton"):
        return Hamiltonicity()
    if key in ("min-indegree-positive", "min-indegree"):
        return MinInDegreePositive()
    if key.startswith("ck:"):
        return CycleLengthK(int(key.split(":", 1)[1]))
    if key.startswith("nonkcol:"):
        return NonKColorable(int(key.split(":", 1)[1]))
    if key.startswith("contains:"):
        _, t, arcs = key.split(":", 2)
        pairs = frozenset(
            (int(a), int(b))
            for a, b in (part.split(">") for part in arcs.split(",") if part)
        )
        return ContainsH(PatternGraph(int(t), pairs))
    raise ParseError(f"unknown property key {key!r}")


def evaluate_property(board: Board, prop: Property) -> bool:
    """Judge the property on a finished tournament."""
    if not board.is_tournament():
        raise NotATournament("property is judged on the final tournament")
    if isinstance(prop, Cycle):
        return find_cycle(board) is not None
    if isinstance(prop, Hamiltonicity):
        # Equivalent to containing a Hamilton cycle, and much cheaper.
        return is_strongly_connected(board)
    if isinstance(prop, MinInDegreePositive):
        return all(board.in_degree(v) >= 1 for v in range(board.n))
    if isinstance(prop, CycleLengthK):
        # A tournament has a k-cycle iff some strong component has >= k
        # vertices (strong tournaments are vertex-pancyclic; Moon's theorem).
        if prop.k < 3:
            raise BadConfig("cycle length must be >= 3")
        return max_scc_size(board) >= prop.k
    if isinstance(prop, NonKColorable):
        return k_colorable(board, prop.k) is None
    if isinstance(prop, ContainsH):
        return contains_embedding(board, prop.pattern) is not None
    raise BadConfig(f"unknown property {prop!r}")


def forced_verdict(board: Board, prop: Property):
    """The verdict already forced by a partial board, or None.

    Sound but deliberately incomplete: orientation only ever adds arcs, so
    a cycle, a large strong component, or full strong connectivity can
    never be undone, and a vertex with all n-1 incident arcs pointing one
    way has its in- or out-degree pinned to 0.
    """
    n = board.n
    if isinstance(prop, Cycle):
        if find_cycle(board) is not None:
            return True
        return False if board.is_tournament() else None
    if isinstance(prop, CycleLengthK):
        if max_scc_size(board) >= prop.k:
            return True
        return None if not board.is_tournament() else False
    if isinstance(prop, Hamiltonicity):
        if n > 1 and any(
            board.out_degree(v) == n - 1 or board.in_degree(v) == n - 1
            for v in range(n)
        ):
            return False
        if is_strongly_connected(board):
            return True
        return None if not board.is_tournament() else False
    if isinstance(prop, MinInDegreePositive):
        if n > 1 and any(board.out_degree(v) == n - 1 for v in range(n)):
            return False
        if all(board.in_degree(v) >= 1 for v in range(n)):
            return True
        return None if not board.is_tournament() else False
    if isinstance(prop, ContainsH):
        if contains_embedding(board, prop.pattern) is not None:
            return True
        return None if not board.is_tournament() else False
    if board.is_tournament():
        return evaluate_property(board, prop)
    return None


# ---------------------------------------------------------------------------
# Config, moves, records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GameConfig:
    n: int
    p: int = 1
    q: int = 1
    prop: Property = field(default_factory=Cycle)
    seed: int = 0
    max_rounds: int | None = None
    early_stop: bool = True
    keep_digests: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise BadConfig(f"n must be >= 1, got {self.n}")
        if self.p < 1 or self.q < 1:
            raise BadConfig("both biases must be >= 1")


Move = tuple  # tuple of (u, v) arc declarations


def validate_move(board: Board, move, bias: int):
    """Reason the move is illegal on this board, or None if it is fine.

    At least one arc, at most bias (or all remaining pairs if fewer), no
    pair repeated, and every pair undirected when its turn comes.
    """
    if not move:
        return "empty move"
    limit = min(bias, board.undirected_count)
    if len(move) > limit:
        return f"{len(move)} arcs exceeds allowance {limit}"
    seen = set()
    for arc in move:
        if len(arc) != 2:
            return f"malformed arc {arc!r}"
        u, v = arc
        if u == v:
            return f"self-loop at {u}"
        if not (0 <= u < board.n and 0 <= v < board.n):
            return f"arc ({u},{v}) out of range"
        pair = (min(u, v), max(u, v))
        if pair in seen:
            return f"pair {pair} repeated in move"
        seen.add(pair)
        if not board.is_undirected(u, v):
            return f"pair {pair} already oriented"
    return None


def apply_move(board: Board, move) -> None:
    for (u, v) in move:
        board.orient(u, v)


@dataclass
class GameRecord:
    """Full replayable transcript of one game."""

    config: GameConfig
    transcript: list  # list of (role, move) pairs
    winner: str
    rounds: int
    forced_round: int | None = None
    forfeit: str | None = None
    forfeit_reason: str | None = None
    digests: list | None = None  # per-round board digests (the round trace)

    def to_json(self) -> str:
        doc = {
            "format": RECORD_FORMAT,
            "n": self.config.n,
            "p": self.config.p,
            "q": self.config.q,
            "property": self.config.prop.key(),
            "seed": self.config.seed,
            "moves": [
                {"role": role, "arcs": [f"{u}>{v}" for (u, v) in move]}
                for (role, move) in self.transcript
            ],
            "winner": self.winner,
            "rounds": self.rounds,
            "forced_round": self.forced_round,
            "forfeit": self.forfeit,
            "forfeit_reason": self.forfeit_reason,
            "digests": self.digests,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GameRecord":
        doc = json.loads(text)
        if doc.get("format") != RECORD_FORMAT:
            raise ParseError(f"unsupported record format {doc.get('format')!r}")
        config = GameConfig(
            n=doc["n"],
            p=doc["p"],
            q=doc["q"],
            prop=property_from_key(doc["property"]),
            seed=doc["seed"],
        )
        transcript = []
        for entry in doc["moves"]:
            arcs = tuple(
                (int(a), int(b))
                for a, b in (s.split(">") for s in entry["arcs"])
            )
            transcript.append((entry["role"], arcs))
        return cls(
            config=config,
            transcript=transcript,
            winner=doc["winner"],
            rounds=doc["rounds"],
            forced_round=doc.get("forced_round"),
            forfeit=doc.get("forfeit"),
            forfeit_reason=doc.get("forfeit_reason"),
            digests=doc.get("digests"),
        )


# ---------------------------------------------------------------------------
# Strategy interface
# ---------------------------------------------------------------------------


class Strategy:
    """Base class for both sides.

    A strategy is bound to one game: start() hands it the config and a
    private seeded generator, then next_move() is called whenever it is to
    move.  Given the same seed and transcript a strategy must propose the
    same move, and it must never propose an illegal one (the engine
    forfeits it if it does).
    """

    role = MAKER

    def start(self, config: GameConfig, rng: random.Random) -> None:
        self.config = config
        self.rng = rng

    def next_move(self, board: Board, transcript) -> Move:
        raise NotImplementedError

    def observe(self, board: Board, role: str, move) -> None:
        """Called after every applied move (own and opponent's)."""

    def state_key(self):
        """Hashable digest of private state, for the exhaustive verifier."""
        return None


def strategy_rng(config: GameConfig, role: str) -> random.Random:
    # String seeding is stable across processes (no hash randomization).
    return random.Random(f"{config.seed}/{role}")


# ---------------------------------------------------------------------------
# Playing and replaying
# ---------------------------------------------------------------------------


def play_game(config: GameConfig, maker: Strategy, breaker: Strategy) -> GameRecord:
    """Run one game to its verdict.

    Alternates Maker then Breaker until the board is complete, stopping
    early when the verdict is forced (if enabled).  An illegal move
    forfeits the offending side; this is recorded separately from a
    property loss.
    """
    if maker.role != MAKER or breaker.role != BREAKER:
        raise BadConfig("strategies do not match their roles")
    board = Board(config.n)
    if board.is_tournament():  # n=1: nothing to orient, judge immediately
        winner = MAKER if evaluate_property(board, config.prop) else BREAKER
        return GameRecord(config=config, transcript=[], winner=winner, rounds=0)
    maker.start(config, strategy_rng(config, MAKER))
    breaker.start(config, strategy_rng(config, BREAKER))
    transcript: list = []
    digests: list = [] if config.keep_digests else None
    rounds = 0
    winner = None
    forced_round = None
    forfeit = None
    forfeit_reason = None

    def half_turn(strategy: Strategy, bias: int):
        nonlocal winner, forced_round, forfeit, forfeit_reason
        move = tuple(strategy.next_move(board, transcript))
        reason = validate_move(board, move, bias)
        if reason is not None:
            forfeit = strategy.role
            forfeit_reason = reason
            winner = other(strategy.role)
            return False
        apply_move(board, move)
        transcript.append((strategy.role, move))
        maker.observe(board, strategy.role, move)
        breaker.observe(board, strategy.role, move)
        if config.early_stop and not board.is_tournament():
            verdict = forced_verdict(board, config.prop)
            if verdict is not None:
                winner = MAKER if verdict else BREAKER
                forced_round = rounds
                return False
        return not board.is_tournament()

    while True:
        rounds += 1
        if config.max_rounds is not None and rounds > config.max_rounds:
            raise BadConfig(f"max_rounds={config.max_rounds} exhausted before completion")
        if not half_turn(maker, config.p):
            break
        cont = half_turn(breaker, config.q)
        if digests is not None and forfeit is None:
            digests.append(board.digest())
        if not cont:
            break

    if winner is None:
        winner = MAKER if evaluate_property(board, config.prop) else BREAKER
    if digests is not None:
        digests.append(board.digest())
    return GameRecord(
        config=config,
        transcript=transcript,
        winner=winner,
        rounds=rounds,
        forced_round=forced_round,
        forfeit=forfeit,
        forfeit_reason=forfeit_reason,
        digests=digests,
    )


def replay(record: GameRecord) -> Board:
    """Reconstruct the final board from a record, validating as it goes.

    When the record carries digests (one per completed round plus the
    final board) each one is checked against the rebuilt board.
    """
    board = Board(record.config.n)
    expect = MAKER
    check_digests = bool(record.digests)
    round_digests = []
    for i, (role, move) in enumerate(record.transcript):
        if role != expect:
            raise CorruptTranscript(f"move {i}: expected {expect}, got {role}")
        bias = record.config.p if role == MAKER else record.config.q
        reason = validate_move(board, move, bias)
        if reason is not None:
            raise CorruptTranscript(f"move {i} ({role}): {reason}")
        apply_move(board, move)
        if check_digests and role == BREAKER:
            round_digests.append(board.digest())
        expect = other(role)
    if check_digests:
        if record.digests != round_digests + [board.digest()]:
            raise CorruptTranscript("per-round digest trace mismatch")
    return board
