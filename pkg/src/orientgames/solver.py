"""Exact game-tree solving and exhaustive strategy verification.

Small orientation games are solved by depth-first minimax with a
transposition table.  Multi-arc turns are expanded into sequences of
single orientations plus a voluntary end-of-turn (legal once at least one
arc is down); the opponent never observes mid-turn states, so this is
value-preserving and lets transpositions collapse.  Monotone properties
cut whole subtrees via forced verdicts.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass

from .board import Board, pair_count
from .engine import (
    BREAKER,
    MAKER,
    ContainsH,
    Cycle,
    CycleLengthK,
    GameConfig,
    apply_move,
    evaluate_property,
    forced_verdict,
    other,
    strategy_rng,
    validate_move,
)
from .errors import BudgetExceeded

SOLVER_MAX_BIAS = 3


def _budget_n(prop) -> int:
    if isinstance(prop, Cycle):
        return 5
    if isinstance(prop, CycleLengthK) and prop.k == 3:
        return 5
    if isinstance(prop, ContainsH) and prop.pattern.t <= 3:
        return 5
    return 4


@dataclass
class SolveResult:
    winner: str
    nodes: int
    pv: list  # principal variation as (role, move) pairs
    memo_hits: int


def _perm_key(board: Board, perms) -> bytes:
    best = None
    for perm in perms:
        key = board.relabeled(perm).canonical_key()
        if best is None or key < best:
            best = key
    return best


def solve_orientation_game(n: int, p: int, q: int, prop,
                           start_board: Board | None = None,
                           use_memo: bool = True,
                           symmetry_reduction: bool = False) -> SolveResult:
    """Exact winner of the (p:q) orientation game under optimal play."""
    if n > _budget_n(prop):
        raise BudgetExceeded(f"solver capped at n={_budget_n(prop)} for {prop!r}")
    if p > SOLVER_MAX_BIAS or q > SOLVER_MAX_BIAS:
        raise BudgetExceeded(f"solver capped at bias {SOLVER_MAX_BIAS}")
    if symmetry_reduction and n > 4:
        raise BudgetExceeded("isomorphism keying only for n <= 4")
    board = start_board.copy() if start_board is not None else Board(n)
    perms = list(itertools.permutations(range(n))) if symmetry_reduction else None
    memo: dict = {}
    stats = {"nodes": 0, "hits": 0}

    def board_key(b: Board) -> bytes:
        if perms is not None:
            return _perm_key(b, perms)
        return b.canonical_key()

    def search(mover: str, budget: int, opened: bool) -> bool:
        """True iff Maker wins from here with mover to continue the turn."""
        stats["nodes"] += 1
        verdict = forced_verdict(board, prop)
        if verdict is not None:
            return verdict
        if board.is_tournament():
            return evaluate_property(board, prop)
        key = None
        if use_memo:
            key = (
                board_key(board),
                mover,
                min(budget, board.undirected_count),
                opened,
            )
            hit = memo.get(key)
            if hit is not None:
                stats["hits"] += 1
                return hit
        want = mover == MAKER
        result = not want
        if opened:
            # Voluntarily end the turn.
            nxt = other(mover)
            if search(nxt, q if nxt == BREAKER else p, False) == want:
                result = want
        if result != want and budget > 0:
            done = False
            for (u, v) in board.undirected_pairs():
                for arc in ((u, v), (v, u)):
                    board.orient(*arc)
                    sub = search(mover, budget - 1, True)
                    board._undo_orient(*arc)
                    if sub == want:
                        result = want
                        done = True
                        break
                if done:
                    break
        if use_memo:
            memo[key] = result
        return result

    maker_wins = search(MAKER, p, False)

    # Principal variation: greedy re-walk along memoized values.
    pv: list = []
    turn_arcs: list = []

    def walk(mover: str, budget: int, opened: bool, depth: int):
        if forced_verdict(board, prop) is not None or board.is_tournament():
            return
        if depth > 2 * pair_count(n) + 64:
            return
        want = mover == MAKER
        value = search(mover, budget, opened)
        if opened:
            nxt = other(mover)
            if search(nxt, q if nxt == BREAKER else p, False) == value:
                pv.append((mover, tuple(turn_arcs)))
                turn_arcs.clear()
                walk(nxt, q if nxt == BREAKER else p, False, depth + 1)
                return
        if budget > 0:
            for (u, v) in board.undirected_pairs():
                for arc in ((u, v), (v, u)):
                    board.orient(*arc)
                    if search(mover, budget - 1, True) == value:
                        turn_arcs.append(arc)
                        walk(mover, budget - 1, True, depth + 1)
                        return
                    board._undo_orient(*arc)

    walk(MAKER, p, False, 0)
    if turn_arcs:
        pv.append((MAKER if len(pv) % 2 == 0 else BREAKER, tuple(turn_arcs)))
    # The walk may leave the shared board dirty; rebuild for safety.
    return SolveResult(
        winner=MAKER if maker_wins else BREAKER,
        nodes=stats["nodes"],
        pv=pv,
        memo_hits=stats["hits"],
    )


# ---------------------------------------------------------------------------
# Exhaustive strategy verification
# ---------------------------------------------------------------------------


@dataclass
class VerifyResult:
    ok: bool
    counterexample: list | None  # transcript of (role, move) pairs
    nodes: int = 0

    def __bool__(self):
        return self.ok


def _opponent_turn_boards(board: Board, bias: int):
    """Distinct boards reachable by 1..bias single orientations.

    Yields (representative move, resulting board).  Deduplicated by the
    reached position: arc order within a turn is unobservable.
    """
    seen = {}
    frontier = {board.canonical_key(): (board, ())}
    for _ in range(min(bias, board.undirected_count)):
        nxt = {}
        for _, (b, moves) in sorted(frontier.items()):
            for (u, v) in b.undirected_pairs():
                for arc in ((u, v), (v, u)):
                    b2 = b.copy()
                    b2.orient(*arc)
                    key = b2.canonical_key()
                    if key not in seen and key not in nxt:
                        nxt[key] = (b2, moves + (arc,))
        for key, (b2, moves) in nxt.items():
            if key not in seen:
                seen[key] = (b2, moves)
        frontier = nxt
        if not frontier:
            break
    for key in sorted(seen):
        b2, moves = seen[key]
        yield moves, b2


def verify_strategy_vs_all(strategy_factory, role: str, n: int, p: int, q: int, prop,
                           seed: int = 0, node_limit: int = 50_000_000) -> VerifyResult:
    """Check a deterministic strategy against every legal opponent line.

    The fixed side plays the strategy; the opponent's turns are expanded
    exhaustively (deduplicated by reached board).  Returns ok=True iff the
    strategy achieves its goal on every branch, else a counterexample
    transcript.  Memoization keys on (board, strategy state, pending
    opponent move), since strategies may read both their own state and the
    opponent's last move.
    """
    config = GameConfig(n=n, p=p, q=q, prop=prop, seed=seed, early_stop=False)
    goal = role == MAKER  # desired property verdict
    own_bias = p if role == MAKER else q
    opp_bias = q if role == MAKER else p
    opp_role = other(role)
    stats = {"nodes": 0}
    verified: set = set()

    def fresh_strategy():
        s = strategy_factory()
        s.start(config, strategy_rng(config, role))
        return s

    def outcome(board: Board):
        if board.is_tournament():
            return evaluate_property(board, prop)
        return forced_verdict(board, prop)

    def strategy_turn(board: Board, strat, transcript):
        """Returns None if the subtree is fine, else a counterexample."""
        stats["nodes"] += 1
        if stats["nodes"] > node_limit:
            raise BudgetExceeded(f"verification exceeded {node_limit} nodes")
        last_move = transcript[-1][1] if transcript else ()
        key = (board.canonical_key(), strat.state_key(), last_move)
        if key in verified:
            return None
        move = tuple(strat.next_move(board, transcript))
        reason = validate_move(board, move, own_bias)
        if reason is not None:
            return transcript + [(role, move)]
        b2 = board.copy()
        apply_move(b2, move)
        strat.observe(b2, role, move)
        transcript.append((role, move))
        bad = after_move(b2, strat, transcript)
        transcript.pop()
        if bad is None:
            verified.add(key)
        return bad

    def after_move(board: Board, strat, transcript):
        v = outcome(board)
        if v is not None:
            return None if v == goal else list(transcript)
        mover = transcript[-1][0] if transcript else None
        next_role = other(mover) if mover else MAKER
        if next_role == role:
            return strategy_turn(board, strat, transcript)
        return opponent_turn(board, strat, transcript)

    def opponent_turn(board: Board, strat, transcript):
        for moves, b2 in _opponent_turn_boards(board, opp_bias):
            s2 = copy.deepcopy(strat)
            s2.observe(b2, opp_role, moves)
            transcript.append((opp_role, moves))
            bad = after_move(b2, s2, transcript)
            transcript.pop()
            if bad is not None:
                return bad
        return None

    strat = fresh_strategy()
    board = Board(n)
    if role == MAKER:
        bad = strategy_turn(board, strat, [])
    else:
        bad = opponent_turn(board, strat, [])
    return VerifyResult(ok=bad is None, counterexample=bad, nodes=stats["nodes"])


# ---------------------------------------------------------------------------
# Threshold scans
# ---------------------------------------------------------------------------


def threshold_scan(n: int, prop, q_max: int | None = None) -> int:
    """Minimal Breaker bias winning the (1:b) game, verified monotone.

    Scans every bias from 1 up to q_max (default: the solver's bias cap),
    solving each exactly, and checks the scan is a clean Maker-prefix /
    Breaker-suffix split before returning the threshold.
    """
    if q_max is None:
        q_max = SOLVER_MAX_BIAS
    winners = []
    for b in range(1, q_max + 1):
        winners.append(solve_orientation_game(n, 1, b, prop).winner)
    if BREAKER not in winners:
        raise BudgetExceeded(f"Breaker never wins up to bias {q_max}; cannot bracket")
    t = winners.index(BREAKER) + 1
    for b, w in enumerate(winners, start=1):
        expected = MAKER if b < t else BREAKER
        if w != expected:
            raise AssertionError(
                f"bias monotonicity violated at n={n}: winners={winners}"
            )
    return t
