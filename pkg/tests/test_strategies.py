import copy
import math

import numpy as np
import pytest

from orientgames.board import Board
from orientgames.engine import (
    BREAKER,
    MAKER,
    ContainsH,
    Cycle,
    CycleLengthK,
    GameConfig,
    MinInDegreePositive,
    NonKColorable,
    play_game,
    replay,
    strategy_rng,
)
from orientgames.errors import CriterionUnmet, FasTooSmall
from orientgames.oracles import (
    PatternGraph,
    contains_embedding,
    extract_ck,
    fas_exact,
    fas_with_ordering,
    find_cycle,
    is_directed_cycle,
    k_colorable,
)
from orientgames.strategies import (
    BreakerBoxHamilton,
    BreakerOutStar,
    BreakerSigmaPotential,
    HypergraphState,
    MakerCk,
    MakerCycle,
    MakerGreedyAttack,
    MakerGreedyEmbedding,
    MakerNonKColorable,
    RandomStrategy,
    TemplateCutEngine,
    build_strategy,
    generate_template,
    potential_blocker_move,
)
from orientgames.strategies.hamilton import DangerLedger
from orientgames.strategies.sigma import sigma_reduction_count

# Lexicographically first strongly connected 5-vertex tournament with
# FAS = 2, frozen from an exhaustive scan (no 4-vertex oriented graph
# reaches FAS 2).
FAS2_PATTERN = PatternGraph(
    5,
    frozenset(
        [(0, 2), (0, 4), (1, 0), (2, 1), (3, 0), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]
    ),
)


def started(strategy, n=6, p=1, q=1, prop=None, seed=0):
    cfg = GameConfig(n=n, p=p, q=q, prop=prop or Cycle(), seed=seed)
    strategy.start(cfg, strategy_rng(cfg, strategy.role))
    return strategy


# ---------------------------------------------------------------------------
# maker_cycle / maker_ck
# ---------------------------------------------------------------------------


def test_maker_cycle_closes_backward_pair():
    b = Board(3)
    b.orient(0, 1)
    b.orient(1, 2)
    m = started(MakerCycle(), n=3)
    m.path = [0, 1, 2]
    move = m.next_move(b, [])
    assert move == ((2, 0),)
    assert m.closed == [0, 1, 2]


def test_maker_cycle_extension_rule():
    # Path a->b with c->b already oriented and {c,a} free: orient a->c and
    # splice, giving the path a, c, b.
    b = Board(3)
    b.orient(0, 1)
    b.orient(2, 1)
    m = started(MakerCycle(), n=3)
    m.path = [0, 1]
    move = m.next_move(b, [])
    assert move == ((0, 2),)
    assert m.path == [0, 2, 1]


def test_maker_cycle_absorbs_free_arcs():
    b = Board(4)
    b.orient(0, 1)
    b.orient(1, 2)   # breaker arc extends the path for free
    b.orient(3, 0)   # and another prepends
    m = started(MakerCycle(), n=4)
    m.path = [0, 1]
    m.next_move(b, [])
    assert m.path[0] == 3 and m.path[1] == 0


def test_maker_ck_closable_lengths():
    # Maintained path of 6 vertices at k=4: the closable back-pairs are
    # exactly those giving cycle lengths 4 or 6.
    m = MakerCk(4)
    qualifying = [
        (i, j)
        for i in range(6)
        for j in range(i + 2, 6)
        if m._qualifies(j - i + 1)
    ]
    assert qualifying == [(0, 3), (0, 5), (1, 4), (2, 5)]
    m3 = MakerCk(3)
    assert all(m3._qualifies(length) for length in range(3, 12))


def test_maker_ck3_equals_maker_cycle():
    for seed in range(5):
        cfg = GameConfig(n=8, p=1, q=1, prop=Cycle(), seed=seed, early_stop=False)
        rec_a = play_game(cfg, MakerCycle(), RandomStrategy(BREAKER))
        rec_b = play_game(
            GameConfig(n=8, p=1, q=1, prop=CycleLengthK(3), seed=seed, early_stop=False),
            MakerCk(3),
            RandomStrategy(BREAKER),
        )
        assert [m for (r, m) in rec_a.transcript if r == MAKER] == [
            m for (r, m) in rec_b.transcript if r == MAKER
        ]


def test_maker_ck_wins_and_certifies(rng):
    for seed in range(10):
        cfg = GameConfig(n=60, p=1, q=2, prop=CycleLengthK(4), seed=seed,
                         early_stop=False)
        maker = MakerCk(4)
        rec = play_game(cfg, maker, RandomStrategy(BREAKER))
        assert rec.winner == MAKER
        board = replay(rec)
        assert maker.closed is not None
        c4 = extract_ck(board, maker.closed, 4)
        assert len(c4) == 4 and is_directed_cycle(board, c4)


def test_maker_cycle_path_tracks_rounds():
    for seed in range(5):
        cfg = GameConfig(n=10, p=1, q=1, prop=Cycle(), seed=seed, early_stop=False)
        maker = MakerCycle(debug_checks=True)
        rec = play_game(cfg, maker, RandomStrategy(BREAKER))
        assert rec.winner == MAKER


# ---------------------------------------------------------------------------
# breaker_outstar
# ---------------------------------------------------------------------------


def test_outstar_reply_example():
    b = Board(4)
    strat = started(BreakerOutStar(), n=4, q=2)
    b.orient(0, 1)
    move = strat.next_move(b, [(MAKER, ((0, 1),))])
    assert move == ((0, 2), (0, 3))


def test_outstar_fallback_single_arc():
    b = Board(3)
    strat = started(BreakerOutStar(), n=3, q=1)
    b.orient(0, 1)
    b.orient(0, 2)
    move = strat.next_move(b, [(MAKER, ((0, 1),))])
    assert move == ((1, 2),)


def test_outstar_source_invariant():
    # After every Breaker turn each Maker source is a completed out-star.
    for seed in range(10):
        cfg = GameConfig(n=6, p=1, q=4, prop=Cycle(), seed=seed, early_stop=False)
        board = Board(6)
        maker, breaker = RandomStrategy(MAKER), BreakerOutStar()
        maker.start(cfg, strategy_rng(cfg, MAKER))
        breaker.start(cfg, strategy_rng(cfg, BREAKER))
        transcript = []
        while not board.is_tournament():
            for strat in (maker, breaker):
                if board.is_tournament():
                    break
                move = strat.next_move(board, transcript)
                for (u, v) in move:
                    board.orient(u, v)
                transcript.append((strat.role, move))
                maker.observe(board, strat.role, move)
                breaker.observe(board, strat.role, move)
                if strat.role == BREAKER:
                    for role, mv in transcript:
                        if role == MAKER:
                            for (u, _) in mv:
                                assert all(
                                    board.arc(u, w) != 0
                                    for w in range(6)
                                    if w != u
                                )


def test_outstar_blocks_all_cycles_in_play():
    cfg = GameConfig(n=10, p=1, q=8, prop=Cycle(), seed=3, early_stop=False)
    rec = play_game(cfg, MakerCycle(), BreakerOutStar())
    assert rec.winner == BREAKER
    assert find_cycle(replay(rec)) is None


# ---------------------------------------------------------------------------
# breaker_box pipeline
# ---------------------------------------------------------------------------


def test_breaker_box_criterion_gate():
    cfg = GameConfig(n=12, p=1, q=6, prop=MinInDegreePositive(), seed=0)
    strat = BreakerBoxHamilton()
    strat.start(cfg, strategy_rng(cfg, BREAKER))  # 12 <= 6*H_6 = 14.7
    bad = GameConfig(n=30, p=1, q=6, prop=MinInDegreePositive(), seed=0)
    with pytest.raises(CriterionUnmet):
        BreakerBoxHamilton().start(bad, strategy_rng(bad, BREAKER))


def test_breaker_box_boxes_die_on_in_arc():
    cfg = GameConfig(n=12, p=1, q=6, prop=MinInDegreePositive(), seed=0)
    strat = BreakerBoxHamilton()
    strat.start(cfg, strategy_rng(cfg, BREAKER))
    board = Board(12)
    board.orient(7, 3)  # arc into box vertex 3
    strat.observe(board, MAKER, ((7, 3),))
    assert strat.boxes.destroyed[3]


def test_breaker_box_forces_zero_indegree():
    for seed in range(10):
        cfg = GameConfig(n=12, p=1, q=6, prop=MinInDegreePositive(), seed=seed,
                         early_stop=False)
        rec = play_game(cfg, MakerGreedyAttack(range(6)), BreakerBoxHamilton())
        board = replay(rec)
        assert min(board.in_degree(v) for v in range(12)) == 0
        assert rec.winner == BREAKER


# ---------------------------------------------------------------------------
# stage 1 danger ledger
# ---------------------------------------------------------------------------


def test_danger_value_example():
    # Breaker stars v (arcs v->j), eating the in-defense options of v that
    # live at v's second-copy vertex; one Maker claim there then drops the
    # danger by 2b: 5 - 2*2*1 = 1.
    led = DangerLedger(8, bias=2)
    v = 3
    for j in (0, 1, 2, 4, 5):
        led.breaker_oriented(v, j)
    assert led.deg_b[8 + v] == 5
    led.maker_claim(6, v)  # orient 6->v: an in-arc for v
    assert led.deg_m[8 + v] == 1
    assert led.danger(8 + v) == 5 - 2 * 2 * 1


def test_danger_monotonicity_invariant():
    led = DangerLedger(6, bias=3)
    before = [led.danger(v) for v in range(12)]
    led.breaker_oriented(0, 1)  # blocker-side claim
    after = [led.danger(v) for v in range(12)]
    assert all(a >= b for a, b in zip(after, before))

    # A bookkeeping Maker claim (mirror already Breaker's) drops the
    # claimed edge's endpoints by exactly 2b and raises nobody.
    led2 = DangerLedger(6, bias=3)
    led2.breaker_oriented(0, 2)  # arc 0->2: edge (2, 0) joins Breaker's graph
    before = [led2.danger(v) for v in range(12)]
    kind = led2.maker_claim(0, 2)  # mirror (2, 0) is Breaker's: bookkeeping
    assert kind == "extra"
    after = [led2.danger(v) for v in range(12)]
    assert after[0] == before[0] - 2 * 3
    assert after[6 + 2] == before[6 + 2] - 2 * 3
    assert all(a <= b for a, b in zip(after, before))


def test_stage1_opening_move_is_seeded_and_lowest_tie():
    from orientgames.strategies import MakerHamilton

    cfg = GameConfig(n=40, p=1, q=4, prop=Cycle(), seed=5)
    maker = MakerHamilton(audit_samples=100)
    maker.start(cfg, strategy_rng(cfg, MAKER))
    board = Board(40)
    move = maker.next_move(board, [])
    (u, v) = move[0]
    assert u == 0  # all dangers 0: the first first-copy vertex is eased
    again = MakerHamilton(audit_samples=100)
    again.start(cfg, strategy_rng(cfg, MAKER))
    assert again.next_move(Board(40), []) == move


def test_real_claim_reduces_both_sides():
    led = DangerLedger(5, bias=1)
    kind = led.maker_claim(1, 4)
    assert kind == "real"
    assert led.deg_m[1] == 1 and led.deg_m[5 + 4] == 1
    # the mirror edge went to the opponent
    assert led.deg_b[4] == 1 and led.deg_b[5 + 1] == 1


# ---------------------------------------------------------------------------
# stage 2 exact potential agreement (n = 12)
# ---------------------------------------------------------------------------


def build_explicit_cut_state(board, tstar, k, threat_bias):
    import itertools

    n = board.n
    sets = []
    for a in itertools.combinations(range(n), k):
        rest = [w for w in range(n) if w not in a]
        for b_ in itertools.combinations(rest, k):
            slots = frozenset((u, v) for u in a for v in b_ if tstar[u, v])
            if slots:
                sets.append(slots)
    elements = [(u, v) for u in range(n) for v in range(n) if tstar[u, v]]
    return HypergraphState(sets, threat_bias=threat_bias, blocker_bias=1,
                           elements=elements, use_floats=True)


def test_stage2_exact_mode_agrees_with_potential_blocker(rng):
    n, k, q = 12, 3, 2
    tstar = generate_template(n, seed=7, audit_samples=0, k=k)
    board = Board(n)
    engine = TemplateCutEngine(board, tstar, k, threat_bias=q, exact=True, seed=7)
    mirror = build_explicit_cut_state(board, tstar, k, q)
    moves = 0
    while board.undirected_count > 40 or moves < 8:
        choice = engine.choose()
        probe = copy.deepcopy(mirror)
        expected = potential_blocker_move(probe, 1)[0]
        assert choice == expected
        # Apply the choice plus a random opposing arc.
        for arc in [choice]:
            board.orient(*arc)
            engine.observe_arc(*arc)
            if mirror.status[arc] == 0:
                mirror.claim_blocker(arc)
        pairs = board.undirected_pairs()
        if not pairs:
            break
        u, v = pairs[rng.randrange(len(pairs))]
        if rng.random() < 0.5:
            u, v = v, u
        board.orient(u, v)
        engine.observe_arc(u, v)
        slot = (u, v) if tstar[u, v] else (v, u)
        if mirror.status[slot] == 0:
            if tstar[u, v]:
                mirror.claim_blocker(slot)
            else:
                mirror.claim_threat(slot)
        moves += 1
        if moves >= 14:
            break


def test_cut_hyperedge_count_formulas():
    # Upper-bound form C(n, m)^2 from the two-family construction, and the
    # exact disjoint ordered-pair count at n=12, m=3.  The materialized
    # hypergraph drops cuts with no template arc at all (nothing there for
    # the potential play to protect), so its size is the independently
    # counted number of nonempty cuts.
    import itertools

    assert math.comb(12, 3) ** 2 == 48400
    assert math.comb(12, 3) * math.comb(9, 3) == 18480
    tstar = generate_template(12, seed=3, audit_samples=0, k=3)
    nonempty = 0
    for a in itertools.combinations(range(12), 3):
        rest = [w for w in range(12) if w not in a]
        for b in itertools.combinations(rest, 3):
            if any(tstar[u, v] for u in a for v in b):
                nonempty += 1
    engine = TemplateCutEngine(Board(12), tstar, 3, threat_bias=1, exact=True)
    assert len(engine.state.sets) == nonempty
    assert nonempty <= 18480


# ---------------------------------------------------------------------------
# maker_nonkcolorable
# ---------------------------------------------------------------------------


def test_nonkcolorable_moves_agree_with_template():
    cfg = GameConfig(n=12, p=1, q=1, prop=NonKColorable(2), seed=1, early_stop=False)
    maker = MakerNonKColorable(2)
    rec = play_game(cfg, maker, RandomStrategy(BREAKER))
    tstar = maker.tstar
    for role, move in rec.transcript:
        if role == MAKER:
            for (u, v) in move:
                assert tstar[u, v]


def test_nonkcolorable_beats_random_breaker():
    wins = 0
    for seed in range(10):
        cfg = GameConfig(n=12, p=1, q=1, prop=NonKColorable(2), seed=seed,
                         early_stop=False)
        rec = play_game(cfg, MakerNonKColorable(2), RandomStrategy(BREAKER))
        wins += k_colorable(replay(rec), 2) is None
    assert wins >= 9


# ---------------------------------------------------------------------------
# breaker_sigma
# ---------------------------------------------------------------------------


def test_sigma_reduction_count_formula():
    assert sigma_reduction_count(6, 4, 2) == math.comb(6, 4) * math.comb(6, 2) == 225


def test_sigma_refuses_small_fas():
    with pytest.raises(FasTooSmall):
        BreakerSigmaPotential(PatternGraph.cycle(3))


def test_fas2_pattern_is_what_we_think():
    value, _ = fas_exact(FAS2_PATTERN)
    assert value == 2
    assert FAS2_PATTERN.is_tournament()


def test_sigma_plays_forward_and_blocks():
    blocked = 0
    for seed in range(10):
        cfg = GameConfig(n=7, p=1, q=20, prop=ContainsH(FAS2_PATTERN), seed=seed,
                         early_stop=False)
        rec = play_game(cfg, MakerGreedyEmbedding(FAS2_PATTERN), BreakerSigmaPotential(FAS2_PATTERN))
        board = replay(rec)
        for role, move in rec.transcript:
            if role == BREAKER:
                for (u, v) in move:
                    assert u < v  # identity ordering: forward arcs only
        phi = contains_embedding(board, FAS2_PATTERN)
        if phi is None:
            blocked += 1
        else:
            # any copy must take >= FAS(H) arcs backward under sigma
            ranks = [phi[i] for i in range(5)]
            embedded = PatternGraph(
                5, frozenset((u, v) for (u, v) in FAS2_PATTERN.arcs)
            )
            back = fas_with_ordering(embedded, [sorted(ranks).index(r) for r in ranks])
            assert back >= 2
    assert blocked == 10


def test_sigma_breaker_arcs_are_acyclic():
    cfg = GameConfig(n=7, p=1, q=20, prop=ContainsH(FAS2_PATTERN), seed=0,
                     early_stop=False)
    rec = play_game(cfg, RandomStrategy(MAKER), BreakerSigmaPotential(FAS2_PATTERN))
    sub = Board(7)
    for role, move in rec.transcript:
        if role == BREAKER:
            for (u, v) in move:
                sub.orient(u, v)
    assert find_cycle(sub) is None


# ---------------------------------------------------------------------------
# random baselines
# ---------------------------------------------------------------------------


def test_random_strategy_deterministic_per_seed():
    def run(seed):
        cfg = GameConfig(n=7, p=1, q=2, prop=Cycle(), seed=seed, early_stop=False)
        return play_game(cfg, RandomStrategy(MAKER), RandomStrategy(BREAKER)).transcript

    assert run(4) == run(4)
    assert run(4) != run(5)


def test_random_strategy_exhausts_board():
    cfg = GameConfig(n=4, p=3, q=3, prop=Cycle(), seed=0, early_stop=False)
    rec = play_game(cfg, RandomStrategy(MAKER), RandomStrategy(BREAKER))
    assert replay(rec).is_tournament()


def test_random_maker_wins_cycle_at_bias_one():
    for seed in range(10):
        cfg = GameConfig(n=40, p=1, q=1, prop=Cycle(), seed=seed)
        rec = play_game(cfg, RandomStrategy(MAKER), RandomStrategy(BREAKER))
        assert rec.winner == MAKER


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def test_build_strategy_ids(tmp_path):
    assert isinstance(build_strategy("maker-cycle"), MakerCycle)
    assert isinstance(build_strategy("maker-ck:4"), MakerCk)
    assert build_strategy("maker-random").role == MAKER
    assert build_strategy("breaker-random").role == BREAKER
    pattern_file = tmp_path / "h.tour"
    pattern_file.write_text(FAS2_PATTERN.to_text())
    strat = build_strategy(f"breaker-sigma:{pattern_file}")
    assert isinstance(strat, BreakerSigmaPotential)
    from orientgames.errors import UnknownStrategy

    with pytest.raises(UnknownStrategy):
        build_strategy("maker-unknown")
    with pytest.raises(UnknownStrategy):
        build_strategy("breaker-sigma:/nonexistent/file")


def test_maker_cycle_guaranteed_range_large_board():
    # At n=50 the cycle guarantee covers biases up to n/2 - 2 = 23.
    for bias in (10, 23):
        for seed in range(3):
            cfg = GameConfig(n=50, p=1, q=bias, prop=Cycle(), seed=seed,
                             early_stop=False)
            rec = play_game(cfg, MakerCycle(), RandomStrategy(BREAKER))
            assert rec.winner == MAKER, (bias, seed)


def test_stage2_config_formulas():
    from orientgames.strategies.hamilton import default_expansion_size, free_degree_floor

    n = 400
    assert default_expansion_size(n) == math.ceil(n / math.log(n) ** 0.4)
    assert abs(free_degree_floor(n) - 15 / math.log(n) ** 0.25) < 1e-12
    cfg = GameConfig(n=40, p=1, q=4, prop=Cycle(), seed=0)
    from orientgames.strategies import MakerHamilton

    maker = MakerHamilton(audit_samples=50)
    maker.start(cfg, strategy_rng(cfg, MAKER))
    assert maker.cfg.round_cap == 8 * 40
    assert maker.cfg.k == default_expansion_size(40)


def test_sigma_sampled_branch_plays_legally():
    # Beyond the exact cap the blocker runs on a seeded sample of winning
    # sets; the game must still run with all arcs forward.
    cfg = GameConfig(n=12, p=1, q=8, prop=ContainsH(FAS2_PATTERN), seed=0,
                     early_stop=False)
    rec = play_game(cfg, RandomStrategy(MAKER), BreakerSigmaPotential(FAS2_PATTERN))
    for role, move in rec.transcript:
        if role == BREAKER:
            assert all(u < v for (u, v) in move)


def test_breaker_box_threshold_gate_at_n200():
    from orientgames.boxgame import breaker_bias_threshold

    t = breaker_bias_threshold(200)
    cfg_low = GameConfig(n=200, p=1, q=t - 1, prop=MinInDegreePositive(), seed=0)
    with pytest.raises(CriterionUnmet):
        BreakerBoxHamilton().start(cfg_low, strategy_rng(cfg_low, BREAKER))
    cfg_ok = GameConfig(n=200, p=1, q=t, prop=MinInDegreePositive(), seed=0)
    BreakerBoxHamilton().start(cfg_ok, strategy_rng(cfg_ok, BREAKER))
