"""Maker's two-stage Hamiltonicity strategy and its shared machinery.

Stage 1 builds degrees.  The orientation game is mirrored onto the
complete bipartite graph on two copies of the vertex set: orienting i->j
corresponds to the bipartite edge (first-copy i, second-copy j), and
whoever orients it also hands the opposite bipartite edge to Breaker's
side.  Maker repeatedly eases the dangerous vertex with the largest
danger value deg_B(v) - 2b*deg_M(v), claiming a uniformly random free
incident edge; diagonal edges and edges whose mirror Breaker already owns
are recorded and immediately redrawn (the reduction's free extra turn).
Reaching bipartite Maker-degree c+1 everywhere pins every real vertex's
in- and out-degree to at least c.

Stage 2 protects cuts.  A fixed random template tournament T* with arcs
both ways across every pair of large disjoint sets is generated up front;
from the handoff on, Maker only orients arcs agreeing with T*, choosing
the arc by potential over (sampled) ordered set-pair cuts: a cut (A, B)
dies happily once any T*-arc from A to B is oriented, and its threat
grows as Breaker reverses its remaining slots.  Keeping one arc each way
across every large cut makes the final tournament strongly connected,
hence Hamiltonian.
"""

from __future__ import annotations

import itertools
import math
import zlib
from dataclasses import dataclass

import numpy as np

from ..board import Board
from ..engine import BREAKER, MAKER, Strategy
from ..errors import CriterionUnmet, NoAgreeingPair, StageComplete
from .potential import HypergraphState

E_FREE, E_MAKER, E_BREAKER = 0, 1, 2

TARGET_REAL_DEGREE = 4  # c; bipartite goal is c+1


def default_expansion_size(n: int) -> int:
    """ceil(n / (ln n)^(2/5)), clamped to [1, n]."""
    if n < 3:
        return 1
    return min(n, math.ceil(n / math.log(n) ** 0.4))


def free_degree_floor(n: int) -> float:
    """15 / (ln n)^(1/4); vacuous (> 1) at desk scale, recorded for audits."""
    if n < 3:
        return 1.0
    return 15.0 / math.log(n) ** 0.25


@dataclass
class Stage2Config:
    tstar: np.ndarray  # boolean adjacency of the template tournament
    k: int  # expansion set size
    round_cap: int  # stage-1 budget, 8n
    delta: float  # stage-1 free-degree floor
    sample_budget: int = 4096
    exact: bool = False


# ---------------------------------------------------------------------------
# Template tournaments
# ---------------------------------------------------------------------------


def generate_template(n: int, seed, audit_samples: int = 10_000, k: int | None = None,
                      max_tries: int = 32) -> np.ndarray:
    """Seeded fair-coin tournament whose cut expansion passes a sampled audit.

    Regenerates with a fresh derived seed until the audit passes; the audit
    is one-sided (sampling can miss a bad cut) but a failure is definite.
    """
    if k is None:
        k = default_expansion_size(n)
    for attempt in range(max_tries):
        rng = np.random.default_rng([attempt] + _seed_words(seed))
        coins = rng.random((n, n)) < 0.5
        upper = np.triu(np.ones((n, n), dtype=bool), 1)
        adj = (coins & upper) | (~coins.T & upper.T)
        np.fill_diagonal(adj, False)
        if audit_template(adj, k, audit_samples, rng):
            return adj
    raise CriterionUnmet(f"no template with two-way cut arcs found in {max_tries} tries")


def _seed_words(seed) -> list[int]:
    if isinstance(seed, int):
        return [seed & 0xFFFFFFFF, (seed >> 32) & 0xFFFFFFFF]
    # Process-stable derivation for exotic seed types (hash() is salted).
    return [zlib.crc32(repr(seed).encode())]


def audit_template(adj: np.ndarray, k: int, samples: int, rng) -> bool:
    """Sampled check that every size-k cut has arcs both ways.

    Each sample draws disjoint k-sets A, B and probes random slot pairs
    until an arc is seen in each direction; a random tournament passes a
    probe in O(1) tries, so the audit is cheap despite the sample count.
    """
    n = adj.shape[0]
    if (adj.sum(axis=0) == 0).any() or (adj.sum(axis=1) == 0).any():
        return n <= 2
    if 2 * k > n:
        return True
    probe_cap = 64
    for _ in range(samples):
        perm = rng.permutation(n)
        a, b = perm[:k], perm[k : 2 * k]
        for (src, dst) in ((a, b), (b, a)):
            found = False
            for _ in range(probe_cap):
                u = src[rng.integers(len(src))]
                v = dst[rng.integers(len(dst))]
                if adj[u, v]:
                    found = True
                    break
            if not found and not adj[np.ix_(src, dst)].any():
                return False
    return True


def template_board(adj: np.ndarray) -> Board:
    n = adj.shape[0]
    b = Board(n)
    for u in range(n):
        for v in range(u + 1, n):
            b.orient(u, v) if adj[u, v] else b.orient(v, u)
    return b


# ---------------------------------------------------------------------------
# Stage 1: the bipartite danger ledger
# ---------------------------------------------------------------------------


class DangerLedger:
    """Mirrored bipartite bookkeeping for the degree-building stage.

    Bipartite edge (i, j) stands for the orientation i->j.  Status is FREE
    until it enters Maker's graph (a Maker claim) or Breaker's graph
    (Breaker orients j->i, or the mirror of a Maker claim).  Vertices are
    indexed 0..n-1 for the first copy and n..2n-1 for the second.
    """

    def __init__(self, n: int, bias: int, target: int | None = None):
        self.n = n
        self.bias = bias
        self.target = min(target if target is not None else TARGET_REAL_DEGREE + 1, n)
        self.estat = np.zeros((n, n), dtype=np.int8)
        self.deg_m = np.zeros(2 * n, dtype=np.int64)
        self.deg_b = np.zeros(2 * n, dtype=np.int64)
        # Per bipartite vertex: lazily pruned candidate partners.
        self.free1 = [list(range(n)) for _ in range(n)]
        self.free2 = [list(range(n)) for _ in range(n)]
        self.starved: set[int] = set()
        self.min_free_seen = n

    def danger(self, v: int) -> int:
        return int(self.deg_b[v] - 2 * self.bias * self.deg_m[v])

    def pool(self, v: int) -> int:
        """Exact count of free incident edges (statuses partition the n)."""
        return self.n - int(self.deg_m[v]) - int(self.deg_b[v])

    def critical(self, v: int) -> bool:
        """About to run out of free edges before reaching the target.

        One opposing turn eats up to `bias` incident edges, so a dangerous
        vertex whose pool is within bias per still-needed claim must be
        eased now; the plain danger ranking is free to prefer a fresher
        vertex right up until this one is unsavable.
        """
        need = self.target - int(self.deg_m[v])
        return self.pool(v) <= self.bias * (need + 1)

    def dangerous_vertices(self):
        return [
            v
            for v in range(2 * self.n)
            if self.deg_m[v] < self.target and v not in self.starved
        ]

    def stage_done(self) -> bool:
        return not self.dangerous_vertices()

    def _mark(self, i: int, j: int, status: int):
        assert self.estat[i, j] == E_FREE
        self.estat[i, j] = status
        deg = self.deg_m if status == E_MAKER else self.deg_b
        deg[i] += 1
        deg[self.n + j] += 1

    def breaker_oriented(self, u: int, v: int):
        """Breaker (or a mirror) put u->v on the board: edge (v, u) is his."""
        if self.estat[v, u] == E_FREE:
            self._mark(v, u, E_BREAKER)

    def maker_claim(self, i: int, j: int) -> str:
        """Claim edge (i, j) for Maker; classify what the claim is worth.

        Returns "real" when the claim should orient i->j on the board (the
        mirror then goes to Breaker), "extra" when it is a diagonal edge or
        its mirror is already Breaker's (degree bookkeeping only).
        """
        self._mark(i, j, E_MAKER)
        if i == j:
            return "extra"
        if self.estat[j, i] != E_FREE:
            return "extra"
        self._mark(j, i, E_BREAKER)
        return "real"

    def sample_free_edge(self, v: int, rng):
        """Uniform free incident edge at bipartite vertex v, or None."""
        if v < self.n:
            lst, fixed_first = self.free1[v], True
        else:
            lst, fixed_first = self.free2[v - self.n], False
        while lst:
            idx = rng.randrange(len(lst))
            w = lst[idx]
            i, j = (v, w) if fixed_first else (w, v - self.n)
            if self.estat[i, j] == E_FREE:
                self.min_free_seen = min(self.min_free_seen, len(lst))
                return (i, j)
            lst[idx] = lst[-1]
            lst.pop()
        return None


# ---------------------------------------------------------------------------
# Stage 2: potential play over template cuts
# ---------------------------------------------------------------------------


class TemplateCutEngine:
    """Blocker-side potential play over ordered set-pair cuts of T*.

    A cut (A, B) is the set of template arcs from A to B.  It is safe
    (dead, potential 0) once any of those arcs is oriented on the board,
    and threatened as they get oriented in reverse; the live potential is
    (blocker_bias+1)^(-unoriented slots / threat bias).  Exact mode keeps
    every cut in a HypergraphState; sampled mode tracks a fixed seeded
    sample with vectorized updates.
    """

    def __init__(self, board: Board, tstar: np.ndarray, k: int, threat_bias: int,
                 sample_budget: int = 4096, exact: bool = False, seed=0,
                 candidate_cap: int = 64):
        self.n = board.n
        self.tstar = tstar
        self.k = k
        self.threat_bias = threat_bias
        self.exact = exact
        self.candidate_cap = candidate_cap
        n = self.n
        und = np.zeros((n, n), dtype=bool)
        for (u, v) in board.undirected_pairs():
            und[u, v] = und[v, u] = True
        self.und = und
        fwd = np.zeros((n, n), dtype=bool)  # arc u->v oriented on board
        for (u, v) in board.arcs():
            fwd[u, v] = True
        if exact:
            self._init_exact(fwd)
        else:
            self._init_sampled(fwd, sample_budget, seed)

    # -- exact ---------------------------------------------------------------

    def _init_exact(self, fwd):
        n, k = self.n, self.k
        if 2 * k > n:
            raise CriterionUnmet(f"no disjoint {k}-sets in {n} vertices")
        sets = []
        verts = range(n)
        for a in itertools.combinations(verts, k):
            rest = [w for w in verts if w not in a]
            for b in itertools.combinations(rest, k):
                slots = frozenset(
                    (u, v) for u in a for v in b if self.tstar[u, v]
                )
                if slots:
                    sets.append(slots)
        if len(sets) > 250_000:
            raise CriterionUnmet(f"{len(sets)} cuts is beyond exact mode")
        elements = [(u, v) for u in range(n) for v in range(n) if self.tstar[u, v]]
        self.state = HypergraphState(
            sets, threat_bias=self.threat_bias, blocker_bias=1,
            elements=elements, use_floats=True,
        )
        for u in range(n):
            for v in range(n):
                if not self.tstar[u, v]:
                    continue
                if fwd[u, v]:
                    self.state.claim_blocker((u, v))
                elif fwd[v, u]:
                    self.state.claim_threat((u, v))

    # -- sampled ---------------------------------------------------------------

    def _init_sampled(self, fwd, budget, seed):
        n, k = self.n, self.k
        rng = np.random.default_rng([k, budget] + _seed_words(seed))
        if 2 * k > n:
            budget = 0
        self.a_mem = np.zeros((budget, n), dtype=bool)
        self.b_mem = np.zeros((budget, n), dtype=bool)
        for s in range(budget):
            perm = rng.permutation(n)
            self.a_mem[s, perm[:k]] = True
            self.b_mem[s, perm[k : 2 * k]] = True
        open_slots = (self.tstar & self.und).astype(np.float32)
        self.rem = np.rint(
            ((self.a_mem.astype(np.float32) @ open_slots) * self.b_mem).sum(axis=1)
        ).astype(np.int64)
        closed = (self.tstar & fwd).astype(np.float32)
        hits = ((self.a_mem.astype(np.float32) @ closed) * self.b_mem).sum(axis=1)
        self.alive = hits < 0.5

    # -- updates ---------------------------------------------------------------

    def observe_arc(self, u: int, v: int):
        """Ingest a newly oriented arc u->v (from either player)."""
        self.und[u, v] = self.und[v, u] = False
        if self.exact:
            if self.tstar[u, v]:
                if self.state.status[(u, v)] == 0:
                    self.state.claim_blocker((u, v))
            elif self.state.status[(v, u)] == 0:
                self.state.claim_threat((v, u))
            return
        if len(self.alive) == 0:
            return
        if self.tstar[u, v]:
            mask = self.a_mem[:, u] & self.b_mem[:, v]
            self.alive &= ~mask
        else:
            mask = self.a_mem[:, v] & self.b_mem[:, u] & self.alive
            self.rem[mask] -= 1

    # -- move choice ---------------------------------------------------------------

    def choose(self):
        """Best template-agreeing arc (u, v) to orient, or None."""
        if self.exact:
            free = self.state.free_elements()
            if not free:
                return None
            best = None
            best_score = None
            for e in free:
                score = self.state.removal_score(e)
                if best is None or score > best_score:
                    best, best_score = e, score
            return best
        if len(self.alive) == 0 or not self.alive.any():
            return None
        live = np.flatnonzero(self.alive)
        order = live[np.argsort(self.rem[live], kind="stable")]
        cands: list[tuple[int, int]] = []
        seen = set()
        for s in order[:3]:
            block = np.argwhere(
                np.outer(self.a_mem[s], self.b_mem[s]) & self.tstar & self.und
            )
            for (u, v) in block:
                p = (int(u), int(v))
                if p not in seen:
                    seen.add(p)
                    cands.append(p)
            if len(cands) >= self.candidate_cap:
                break
        cands = sorted(cands)[: self.candidate_cap]
        if not cands:
            return None
        weights = np.exp2(-self.rem / self.threat_bias)
        best, best_score = None, -1.0
        for (u, v) in cands:
            mask = self.a_mem[:, u] & self.b_mem[:, v] & self.alive
            score = float(weights[mask].sum())
            if score > best_score + 1e-15:
                best, best_score = (u, v), score
        return best


# ---------------------------------------------------------------------------
# The combined Maker strategy
# ---------------------------------------------------------------------------


class MakerHamilton(Strategy):
    """Degree building, then template-agreeing cut protection."""

    role = MAKER

    def __init__(self, k: int | None = None, sample_budget: int = 4096,
                 exact_stage2: bool = False, audit_samples: int = 10_000,
                 target_degree: int | None = None):
        self.k_override = k
        self.sample_budget = sample_budget
        self.exact_stage2 = exact_stage2
        self.audit_samples = audit_samples
        self.target_degree = target_degree

    def start(self, config, rng):
        super().start(config, rng)
        n = config.n
        k = self.k_override if self.k_override is not None else default_expansion_size(n)
        tstar = generate_template(n, config.seed, audit_samples=self.audit_samples, k=k)
        self.cfg = Stage2Config(
            tstar=tstar,
            k=k,
            round_cap=8 * n,
            delta=free_degree_floor(n),
            sample_budget=self.sample_budget,
            exact=self.exact_stage2,
        )
        self.ledger = DangerLedger(n, config.q, target=self.target_degree)
        self.stage = 1
        self.cut_engine: TemplateCutEngine | None = None
        self.stage1_rounds = 0
        self.stage1_overran = False
        self.stats = {}

    # -- bookkeeping -------------------------------------------------------

    def observe(self, board, role, move):
        if self.stage == 1:
            if role == BREAKER:
                for (u, v) in move:
                    self.ledger.breaker_oriented(u, v)
        elif self.cut_engine is not None:
            for (u, v) in move:
                self.cut_engine.observe_arc(u, v)

    def _enter_stage2(self, board: Board):
        self.stage = 2
        self.stats["stage1_rounds"] = self.stage1_rounds
        self.stats["stage1_overran"] = self.stage1_overran
        self.stats["min_free_seen"] = self.ledger.min_free_seen
        self.stats["starved"] = sorted(self.ledger.starved)
        n = board.n
        self.stats["handoff_min_in"] = min(board.in_degree(v) for v in range(n))
        self.stats["handoff_min_out"] = min(board.out_degree(v) for v in range(n))
        self.cut_engine = TemplateCutEngine(
            board,
            self.cfg.tstar,
            self.cfg.k,
            threat_bias=self.config.q,
            sample_budget=self.cfg.sample_budget,
            exact=self.cfg.exact,
            seed=self.config.seed,
        )

    # -- moves ----------------------------------------------------------------

    def next_move(self, board: Board, transcript):
        if self.stage == 1:
            if self.stage1_rounds >= self.cfg.round_cap:
                self.stage1_overran = True
                self._enter_stage2(board)
            else:
                try:
                    return self._stage1_move(board)
                except StageComplete:
                    self._enter_stage2(board)
        return self._stage2_move(board)

    def _stage1_move(self, board: Board):
        ledger = self.ledger
        self.stage1_rounds += 1
        for _ in range(board.n):
            dangerous = ledger.dangerous_vertices()
            if not dangerous:
                self.stage1_rounds -= 1
                raise StageComplete("all bipartite degrees at target")
            critical = [w for w in dangerous if ledger.critical(w)]
            if critical:
                # Earliest deadline first: the opponent drains one pool at
                # a time, so the smallest pool is the one about to die.
                v = min(critical, key=lambda w: (ledger.pool(w), -ledger.danger(w), w))
            else:
                v = max(dangerous, key=lambda w: (ledger.danger(w), -w))
            edge = ledger.sample_free_edge(v, self.rng)
            if edge is None:
                ledger.starved.add(v)
                continue
            i, j = edge
            if ledger.maker_claim(i, j) == "real":
                return ((i, j),)
            # Diagonal or mirror already Breaker's: the reduction grants a
            # redraw without spending the real-board move.
        # Redraw budget exhausted: fall back to any free real pair.
        for (u, v) in board.undirected_pairs():
            if ledger.estat[u, v] == E_FREE:
                ledger.maker_claim(u, v)
                return ((u, v),)
            if ledger.estat[v, u] == E_FREE:
                ledger.maker_claim(v, u)
                return ((v, u),)
        raise NoAgreeingPair("no undirected pair left for stage 1 fallback")

    def _stage2_move(self, board: Board):
        if board.undirected_count == 0:
            raise NoAgreeingPair("asked to move on a complete board")
        choice = self.cut_engine.choose() if self.cut_engine is not None else None
        if choice is not None and board.is_undirected(*choice):
            return (choice,)
        # No live sampled cut names an arc: any agreeing pair will do.
        for (u, v) in board.undirected_pairs():
            if self.cfg.tstar[u, v]:
                return ((u, v),)
            return ((v, u),)
        raise NoAgreeingPair("unreachable: every undirected pair agrees one way")


class MakerNonKColorable(Strategy):
    """Deny Breaker every one-way cut between disjoint m-sets of T*.

    The stage-2 engine over cuts of size m = floor(n / 2k): ending with an
    arc both ways between every two disjoint m-sets leaves no transitive
    set of 2m vertices, so the tournament cannot be split into k
    transitive parts.
    """

    role = MAKER

    def __init__(self, k: int, sample_budget: int = 4096, exact: bool | None = None,
                 audit_samples: int = 0):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.sample_budget = sample_budget
        self.exact = exact
        # No template audit by default: with constant-size cuts every
        # tournament has some one-way set pair, so the two-way property is
        # unattainable and the potential play does not depend on it.
        self.audit_samples = audit_samples

    def start(self, config, rng):
        super().start(config, rng)
        n = config.n
        m = max(1, n // (2 * self.k))
        self.m = m
        exact = self.exact
        if exact is None:
            exact = math.comb(n, m) * math.comb(n - m, m) <= 100_000
        tstar = generate_template(n, config.seed, audit_samples=self.audit_samples, k=m)
        self.tstar = tstar
        board = Board(n)
        self.cut_engine = TemplateCutEngine(
            board, tstar, m, threat_bias=config.q,
            sample_budget=self.sample_budget, exact=exact, seed=config.seed,
        )

    def observe(self, board, role, move):
        for (u, v) in move:
            self.cut_engine.observe_arc(u, v)

    def next_move(self, board: Board, transcript):
        choice = self.cut_engine.choose()
        if choice is not None and board.is_undirected(*choice):
            return (choice,)
        for (u, v) in board.undirected_pairs():
            if self.tstar[u, v]:
                return ((u, v),)
            return ((v, u),)
        raise NoAgreeingPair("asked to move on a complete board")
