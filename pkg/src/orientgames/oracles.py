"""Exact graph-property oracles.

These serve three roles: win-condition judges for the engine, subroutines
inside strategies, and ground truth for the exhaustive test suites.  All
functions are pure; none mutate their inputs.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .board import Board, all_pairs
from .errors import (
    BadLength,
    BudgetExceeded,
    InvalidCycle,
    NotATournament,
    NotFas1,
    ParseError,
    SizeMismatch,
    TooLarge,
)

FAS_EXACT_MAX = 12
KCOLOR_MAX_N = 15
KCOLOR_MAX_K = 4
LONGEST_PATH_MAX = 20
EXPANDING_EXACT_MAX = 22


# ---------------------------------------------------------------------------
# Pattern graphs (fixed oriented graphs used as creation targets)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PatternGraph:
    """A fixed oriented graph on vertices 0..t-1, given by its arc set."""

    t: int
    arcs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        for (u, v) in self.arcs:
            if u == v:
                raise ParseError(f"loop at {u}")
            if not (0 <= u < self.t and 0 <= v < self.t):
                raise ParseError(f"arc ({u},{v}) outside 0..{self.t - 1}")
            if (v, u) in self.arcs:
                raise ParseError(f"pair {{{u},{v}}} oriented both ways")

    def is_tournament(self) -> bool:
        return len(self.arcs) == self.t * (self.t - 1) // 2

    def out_mask(self, v: int) -> int:
        m = 0
        for (a, b) in self.arcs:
            if a == v:
                m |= 1 << b
        return m

    def to_text(self) -> str:
        lines = [f"n={self.t}"]
        lines.extend(f"{u}>{v}" for (u, v) in sorted(self.arcs))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PatternGraph":
        b = Board.from_text(text)
        return cls(b.n, frozenset(b.arcs()))

    @classmethod
    def from_board(cls, board: Board) -> "PatternGraph":
        return cls(board.n, frozenset(board.arcs()))

    @classmethod
    def cycle(cls, k: int) -> "PatternGraph":
        """The directed cycle C_k."""
        return cls(k, frozenset((i, (i + 1) % k) for i in range(k)))


def sigma_check(t: int, sigma) -> tuple[int, ...]:
    """Validate an ordering: sigma[v] is the rank of vertex v, 0-based."""
    s = tuple(sigma)
    if len(s) != t or sorted(s) != list(range(t)):
        raise SizeMismatch(f"not a permutation of 0..{t - 1}: {s}")
    return s


# ---------------------------------------------------------------------------
# Cycles and connectivity
# ---------------------------------------------------------------------------


def _adjacency(board: Board) -> list[list[int]]:
    n = board.n
    adj = [[] for _ in range(n)]
    for (u, v) in board.arcs():
        adj[u].append(v)
    return adj


def find_cycle(board: Board):
    """Some directed cycle as a vertex list, or None if the graph is acyclic.

    On a complete tournament the returned cycle is shortened to length 3
    (a tournament with any cycle has a directed triangle).
    """
    n = board.n
    adj = _adjacency(board)
    color = [0] * n  # 0 white, 1 on stack, 2 done
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if color[w] == 0:
                    color[w] = 1
                    parent[w] = v
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
                if color[w] == 1:
                    cyc = [v]
                    x = v
                    while x != w:
                        x = parent[x]
                        cyc.append(x)
                    cyc.reverse()
                    if board.is_tournament():
                        cyc = _shorten_in_tournament(board, cyc)
                    return cyc
            if not advanced:
                color[v] = 2
                stack.pop()
    return None


def _shorten_in_tournament(board: Board, cycle: list[int]) -> list[int]:
    # Repeatedly use the chord between cycle[0] and cycle[2]: either it
    # closes a triangle or it shortcuts the cycle by one vertex.
    cyc = list(cycle)
    while len(cyc) > 3:
        if board.arc(cyc[2], cyc[0]) == 1:
            return [cyc[0], cyc[1], cyc[2]]
        cyc = [cyc[0]] + cyc[2:]
    return cyc


def is_directed_cycle(board: Board, cycle) -> bool:
    """True iff the vertex list is a simple directed cycle in the board."""
    m = len(cycle)
    if m < 3 or len(set(cycle)) != m:
        return False
    return all(board.arc(cycle[i], cycle[(i + 1) % m]) == 1 for i in range(m))


def scc_sizes(board: Board) -> list[int]:
    """Sizes of the strongly connected components (iterative Tarjan)."""
    n = board.n
    adj = _adjacency(board)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp_stack: list[int] = []
    sizes = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                comp_stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                size = 0
                while True:
                    w = comp_stack.pop()
                    on_stack[w] = False
                    size += 1
                    if w == v:
                        break
                sizes.append(size)
            if work:
                pv, _ = work[-1]
                low[pv] = min(low[pv], low[v])
    return sizes


def is_strongly_connected(board: Board) -> bool:
    return max(scc_sizes(board)) == board.n


def max_scc_size(board: Board) -> int:
    return max(scc_sizes(board))


# ---------------------------------------------------------------------------
# Hamilton cycles in tournaments
# ---------------------------------------------------------------------------


def hamilton_cycle(board: Board):
    """Hamilton cycle of a strongly connected tournament, or None.

    Builds the cycle by repeated extension: start from a directed triangle;
    an outside vertex either splices in at a consecutive in/out switch, or,
    when all its arcs to the cycle point one way, is routed in through a
    shortest outside path (which exists by strong connectivity).

    Convention: the one-vertex tournament counts as Hamiltonian and yields
    the trivial cycle [0], keeping "Hamiltonian iff strongly connected"
    true for every n >= 1.
    """
    if not board.is_tournament():
        raise NotATournament(f"{board.undirected_count} pairs undirected")
    n = board.n
    if n == 1:
        return [0]
    if not is_strongly_connected(board):
        return None
    cyc = find_cycle(board)
    assert cyc is not None and len(cyc) == 3
    in_cyc = [False] * n
    for v in cyc:
        in_cyc[v] = True
    while len(cyc) < n:
        v = next(w for w in range(n) if not in_cyc[w])
        r = len(cyc)
        spliced = False
        for i in range(r):
            if board.arc(cyc[i], v) == 1 and board.arc(v, cyc[(i + 1) % r]) == 1:
                cyc = cyc[: i + 1] + [v] + cyc[i + 1 :]
                in_cyc[v] = True
                spliced = True
                break
        if spliced:
            continue
        # All arcs between v and the cycle point the same way.
        if board.arc(cyc[0], v) == 1:
            # Cycle dominates v: shortest path from v back to the cycle.
            path = _path_to_targets(board, v, in_cyc)
            i = cyc.index(path[-1])
            cyc = cyc[:i] + path[:-1] + cyc[i:]
        else:
            # v dominates the cycle: shortest path from the cycle to v,
            # found by walking backward from v.
            path = _path_to_targets(board, v, in_cyc, backward=True)
            path.reverse()  # now starts at a cycle vertex, ends at v
            j = cyc.index(path[0])
            cyc = cyc[: j + 1] + path[1:] + cyc[j + 1 :]
        for w in path:
            if not in_cyc[w]:
                in_cyc[w] = True
    return cyc


def _path_to_targets(board: Board, start: int, target: list[bool], backward=False):
    """BFS path [start, ..., t] whose interior avoids targets, t a target."""
    n = board.n
    prev = [-1] * n
    seen = [False] * n
    seen[start] = True
    queue = [start]
    want = -1 if backward else 1
    while queue:
        nxt = []
        for v in queue:
            for w in range(n):
                if w == v or seen[w]:
                    continue
                if board.arc(v, w) != want:
                    continue
                prev[w] = v
                if target[w]:
                    path = [w]
                    x = w
                    while x != start:
                        x = prev[x]
                        path.append(x)
                    path.reverse()
                    return path
                seen[w] = True
                nxt.append(w)
        queue = nxt
    raise AssertionError("no path found; board not strongly connected?")


# ---------------------------------------------------------------------------
# Cycle length surgery
# ---------------------------------------------------------------------------


def extract_ck(board: Board, cycle, k: int):
    """Shrink a directed cycle of length k+(k-2)r down to one of length k.

    Looks at the chord between the k-th and first cycle vertices: either it
    closes a k-cycle directly, or it shortcuts the cycle by k-2 vertices,
    and the recursion repeats.  Requires the board to be a tournament so
    the chord is always oriented.
    """
    if k < 3:
        raise BadLength(f"need k >= 3, got {k}")
    if not board.is_tournament():
        raise NotATournament("chord recursion needs all pairs oriented")
    cyc = list(cycle)
    if not is_directed_cycle(board, cyc):
        raise InvalidCycle(f"not a directed cycle: {cyc}")
    if (len(cyc) - k) % (k - 2) != 0 or len(cyc) < k:
        raise BadLength(f"length {len(cyc)} not of the form {k}+({k}-2)r")
    while len(cyc) > k:
        if board.arc(cyc[k - 1], cyc[0]) == 1:
            return cyc[:k]
        # Chord points forward: drop cyc[1..k-2], keeping a shorter cycle.
        cyc = [cyc[0]] + cyc[k - 1 :]
    return cyc


# ---------------------------------------------------------------------------
# Longest directed path (exact, small boards)
# ---------------------------------------------------------------------------


def longest_path_exact(board: Board) -> list[int]:
    """A maximum-length directed path, by branch and bound.  n <= 20."""
    n = board.n
    if n > LONGEST_PATH_MAX:
        raise BudgetExceeded(f"longest_path_exact capped at n={LONGEST_PATH_MAX}")
    adj = _adjacency(board)
    best: list[int] = []

    def extend(v, visited, path):
        nonlocal best
        if len(path) > len(best):
            best = list(path)
        if len(path) + (n - len(path)) <= len(best):
            return
        for w in adj[v]:
            if not (visited >> w) & 1:
                path.append(w)
                extend(w, visited | (1 << w), path)
                path.pop()

    order = sorted(range(n), key=lambda v: -len(adj[v]))
    for v in order:
        if len(best) == n:
            break
        extend(v, 1 << v, [v])
    return best


# ---------------------------------------------------------------------------
# Feedback arc sets
# ---------------------------------------------------------------------------


def fas_with_ordering(pattern: PatternGraph, sigma) -> int:
    """Count of arcs going backward under the ordering (rank array)."""
    s = sigma_check(pattern.t, sigma)
    return sum(1 for (u, v) in pattern.arcs if s[u] > s[v])


def fas_exact(pattern: PatternGraph) -> tuple[int, tuple[int, ...]]:
    """Minimum feedback arc set value and a witness ordering.

    Subset DP over 2^t states: append one vertex last within the subset;
    its arcs into the rest of the subset are the back-arcs it pays for.
    O(2^t * t) after bitmask precomputation.
    """
    t = pattern.t
    if t > FAS_EXACT_MAX:
        raise TooLarge(f"fas_exact capped at t={FAS_EXACT_MAX}")
    out_mask = [pattern.out_mask(v) for v in range(t)]
    full = (1 << t) - 1
    dp = [0] * (1 << t)
    for mask in range(1, full + 1):
        best = None
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            rest = mask & ~(1 << v)
            cost = dp[rest] + bin(out_mask[v] & rest).count("1")
            if best is None or cost < best:
                best = cost
        dp[mask] = best
    # Reconstruct: peel off the last-ranked vertex of each prefix set.
    sigma = [0] * t
    mask = full
    rank = t - 1
    while mask:
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            rest = mask & ~(1 << v)
            if dp[rest] + bin(out_mask[v] & rest).count("1") == dp[mask]:
                sigma[v] = rank
                mask = rest
                rank -= 1
                break
    return dp[full], tuple(sigma)


def complete_fas1(pattern: PatternGraph) -> PatternGraph:
    """Complete a FAS-1 oriented graph to a tournament that still has FAS 1.

    Undirected pairs are filled forward along the FAS-1 witness ordering,
    so the completed tournament has exactly one back-arc under it.
    """
    value, sigma = fas_exact(pattern)
    if value != 1:
        raise NotFas1(f"FAS is {value}, not 1")
    arcs = set(pattern.arcs)
    for (u, v) in all_pairs(pattern.t):
        if (u, v) not in arcs and (v, u) not in arcs:
            arcs.add((u, v) if sigma[u] < sigma[v] else (v, u))
    return PatternGraph(pattern.t, frozenset(arcs))


# ---------------------------------------------------------------------------
# Pattern embedding
# ---------------------------------------------------------------------------


def contains_embedding(board: Board, pattern: PatternGraph):
    """Injective map phi with every pattern arc realized, or None.

    Backtracking over pattern vertices in decreasing-degree order, with
    degree pruning against the board.  Non-arcs of the pattern are
    unconstrained.
    """
    t, n = pattern.t, board.n
    if t > n:
        return None
    deg_out = [0] * t
    deg_in = [0] * t
    for (u, v) in pattern.arcs:
        deg_out[u] += 1
        deg_in[v] += 1
    order = sorted(range(t), key=lambda v: -(deg_out[v] + deg_in[v]))
    b_out = [board.out_degree(v) for v in range(n)]
    b_in = [board.in_degree(v) for v in range(n)]
    phi = [-1] * t
    used = [False] * n

    def place(i):
        if i == len(order):
            return True
        pv = order[i]
        earlier = [q for q in order[:i]]
        for cand in range(n):
            if used[cand]:
                continue
            if b_out[cand] < deg_out[pv] or b_in[cand] < deg_in[pv]:
                continue
            ok = True
            for q in earlier:
                if (pv, q) in pattern.arcs and board.arc(cand, phi[q]) != 1:
                    ok = False
                    break
                if (q, pv) in pattern.arcs and board.arc(phi[q], cand) != 1:
                    ok = False
                    break
            if not ok:
                continue
            phi[pv] = cand
            used[cand] = True
            if place(i + 1):
                return True
            used[cand] = False
            phi[pv] = -1
        return False

    if place(0):
        return {v: phi[v] for v in range(t)}
    return None


# ---------------------------------------------------------------------------
# Colorability into transitive parts
# ---------------------------------------------------------------------------


def k_colorable(board: Board, k: int):
    """Partition into <= k transitive parts, or None; k=1 tests transitivity.

    Exact backtracking, vertex by vertex; a part stays valid iff adding the
    vertex creates no cyclic triangle inside it.  Budget n <= 15, k <= 4.
    """
    if not board.is_tournament():
        raise NotATournament("colorability is judged on tournaments")
    n = board.n
    if n > KCOLOR_MAX_N or k > KCOLOR_MAX_K:
        raise BudgetExceeded(f"k_colorable capped at n<={KCOLOR_MAX_N}, k<={KCOLOR_MAX_K}")
    if k < 1:
        return None
    parts: list[list[int]] = [[] for _ in range(k)]

    def fits(part, v):
        for a, b in itertools.combinations(part, 2):
            # cyclic triangle test on {a, b, v}
            ab = board.arc(a, b)
            if ab == 1 and board.arc(b, v) == 1 and board.arc(v, a) == 1:
                return False
            if ab == -1 and board.arc(v, b) == 1 and board.arc(a, v) == 1:
                return False
        return True

    def assign(v):
        if v == n:
            return True
        for j in range(k):
            if j > 0 and not parts[j - 1]:
                break  # empty parts are interchangeable
            if fits(parts[j], v):
                parts[j].append(v)
                if assign(v + 1):
                    return True
                parts[j].pop()
        return False

    if assign(0):
        return [list(p) for p in parts]
    return None


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------


def expansion_witness(board: Board, k: int, trials: int | None = None, seed: int = 0):
    """A witness that the board is not k-expanding, or None.

    k-expanding here: every vertex set A of size up to max(k, n-k) has
    nonempty N+(A) and N-(A).  For |A| <= k that is the small-set
    condition; for k <= |A| <= n-k it is exactly "arcs both ways across
    the split (A, complement)", which is the form the strong-connectivity
    consequence uses.  (Quantified over literal disjoint set pairs the
    both-ways condition is unsatisfiable at k=1, where singleton pairs
    would need arcs in both directions.)

    Exact mode (trials=None, n <= 22) enumerates all the required sets.
    Sampled mode checks random ones only, so None may be spurious; a
    returned witness is always genuine.  Witness forms: ("out", A) or
    ("in", A) for the empty neighborhood.
    """
    n = board.n
    verts = range(n)
    top = min(n - 1, max(k, n - k))
    if trials is None:
        if n > EXPANDING_EXACT_MAX:
            raise BudgetExceeded(f"exact expansion check capped at n={EXPANDING_EXACT_MAX}")
        for size in range(1, top + 1):
            for a in itertools.combinations(verts, size):
                if not board.out_set(a):
                    return ("out", a)
                if not board.in_set(a):
                    return ("in", a)
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        size = rng.randint(1, max(1, top))
        a = tuple(sorted(rng.sample(verts, size)))
        if not board.out_set(a):
            return ("out", a)
        if not board.in_set(a):
            return ("in", a)
    return None


def is_k_expanding(board: Board, k: int, trials: int | None = None, seed: int = 0) -> bool:
    """Exact when trials is None; one-sided (False is certified) when sampled."""
    return expansion_witness(board, k, trials=trials, seed=seed) is None
