"""Shared brute-force oracles for the test suite.

Everything here is deliberately independent of the package's algorithms:
factorial enumerations, bitmask DFS, and exhaustive generation, kept to
sizes where being dumb is affordable.  Package code must never be used to
compute an expected value that a test then asserts against package code.
"""

from __future__ import annotations

import itertools
import random

import pytest

from orientgames.board import Board, all_pairs


def all_tournaments(n):
    """Every tournament on n labeled vertices, as Boards."""
    pairs = list(all_pairs(n))
    for bits in range(1 << len(pairs)):
        b = Board(n)
        for i, (u, v) in enumerate(pairs):
            if (bits >> i) & 1:
                b.orient(u, v)
            else:
                b.orient(v, u)
        yield b


def random_tournament(n, rng):
    b = Board(n)
    for (u, v) in all_pairs(n):
        if rng.random() < 0.5:
            b.orient(u, v)
        else:
            b.orient(v, u)
    return b


def random_oriented_graph(n, rng, density=0.5):
    """Random partial orientation: each pair oriented with prob density."""
    b = Board(n)
    for (u, v) in all_pairs(n):
        if rng.random() < density:
            if rng.random() < 0.5:
                b.orient(u, v)
            else:
                b.orient(v, u)
    return b


def brute_fas_min(t, arcs):
    """Minimum back-arc count over all t! orderings."""
    best = None
    for perm in itertools.permutations(range(t)):
        rank = [0] * t
        for pos, v in enumerate(perm):
            rank[v] = pos
        back = sum(1 for (u, v) in arcs if rank[u] > rank[v])
        if best is None or back < best:
            best = back
    return best


def brute_hamilton_cycle(board):
    """Bitmask DFS for a Hamilton cycle, anchored at vertex 0."""
    n = board.n
    if n == 1:
        return [0]
    adj = [[w for w in range(n) if w != v and board.arc(v, w) == 1] for v in range(n)]
    path = [0]

    def visit(v, visited):
        if visited == (1 << n) - 1:
            return board.arc(v, 0) == 1
        for w in adj[v]:
            if not (visited >> w) & 1:
                path.append(w)
                if visit(w, visited | (1 << w)):
                    return True
                path.pop()
        return False

    if visit(0, 1):
        return list(path)
    return None


def brute_longest_path(board):
    """Exhaustive DFS over all simple directed paths; returns best length
    in arcs."""
    n = board.n
    adj = [[w for w in range(n) if w != v and board.arc(v, w) == 1] for v in range(n)]
    best = 0

    def visit(v, visited, length):
        nonlocal best
        best = max(best, length)
        for w in adj[v]:
            if not (visited >> w) & 1:
                visit(w, visited | (1 << w), length + 1)

    for v in range(n):
        visit(v, 1 << v, 0)
    return best


def brute_embedding_exists(board, t, arcs):
    """Check all injections of 0..t-1 into the board."""
    for image in itertools.permutations(range(board.n), t):
        if all(board.arc(image[u], image[v]) == 1 for (u, v) in arcs):
            return True
    return False


def is_transitive_set(board, vertices):
    vs = list(vertices)
    for a, b, c in itertools.combinations(vs, 3):
        arcs = [(a, b), (b, c), (a, c)]
        # cyclic iff the three arcs do not admit a topological order
        for perm in itertools.permutations((a, b, c)):
            if (
                board.arc(perm[0], perm[1]) == 1
                and board.arc(perm[1], perm[2]) == 1
                and board.arc(perm[0], perm[2]) == 1
            ):
                break
        else:
            return False
    return True


def brute_two_colorable(board):
    """Enumerate every bipartition; True iff both sides are transitive."""
    n = board.n
    for bits in range(1 << (n - 1)):  # vertex n-1 fixed on side 0
        side0 = [v for v in range(n) if not (bits >> v) & 1]
        side1 = [v for v in range(n) if (bits >> v) & 1]
        if is_transitive_set(board, side0) and is_transitive_set(board, side1):
            return True
    return False


def kahn_topological_order(board):
    """Topological order of the oriented graph, or None if cyclic."""
    n = board.n
    indeg = [0] * n
    for (_, v) in board.arcs():
        indeg[v] += 1
    queue = sorted(v for v in range(n) if indeg[v] == 0)
    order = []
    while queue:
        v = queue.pop(0)
        order.append(v)
        for w in board.out_neighbors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
        queue.sort()
    return order if len(order) == n else None


@pytest.fixture
def rng():
    return random.Random(20260810)
