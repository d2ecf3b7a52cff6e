"""Partial orientations of the complete graph K_n.

A board tracks, for every unordered vertex pair {u, v}, whether the pair is
still undirected or has been oriented one way.  Orientation is write-once:
an oriented pair never changes.  When no undirected pair remains the board
is a tournament.

Pairs are stored in a flat triangular bytearray indexed by (u, v) with
u < v, one state byte per pair (0 undirected, 1 low-to-high, 2
high-to-low).  The raw bytes double as the canonical board encoding used
for solver memoization: a base-3 digit string in pair-index order, which is
injective and cheap to hash.
"""

from __future__ import annotations

import hashlib

from .errors import AlreadyOriented, OutOfRange, ParseError, SelfLoop

UNDIRECTED = 0
LOW_HIGH = 1
HIGH_LOW = 2


def pair_index(n: int, u: int, v: int) -> int:
    """Index of pair {u, v} (u < v required) in the triangular table."""
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def all_pairs(n: int):
    """All unordered pairs (u, v), u < v, in canonical lexicographic order."""
    for u in range(n):
        for v in range(u + 1, n):
            yield (u, v)


class Board:
    """A partial orientation of K_n on vertices 0..n-1."""

    __slots__ = ("n", "_st", "undirected_count")

    def __init__(self, n: int):
        if n < 1:
            raise OutOfRange(f"need n >= 1, got {n}")
        self.n = n
        self._st = bytearray(pair_count(n))
        self.undirected_count = pair_count(n)

    # -- basic queries -------------------------------------------------

    def _check_pair(self, u: int, v: int):
        if u == v:
            raise SelfLoop(f"pair ({u},{v})")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise OutOfRange(f"pair ({u},{v}) outside 0..{self.n - 1}")

    def arc(self, u: int, v: int) -> int:
        """+1 if u->v is oriented, -1 if v->u, 0 if the pair is undirected."""
        self._check_pair(u, v)
        if u < v:
            s = self._st[pair_index(self.n, u, v)]
            return 0 if s == UNDIRECTED else (1 if s == LOW_HIGH else -1)
        s = self._st[pair_index(self.n, v, u)]
        return 0 if s == UNDIRECTED else (1 if s == HIGH_LOW else -1)

    def has_arc(self, u: int, v: int) -> bool:
        return self.arc(u, v) == 1

    def is_undirected(self, u: int, v: int) -> bool:
        return self.arc(u, v) == 0

    def orient(self, u: int, v: int) -> None:
        """Record the arc u->v.  The pair must currently be undirected."""
        self._check_pair(u, v)
        a, b = (u, v) if u < v else (v, u)
        i = pair_index(self.n, a, b)
        if self._st[i] != UNDIRECTED:
            raise AlreadyOriented(f"pair ({a},{b}) already oriented")
        self._st[i] = LOW_HIGH if u < v else HIGH_LOW
        self.undirected_count -= 1

    def _undo_orient(self, u: int, v: int) -> None:
        # Solver-internal: revert the most recent orient of this pair.
        a, b = (u, v) if u < v else (v, u)
        i = pair_index(self.n, a, b)
        assert self._st[i] != UNDIRECTED
        self._st[i] = UNDIRECTED
        self.undirected_count += 1

    def is_tournament(self) -> bool:
        return self.undirected_count == 0

    def undirected_pairs(self) -> list[tuple[int, int]]:
        """Undirected pairs in canonical (u < v) lexicographic order."""
        st = self._st
        n = self.n
        out = []
        i = 0
        for u in range(n):
            for v in range(u + 1, n):
                if st[i] == UNDIRECTED:
                    out.append((u, v))
                i += 1
        return out

    def arcs(self):
        """All oriented arcs (tail, head), in pair-index order."""
        st = self._st
        i = 0
        for u in range(self.n):
            for v in range(u + 1, self.n):
                s = st[i]
                if s == LOW_HIGH:
                    yield (u, v)
                elif s == HIGH_LOW:
                    yield (v, u)
                i += 1

    # -- neighborhoods ---------------------------------------------------

    def out_neighbors(self, v: int) -> list[int]:
        return [w for w in range(self.n) if w != v and self.arc(v, w) == 1]

    def in_neighbors(self, v: int) -> list[int]:
        return [w for w in range(self.n) if w != v and self.arc(v, w) == -1]

    def out_degree(self, v: int) -> int:
        return sum(1 for w in range(self.n) if w != v and self.arc(v, w) == 1)

    def in_degree(self, v: int) -> int:
        return sum(1 for w in range(self.n) if w != v and self.arc(v, w) == -1)

    def out_set(self, vertices) -> set[int]:
        """N+(A): vertices outside A receiving an arc from A."""
        a = set(vertices)
        return {
            w
            for w in range(self.n)
            if w not in a and any(self.arc(u, w) == 1 for u in a)
        }

    def in_set(self, vertices) -> set[int]:
        """N-(A): vertices outside A sending an arc into A."""
        a = set(vertices)
        return {
            w
            for w in range(self.n)
            if w not in a and any(self.arc(u, w) == -1 for u in a)
        }

    # -- copying / hashing -------------------------------------------------

    def copy(self) -> "Board":
        b = Board.__new__(Board)
        b.n = self.n
        b._st = bytearray(self._st)
        b.undirected_count = self.undirected_count
        return b

    def canonical_key(self) -> bytes:
        """Injective encoding of the arc states, for memo tables."""
        return bytes(self._st)

    def digest(self) -> str:
        return hashlib.sha256(self.n.to_bytes(4, "big") + bytes(self._st)).hexdigest()[:16]

    def relabeled(self, perm) -> "Board":
        """Board with vertex i renamed perm[i]; arcs carried along."""
        b = Board(self.n)
        for (u, v) in self.arcs():
            b.orient(perm[u], perm[v])
        return b

    def induced(self, vertices) -> "Board":
        """Sub-board on the given vertices, renumbered in sorted order."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        b = Board(len(vs))
        for u in vs:
            for v in vs:
                if u < v:
                    a = self.arc(u, v)
                    if a == 1:
                        b.orient(index[u], index[v])
                    elif a == -1:
                        b.orient(index[v], index[u])
        return b

    def __eq__(self, other):
        return (
            isinstance(other, Board)
            and self.n == other.n
            and self._st == other._st
        )

    def __hash__(self):
        return hash((self.n, bytes(self._st)))

    def __repr__(self):
        return f"Board(n={self.n}, oriented={pair_count(self.n) - self.undirected_count})"

    # -- text format -------------------------------------------------------
    # First line "n=<int>", then one line "u>v" per oriented arc.
    # Undirected pairs are omitted; round-trips losslessly.

    def to_text(self) -> str:
        lines = [f"n={self.n}"]
        lines.extend(f"{u}>{v}" for (u, v) in self.arcs())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Board":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("n="):
            raise ParseError("expected first line 'n=<int>'")
        try:
            n = int(lines[0][2:])
        except ValueError:
            raise ParseError(f"bad vertex count: {lines[0]!r}") from None
        board = cls(n)
        for ln in lines[1:]:
            if ">" not in ln:
                raise ParseError(f"bad arc line: {ln!r}")
            left, right = ln.split(">", 1)
            try:
                u, v = int(left), int(right)
            except ValueError:
                raise ParseError(f"bad arc line: {ln!r}") from None
            try:
                board.orient(u, v)
            except (SelfLoop, OutOfRange, AlreadyOriented) as e:
                raise ParseError(f"illegal arc {ln!r}: {e}") from None
        return board


def new_board(n: int) -> Board:
    """Fresh board with all C(n,2) pairs undirected."""
    return Board(n)
