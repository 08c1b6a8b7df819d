"""Boundary-gap graphs and surface pieces for a chain of cyclic words.

The construction encodes admissible surfaces in normal form. Such a surface
decomposes into bands (rectangles pairing a letter occurrence with an inverse
occurrence) and polygons whose corners sit in the gaps between consecutive
boundary letters. Tracking only the combinatorics:

* every letter slot of the chain is a position; between consecutive positions
  of a term sits a gap (one vertex of the graph per gap);
* for each ordered pair of positions (p, q) carrying inverse letters there is
  a band arc from the gap before p to the gap after q - the two arcs (p, q)
  and (q, p) are the two sides of one band;
* dummy arcs join every ordered pair of distinct gaps; glued in antiparallel
  pairs they triangulate large polygons into pieces of bounded size.

A polygon is a closed walk in this graph. Splitting a polygon at a repeated
corner only increases the polygon count, so optimal surfaces use simple
cycles ("oracle" enumeration: all simple cycles of band arcs). Triangulating
with dummy arcs instead bounds the walk length by 3 at the cost of counting a
piece with d dummy sides as 1 - d/2 of a polygon ("fast" enumeration, the
scalable default). Both give the same linear program optimum, which the test
suite checks exhaustively on small chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    InternalInvariantViolation,
    NotHomologicallyTrivial,
    OracleTooLarge,
)
from .words import Chain, Letter, is_homologically_trivial

ORACLE_LENGTH_GUARD = 14


@dataclass(frozen=True)
class PieceType:
    """A polygon piece: a closed walk of graph edges, up to rotation.

    The walk is stored rotated so that it starts at its smallest edge id,
    which makes piece identity and enumeration order canonical.
    """

    walk: tuple[int, ...]
    dummy_count: int

    @staticmethod
    def from_walk(edges: tuple[int, ...], dummy_count: int) -> "PieceType":
        k = edges.index(min(edges))
        return PieceType(edges[k:] + edges[:k], dummy_count)

    def __len__(self) -> int:
        return len(self.walk)


class GapGraph:
    """Directed graph of boundary gaps, band arcs and implicit dummy arcs."""

    def __init__(self, chain: Chain):
        if not is_homologically_trivial(chain):
            raise NotHomologicallyTrivial(
                f"chain {chain} has nonzero signed exponents"
            )
        self.chain = chain
        self.term_words = [cw for cw, _ in chain.terms]
        self.coefficients = [coeff for _, coeff in chain.terms]
        self.term_lengths = [len(cw) for cw in self.term_words]
        self.term_offsets = []
        offset = 0
        for n in self.term_lengths:
            self.term_offsets.append(offset)
            offset += n
        self.num_positions = offset
        self.num_gaps = offset
        self.letters: list[Letter] = [
            x for cw in self.term_words for x in cw.letters
        ]
        self.term_of_position: list[int] = [
            t for t, n in enumerate(self.term_lengths) for _ in range(n)
        ]

        # Band arcs, sorted by ordered position pair.
        arcs: list[tuple[int, int]] = []
        for p in range(self.num_positions):
            lp = self.letters[p]
            for q in range(self.num_positions):
                if p != q and self.letters[q] == lp.inverse():
                    arcs.append((p, q))
        self.band_arcs: tuple[tuple[int, int], ...] = tuple(arcs)
        self.band_index: dict[tuple[int, int], int] = {
            pq: e for e, pq in enumerate(self.band_arcs)
        }
        self.num_band_arcs = len(self.band_arcs)
        self._band_gaps: list[tuple[int, int]] = [
            (self.gap_before(p), self.gap_after(q)) for p, q in self.band_arcs
        ]
        self._band_by_gaps: dict[tuple[int, int], int] = {}
        for e, tg in enumerate(self._band_gaps):
            if tg in self._band_by_gaps:
                raise InternalInvariantViolation(
                    "two band arcs share tail and head gaps"
                )
            self._band_by_gaps[tg] = e
        self._check_invariants()

    # -- positions and gaps -------------------------------------------------

    def position(self, term: int, index: int) -> int:
        return self.term_offsets[term] + index % self.term_lengths[term]

    def gap_after(self, p: int) -> int:
        """Gap between position p and its cyclic successor (same id as p)."""
        return p

    def gap_before(self, p: int) -> int:
        """Gap between position p and its cyclic predecessor."""
        t = self.term_of_position[p]
        off = self.term_offsets[t]
        return off + (p - off - 1) % self.term_lengths[t]

    def position_after_gap(self, g: int) -> int:
        """The position that follows gap g in its term's cyclic order."""
        t = self.term_of_position[g]
        off = self.term_offsets[t]
        return off + (g - off + 1) % self.term_lengths[t]

    # -- edges ---------------------------------------------------------------

    @property
    def num_dummy_arcs(self) -> int:
        return self.num_gaps * (self.num_gaps - 1)

    @property
    def num_edges(self) -> int:
        return self.num_band_arcs + self.num_dummy_arcs

    def dummy_id(self, g: int, g2: int) -> int:
        if g == g2:
            raise ValueError("dummy arcs join distinct gaps")
        rank = g * (self.num_gaps - 1) + (g2 if g2 < g else g2 - 1)
        return self.num_band_arcs + rank

    def is_band(self, edge: int) -> bool:
        return edge < self.num_band_arcs

    def band_positions(self, edge: int) -> tuple[int, int]:
        return self.band_arcs[edge]

    def edge_gaps(self, edge: int) -> tuple[int, int]:
        """(tail gap, head gap) of any edge id."""
        if edge < self.num_band_arcs:
            return self._band_gaps[edge]
        rank = edge - self.num_band_arcs
        g, r = divmod(rank, self.num_gaps - 1)
        g2 = r if r < g else r + 1
        return g, g2

    def band_by_gaps(self, tail: int, head: int) -> Optional[int]:
        return self._band_by_gaps.get((tail, head))

    # -- invariants ----------------------------------------------------------

    def _check_invariants(self):
        for p, q in self.band_arcs:
            if (q, p) not in self.band_index:
                raise InternalInvariantViolation("band arcs are not symmetric")
            if self.term_of_position[p] == self.term_of_position[q]:
                if self.gap_before(p) == self.gap_after(q):
                    raise InternalInvariantViolation(
                        f"band arc ({p}, {q}) is a monogon"
                    )
        for tail, head in self._band_gaps:
            if tail == head:
                raise InternalInvariantViolation("band arc is a gap self-loop")


def build_gap_graph(chain: Chain) -> GapGraph:
    """Gap graph of a homologically trivial chain of cyclic words."""
    return GapGraph(chain)


# ---------------------------------------------------------------------------
# Piece enumeration
# ---------------------------------------------------------------------------


def _band_adjacency(g: GapGraph) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(g.num_gaps)]
    for e in range(g.num_band_arcs):
        tail, head = g.edge_gaps(e)
        out[tail].append(head)
    for lst in out:
        lst.sort()
    return out


def _elementary_cycles(succ: list[list[int]], n: int) -> list[tuple[int, ...]]:
    """All elementary cycles of a simple digraph, as vertex tuples rooted at
    their smallest vertex, in deterministic order (Johnson-style blocking)."""
    cycles: list[tuple[int, ...]] = []
    for s in range(n):
        blocked = [False] * n
        bsets: list[set[int]] = [set() for _ in range(n)]
        path: list[int] = []

        def unblock(u: int):
            stack = [u]
            while stack:
                v = stack.pop()
                if blocked[v]:
                    blocked[v] = False
                    stack.extend(bsets[v])
                    bsets[v].clear()

        def circuit(v: int) -> bool:
            found = False
            path.append(v)
            blocked[v] = True
            for w in succ[v]:
                if w < s:
                    continue
                if w == s:
                    cycles.append(tuple(path))
                    found = True
                elif not blocked[w] and circuit(w):
                    found = True
            if found:
                unblock(v)
            else:
                for w in succ[v]:
                    if w >= s:
                        bsets[w].add(v)
            path.pop()
            return found

        circuit(s)
    return cycles


def _oracle_pieces(g: GapGraph) -> list[PieceType]:
    if g.chain.total_length() > ORACLE_LENGTH_GUARD:
        raise OracleTooLarge(
            f"band-cycle enumeration is guarded at total length "
            f"{ORACLE_LENGTH_GUARD}; chain has length {g.chain.total_length()}"
        )
    succ = _band_adjacency(g)
    pieces = []
    for cycle in _elementary_cycles(succ, g.num_gaps):
        k = len(cycle)
        edges = tuple(
            g.band_by_gaps(cycle[i], cycle[(i + 1) % k]) for i in range(k)
        )
        pieces.append(PieceType.from_walk(edges, dummy_count=0))
    return sorted(pieces, key=lambda piece: piece.walk)


def _fast_pieces(g: GapGraph) -> list[PieceType]:
    pieces: list[PieceType] = []
    n_gaps = g.num_gaps

    def edges_between(a: int, b: int) -> list[int]:
        """Band arc first (smaller id), then the dummy arc."""
        out = []
        e = g.band_by_gaps(a, b)
        if e is not None:
            out.append(e)
        if n_gaps > 1:
            out.append(g.dummy_id(a, b))
        return out

    # Bigons: antiparallel edge pairs with at least one band arc. Since all
    # dummy ids exceed all band ids, it is enough to root at a band arc.
    for e in range(g.num_band_arcs):
        a, b = g.edge_gaps(e)
        for f in edges_between(b, a):
            if f > e:
                pieces.append(PieceType.from_walk(
                    (e, f), dummy_count=(0 if g.is_band(f) else 1)
                ))

    # Triangles: closed 3-walks with distinct gaps (self-loops do not exist),
    # rooted at their smallest edge id, with at least one band arc.
    for e1 in range(g.num_edges):
        a, b = g.edge_gaps(e1)
        e1_band = g.is_band(e1)
        for c in range(n_gaps):
            if c == a or c == b:
                continue
            for e2 in edges_between(b, c):
                if e2 <= e1:
                    continue
                for e3 in edges_between(c, a):
                    if e3 <= e1:
                        continue
                    dummies = (
                        (0 if e1_band else 1)
                        + (0 if g.is_band(e2) else 1)
                        + (0 if g.is_band(e3) else 1)
                    )
                    if dummies == 3:
                        continue
                    pieces.append(PieceType.from_walk((e1, e2, e3), dummies))

    return sorted(pieces, key=lambda piece: piece.walk)


def enumerate_pieces(g: GapGraph, mode: str = "fast") -> list[PieceType]:
    """Enumerate polygon pieces.

    fast: all closed walks of length 2 or 3 with at least one band arc,
    deduplicated by rotation. oracle: all simple cycles of band arcs, any
    length (guarded by total chain length). Deterministic order either way.
    """
    if mode == "fast":
        return _fast_pieces(g)
    if mode == "oracle":
        return _oracle_pieces(g)
    raise ValueError(f"unknown mode {mode!r}; expected 'fast' or 'oracle'")
