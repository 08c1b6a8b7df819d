"""Extremal surface extraction from an optimal piece assignment.

Clearing denominators of the optimal LP vertex gives integer piece
multiplicities at some degree n. Band sides then pair up exactly and dummy
sides glue in antiparallel pairs, producing an explicit surface: polygons and
bands as 2-cells, glued sides and boundary letter-edges as 1-cells, corner
classes as 0-cells. The boundary is traced through band crossings and dummy
hops; every component must read a positive power of a single chain term, and
the Euler characteristic is computed both from the cell structure and from
piece accounting, which must agree. Violations raise
InternalInvariantViolation - they indicate a bug, not bad input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import lcm
from typing import Optional

from .errors import InternalInvariantViolation
from .gapgraph import GapGraph, PieceType, ORACLE_LENGTH_GUARD
from .rationals import Rational, rat, rat_str
from .scl import SolveRecord, solve_chain
from .words import Chain


@dataclass(frozen=True)
class BoundaryComponent:
    term_index: int
    power: int
    word: str


@dataclass(frozen=True)
class ComponentSummary:
    euler_characteristic: int
    boundary_components: int
    genus: int


@dataclass(frozen=True)
class ExtremalSurface:
    chain: Chain
    mode: str
    scl_value: Rational
    degree: int
    piece_multiplicities: tuple[tuple[PieceType, int], ...]
    band_multiplicities: tuple[tuple[tuple[int, int], int], ...]
    euler_characteristic: int
    boundary_components: tuple[BoundaryComponent, ...]
    components: tuple[ComponentSummary, ...]
    band_gluings: tuple[tuple[tuple[int, int], tuple, tuple], ...]
    dummy_gluings: tuple[tuple[tuple, tuple], ...]

    @property
    def boundary_component_count(self) -> int:
        return len(self.boundary_components)

    @property
    def connected_component_count(self) -> int:
        return len(self.components)

    @property
    def genus(self) -> int:
        """Total genus over connected components."""
        return sum(c.genus for c in self.components)

    def to_json_dict(self, graph: Optional[GapGraph] = None) -> dict:
        if graph is None:
            graph = solve_chain(self.chain, self.mode).graph
        edge_desc = {}

        def describe_edge(edge: int) -> dict:
            if edge not in edge_desc:
                if graph.is_band(edge):
                    p, q = graph.band_positions(edge)
                    edge_desc[edge] = {
                        "type": "band",
                        "from_position": p,
                        "to_position": q,
                    }
                else:
                    a, b = graph.edge_gaps(edge)
                    edge_desc[edge] = {
                        "type": "dummy",
                        "from_gap": a,
                        "to_gap": b,
                    }
            return edge_desc[edge]

        return {
            "chain": str(self.chain),
            "mode": self.mode,
            "scl": rat_str(self.scl_value),
            "degree": self.degree,
            "euler_characteristic": self.euler_characteristic,
            "connected_components": [
                {
                    "euler_characteristic": c.euler_characteristic,
                    "boundary_components": c.boundary_components,
                    "genus": c.genus,
                }
                for c in self.components
            ],
            "boundary_component_count": self.boundary_component_count,
            "boundary_components": [
                {
                    "term": str(self.chain.terms[b.term_index][0]),
                    "power": b.power,
                    "word": b.word,
                }
                for b in self.boundary_components
            ],
            "positions": [
                {
                    "index": p,
                    "term": graph.term_of_position[p],
                    "letter": str(graph.letters[p]),
                }
                for p in range(graph.num_positions)
            ],
            "pieces": [
                {
                    "walk": [describe_edge(e) for e in piece.walk],
                    "dummy_count": piece.dummy_count,
                    "multiplicity": mult,
                }
                for piece, mult in self.piece_multiplicities
            ],
            "bands": [
                {"positions": list(pq), "multiplicity": mult}
                for pq, mult in self.band_multiplicities
            ],
            "gluings": {
                "band_sides": [
                    {
                        "band": list(pq),
                        "side_forward": list(side1),
                        "side_backward": list(side2),
                    }
                    for pq, side1, side2 in self.band_gluings
                ],
                "dummy_pairs": [
                    [list(s1), list(s2)] for s1, s2 in self.dummy_gluings
                ],
            },
        }

    def to_json(self, graph: Optional[GapGraph] = None, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(graph), indent=indent)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def default_surface_mode(chain: Chain) -> str:
    """Band-cycle pieces give the cleanest surfaces; use them when small."""
    return "oracle" if chain.total_length() <= ORACLE_LENGTH_GUARD else "fast"


def extremal_surface(
    chain: Chain,
    mode: Optional[str] = None,
    timeout_s: Optional[float] = None,
) -> ExtremalSurface:
    """Extract an explicit extremal surface realizing scl(chain)."""
    if mode is None:
        mode = default_surface_mode(chain)
    record = solve_chain(chain, mode, timeout_s)
    return surface_from_record(record)


def surface_from_record(record: SolveRecord) -> ExtremalSurface:
    graph = record.graph
    pieces = record.pieces
    sol = record.solution

    degree = 1
    for v in sol.assignment.values():
        degree = lcm(degree, int(v.denominator))
    multiplicities: list[tuple[int, int]] = []
    for j in sorted(sol.assignment):
        x = sol.assignment[j] * degree
        if x.denominator != 1:
            raise InternalInvariantViolation("denominator clearing failed")
        if x:
            multiplicities.append((j, int(x)))

    # Piece instances and their side-use slots.
    instances: list[tuple[int, int]] = []  # (piece column, copy index)
    for j, mult in multiplicities:
        for copy in range(mult):
            instances.append((j, copy))
    inst_index = {key: i for i, key in enumerate(instances)}

    band_uses: dict[tuple[int, int], list[tuple[int, int]]] = {}
    dummy_uses: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for i, (j, _copy) in enumerate(instances):
        for side, edge in enumerate(pieces[j].walk):
            if graph.is_band(edge):
                band_uses.setdefault(graph.band_positions(edge), []).append(
                    (i, side)
                )
            else:
                dummy_uses.setdefault(graph.edge_gaps(edge), []).append(
                    (i, side)
                )

    # Pair band sides: the t-th (p,q) use and the t-th (q,p) use bound one
    # band instance. Pair dummy sides antiparallel the same way.
    band_instances: list[tuple[tuple[int, int], tuple, tuple]] = []
    band_counts: dict[tuple[int, int], int] = {}
    glued_of_side: dict[tuple[int, int], tuple[str, int]] = {}
    for (p, q) in sorted(band_uses):
        if p > q:
            continue
        fwd = band_uses.get((p, q), [])
        bwd = band_uses.get((q, p), [])
        if len(fwd) != len(bwd):
            raise InternalInvariantViolation(
                f"band sides over positions ({p}, {q}) do not pair up"
            )
        band_counts[(p, q)] = len(fwd)
        for s1, s2 in zip(fwd, bwd):
            bid = len(band_instances)
            band_instances.append(((p, q), s1, s2))
            glued_of_side[s1] = ("band_fwd", bid)
            glued_of_side[s2] = ("band_bwd", bid)
    dummy_pairs: list[tuple[tuple, tuple]] = []
    for (a, b) in sorted(dummy_uses):
        if a > b:
            continue
        fwd = dummy_uses.get((a, b), [])
        bwd = dummy_uses.get((b, a), [])
        if len(fwd) != len(bwd):
            raise InternalInvariantViolation(
                f"dummy sides over gaps ({a}, {b}) do not pair up"
            )
        for s1, s2 in zip(fwd, bwd):
            dummy_pairs.append((s1, s2))
            glued_of_side[s1] = ("dummy", len(dummy_pairs) - 1)
            glued_of_side[s2] = ("dummy", len(dummy_pairs) - 1)

    def side_count(i: int) -> int:
        return len(pieces[instances[i][0]].walk)

    def partner(side: tuple[int, int]) -> tuple[tuple[int, int], bool]:
        """Glued opposite side of a piece side; True when across a band."""
        kind, idx = glued_of_side[side]
        if kind == "band_fwd":
            return band_instances[idx][2], True
        if kind == "band_bwd":
            return band_instances[idx][1], True
        s1, s2 = dummy_pairs[idx]
        return (s2 if side == s1 else s1), False

    # Boundary trace. State (instance, side) means: standing at the corner
    # before `side`, about to process it. Processing a band side crosses the
    # band (reading the letter at the arc's first position) and resumes after
    # the partner side; processing a dummy side hops to the corner after its
    # partner. Orbits with no band crossings are links of interior vertices,
    # not boundary components.
    successor: dict[tuple[int, int], tuple[tuple[int, int], Optional[int]]] = {}
    for i in range(len(instances)):
        j = instances[i][0]
        walk = pieces[j].walk
        for side in range(len(walk)):
            edge = walk[side]
            (pi, ps), across_band = partner((i, side))
            nxt = (pi, (ps + 1) % side_count(pi))
            emitted = None
            if across_band:
                emitted = graph.band_positions(edge)[0]
            successor[(i, side)] = (nxt, emitted)

    seen: set[tuple[int, int]] = set()
    raw_components: list[tuple[list[int], int]] = []  # (positions, start inst)
    for start in sorted(successor):
        if start in seen:
            continue
        state = start
        emitted: list[int] = []
        while state not in seen:
            seen.add(state)
            state, pos = successor[state]
            if pos is not None:
                emitted.append(pos)
        if state != start:
            raise InternalInvariantViolation("boundary trace is not a cycle")
        if emitted:
            raw_components.append((emitted, start[0]))

    boundary: list[tuple[BoundaryComponent, int]] = []
    per_term_total = [0] * len(graph.term_words)
    for emitted, start_inst in raw_components:
        t = graph.term_of_position[emitted[0]]
        term_len = graph.term_lengths[t]
        if len(emitted) % term_len:
            raise InternalInvariantViolation(
                "boundary length is not a multiple of its term length"
            )
        for a, b in zip(emitted, emitted[1:]):
            if graph.term_of_position[b] != t or b != graph.position(
                t, (a - graph.term_offsets[t]) + 1
            ):
                raise InternalInvariantViolation(
                    "boundary does not read consecutive positions of one term"
                )
        power = len(emitted) // term_len
        word = "".join(str(graph.letters[p]) for p in emitted)
        boundary.append((BoundaryComponent(t, power, word), start_inst))
        per_term_total[t] += power
    for t, total in enumerate(per_term_total):
        if total != degree * graph.coefficients[t]:
            raise InternalInvariantViolation(
                "boundary degrees do not sum to degree * coefficient"
            )

    # Euler characteristic, two ways. Cell counts: every piece and band is a
    # 2-cell; glued sides, dummy pairs and the two letter edges per band are
    # 1-cells; corner classes merged across dummy pairs are the 0-cells.
    num_piece_instances = len(instances)
    num_band_instances = len(band_instances)
    num_dummy_pairs = len(dummy_pairs)
    chi_accounting = num_piece_instances - num_band_instances - num_dummy_pairs

    corners = _UnionFind()
    for (i1, s1), (i2, s2) in dummy_pairs:
        corners.union((i1, s1), (i2, (s2 + 1) % side_count(i2)))
        corners.union((i1, (s1 + 1) % side_count(i1)), (i2, s2))
    corner_classes = {
        corners.find((i, s))
        for i in range(num_piece_instances)
        for s in range(side_count(i))
    }
    v = len(corner_classes)
    e = 4 * num_band_instances + num_dummy_pairs
    f = num_piece_instances + num_band_instances
    chi = v - e + f
    if chi != chi_accounting:
        raise InternalInvariantViolation(
            f"Euler characteristic mismatch: traced {chi}, "
            f"accounting {chi_accounting}"
        )
    if rat(-chi, 2 * degree) != record.result.value:
        raise InternalInvariantViolation(
            "-chi/(2n) does not reproduce the scl value"
        )

    # Connected components and per-component genus.
    conn = _UnionFind()
    for i in range(num_piece_instances):
        conn.find(("p", i))
    for bid, (_pq, (i1, _s1), (i2, _s2)) in enumerate(band_instances):
        conn.union(("p", i1), ("b", bid))
        conn.union(("p", i2), ("b", bid))
    for (i1, _s1), (i2, _s2) in dummy_pairs:
        conn.union(("p", i1), ("p", i2))
    comp_chi: dict = {}
    comp_boundary: dict = {}
    for i in range(num_piece_instances):
        comp_chi[conn.find(("p", i))] = 0
    for root in comp_chi:
        comp_boundary[root] = 0
    for i in range(num_piece_instances):
        comp_chi[conn.find(("p", i))] += 1
    for bid in range(num_band_instances):
        comp_chi[conn.find(("b", bid))] -= 1
    for (i1, _s1), (_i2, _s2) in dummy_pairs:
        comp_chi[conn.find(("p", i1))] -= 1
    for bc, start_inst in boundary:
        comp_boundary[conn.find(("p", start_inst))] += 1
    components = []
    for root in sorted(comp_chi, key=str):
        chi_c = comp_chi[root]
        b_c = comp_boundary[root]
        genus2 = 2 - chi_c - b_c
        if genus2 < 0 or genus2 % 2:
            raise InternalInvariantViolation(
                f"component has impossible genus data chi={chi_c}, b={b_c}"
            )
        components.append(ComponentSummary(chi_c, b_c, genus2 // 2))
    if sum(c.euler_characteristic for c in components) != chi:
        raise InternalInvariantViolation("component chi does not sum to chi")

    return ExtremalSurface(
        chain=record.result.chain,
        mode=record.result.mode,
        scl_value=record.result.value,
        degree=degree,
        piece_multiplicities=tuple(
            (pieces[j], mult) for j, mult in multiplicities
        ),
        band_multiplicities=tuple(sorted(band_counts.items())),
        euler_characteristic=chi,
        boundary_components=tuple(bc for bc, _ in boundary),
        components=tuple(components),
        band_gluings=tuple(
            (pq, s1, s2) for pq, s1, s2 in band_instances
        ),
        dummy_gluings=tuple(dummy_pairs),
    )
