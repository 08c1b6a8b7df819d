import json

import pytest

from sclcert.rationals import rat
from sclcert.scl import solve_chain
from sclcert.surface import extremal_surface, surface_from_record
from sclcert.words import parse_chain


class TestKnownSurfaces:
    def test_commutator_once_punctured_torus(self):
        s = extremal_surface(parse_chain("[a,b]", 2))
        assert s.euler_characteristic == -1
        assert s.degree == 1
        assert s.boundary_component_count == 1
        assert s.genus == 1
        assert s.connected_component_count == 1
        assert rat(-s.euler_characteristic, 2 * s.degree) == rat(1, 2)
        bc = s.boundary_components[0]
        assert bc.power == 1
        assert bc.word in {"abAB", "bABa", "ABab", "BabA"}

    def test_unit_chain_annulus(self):
        s = extremal_surface(parse_chain("a + A", 2))
        assert s.euler_characteristic == 0
        assert s.boundary_component_count == 2
        assert s.genus == 0
        words = sorted(b.word for b in s.boundary_components)
        assert words == ["A", "a"]

    def test_reference_value_surface(self):
        s = extremal_surface(parse_chain("[a,b][c,aa]", 3))
        assert rat(-s.euler_characteristic, 2 * s.degree) == rat(1)

    def test_fast_mode_commutator(self):
        s = extremal_surface(parse_chain("[a,b]", 2), mode="fast")
        assert rat(-s.euler_characteristic, 2 * s.degree) == rat(1, 2)

    def test_genus_two_bounding_surface(self):
        s = extremal_surface(parse_chain("[a,b][c,d]", 4))
        assert s.genus == 2
        assert s.boundary_component_count == 1
        assert s.euler_characteristic == -3


class TestConsistency:
    CASES = [
        "[a,b]",
        "a + A",
        "2*[a,b]",
        "[a,b][c,aa]",
        "aabbAABB",
        "abAbaBAB",
        "[a,b] + [c,d]",
    ]

    @pytest.mark.parametrize("text", CASES)
    @pytest.mark.parametrize("mode", ["fast", "oracle"])
    def test_chi_two_ways_and_boundary(self, text, mode):
        chain = parse_chain(text)
        record = solve_chain(chain, mode)
        # surface_from_record re-derives chi by cell counting and raises on
        # any mismatch with piece accounting; reaching the assert means the
        # two computations agreed.
        s = surface_from_record(record)
        assert rat(-s.euler_characteristic, 2 * s.degree) == record.result.value
        # boundary components read positive powers of single terms
        per_term = {}
        for b in s.boundary_components:
            assert b.power >= 1
            per_term[b.term_index] = per_term.get(b.term_index, 0) + b.power
        for t, (cw, coeff) in enumerate(chain.terms):
            assert per_term.get(t, 0) == s.degree * coeff
        # components sum up
        assert sum(c.euler_characteristic for c in s.components) == (
            s.euler_characteristic
        )
        assert sum(c.boundary_components for c in s.components) == (
            s.boundary_component_count
        )


class TestSerialization:
    def test_json_schema(self):
        chain = parse_chain("[a,b]", 2)
        record = solve_chain(chain, "oracle")
        s = surface_from_record(record)
        data = json.loads(s.to_json(record.graph))
        assert data["chain"] == "abAB"
        assert data["scl"] == "1/2"
        assert data["degree"] == 1
        assert data["euler_characteristic"] == -1
        assert data["boundary_component_count"] == 1
        assert data["boundary_components"][0]["power"] == 1
        assert len(data["positions"]) == 4
        assert data["pieces"][0]["multiplicity"] == 1
        walk = data["pieces"][0]["walk"]
        assert all(step["type"] == "band" for step in walk)
        assert len(data["bands"]) == 2
        assert all(b["multiplicity"] == 1 for b in data["bands"])
        assert data["gluings"]["dummy_pairs"] == []
        assert len(data["gluings"]["band_sides"]) == 2

    def test_fast_mode_has_dummy_pairs(self):
        chain = parse_chain("[a,b]", 2)
        record = solve_chain(chain, "fast")
        s = surface_from_record(record)
        data = s.to_json_dict(record.graph)
        # fast pieces triangulate with dummies, which must glue in pairs
        assert len(data["gluings"]["dummy_pairs"]) >= 1
