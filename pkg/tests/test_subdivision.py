from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from collapser.complexes import CubicalComplex, SimplicialComplex
from collapser.geometry import (
    GeometricComplex,
    Halfspace,
    simplex_det,
    vec,
)
from collapser.subdivision import (
    CyclicRelation,
    NonGenericHyperplane,
    NotSubcomplex,
    derived_neighborhood,
    derived_order,
    h_splitting_sd,
    sd,
    sd_m,
)


def simplex(d):
    return SimplicialComplex.from_facets([range(d + 1)])


class TestSd:
    def test_edge(self):
        s = sd(simplex(1)).complex
        assert s.f_vector() == (3, 2)

    def test_triangle_f_vector(self):
        s = sd(simplex(2)).complex
        assert s.f_vector() == (7, 12, 6)

    def test_vertex_count_equals_face_count(self):
        c = SimplicialComplex.from_facets([[1, 2, 3], [2, 3, 4], [4, 5]])
        s = sd(c).complex
        assert s.f_vector()[0] == sum(c.f_vector())

    def test_dim_preserved(self):
        c = SimplicialComplex.from_facets([[1, 2, 3], [3, 4]])
        assert sd(c).complex.dim == c.dim

    def test_facets_are_maximal_chains(self):
        s = sd(simplex(2)).complex
        for f in s.facets:
            chain = sorted(f, key=len)
            assert [len(x) for x in chain] == [1, 2, 3]
            for a, b in zip(chain, chain[1:]):
                assert set(a) < set(b)

    def test_positions_are_barycenters(self):
        g = GeometricComplex(simplex(1), {0: (0,), 1: (1,)})
        s = sd(g.complex, g.positions)
        assert s.positions[(0, 1)] == (Fr(1, 2),)

    def test_cubical_sd_of_square(self):
        c = CubicalComplex.from_facets([[(0, 1), (0, 1)]])
        s = sd(c)
        # 9 vertices (4 corners, 4 edges, 1 center), 8 triangles
        assert s.complex.f_vector() == (9, 16, 8)


class TestSdM:
    def test_zero_is_identity(self):
        c = simplex(2)
        assert sd_m(c, 0).complex is c

    def test_twice_matches_iterated(self):
        c = simplex(2)
        once = sd(c).complex
        twice = sd_m(c, 2).complex
        assert twice.f_vector()[0] == sum(once.f_vector())

    def test_carriers_compose_to_parent_faces(self):
        c = simplex(2)
        d2 = sd_m(c, 2)
        for u, carr in d2.carrier.items():
            assert carr in c.faces

    def test_carrier_monotone_along_faces(self):
        c = simplex(2)
        d2 = sd_m(c, 2)
        for f in d2.complex.facets:
            carrs = sorted((d2.carrier[u] for u in f), key=len)
            for a, b in zip(carrs, carrs[1:]):
                assert set(a) <= set(b)

    def test_positions_carried_through(self):
        g = GeometricComplex(simplex(1), {0: (0,), 1: (1,)})
        d2 = sd_m(g.complex, 2, g.positions)
        assert (Fr(1, 4),) in d2.positions.values()


class TestDerivedOrder:
    def test_single_edge(self):
        c = simplex(1)
        o = derived_order(c, [0, 1])
        assert o.order == ((0,), (0, 1), (1,))

    def test_point(self):
        c = SimplicialComplex.from_facets([[5]])
        assert derived_order(c, [5]).order == ((5,),)

    def test_rules_on_triangle_boundary(self):
        c = SimplicialComplex.from_facets([[1, 2], [2, 3], [1, 3]])
        o = derived_order(c, [1, 2, 3])
        for s in c.faces:
            if len(s) == 1:
                continue
            sub = sorted(s)
            m = (min(sub),)
            assert o.less(m, s)
            for t in sub:
                if (t,) != m:
                    assert o.less(s, (t,))

    def test_full_triangle_respects_rules(self):
        c = simplex(2)
        o = derived_order(c, [2, 0, 1])  # seed: 2 first
        assert o.less((2,), (0, 2)) and o.less((0, 2), (0,))
        assert o.less((2,), (0, 1, 2)) and o.less((0, 1, 2), (0, 1))

    def test_bad_seed_raises(self):
        c = simplex(1)
        with pytest.raises(ValueError):
            derived_order(c, [7])


class TestDerivedNeighborhood:
    def test_whole_complex(self):
        c = simplex(2)
        n = derived_neighborhood(c, c)
        assert n.faces == sd(c).complex.faces

    def test_vertex_in_edge(self):
        c = simplex(1)
        d = SimplicialComplex.from_facets([[1]])
        n = derived_neighborhood(d, c)
        assert n.faces == frozenset({((1,),), ((0, 1),), ((0, 1), (1,))})

    def test_boundary_in_triangle(self):
        c = simplex(2)
        d = c.boundary()
        n = derived_neighborhood(d, c)
        # every maximal chain starts at a vertex, which lies in the boundary
        assert n.faces == sd(c).complex.faces

    def test_not_subcomplex_raises(self):
        c = simplex(2)
        with pytest.raises(NotSubcomplex):
            derived_neighborhood(SimplicialComplex.from_facets([[9]]), c)


class TestHSplitting:
    def test_segment_vertex_on_h(self):
        g = GeometricComplex(simplex(1), {0: (0,), 1: (1,)})
        s = h_splitting_sd(g, Halfspace(vec((1,)), Fr(1, 2)))
        assert s.positions[(0, 1)] == (Fr(1, 2),)

    def test_vertex_on_h_raises(self):
        g = GeometricComplex(simplex(1), {0: (0,), 1: (1,)})
        with pytest.raises(NonGenericHyperplane):
            h_splitting_sd(g, Halfspace(vec((1,)), Fr(1)))

    def test_no_crossing_is_plain_sd(self):
        g = GeometricComplex(simplex(1), {0: (0,), 1: (1,)})
        s = h_splitting_sd(g, Halfspace(vec((1,)), Fr(5)))
        assert s.positions[(0, 1)] == (Fr(1, 2),)

    def test_triangle_crossing_vertices_lie_on_h(self):
        g = GeometricComplex(simplex(2), {0: (0, 0), 1: (2, 0), 2: (0, 2)})
        h = Halfspace(vec((0, 1)), Fr(1))  # y >= 1; vertex 2 above
        s = h_splitting_sd(g, h)
        for f in [(0, 2), (1, 2), (0, 1, 2)]:
            assert h.value(s.positions[f]) == 0
        # non-crossing faces stay at barycenters
        assert s.positions[(0, 1)] == (Fr(1), Fr(0))

    def test_volume_preserved(self):
        g = GeometricComplex(simplex(2), {0: (0, 0), 1: (2, 0), 2: (0, 2)})
        h = Halfspace(vec((0, 1)), Fr(1))
        s = h_splitting_sd(g, h)
        total = Fr(0)
        for f in s.complex.facets:
            d = simplex_det([s.positions[u] for u in f])
            assert d != 0
            total += abs(d)
        assert total == abs(simplex_det([g.pos(v) for v in [0, 1, 2]]))


@st.composite
def small_pure_complexes(draw):
    n = draw(st.integers(3, 6))
    k = draw(st.integers(1, 4))
    facets = draw(st.lists(
        st.lists(st.integers(0, n - 1), min_size=2, max_size=3, unique=True),
        min_size=1, max_size=k))
    return SimplicialComplex.from_facets(facets)


class TestInvariants:
    @given(small_pure_complexes())
    @settings(max_examples=50, deadline=None)
    def test_vertex_count(self, c):
        assert sd(c).complex.f_vector()[0] == sum(c.f_vector())

    @given(small_pure_complexes())
    @settings(max_examples=50, deadline=None)
    def test_euler_characteristic_preserved(self, c):
        assert sd(c).complex.euler_characteristic() == c.euler_characteristic()

    @given(small_pure_complexes())
    @settings(max_examples=30, deadline=None)
    def test_derived_order_is_total(self, c):
        o = derived_order(c, sorted(c.vertices))
        assert len(o.order) == len(c.faces)
        assert set(o.order) == set(c.faces)
