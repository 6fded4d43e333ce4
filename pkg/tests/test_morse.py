from fractions import Fraction as Fr

import pytest

from collapser.complexes import SimplicialComplex
from collapser.geometry import GeometricComplex
from collapser.morse import (
    DiscreteVectorField,
    MorseMatching,
    StarMinimalityViolation,
    distance_oracle,
    gradient_matching,
    is_acyclic,
    is_gradient_matching,
    predicted_critical_pairs,
)


def segment():
    c = SimplicialComplex.from_facets([[1, 2]])
    return GeometricComplex(c, {1: (0,), 2: (1,)})


def path3():
    c = SimplicialComplex.from_facets([[0, 1], [1, 2]])
    return GeometricComplex(c, {0: (0,), 1: (1,), 2: (2,)})


def square_with_diagonal():
    c = SimplicialComplex.from_facets([[1, 2, 4], [1, 3, 4]])
    return GeometricComplex(c, {1: (0, 0), 2: (1, 0), 3: (0, 1), 4: (1, 1)})


def tri_grid(m, n):
    """Unit grid triangulated by the (1,1) diagonals."""
    def vid(i, j):
        return i * (n + 1) + j
    facets = []
    for i in range(m):
        for j in range(n):
            facets.append([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)])
            facets.append([vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)])
    pos = {vid(i, j): (i, j) for i in range(m + 1) for j in range(n + 1)}
    return GeometricComplex(SimplicialComplex.from_facets(facets), pos)


class TestDistanceOracle:
    def test_path_pointers(self):
        g = path3()
        o = distance_oracle(g, (0,))
        assert o.y((1,)) == 0
        assert o.y((2,)) == 1
        assert o.y((1, 2)) == 1

    def test_vertex_at_reference_points_to_itself(self):
        o = distance_oracle(segment(), (0,))
        assert o.y((1,)) == 1

    def test_violation_on_symmetric_star(self):
        c = SimplicialComplex.from_facets([[1, 2], [1, 3]])
        g = GeometricComplex(c, {1: (0, 0), 2: (2, 0), 3: (0, 2)})
        o = distance_oracle(g, (1, 1))
        with pytest.raises(StarMinimalityViolation):
            o.query((1,))


class TestGradientMatching:
    def test_single_edge(self):
        g = segment()
        m = gradient_matching(g.complex, distance_oracle(g, (0,)))
        assert m.field.pairs == frozenset({((2,), (1, 2))})
        assert m.critical == frozenset({(1,)})
        assert m.morse_vector() == (1,)

    def test_square_from_corner(self):
        g = square_with_diagonal()
        m = gradient_matching(g.complex, distance_oracle(g, (0, 0)))
        assert m.morse_vector(g.complex.dim) == (1, 0, 0)

    def test_grid_from_corner(self):
        g = tri_grid(2, 2)
        m = gradient_matching(g.complex, distance_oracle(g, (0, 0)))
        assert m.morse_vector(g.complex.dim) == (1, 0, 0)

    def test_grid_from_interior_point(self):
        g = tri_grid(2, 2)
        m = gradient_matching(g.complex, distance_oracle(g, (Fr(2, 3), Fr(1, 3))))
        assert m.morse_vector(g.complex.dim) == (1, 0, 0)

    def test_matching_is_acyclic(self):
        g = tri_grid(2, 3)
        m = gradient_matching(g.complex, distance_oracle(g, (0, 0)))
        ok, witness = is_acyclic(m.field)
        assert ok and witness is None

    def test_matching_is_gradient(self):
        g = square_with_diagonal()
        m = gradient_matching(g.complex, distance_oracle(g, (0, 0)))
        assert is_gradient_matching(m, g.complex)

    def test_euler_consistency(self):
        g = tri_grid(3, 2)
        m = gradient_matching(g.complex, distance_oracle(g, (1, 1)))
        mv = m.morse_vector()
        chi = sum((-1) ** i * c for i, c in enumerate(mv))
        assert chi == g.complex.euler_characteristic()


class TestAcyclicity:
    def test_empty_field(self):
        ok, witness = is_acyclic(DiscreteVectorField(frozenset()))
        assert ok and witness is None

    def test_closed_path_on_square_boundary(self):
        pairs = frozenset({
            ((1,), (1, 2)), ((2,), (2, 3)), ((3,), (3, 4)), ((4,), (1, 4))})
        ok, witness = is_acyclic(DiscreteVectorField(pairs))
        assert not ok
        assert witness is not None and len(witness) >= 2
        for s, t in witness:
            assert (s, t) in pairs

    def test_duplicate_face_rejected(self):
        with pytest.raises(ValueError):
            DiscreteVectorField(frozenset({
                ((1,), (1, 2)), ((1,), (1, 3))}))


class TestPredictedCriticalPairs:
    def test_single_edge(self):
        g = segment()
        o = distance_oracle(g, (0,))
        assert predicted_critical_pairs(g.complex, o) == {(1, (1,))}

    def test_bijection_with_critical_faces(self):
        for gfun, w in [(square_with_diagonal, (0, 0)),
                        (lambda: tri_grid(2, 2), (0, 0)),
                        (lambda: tri_grid(3, 2), (Fr(3, 2), Fr(1, 2))),
                        (path3, (Fr(3, 2),))]:
            g = gfun()
            o = distance_oracle(g, w)
            m = gradient_matching(g.complex, o)
            predicted = {tau for _, tau in predicted_critical_pairs(g.complex, o)}
            assert predicted == set(m.critical)

    def test_pair_vertex_is_in_face(self):
        g = tri_grid(2, 2)
        o = distance_oracle(g, (0, 0))
        for v, tau in predicted_critical_pairs(g.complex, o):
            assert v in tau


class TestGradientCharacterization:
    def test_hand_built_violation(self):
        c = SimplicialComplex.from_facets([[1, 2, 3]])
        field = DiscreteVectorField(frozenset({
            ((3,), (1, 3)), ((1, 2), (1, 2, 3))}))
        ok, _ = is_acyclic(field)
        assert ok
        critical = frozenset(c.faces - {s for p in field.pairs for s in p})
        m = MorseMatching(field, critical)
        assert not is_gradient_matching(m, c)

    def test_empty_matching_on_point(self):
        c = SimplicialComplex.from_facets([[1]])
        m = MorseMatching(DiscreteVectorField(frozenset()), frozenset(c.faces))
        assert is_gradient_matching(m, c)
