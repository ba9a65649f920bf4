"""Module layer: algebras, presented modules, submodule calculus."""
import random

import pytest

from genuslab import oracle
from genuslab.errors import (InfiniteLength, NonStandardGrading,
                             PreconditionViolation, ZeroModule)
from genuslab.groebner import NEG_INF, groebner_basis
from genuslab.modules import (GradedAlgebra, GradedModule, ParameterSequence,
                              complete_to_invertible, ideal_power,
                              idealization, invert_matrix,
                              linear_coefficients, module_from_matrix,
                              submodule_colon, submodule_intersect,
                              substitute_linear, zero_module)
from genuslab.ring import (FreeModule, PolyRing, poly_in_position,
                           poly_times_element)


def algebra(names, relations=(), p=32003):
    ring = PolyRing(tuple(names), p)
    xs = [ring.variable(i) for i in range(ring.nvars)]
    return GradedAlgebra(ring, [rel(*xs) for rel in relations]), xs


def ideal_basis_of(ring, polys):
    F = FreeModule(ring, (0,))
    return groebner_basis(F, [poly_in_position(F, f, 0) for f in polys])


# -- colon --------------------------------------------------------------------

def test_colon_standard_examples():
    A, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    M = A.cyclic_module()
    c = submodule_colon(M.relations, y)
    assert c == ideal_basis_of(A.ring, [x])

    B, (x, y) = algebra("xy", [lambda x, y: x * x])
    N = B.cyclic_module()
    assert submodule_colon(N.relations, y) == N.relations  # y is regular

    one = A.ring.constant(1)
    assert submodule_colon(M.relations, one) == M.relations


def test_colon_composes_and_contains():
    rng = random.Random(7)
    A, (x, y, z) = algebra("xyz", [lambda x, y, z: x * y * z])
    M = A.cyclic_module()
    for _ in range(5):
        f = x * rng.randrange(1, 11) + y * rng.randrange(1, 11)
        g = z * rng.randrange(1, 11) + x
        once = submodule_colon(submodule_colon(M.relations, f), g)
        assert once == submodule_colon(M.relations, f * g)
        assert submodule_colon(M.relations, f).contains_all(M.relations.gb)


def test_colon_by_ideal_elementwise():
    A, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    M = A.cyclic_module()
    both = submodule_colon(M.relations, [x, y])
    each = submodule_intersect(submodule_colon(M.relations, x),
                               submodule_colon(M.relations, y))
    assert both == each


# -- intersection -------------------------------------------------------------

def test_intersection_of_coordinate_ideals():
    A, (x1, x2, y1, y2) = algebra(("x1", "x2", "y1", "y2"))
    left = ideal_basis_of(A.ring, [x1, x2])
    right = ideal_basis_of(A.ring, [y1, y2])
    got = submodule_intersect(left, right)
    want = ideal_basis_of(A.ring, [x1 * y1, x1 * y2, x2 * y1, x2 * y2])
    assert got == want
    assert submodule_intersect(left, left) == left
    F = left.ambient
    zero = groebner_basis(F, [])
    assert submodule_intersect(left, zero) == zero


def test_intersection_membership_property():
    rng = random.Random(3)
    A, (x, y, z) = algebra("xyz")
    n1 = ideal_basis_of(A.ring, [x * x, y * z])
    n2 = ideal_basis_of(A.ring, [x * y + z * z])
    meet = submodule_intersect(n1, n2)
    F = n1.ambient
    for _ in range(20):
        terms = {(0, e): rng.randrange(0, 32003)
                 for e in A.ring.monomials_of_degree(3)}
        from genuslab.ring import FreeElement
        v = FreeElement(F, terms)
        assert meet.contains(v) == (n1.contains(v) and n2.contains(v))


# -- powers -------------------------------------------------------------------

def test_ideal_powers():
    A, (x, y) = algebra("xy")
    q2 = ideal_power(A, [x, y], 2)
    assert q2 == ideal_basis_of(A.ring, [x * x, x * y, y * y])
    q0 = ideal_power(A, [x, y], 0)
    assert q0.is_full()
    assert ideal_power(A, [x, y], 1) == ideal_basis_of(A.ring, [x, y])


# -- annihilator --------------------------------------------------------------

def test_annihilators():
    A, (x, y) = algebra("xy")
    free = A.cyclic_module()
    assert free.annihilator().gb == ()
    assert zero_module(A).annihilator().is_full()

    B, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    ann = B.cyclic_module().annihilator()
    assert ann == ideal_basis_of(B.ring, [x * x, x * y])


def test_annihilator_of_two_by_two_cokernel():
    # coker of [[a, b], [0, a]] over k[a,b]/(a^2): the determinant a^2 kills it
    A, (a, b) = algebra("ab", [lambda a, b: a * a])
    C = module_from_matrix(A, [[a, b], [None, a]])
    ann = C.annihilator()
    F1 = ann.ambient
    assert ann.contains(poly_in_position(F1, a * a, 0))
    assert not ann.contains(poly_in_position(F1, b, 0))


# -- sections with finite support --------------------------------------------

def test_h0_examples():
    A, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    h = A.cyclic_module().h0()
    assert h.total_length() == 1

    B, (x, y) = algebra("xy", [lambda x, y: x * y])
    assert B.cyclic_module().h0().is_zero()

    C, (x, y) = algebra("xy")
    M = C.cyclic_module().direct_sum(C.cyclic_module().quotient_by_ideal([x, y]))
    assert M.dimension() == 2
    assert M.h0().total_length() == 1


def test_h0_of_quotient_with_deeper_socle():
    # x is killed by m^2 but not by m
    A, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y * y])
    h = A.cyclic_module().h0()
    assert h.total_length() == 2


# -- dimension and length -----------------------------------------------------

def test_dimension_cases():
    A, (x, y) = algebra("xy", [lambda x, y: x * y])
    assert A.cyclic_module().dimension() == 1
    assert zero_module(A).dimension() == NEG_INF
    B, _ = algebra("xy")
    assert B.cyclic_module().dimension() == 2


def test_length_and_additivity():
    A, (x, y) = algebra("xy")
    fin = A.cyclic_module().quotient_by_ideal([x * x, x * y, y * y * y])
    assert fin.total_length() == 4
    point = A.cyclic_module().quotient_by_ideal([x, y])
    assert fin.direct_sum(point).total_length() == 5
    with pytest.raises(InfiniteLength):
        A.cyclic_module().total_length()


def test_quotient_by_ideal_edges():
    A, (x, y) = algebra("xy", [lambda x, y: x * x])
    M = A.cyclic_module()
    assert M.quotient_by_ideal([]).relations == M.relations
    assert M.quotient_by_ideal([A.ring.constant(1)]).is_zero()
    assert M.quotient_by_ideal([y]).dimension() == 0


def test_minimal_generator_count():
    A, (x, y) = algebra("xy")
    M = A.cyclic_module().direct_sum(A.cyclic_module().quotient_by_ideal([x, y]))
    assert M.minimal_generator_count() == 2


# -- parameter sequences ------------------------------------------------------

def test_parameter_sequence_validation():
    A, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    M = A.cyclic_module()
    q = ParameterSequence(M, [y])
    assert q.covolume() == 2  # classes of 1 and x
    assert q.prefix(0) == () and q.prefix(1) == (y,)
    with pytest.raises(PreconditionViolation):
        ParameterSequence(M, [x])  # x does not cut the dimension
    with pytest.raises(PreconditionViolation):
        ParameterSequence(M, [y, x])  # wrong count
    with pytest.raises(ZeroModule):
        ParameterSequence(zero_module(A), [])


def test_parameter_sequence_on_zero_dimensional_module():
    A, (x, y) = algebra("xy")
    M = A.cyclic_module().quotient_by_ideal([x, y * y])
    q = ParameterSequence(M, [])
    assert q.covolume() == M.total_length() == 2


# -- linear algebra utilities -------------------------------------------------

def test_matrix_inverse_and_completion():
    p = 32003
    t = [[1, 1], [0, 1]]
    ti = invert_matrix(t, p)
    assert ti == [[1, p - 1], [0, 1]]
    with pytest.raises(ValueError):
        invert_matrix([[1, 1], [2, 2]], p)
    comp = complete_to_invertible([[1, 1]], 2, p)
    assert comp[0] == [1, 1]
    invert_matrix(comp, p)  # must not raise


def test_linear_substitution_moves_parameters_to_variables():
    A, (x, y) = algebra("xy")
    q = x + y
    b = complete_to_invertible([linear_coefficients(q)], 2, A.ring.prime)
    t = invert_matrix(b, A.ring.prime)
    assert substitute_linear(q, t) == x
    f = x * x
    g = substitute_linear(f, [[1, 1], [0, 1]])  # x -> x + y
    assert g == x * x + 2 * x * y + y * y


# -- idealization -------------------------------------------------------------

def test_idealization_square_zero_extension():
    A, (x, y) = algebra("xy")
    M = A.cyclic_module().quotient_by_ideal([x])
    B = idealization(M)
    assert B.ring.variables == ("x", "y", "u0")
    got = [str(g.component(0)) for g in B.defining_basis().gb]
    assert got == ["u0^2", "x*u0"]
    # graded pieces: the module copy enters shifted by the new variable degree
    R = B.cyclic_module()
    base = A.cyclic_module()
    for t in range(6):
        assert R.hilbert_function(t) == (base.hilbert_function(t)
                                         + M.hilbert_function(t - 1))


def test_idealization_edges():
    A, (x, y) = algebra("xy")
    R = idealization(zero_module(A))
    assert R.ring is A.ring and R.ideal_gens == A.ideal_gens
    mixed = GradedModule(A, (0, 1), [])
    with pytest.raises(NonStandardGrading):
        idealization(mixed)


def test_idealization_avoids_name_clashes():
    A, (u0, v) = algebra(("u0", "v"))
    M = A.cyclic_module().quotient_by_ideal([u0, v])
    B = idealization(M)
    assert len(set(B.ring.variables)) == 3


# -- cokernel constructor -----------------------------------------------------

def test_module_from_matrix():
    A, (x, y) = algebra("xy")
    M = module_from_matrix(A, [[x, y], [y, x]])
    assert M.rank == 2
    assert M.dimension() == 1  # det = x^2 - y^2 kills it, codim 1
    N = module_from_matrix(A, [[x], [y]])
    v = poly_times_element(x, N.ambient.generator(0)) + \
        poly_times_element(y, N.ambient.generator(1))
    assert N.relations.contains(v)
