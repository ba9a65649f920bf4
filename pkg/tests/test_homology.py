"""Homological layer: resolutions, duals, depth, Koszul homology."""
import pytest

from genuslab.errors import CrossCheckFailure, ZeroModule
from genuslab.homology import (FreeComplex, betti_numbers, depth,
                               dual_sections, ext_module, free_resolution,
                               koszul_complex, koszul_homology_lengths,
                               minimal_presentation, projective_dimension,
                               verify_resolution_exactness)
from genuslab.modules import (GradedAlgebra, GradedModule, ParameterSequence,
                              zero_module)
from genuslab.ring import FreeModule, PolyRing, poly_in_position


def algebra(names, relations=(), p=32003):
    ring = PolyRing(tuple(names), p)
    xs = [ring.variable(i) for i in range(ring.nvars)]
    return GradedAlgebra(ring, [rel(*xs) for rel in relations]), xs


def residue_field(algebra_obj):
    return algebra_obj.cyclic_module().quotient_by_ideal(
        algebra_obj.variables())


# -- resolutions --------------------------------------------------------------

def test_resolution_of_residue_field_two_vars():
    A, _ = algebra("xy")
    k = residue_field(A)
    res = free_resolution(k)
    assert res.betti_numbers() == (1, 2, 1)
    assert projective_dimension(k) == 2
    assert res.spots[1].twists == (1, 1)
    assert res.spots[2].twists == (2,)
    verify_resolution_exactness(res, 6)


def test_resolution_of_residue_field_three_vars():
    A, _ = algebra("xyz")
    k = residue_field(A)
    assert betti_numbers(k) == (1, 3, 3, 1)
    verify_resolution_exactness(free_resolution(k), 6)


def test_resolution_of_free_module_has_length_zero():
    A, _ = algebra("xy")
    M = GradedModule(A, (0, -1), [])
    res = free_resolution(M)
    assert res.length == 0
    assert res.betti_numbers() == (2,)


def test_resolution_prunes_redundant_generators():
    # F^2 modulo (e0 - e1) is free of rank one
    A, (x, y) = algebra("xy")
    F = FreeModule(A.ring, (0, 0))
    e0, e1 = F.generator(0), F.generator(1)
    M = GradedModule(A, (0, 0), [e0 - e1])
    assert betti_numbers(M) == (1,)
    assert depth(M) == 2


def test_minimal_presentation_eliminates_unit_entries():
    A, (x, y) = algebra("xy")
    F = FreeModule(A.ring, (0, 1))
    rel = poly_in_position(F, x, 0) + F.generator(1)
    M = GradedModule(A, (0, 1), [rel])
    mp = minimal_presentation(M)
    assert mp.twists == (0,)
    assert not mp.relations.gb


def test_exactness_verifier_rejects_truncation():
    A, _ = algebra("xy")
    k = residue_field(A)
    res = free_resolution(k)
    chopped = FreeComplex(res.spots[:2], res.diffs[:1])
    with pytest.raises(CrossCheckFailure):
        verify_resolution_exactness(chopped, 6)


# -- ext ----------------------------------------------------------------------

def test_ext_of_residue_field():
    A, _ = algebra("xy")
    k = residue_field(A)
    top = ext_module(k, 2)
    assert top.total_length() == 1
    assert ext_module(k, 0).is_zero()
    assert ext_module(k, 1).is_zero()
    assert ext_module(k, 5).is_zero()


def test_ext_of_free_module_vanishes_positively():
    A, _ = algebra("xy")
    M = GradedModule(A, (0, -1), [])
    hom = ext_module(M, 0)
    assert hom.rank == 2 and not hom.relations.gb
    assert ext_module(M, 1).is_zero()
    assert ext_module(M, 2).is_zero()


def test_ext_duality_lengths_in_dimension_zero():
    # for finite length over two variables, the top ext has the same length
    A, (x, y) = algebra("xy")
    M = A.cyclic_module().quotient_by_ideal([x * x, x * y, y * y])
    assert M.total_length() == 3
    assert ext_module(M, 2).total_length() == 3
    assert ext_module(M, 1).is_zero()


# -- dual sections and depth --------------------------------------------------

def test_dual_sections_of_shallow_cyclic():
    A, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    M = A.cyclic_module()
    duals = dual_sections(M)
    assert [d.index for d in duals] == [0]
    assert duals[0].finite_length
    assert duals[0].module.total_length() == 1  # the socle element x
    assert M.h0().total_length() == 1


def test_dual_sections_of_finite_length_module_are_empty():
    A, _ = algebra("xy")
    assert dual_sections(residue_field(A)) == []


def test_depth_examples():
    A, _ = algebra("xy")
    assert depth(A.cyclic_module()) == 2
    free_plus_point = A.cyclic_module().direct_sum(residue_field(A))
    assert depth(free_plus_point) == 0

    B, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    assert depth(B.cyclic_module()) == 0

    C, (x, y) = algebra("xy", [lambda x, y: x * x])
    assert depth(C.cyclic_module()) == 1  # y stays regular

    with pytest.raises(ZeroModule):
        depth(zero_module(A))


def test_dual_section_dimensions_bounded_by_index():
    A, (x, y, z) = algebra("xyz", [lambda x, y, z: x * y, lambda x, y, z: x * z])
    M = A.cyclic_module()  # union of a plane and a line
    for d in dual_sections(M):
        dim = d.module.dimension()
        assert dim <= d.index


# -- koszul -------------------------------------------------------------------

def test_koszul_complex_shape_and_signs():
    A, (x, y, z) = algebra("xyz")
    M = A.cyclic_module()
    seq = ParameterSequence(M, [x, y, z])
    cx = koszul_complex(seq)
    assert cx.betti_numbers() == (1, 3, 3, 1)
    assert [f.twists for f in cx.spots] == [(0,), (1, 1, 1), (2, 2, 2), (3,)]
    # first differential lists the sequence itself
    assert [str(col) for col in cx.diffs[0]] == ["(x)", "(y)", "(z)"]
    # middle spot: d(e_{01}) = a_0 e_1 - a_1 e_0
    col = cx.diffs[1][0]
    assert col.component(0) == -y and col.component(1) == x


def test_koszul_homology_of_regular_sequence():
    A, (x, y) = algebra("xy")
    M = A.cyclic_module()
    seq = ParameterSequence(M, [x, y])
    assert koszul_homology_lengths(seq) == [1, 0, 0]


def test_koszul_homology_matches_annihilator_in_dimension_one():
    A, (x, y) = algebra("xy", [lambda x, y: x * x, lambda x, y: x * y])
    M = A.cyclic_module()
    seq = ParameterSequence(M, [y])
    lengths = koszul_homology_lengths(seq)
    assert lengths == [2, 1]  # covolume 2; (0 : y) is spanned by x
    assert seq.covolume() == 2


def test_koszul_homology_empty_sequence_is_the_module():
    A, (x, y) = algebra("xy")
    M = residue_field(A)
    seq = ParameterSequence(M, [])
    assert koszul_homology_lengths(seq) == [1]
