"""Arithmetic kernel: scalars, monomial orders, polynomials, module elements."""
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from genuslab.errors import HomogeneityViolation
from genuslab.ring import (DEFAULT_PRIME, FreeElement, FreeModule, PolyRing,
                           Polynomial, binomial, degrevlex_cmp, degrevlex_key,
                           element_from_components, is_prime, mono_divides,
                           mono_lcm, poly_times_element)


def make_ring(names="xyz", p=DEFAULT_PRIME):
    return PolyRing(tuple(names), p)


# -- integers -----------------------------------------------------------------

def test_binomial_values():
    assert binomial(5, 2) == 10
    assert binomial(0, 0) == 1
    assert binomial(4, 0) == 1
    assert binomial(4, 4) == 1
    assert binomial(3, 5) == 0
    assert binomial(-1, 0) == 0
    assert binomial(5, -2) == 0


@given(st.integers(0, 60), st.integers(-3, 63))
def test_binomial_pascal(n, k):
    assert binomial(n + 1, k) == binomial(n, k) + binomial(n, k - 1)


def test_is_prime():
    assert [q for q in range(2, 30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(32003)
    assert not is_prime(32001)


# -- prime field --------------------------------------------------------------

def test_scalar_ops_mod_7():
    R = make_ring("xy", 7)
    assert R.add(5, 4) == 2
    assert R.mul(3, 5) == 1
    assert R.neg(2) == 5
    assert R.inv(3) == 5
    assert R.mul(R.inv(4), 4) == 1
    with pytest.raises(ZeroDivisionError):
        R.inv(0)
    with pytest.raises(ZeroDivisionError):
        R.inv(7)  # 7 = 0 mod 7


def test_ring_validation():
    with pytest.raises(ValueError):
        PolyRing(("x",), 6)
    with pytest.raises(ValueError):
        PolyRing(("x",), 2)  # odd primes only
    with pytest.raises(ValueError):
        PolyRing(("x", "x"), 7)


@given(st.integers(0, DEFAULT_PRIME - 1), st.integers(0, DEFAULT_PRIME - 1),
       st.integers(0, DEFAULT_PRIME - 1))
def test_field_axioms(a, b, c):
    R = make_ring()
    assert R.add(a, R.add(b, c)) == R.add(R.add(a, b), c)
    assert R.mul(a, R.mul(b, c)) == R.mul(R.mul(a, b), c)
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.add(a, R.neg(a)) == 0
    if a % DEFAULT_PRIME:
        assert R.mul(a, R.inv(a)) == 1


# -- monomial order -----------------------------------------------------------

def test_degrevlex_quadrics_in_three_variables():
    # x^2 > xy > y^2 > xz > yz > z^2
    chain = [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    for a, b in zip(chain, chain[1:]):
        assert degrevlex_cmp(a, b) == 1
        assert degrevlex_cmp(b, a) == -1
    assert degrevlex_cmp((1, 1, 0), (1, 1, 0)) == 0


def test_degrevlex_degree_dominates():
    assert degrevlex_cmp((0, 0, 3), (2, 0, 0)) == 1


exps3 = st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))


@given(exps3, exps3, exps3)
def test_degrevlex_total_and_multiplicative(a, b, m):
    ka, kb = degrevlex_key(a), degrevlex_key(b)
    assert (ka < kb) == (degrevlex_cmp(a, b) == -1)
    if degrevlex_cmp(a, b) == 1:
        am = tuple(x + y for x, y in zip(a, m))
        bm = tuple(x + y for x, y in zip(b, m))
        assert degrevlex_cmp(am, bm) == 1


@given(exps3, exps3)
def test_divisor_is_smaller(a, b):
    if mono_divides(a, b):
        assert degrevlex_cmp(a, b) in (-1, 0)
    lcm = mono_lcm(a, b)
    assert mono_divides(a, lcm) and mono_divides(b, lcm)


# -- polynomials --------------------------------------------------------------

def test_polynomial_product():
    R = make_ring("xy", 7)
    x, y = R.variable(0), R.variable(1)
    assert (x + y) * (x - y) == x * x - y * y
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y


def test_polynomial_homogeneity_enforced():
    R = make_ring("xy", 7)
    x = R.variable(0)
    with pytest.raises(HomogeneityViolation):
        x + R.constant(1)
    with pytest.raises(HomogeneityViolation):
        Polynomial(R, {(1, 0): 1, (2, 0): 1})


def test_polynomial_scale_and_monic():
    R = make_ring("xy", 7)
    x, y = R.variable(0), R.variable(1)
    f = x * 2 + y * 3
    assert f.scale(0).is_zero
    g = f.monic()
    assert g.lead_term() == ((1, 0), 1)
    assert g.terms[(0, 1)] == 5  # 3/2 = 5 mod 7


def test_polynomial_lead_and_str():
    R = make_ring("xyz")
    x, y, z = (R.variable(i) for i in range(3))
    f = x * x + x * y + y * z
    assert f.lead_term() == ((2, 0, 0), 1)
    assert str(f) == "x^2 + x*y + y*z"
    assert str(x - y) == "x - y"
    assert str(R.constant(0)) == "0"


def test_monomials_of_degree():
    R = make_ring("xyz")
    twos = list(R.monomials_of_degree(2))
    assert len(twos) == 6
    assert len(set(twos)) == 6
    assert all(sum(e) == 2 for e in twos)


@given(st.integers(0, 4), st.integers(0, 4))
def test_monomial_count_is_binomial(n_extra, d):
    R = PolyRing(tuple(f"t{i}" for i in range(n_extra + 1)), 7)
    assert len(list(R.monomials_of_degree(d))) == binomial(d + n_extra, n_extra)


# -- free modules -------------------------------------------------------------

def test_term_degree_with_twists():
    R = make_ring("xy", 7)
    F = FreeModule(R, (0, 1))
    assert F.term_degree((0, (2, 0))) == 2
    assert F.term_degree((1, (2, 0))) == 3


def test_element_homogeneity_with_twists():
    R = make_ring("xy", 7)
    F = FreeModule(R, (0, 1))
    x = R.variable(0)
    v = element_from_components(F, [x, R.constant(1)])  # degrees 1 and 1
    assert v.degree == 1
    with pytest.raises(HomogeneityViolation):
        element_from_components(F, [x, x])


def test_top_order_monomial_first_then_position():
    R = make_ring("xy", 7)
    F = FreeModule(R, (0, 0))
    x, y = R.variable(0), R.variable(1)
    v = element_from_components(F, [y, x])
    assert v.lead_term() == ((1, (1, 0)), 1)  # x beats y regardless of position
    w = element_from_components(F, [x, x])
    assert w.lead_term() == ((0, (1, 0)), 1)  # ties go to the earlier position


def test_elimination_block_dominates():
    R = make_ring("xy", 7)
    F = FreeModule(R, (0, 0), elim_rank=1)
    low = (1, (5, 0))
    high = (0, (0, 0))
    assert F.term_key(high) > F.term_key(low)
    # min-heap key pops the larger term first
    assert F.heap_key(high) < F.heap_key(low)


def test_element_arithmetic():
    R = make_ring("xy", 7)
    F = FreeModule(R, (0, 0))
    x, y = R.variable(0), R.variable(1)
    v = element_from_components(F, [x, y])
    w = element_from_components(F, [x, None])
    assert (v - w).component(0).is_zero
    assert (v - w).component(1) == y
    assert v.scale(0).is_zero
    assert poly_times_element(x, v).component(1) == x * y
    assert v.shifted((0, 1)).component(0) == x * y
    assert (v + (-v)).is_zero


def test_element_monic_and_str():
    R = make_ring("xy", 7)
    F = FreeModule(R, (0, 0))
    v = element_from_components(F, [R.variable(0).scale(3), R.variable(1)])
    m = v.monic()
    lt, c = m.lead_term()
    assert c == 1 and lt == (0, (1, 0))
    assert str(m) == "(x, -2*y)"  # 1/3 = 5 = -2 mod 7
