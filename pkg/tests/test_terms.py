"""Core free-algebra layer: symbols, trees, exact linear combinations."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from vertexalg.terms import (
    Alphabet,
    Element,
    GradeReport,
    Leaf,
    Node,
    Symbol,
    binom,
    falling,
    grade,
    is_homogeneous,
    leaves,
    parity,
    sort_key,
    term_length,
)


@pytest.fixture
def al():
    a = Alphabet()
    a.add(Symbol("x", 0, Q(0), "generic"))
    a.add(Symbol("y", 0, Q(1), "generic"))
    a.add(Symbol("p", 1, Q(0), "generic"))
    return a


def E(al, name):
    return Element.sym(al, name)


class TestBinomials:
    def test_small_values(self):
        assert [binom(4, k) for k in range(6)] == [1, 4, 6, 4, 1, 0]

    def test_negative_upper_index(self):
        # binom(-2, k) = (-1)^k (k + 1): -2 choose k over falling factorials
        assert [binom(-2, k) for k in range(5)] == [1, -2, 3, -4, 5]

    def test_negative_one(self):
        assert [binom(-1, k) for k in range(4)] == [1, -1, 1, -1]

    def test_negative_k_is_zero(self):
        assert binom(3, -1) == 0

    def test_falling(self):
        assert falling(5, 2) == 20
        assert falling(-2, 3) == (-2) * (-3) * (-4)
        assert falling(7, 0) == 1


class TestAlphabet:
    def test_unit_exists(self):
        al = Alphabet()
        assert al.unit.kind == "unit"
        assert al.has("1")

    def test_second_unit_rejected(self, al):
        with pytest.raises(ValueError):
            al.add(Symbol("one", 0, Q(0), "unit"))

    def test_reregistering_same_symbol_is_noop(self, al):
        before = len(al.names())
        al.add(Symbol("x", 0, Q(0), "generic"))
        assert len(al.names()) == before

    def test_clashing_redefinition_rejected(self, al):
        with pytest.raises(ValueError):
            al.add(Symbol("x", 1, Q(0), "generic"))

    def test_unknown_symbol_raises(self, al):
        with pytest.raises(KeyError):
            al.symbol("nope")


class TestElementArithmetic:
    def test_zero_identity(self, al):
        x = E(al, "x")
        assert (x + Element.zero(al)) == x
        assert (x - x).is_zero()

    def test_scalar_multiplication(self, al):
        x = E(al, "x")
        assert (2 * x) + x == 3 * x
        assert (Q(1, 2) * x) * 2 == x
        assert (0 * x).is_zero()

    def test_float_coefficients_rejected(self, al):
        with pytest.raises(TypeError):
            Element.sym(al, "x", 0.5)

    def test_mixed_alphabets_rejected(self, al):
        other = Alphabet()
        other.add(Symbol("x", 0, Q(0), "generic"))
        with pytest.raises(ValueError):
            E(al, "x") + Element.sym(other, "x")

    def test_product_is_bilinear(self, al):
        x, y = E(al, "x"), E(al, "y")
        lhs = (x + 2 * y).o(1, x - y)
        rhs = x.o(1, x) - x.o(1, y) + 2 * y.o(1, x) - 2 * y.o(1, y)
        assert lhs == rhs

    def test_product_with_zero(self, al):
        x = E(al, "x")
        assert x.o(3, Element.zero(al)).is_zero()
        assert Element.zero(al).o(3, x).is_zero()

    def test_derivative_is_unit_product(self, al):
        x = E(al, "x")
        assert x.D() == x.o(-2, Element.unit(al))

    def test_derivative_powers_compose(self, al):
        x = E(al, "x")
        assert x.D_pow(3) == x.D().D().D()
        assert x.D_pow(0) == x

    def test_divided_powers(self, al):
        x = E(al, "x")
        assert x.D_pow(3, divide_factorial=True) == Q(1, 6) * x.D_pow(3)


class TestTreeShape:
    def test_term_length(self, al):
        x, y = E(al, "x"), E(al, "y")
        (t,) = x.o(-2, y).o(1, x).terms
        assert term_length(t) == 3
        assert [s.name for s in leaves(t)] == ["x", "y", "x"]

    def test_sort_key_total_order(self, al):
        x, y = E(al, "x"), E(al, "y")
        terms = list((x.o(0, y) + y.o(0, x) + x + y).terms)
        keys = sorted(terms, key=sort_key)
        assert len(set(map(sort_key, terms))) == len(terms)
        assert keys == sorted(keys, key=sort_key)


class TestGrading:
    def test_product_degree_rule(self, al):
        # |x o_n y| = |x| + (-n - 1) + |y|
        x, y = E(al, "x"), E(al, "y")
        assert grade(x.o(0, y)).degree == Q(0)  # 0 + (-1) + 1
        assert grade(x.o(-2, y)).degree == Q(2)  # 0 + 1 + 1
        assert grade(x.D()).degree == Q(1)

    def test_mixed_degree_reports_none(self, al):
        x = E(al, "x")
        assert grade(x + x.D()).degree is None
        assert not is_homogeneous(x + x.D())
        assert is_homogeneous(Element.zero(al))

    def test_lengths_multiset(self, al):
        x, y = E(al, "x"), E(al, "y")
        g = grade(x + x.o(1, y))
        assert g.lengths == (1, 2)

    def test_parity(self, al):
        x, p = E(al, "x"), E(al, "p")
        assert parity(x) == 0
        assert parity(p) == 1
        assert parity(p.o(2, p)) == 0
        assert parity(x + p) is None
        assert parity(Element.zero(al)) == 0


# random monomials over a fixed three-symbol alphabet
_al = Alphabet()
for _nm in ("x", "y", "z"):
    _al.add(Symbol(_nm, 0, Q(0), "generic"))


@st.composite
def monomials(draw, max_len=3):
    length = draw(st.integers(1, max_len))

    def tree(k):
        if k == 1:
            return Element.sym(_al, draw(st.sampled_from(("x", "y", "z"))))
        split = draw(st.integers(1, k - 1))
        return tree(split).o(draw(st.integers(-3, 3)), tree(k - split))

    return tree(length)


@st.composite
def elements(draw):
    out = Element.zero(_al)
    for _ in range(draw(st.integers(0, 3))):
        c = draw(st.integers(-3, 3))
        out = out + c * draw(monomials())
    return out


class TestRingProperties:
    @given(elements(), elements(), elements())
    def test_addition_associative(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(elements(), elements())
    def test_addition_commutative(self, a, b):
        assert a + b == b + a

    @given(elements(), st.integers(-3, 3), elements(), elements())
    def test_left_distributive(self, a, n, b, c):
        assert a.o(n, b + c) == a.o(n, b) + a.o(n, c)

    @given(elements(), st.integers(-3, 3), elements())
    def test_scalars_pull_out(self, a, n, b):
        assert (2 * a).o(n, b) == 2 * a.o(n, b)
        assert a.o(n, Q(1, 3) * b) == Q(1, 3) * a.o(n, b)

    @given(elements())
    def test_negation(self, a):
        assert (a + (-a)).is_zero()
