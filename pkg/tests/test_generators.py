"""Ideal generator families, truncation, and certified tail bounds."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from vertexalg.generators import (
    CertificationError,
    GeneratorSpec,
    TruncationPolicy,
    build_generator,
    fam_c,
    fam_d,
    fam_e,
    fam_f,
    fam_i,
    fam_qa,
    fam_qc,
    truncate,
)
from vertexalg.terms import Alphabet, Element, Symbol, is_homogeneous


@pytest.fixture
def al():
    a = Alphabet()
    for nm in ("x", "y", "z"):
        a.add(Symbol(nm, 0, Q(0), "generic"))
    for nm in ("p", "q"):
        a.add(Symbol(nm, 1, Q(0), "generic"))
    return a


def E(al, name):
    return Element.sym(al, name)


POL = TruncationPolicy(default_locality=3, level=8)


class TestTruncation:
    def test_dead_leaf_pair_dropped(self, al):
        x, y = E(al, "x"), E(al, "y")
        assert truncate(x.o(3, y), POL).is_zero()
        assert truncate(x.o(7, y), POL).is_zero()

    def test_alive_leaf_pair_kept(self, al):
        x, y = E(al, "x"), E(al, "y")
        assert truncate(x.o(2, y), POL) == x.o(2, y)
        assert truncate(x.o(-5, y), POL) == x.o(-5, y)

    def test_dead_subtree_kills_whole_term(self, al):
        x, y, z = E(al, "x"), E(al, "y"), E(al, "z")
        term = x.o(3, y).o(-2, z)
        assert truncate(term, POL).is_zero()
        assert truncate(z.o(-4, x.o(3, y)), POL).is_zero()

    def test_high_outer_index_on_compound_survives(self, al):
        # deadness is a leaf-pair notion; node-leaf products stay
        x, y, z = E(al, "x"), E(al, "y"), E(al, "z")
        term = x.o(2, y).o(9, z)
        assert truncate(term, POL) == term

    def test_override_changes_threshold(self, al):
        pol = TruncationPolicy(3, overrides=(("x", "y", 5),))
        x, y = E(al, "x"), E(al, "y")
        assert truncate(x.o(4, y), pol) == x.o(4, y)
        assert truncate(x.o(5, y), pol).is_zero()
        # pair key is unordered
        assert truncate(y.o(4, x), pol) == y.o(4, x)

    def test_exempt_index_punches_through(self, al):
        pol = TruncationPolicy(1, exempt=frozenset({("x", "y", 4)}))
        x, y = E(al, "x"), E(al, "y")
        assert truncate(x.o(4, y), pol) == x.o(4, y)
        assert truncate(x.o(5, y), pol).is_zero()
        assert truncate(x.o(1, y), pol).is_zero()

    def test_linearity(self, al):
        x, y, z = E(al, "x"), E(al, "y"), E(al, "z")
        mixed = 2 * x.o(3, y) + 5 * x.o(1, z)
        assert truncate(mixed, POL) == 5 * x.o(1, z)


class TestUnitFamily:
    def test_at_minus_one_subtracts_the_element(self, al):
        x = E(al, "x")
        one = Element.unit(al)
        assert fam_i(x, -1) == one.o(-1, x) - x

    def test_elsewhere_is_bare_product(self, al):
        x = E(al, "x")
        one = Element.unit(al)
        assert fam_i(x, 2) == one.o(2, x)
        assert fam_i(x, -3) == one.o(-3, x)


class TestDerivationFamilies:
    def test_d_shape(self, al):
        x, y = E(al, "x"), E(al, "y")
        assert fam_d(x, y, 1) == x.o(1, y).D() - x.D().o(1, y) - x.o(1, y.D())

    def test_e_shape(self, al):
        x, y = E(al, "x"), E(al, "y")
        assert fam_e(x, y, 0) == x.D().o(0, y)
        assert fam_e(x, y, 2) == x.D().o(2, y) + 2 * x.o(1, y)

    def test_f_is_d_plus_e(self, al):
        x, y = E(al, "x"), E(al, "y")
        assert fam_f(x, y, -2) == fam_d(x, y, -2) + fam_e(x, y, -2)


class TestDeadPairFamily:
    def test_accepts_dead_pair(self, al):
        x, y = E(al, "x"), E(al, "y")
        assert fam_c(x, y, 4, POL) == x.o(4, y)

    def test_rejects_live_pair(self, al):
        x, y = E(al, "x"), E(al, "y")
        with pytest.raises(ValueError, match="dead pair"):
            fam_c(x, y, 2, POL)

    def test_rejects_compound_arguments(self, al):
        x, y = E(al, "x"), E(al, "y")
        with pytest.raises(ValueError, match="leaf"):
            fam_c(x.o(0, y), y, 9, POL)


class TestCommutatorFamily:
    def test_expansion_at_minus_one_bound_one(self, al):
        # hand expansion: head + sum_{k<=1} (-1)^{n+k}/k! D^k(y o_{n+k} x)
        # at n = -1: x o_{-1} y - y o_{-1} x + D(y o_0 x)
        x, y = E(al, "x"), E(al, "y")
        got = fam_qc(x, y, -1, None, K=1, certify=False)
        want = x.o(-1, y) - y.o(-1, x) + y.o(0, x).D()
        assert got == want

    def test_odd_odd_sign_flip(self, al):
        # odd parities multiply the sum through by -1
        p, q = E(al, "p"), E(al, "q")
        got = fam_qc(p, q, -1, None, K=1, certify=False)
        want = p.o(-1, q) + q.o(-1, p) - q.o(0, p).D()
        assert got == want

    def test_certified_bound_from_policy(self, al):
        x, y = E(al, "x"), E(al, "y")
        gen = fam_qc(x, y, -1, POL)
        # all tail terms y o_{-1+k} x with -1+k >= 3 are dead, so the
        # certified build truncates to itself
        assert truncate(gen, POL) == truncate(
            fam_qc(x, y, -1, None, K=20, certify=False), POL
        )

    def test_underestimated_bound_rejected(self, al):
        x, y = E(al, "x"), E(al, "y")
        with pytest.raises(CertificationError, match="K"):
            fam_qc(x, y, -2, POL, K=2)

    def test_compound_argument_needs_explicit_bound(self, al):
        x, y = E(al, "x"), E(al, "y")
        with pytest.raises(CertificationError):
            fam_qc(x.o(-1, y), y, 0, POL)
        # explicit bound with certification off is allowed
        got = fam_qc(x.o(-1, y), y, 0, None, K=3, certify=False)
        assert not got.is_zero()


class TestAssociatorFamily:
    def test_head_term_present(self, al):
        x, y, z = E(al, "x"), E(al, "y"), E(al, "z")
        gen = fam_qa(x, y, z, 2, 1, None, K=6, certify=False)
        (head,) = x.o(2, y).o(1, z).terms
        assert gen.terms.get(head) == Q(1)

    def test_nonnegative_m_closes_at_k_equals_m(self, al):
        # for m >= 0 the binomial sum is finite; K beyond m adds nothing
        x, y, z = E(al, "x"), E(al, "y"), E(al, "z")
        a = fam_qa(x, y, z, 2, -1, None, K=2, certify=False)
        b = fam_qa(x, y, z, 2, -1, None, K=9, certify=False)
        assert a == b

    def test_certification_rejects_short_tail(self, al):
        x, y, z = E(al, "x"), E(al, "y"), E(al, "z")
        with pytest.raises(CertificationError):
            fam_qa(x, y, z, -1, -1, POL, K=1)


class TestHomogeneity:
    # every family output must be degree-homogeneous
    @settings(max_examples=60, deadline=None)
    @given(
        st.sampled_from(("i", "d", "e", "qc", "qa")),
        st.integers(-4, 4),
        st.integers(-4, 4),
        st.sampled_from(("x", "y", "p")),
        st.sampled_from(("y", "z", "q")),
    )
    def test_families_are_homogeneous(self, fam, m, n, nx, ny):
        al = Alphabet()
        for nm in ("x", "y", "z"):
            al.add(Symbol(nm, 0, Q(0), "generic"))
        for nm in ("p", "q"):
            al.add(Symbol(nm, 1, Q(0), "generic"))
        x, y, z = E(al, nx), E(al, ny), E(al, "z")
        if fam == "i":
            gen = fam_i(x, n)
        elif fam == "d":
            gen = fam_d(x, y, n)
        elif fam == "e":
            gen = fam_e(x, y, n)
        elif fam == "qc":
            gen = fam_qc(x, y, n, None, K=6, certify=False)
        else:
            gen = fam_qa(x, y, z, m, n, None, K=6, certify=False)
        assert is_homogeneous(gen)


class TestDispatch:
    def test_indexed_families(self, al):
        x, y = E(al, "x"), E(al, "y")
        spec = GeneratorSpec("d", (x, y), (1,))
        assert build_generator(spec, POL).element == fam_d(x, y, 1)

    def test_qa_indices(self, al):
        x, y, z = E(al, "x"), E(al, "y"), E(al, "z")
        spec = GeneratorSpec("qa", (x, y, z), (2, -1), bound=6)
        built = build_generator(spec, POL, certify=False)
        assert built.element == fam_qa(x, y, z, 2, -1, POL, K=6, certify=False)
        assert built.indices == (2, -1)

    def test_unknown_family(self, al):
        with pytest.raises(ValueError, match="unknown family"):
            build_generator(GeneratorSpec("zz", (E(al, "x"),), (0,)), POL)

    def test_model_families_need_model(self, al):
        x, y = E(al, "x"), E(al, "y")
        with pytest.raises(ValueError, match="model"):
            build_generator(GeneratorSpec("s", (x, y)), POL)

    def test_k_family_needs_context(self, al):
        with pytest.raises(ValueError, match="context"):
            build_generator(GeneratorSpec("k", (E(al, "x"),)), POL)
