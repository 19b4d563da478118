"""Bridge identities and the derived-locality machinery."""

import itertools
from fractions import Fraction as Q

import pytest

from vertexalg.bridges import (
    BRIDGE_IDS,
    DongTable,
    borcherds_bridge,
    dong_matrix,
    dong_rank,
    dong_row,
    dong_tail_certificate,
)
from vertexalg.generators import CertificationError, TruncationPolicy, truncate
from vertexalg.terms import Alphabet, Element, Leaf, Node, Symbol


@pytest.fixture(scope="module")
def al():
    a = Alphabet()
    for nm in ("u", "v", "w"):
        a.add(Symbol(nm, 0, Q(0), "generic"))
    for nm in ("p", "q"):
        a.add(Symbol(nm, 1, Q(0), "generic"))
    return a


POL = TruncationPolicy(default_locality=3, level=8)
POL6 = TruncationPolicy(default_locality=3, level=6)


def S(al, name):
    return Element.sym(al, name)


def assert_bridge(identity, args, policy):
    lhs, rhs = borcherds_bridge(identity, args, policy)
    diff = lhs - rhs
    assert diff.is_zero(), (identity, args, str(diff))


class TestClosedFormBridges:
    # e-bridge and d-induction close without truncation
    def test_e_bridge_exact(self, al):
        u, v = S(al, "u"), S(al, "v")
        for n in range(-3, 4):
            lhs, rhs = borcherds_bridge("e-bridge", {"x": u, "y": v, "n": n}, None)
            assert lhs == rhs

    def test_d_induction_exact(self, al):
        u, v = S(al, "u"), S(al, "v")
        for n in range(-3, 4):
            lhs, rhs = borcherds_bridge(
                "d-induction", {"x": u, "y": v, "n": n}, None
            )
            assert lhs == rhs


class TestInductionGrid:
    # every identity over a small exhaustive index window, both parities
    PAIRS = (("u", "v"), ("p", "q"), ("u", "p"))

    @pytest.mark.parametrize("nx,ny", PAIRS)
    def test_qc_induction(self, al, nx, ny):
        x, y = S(al, nx), S(al, ny)
        for n in range(-3, 4):
            assert_bridge("qc-induction", {"x": x, "y": y, "n": n}, POL)

    @pytest.mark.parametrize("nx,ny", PAIRS)
    def test_qc_symmetry(self, al, nx, ny):
        x, y = S(al, nx), S(al, ny)
        for n in range(-3, 4):
            assert_bridge("qc-symmetry", {"x": x, "y": y, "n": n}, POL)

    @pytest.mark.parametrize("nx,ny", PAIRS)
    def test_qa_m_induction(self, al, nx, ny):
        x, y, z = S(al, nx), S(al, ny), S(al, "w")
        for m, n in itertools.product(range(-2, 3), repeat=2):
            assert_bridge(
                "qa-m-induction", {"x": x, "y": y, "z": z, "m": m, "n": n}, POL
            )

    @pytest.mark.parametrize("nx,ny", PAIRS)
    def test_qa_n_induction(self, al, nx, ny):
        x, y, z = S(al, nx), S(al, ny), S(al, "w")
        for m, n in itertools.product(range(-2, 3), repeat=2):
            assert_bridge(
                "qa-n-induction", {"x": x, "y": y, "z": z, "m": m, "n": n}, POL
            )

    def test_i_induction_default_reading(self, al):
        for n in range(-3, 4):
            assert_bridge("i-induction", {"x": S(al, "u"), "n": n}, POL)

    def test_i_induction_reading_one_fails_syntactically(self, al):
        # the alternative reading leaves a nonzero residue at some index
        results = []
        for n in range(-3, 4):
            lhs, rhs = borcherds_bridge(
                "i-induction", {"x": S(al, "u"), "n": n, "reading": 1}, POL
            )
            results.append((lhs - rhs).is_zero())
        assert not all(results)


class TestCommutatorBridge:
    @pytest.mark.parametrize("nx,ny", (("u", "v"), ("p", "q")))
    def test_grid(self, al, nx, ny):
        x, y, z = S(al, nx), S(al, ny), S(al, "w")
        for m, n in itertools.product(range(-1, 3), repeat=2):
            assert_bridge(
                "commutator", {"x": x, "y": y, "z": z, "m": m, "n": n}, POL
            )

    def test_below_range_rejected(self, al):
        x, y, z = S(al, "u"), S(al, "v"), S(al, "w")
        with pytest.raises(ValueError, match="m >= -1"):
            borcherds_bridge(
                "commutator", {"x": x, "y": y, "z": z, "m": -2, "n": 0}, POL
            )


class TestLevelIndependence:
    # regression: the shared series bound must scale with locality, not
    # just the policy level, or boundary terms survive at low levels
    @pytest.mark.parametrize("identity", ("qc-induction", "qa-n-induction"))
    def test_holds_at_level_six(self, al, identity):
        x, y, z = S(al, "u"), S(al, "v"), S(al, "w")
        for n in range(-4, 5):
            if identity == "qc-induction":
                assert_bridge(identity, {"x": x, "y": y, "n": n}, POL6)
            else:
                assert_bridge(
                    identity, {"x": x, "y": y, "z": z, "m": 2, "n": n}, POL6
                )


class TestArgumentHandling:
    def test_sequence_args(self, al):
        u, v = S(al, "u"), S(al, "v")
        a = borcherds_bridge("qc-induction", (u, v, 0), POL)
        b = borcherds_bridge("qc-induction", {"x": u, "y": v, "n": 0}, POL)
        assert a == b

    def test_unknown_identity(self, al):
        with pytest.raises(ValueError, match="unknown bridge identity"):
            borcherds_bridge("zz", {}, POL)

    def test_missing_args(self, al):
        with pytest.raises(ValueError, match="missing args"):
            borcherds_bridge("qc-induction", {"x": S(al, "u")}, POL)

    def test_extra_args(self, al):
        with pytest.raises(ValueError, match="unknown args"):
            borcherds_bridge(
                "e-bridge", {"x": S(al, "u"), "y": S(al, "v"), "n": 0, "w": 1}, POL
            )

    def test_inventory(self):
        assert set(BRIDGE_IDS) == {
            "e-bridge",
            "d-induction",
            "i-induction",
            "qc-induction",
            "qa-m-induction",
            "qa-n-induction",
            "qc-symmetry",
            "commutator",
        }


class TestDongMatrix:
    def test_frozen_two_by_four(self):
        # binom(4-j, k) for j <= 2, k < 2
        assert dong_matrix(2, 4) == [
            [Q(1), Q(4)],
            [Q(1), Q(3)],
            [Q(1), Q(2)],
        ]

    def test_rank_grid(self):
        # M+1 rows of a degree-(M-1) Vandermonde-like system: full rank M
        for M in (1, 2, 3):
            for m in range(3, 9):
                assert dong_rank(M, m) == M

    def test_rows_sum_against_commutator(self, al):
        # each row is a commutator decomposition: past the locality bound
        # the truncated remainder of the decomposition is minus the row
        from vertexalg.terms import binom

        x, y, z = S(al, "u"), S(al, "v"), S(al, "w")
        M, m = 3, 7
        for j in range(M + 1):
            mj, nj = m - j, m - M + j
            lhs = x.o(mj, y.o(nj, z)) - y.o(nj, x.o(mj, z))
            for k in range(mj + 1):
                lhs = lhs - binom(mj, k) * x.o(k, y).o(2 * m - M - k, z)
            row = dong_row(x, y, z, M, m, j)
            assert truncate(lhs, POL) == truncate(-1 * row, POL), j


class TestDongTable:
    def test_leaf_pair_reads_policy(self, al):
        table = DongTable(POL)
        u, v = Leaf(al.symbol("u")), Leaf(al.symbol("v"))
        assert table.bound(u, v) == 3

    def test_product_bound_formula(self, al):
        # node u o_r v against leaf w: max(0, 3*M - r) with M = 3
        table = DongTable(POL)
        u, v, w = (Leaf(al.symbol(nm)) for nm in ("u", "v", "w"))
        for r in range(-3, 3):
            node = Node(r, u, v)
            assert table.bound(node, w) == max(0, 9 - r)

    def test_symmetric(self, al):
        table = DongTable(POL)
        u, v, w = (Leaf(al.symbol(nm)) for nm in ("u", "v", "w"))
        node = Node(-2, u, v)
        assert table.bound(node, w) == table.bound(w, node)


class TestTailCertificate:
    @pytest.mark.parametrize("r", (-1, -2, -3))
    def test_passes_at_derived_bound(self, al, r):
        x, y, z = S(al, "u"), S(al, "v"), S(al, "w")
        n0 = 9 - r
        counts = dong_tail_certificate(x, y, z, r, n0, POL)
        assert counts["generator"] == 1
        assert counts["dead"] + counts["derived"] > 0

    @pytest.mark.parametrize("r", (-1, -2))
    def test_sharp_below_bound(self, al, r):
        x, y, z = S(al, "u"), S(al, "v"), S(al, "w")
        n0 = 9 - r
        with pytest.raises(CertificationError):
            dong_tail_certificate(x, y, z, r, n0 - 1, POL)

    def test_rejects_nonnegative_r(self, al):
        x, y, z = S(al, "u"), S(al, "v"), S(al, "w")
        with pytest.raises(ValueError, match="r < 0"):
            dong_tail_certificate(x, y, z, 0, 12, POL)

    def test_rejects_compound_arguments(self, al):
        x, y, z = S(al, "u"), S(al, "v"), S(al, "w")
        with pytest.raises(ValueError, match="single leaf"):
            dong_tail_certificate(x.o(0, y), y, z, -1, 12, POL)
