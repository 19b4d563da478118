"""Concrete models: construction, law validation, evaluation oracles."""

import json
from fractions import Fraction as Q
from importlib import resources

import pytest

from vertexalg.generators import TruncationPolicy
from vertexalg.models.base import (
    ModelDegreeError,
    check_module_laws,
    evaluate,
    validate_model,
)
from vertexalg.models.factory import (
    load_model,
    make_model,
    shipped_model,
    shipped_model_names,
)
from vertexalg.parsing import parse
from vertexalg.terms import Element

SHIPPED = (
    "current2",
    "current3",
    "derham1",
    "derham2_b2",
    "derham2_lin",
    "diffpoly",
    "weyl1",
)


def test_shipped_inventory():
    assert shipped_model_names() == sorted(SHIPPED)


@pytest.mark.parametrize("name", SHIPPED)
def test_validate_model_green(name):
    model = shipped_model(name)
    checks = validate_model(model, pair_cap=6, case_cap=40)
    ids = {c["id"] for c in checks}
    assert {
        "bracket-antisymmetry",
        "product-commutativity",
        "jacobi",
        "bracket-derivation-compat",
        "action-associativity",
        "unit-action",
    } <= ids
    bad = [c for c in checks if c["status"] != "pass"]
    assert not bad, bad


@pytest.fixture(scope="module")
def diffpoly():
    return make_model("DiffPoly")


@pytest.fixture(scope="module")
def weyl():
    return make_model("Weyl1")


class TestDiffPoly:
    @pytest.fixture
    def model(self, diffpoly):
        return diffpoly

    def test_multiplication_table(self, model):
        al = model.alphabet
        b = al.symbol("b")
        b2 = al.symbol("b2")
        assert model.mul(b, b) == Element.sym(al, "b2")
        assert model.mul(b, b2) == Element.sym(al, "b3")

    def test_brackets_vanish(self, model):
        al = model.alphabet
        got = model.bracket(al.symbol("b"), al.symbol("b3"))
        assert got.is_zero()

    def test_degree_cap_raises(self, model):
        al = model.alphabet
        with pytest.raises(ModelDegreeError):
            model.mul(al.symbol("b4"), al.symbol("b5"))

    def test_commutative_evaluation(self, model):
        # associativity witness: (b*b)*b2 and b*(b*b2) both land on b4
        al = model.alphabet
        left = parse("o{-1}(o{-1}(b, b), b2)", al)
        right = parse("o{-1}(b, o{-1}(b, b2))", al)
        want = Element.sym(al, "b4")
        assert model.evaluate_commutative(left) == want
        assert model.evaluate_commutative(right) == want

    def test_evaluate_dispatch(self, model):
        al = model.alphabet
        x = parse("o{-1}(b, b)", al)
        assert evaluate(x, model) == Element.sym(al, "b2")
        with pytest.raises(ValueError, match="semantics"):
            evaluate(x, model, semantics="quantum")


class TestWeyl1:
    @pytest.fixture
    def model(self, weyl):
        return weyl

    def test_canonical_bracket(self, model):
        al = model.alphabet
        got = model.bracket(al.symbol("del"), al.symbol("b"))
        assert got == Element.unit(al)

    def test_vector_field_bracket(self, model):
        # [del, b*del] = del
        al = model.alphabet
        got = model.bracket(al.symbol("del"), al.symbol("bdel"))
        assert got == Element.sym(al, "del")

    def test_bracket_with_scalar_is_derivative(self, model):
        al = model.alphabet
        # [del, b2] = (b2)' = 2b
        got = model.bracket(al.symbol("del"), al.symbol("b2"))
        assert got == 2 * Element.sym(al, "b")

    def test_action_multiplies_coefficients(self, model):
        al = model.alphabet
        # b . del = b del  (module action of the polynomial algebra)
        got = model.act(al.symbol("b"), al.symbol("del"))
        assert got == Element.sym(al, "bdel")

    def test_no_commutative_semantics(self, model):
        al = model.alphabet
        with pytest.raises(ValueError, match="commutative"):
            model.evaluate_commutative(parse("o{-1}(b, b)", al))

    def test_nested_bracket_reduces_to_unit(self, model):
        # [del, b del] = del, then [del, b] = 1
        from vertexalg.rewrite import RuleSet, reduce_element

        al = model.alphabet
        x = parse("o{0}(o{0}(del, bdel), b)", al)
        rep = reduce_element(x, RuleSet.stock(model))
        assert rep.result == Element.unit(al)


class TestCurrentLie:
    def test_two_generator_abelian(self):
        model = shipped_model("current2")
        al = model.alphabet
        names = set(al.names())
        assert "e1" in names and "e2" in names
        got = model.bracket(al.symbol("e1"), al.symbol("e2"))
        assert got.is_zero()

    def test_three_generator_cyclic(self):
        model = shipped_model("current3")
        al = model.alphabet
        got = model.bracket(al.symbol("e1"), al.symbol("e2"))
        assert got == Element.sym(al, "e3")
        anti = model.bracket(al.symbol("e2"), al.symbol("e1"))
        assert (got + anti).is_zero()


class TestModuleLaws:
    @pytest.mark.parametrize("name", ("diffpoly", "weyl1", "current2"))
    def test_status_pass(self, name):
        model = shipped_model(name)
        pol = TruncationPolicy(2, level=6)
        report = check_module_laws(model, pol, samples=30, seed=11)
        assert report["status"] == "pass"
        assert report["failures"] == []
        assert report["samples"] == 30
        assert report["law1_exact"] + report["law1_reduced"] > 0

    def test_deterministic_per_seed(self):
        model = shipped_model("diffpoly")
        pol = TruncationPolicy(2, level=6)
        a = check_module_laws(model, pol, samples=15, seed=3)
        b = check_module_laws(model, pol, samples=15, seed=3)
        assert a == b


class TestLoaders:
    def test_load_current3_matches_shipped(self, tmp_path):
        data = resources.files("vertexalg").joinpath("data/current3.json")
        loaded = load_model(str(data))
        shipped = shipped_model("current3")
        assert loaded.name == shipped.name
        assert set(loaded.alphabet.names()) == set(shipped.alphabet.names())
        al, bl = loaded.alphabet, shipped.alphabet
        got = loaded.bracket(al.symbol("e1"), al.symbol("e2"))
        want = shipped.bracket(bl.symbol("e1"), bl.symbol("e2"))
        assert sorted(str(t) for t in got.terms) == sorted(
            str(t) for t in want.terms
        )

    def test_load_derham2_matches_shipped(self):
        data = resources.files("vertexalg").joinpath("data/derham2_b2.json")
        loaded = load_model(str(data))
        shipped = shipped_model("derham2_b2")
        assert loaded.name == shipped.name
        assert set(loaded.alphabet.names()) == set(shipped.alphabet.names())

    def test_load_model_rejects_unknown_kind(self, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"kind": "Nope", "name": "x"}))
        with pytest.raises(ValueError, match="kind"):
            load_model(str(p))

    def test_make_model_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            make_model("Octonion")


class TestSampling:
    def test_sample_pool_small_degrees(self):
        model = shipped_model("diffpoly")
        pool = model.sample_symbols()
        assert model.alphabet.unit in pool
        names = {s.name for s in pool}
        assert "b" in names
        # the pool stays well under the degree cap
        assert "b6" not in names
