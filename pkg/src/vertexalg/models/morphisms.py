"""Structure-preserving symbol maps and their induced maps on trees.

A morphism sends each source symbol to an Element of target leaves; the
induced map sends x o_n y to image(x) o_n image(y).  Validation checks the
unit, bracket, product, and action laws on all symbol pairs; functor_laws
checks identity, composition, and that generator-family instances map to
generator-family instances of the images.
"""

import random
from fractions import Fraction

from ..generators import fam_a, fam_i, fam_s
from ..terms import Element, Leaf, Node
from .base import Model, ModelDegreeError

Q = Fraction


class Morphism:
    def __init__(self, name: str, source: Model, target: Model, table: dict):
        """table maps source symbol names to target Elements; the unit is
        implicit and must not appear as a key."""
        if source.alphabet.unit.name in table:
            raise ValueError("the unit maps to the unit; leave it out")
        self.name = name
        self.source = source
        self.target = target
        self.table = dict(table)

    def image_of_symbol(self, sym) -> Element:
        if sym.kind == "unit":
            return Element.unit(self.target.alphabet)
        try:
            return self.table[sym.name]
        except KeyError:
            raise KeyError(f"morphism {self.name} has no image for {sym.name!r}")

    def apply(self, x: Element) -> Element:
        out = Element.zero(self.target.alphabet)
        for t, c in x.terms.items():
            out = out + c * self._apply_term(t)
        return out

    def _apply_term(self, t) -> Element:
        if isinstance(t, Leaf):
            return self.image_of_symbol(t.symbol)
        return self._apply_term(t.left).o(t.index, self._apply_term(t.right))

    def compose(self, inner: "Morphism") -> "Morphism":
        """self after inner."""
        if inner.target is not self.source:
            raise ValueError("composition needs inner.target == self.source")
        table = {name: self.apply(img) for name, img in inner.table.items()}
        return Morphism(f"{self.name}*{inner.name}", inner.source, self.target, table)

    def __repr__(self):
        return f"Morphism({self.name}: {self.source.name} -> {self.target.name})"


def identity_morphism(model: Model) -> Morphism:
    table = {
        s.name: Element.of_term(model.alphabet, Leaf(s))
        for s in model.symbols()
        if s.kind != "unit"
    }
    return Morphism("id", model, model, table)


def validate_morphism(phi: Morphism) -> list:
    """Symbol-level law checks; degree-cap cases are skipped and counted."""
    src, tgt = phi.source, phi.target
    syms = src.symbols()
    lie = [s for s in syms if s.kind == "lie"]
    comm = [s for s in syms if s.kind in ("algebra", "unit")]
    checks = []

    def law(check_id, cases, lhs_fn, rhs_fn):
        ok, skipped, total, witness = True, 0, 0, None
        for args in cases:
            total += 1
            try:
                if lhs_fn(*args) != rhs_fn(*args):
                    ok = False
                    witness = ", ".join(s.name for s in args)
                    break
            except ModelDegreeError:
                skipped += 1
        checks.append(
            {
                "id": check_id,
                "status": "pass" if ok else "fail",
                "cases": total,
                "skipped": skipped,
                **({"witness": witness} if witness else {}),
            }
        )

    law(
        "unit",
        [(src.alphabet.unit,)],
        lambda s: phi.image_of_symbol(s),
        lambda s: Element.unit(tgt.alphabet),
    )
    law(
        "bracket",
        [(s, t) for s in syms for t in syms],
        lambda s, t: phi.apply(src.bracket(s, t)),
        lambda s, t: tgt.bracket_elem(
            phi.image_of_symbol(s), phi.image_of_symbol(t)
        ),
    )
    law(
        "product",
        [(a, b) for a in comm for b in comm],
        lambda a, b: phi.apply(src.mul(a, b)),
        lambda a, b: tgt.mul_elem(phi.image_of_symbol(a), phi.image_of_symbol(b)),
    )
    law(
        "action",
        [(a, g) for a in comm for g in lie],
        lambda a, g: phi.apply(src.act(a, g)),
        lambda a, g: tgt.act_elem(phi.image_of_symbol(a), phi.image_of_symbol(g)),
    )
    return checks


def random_element(model: Model, rng, max_length: int = 4) -> Element:
    """Random monomial over the model alphabet with the given leaf count."""
    al = model.alphabet
    syms = model.symbols()

    def rand_tree(length):
        if length == 1:
            return Element.of_term(al, Leaf(rng.choice(syms)))
        split = rng.randrange(1, length)
        return rand_tree(split).o(rng.randrange(-3, 3), rand_tree(length - split))

    return rand_tree(rng.randrange(1, max_length + 1))


def functor_laws(
    phi: Morphism, psi: Morphism, samples: int = 100, seed: int = 0
) -> dict:
    """Identity, composition, and generator-instance mapping on samples."""
    if not (phi.source is phi.target is psi.source is psi.target):
        raise ValueError("functor_laws expects endomorphisms of one model")
    model = phi.source
    rng = random.Random(seed)
    ident = identity_morphism(model)
    comp = phi.compose(psi)
    lie = [s for s in model.sample_symbols(("lie",))] or model.sample_symbols(
        ("algebra",)
    )
    comm = model.sample_symbols(("algebra", "unit"))
    counts = {"identity": 0, "composition": 0, "i": 0, "s": 0, "a": 0}
    skipped = 0
    failures = []
    for _ in range(samples):
        x = random_element(model, rng)
        if ident.apply(x) == x:
            counts["identity"] += 1
        else:
            failures.append(("identity", repr(x)))
        if comp.apply(x) == phi.apply(psi.apply(x)):
            counts["composition"] += 1
        else:
            failures.append(("composition", repr(x)))

        # generator instances map to generator instances of the images
        n = rng.randrange(-3, 3)
        if phi.apply(fam_i(x, n)) == fam_i(phi.apply(x), n):
            counts["i"] += 1
        else:
            failures.append(("i-family", repr(x)))
        s, t = rng.choice(lie), rng.choice(lie)
        s_e = Element.of_term(model.alphabet, Leaf(s))
        t_e = Element.of_term(model.alphabet, Leaf(t))
        try:
            if phi.apply(fam_s(s_e, t_e, model)) == fam_s(
                phi.apply(s_e), phi.apply(t_e), model
            ):
                counts["s"] += 1
            else:
                failures.append(("s-family", s.name + "," + t.name))
        except ModelDegreeError:
            skipped += 1
        a = rng.choice(comm)
        a_e = Element.of_term(model.alphabet, Leaf(a))
        try:
            if phi.apply(fam_a(a_e, s_e, model)) == fam_a(
                phi.apply(a_e), phi.apply(s_e), model
            ):
                counts["a"] += 1
            else:
                failures.append(("a-family", a.name + "," + s.name))
        except ModelDegreeError:
            skipped += 1
    return {
        "morphisms": [phi.name, psi.name],
        "model": model.name,
        "samples": samples,
        "counts": counts,
        "skipped": skipped,
        "failures": failures[:5],
        "status": "pass" if not failures else "fail",
    }


# shipped endomorphism pairs -----------------------------------------------------


def shipped_morphisms(model: Model) -> tuple:
    """Two nontrivial endomorphisms of diffpoly or weyl1."""
    from .factory import _name_exp, pow_name, vf_name

    al = model.alphabet

    def poly_image(k: int, vf: bool, scale_b: Fraction, shift: bool, scale_del=1):
        # image of b^k (or b^k del) under b -> scale_b*b + (shift ? 1 : 0)
        out = Element.zero(al)
        base = Element.sym(al, pow_name(1), scale_b)
        if shift:
            base = base + Element.unit(al)
        img = Element.unit(al)
        for _ in range(k):
            prod = Element.zero(al)
            for t1, c1 in img.terms.items():
                for t2, c2 in base.terms.items():
                    prod = prod + (c1 * c2) * model.mul(t1.symbol, t2.symbol)
            img = prod
        if not vf:
            return img
        out = Element.zero(al)
        for t, c in img.terms.items():
            e = _name_exp(t.symbol.name)[0]
            out = out + Element.sym(al, vf_name(e), c * scale_del)
        return out

    if model.name == "diffpoly":
        doubling = {
            s.name: poly_image(_name_exp(s.name)[0], False, Q(2), False)
            for s in model.symbols(("algebra",))
        }
        shift = {
            s.name: poly_image(_name_exp(s.name)[0], False, Q(1), True)
            for s in model.symbols(("algebra",))
        }
        return (
            Morphism("double", model, model, doubling),
            Morphism("shift", model, model, shift),
        )
    if model.name == "weyl1":
        # b -> 2b, del -> del/2 and b -> b+1, del -> del
        scale_table, shift_table = {}, {}
        for s in model.symbols():
            if s.kind == "unit":
                continue
            k, vf = _name_exp(s.name)
            scale_table[s.name] = poly_image(k, vf, Q(2), False, Q(1, 2))
            shift_table[s.name] = poly_image(k, vf, Q(1), True, Q(1))
        return (
            Morphism("scale", model, model, scale_table),
            Morphism("shift", model, model, shift_table),
        )
    raise ValueError(f"no shipped morphisms for model {model.name!r}")
