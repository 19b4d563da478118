"""Coefficient models: symbol tables with bracket, product and action,
bilinear extensions, validation, commutative evaluation, module laws.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from ..generators import TruncationPolicy, fam_am, fam_qa, fam_s
from ..terms import Element, Leaf, Symbol, parity

Q = Fraction


class ModelDegreeError(ValueError):
    """A table result left the finite basis (degree cap)."""


@dataclass
class CommutativeSemantics:
    zero: callable
    value: callable  # Symbol -> V
    add: callable  # (V, V) -> V
    mul: callable  # (V, V) -> V
    diff: callable  # V -> V
    scale: callable  # (Fraction, V) -> V
    to_element: callable  # V -> Element
    is_zero: callable


class Model:
    """Alphabet plus symbol-level operation tables.

    bracket(s, t) is defined on all symbol pairs, product(a, b) on the
    commutative part, action(a, g) for commutative a on Lie g.  All three
    return Elements; bilinear extensions accept leaf combinations.
    """

    def __init__(
        self,
        name: str,
        alphabet,
        bracket,
        product,
        action,
        max_degree: int = 0,
        commutative: CommutativeSemantics = None,
        meta: dict = None,
    ):
        self.name = name
        self.alphabet = alphabet
        self._bracket = bracket
        self._product = product
        self._action = action
        self.max_degree = max_degree
        self.commutative = commutative
        self.meta = meta or {}
        self._cache = {}

    # symbol-level tables (memoized; tables are pure) --------------------

    def _memo(self, tag, s, t, fn):
        key = (tag, s.name, t.name)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = fn(s, t)
        return hit

    def bracket(self, s: Symbol, t: Symbol) -> Element:
        return self._memo("b", s, t, self._bracket)

    def mul(self, a: Symbol, b: Symbol) -> Element:
        if a.kind == "unit":
            return Element.of_term(self.alphabet, Leaf(b))
        if b.kind == "unit":
            return Element.of_term(self.alphabet, Leaf(a))
        return self._memo("m", a, b, self._product)

    def act(self, a: Symbol, s: Symbol) -> Element:
        if s.kind in ("algebra", "unit"):
            return self.mul(a, s)
        if a.kind == "unit":
            return Element.of_term(self.alphabet, Leaf(s))
        return self._memo("a", a, s, self._action)

    # bilinear extensions ----------------------------------------------

    def _bilinear(self, x: Element, y: Element, table) -> Element:
        out = Element.zero(self.alphabet)
        for t1, c1 in x.terms.items():
            for t2, c2 in y.terms.items():
                if not (isinstance(t1, Leaf) and isinstance(t2, Leaf)):
                    raise ValueError("model tables apply to leaf combinations")
                out = out + (c1 * c2) * table(t1.symbol, t2.symbol)
        return out

    def bracket_elem(self, x: Element, y: Element) -> Element:
        return self._bilinear(x, y, self.bracket)

    def mul_elem(self, x: Element, y: Element) -> Element:
        return self._bilinear(x, y, self.mul)

    def act_elem(self, x: Element, y: Element) -> Element:
        return self._bilinear(x, y, self.act)

    def symbols(self, kinds=None) -> list:
        out = []
        for name in self.alphabet.names():
            s = self.alphabet.symbol(name)
            if kinds is None or s.kind in kinds:
                out.append(s)
        return out

    def sample_symbols(self, kinds=None) -> list:
        """Like symbols(), but restricted to the low-degree pool when the
        model declares one, so degree caps rarely interrupt sampling."""
        pool = self.meta.get("sample_symbols")
        if pool is None:
            return self.symbols(kinds)
        out = [self.alphabet.symbol(n) for n in pool]
        out.append(self.alphabet.unit)
        if kinds is not None:
            out = [s for s in out if s.kind in kinds]
        return out

    # commutative semantics --------------------------------------------

    def evaluate_commutative(self, x: Element) -> Element:
        if self.commutative is None:
            raise ValueError(f"model {self.name} has no commutative semantics")
        cs = self.commutative
        total = cs.zero()
        for t, c in x.terms.items():
            total = cs.add(total, cs.scale(c, self._comm_term(t, cs)))
        return cs.to_element(total)

    def _comm_term(self, t, cs):
        if isinstance(t, Leaf):
            return cs.value(t.symbol)
        n = t.index
        if n >= 0:
            return cs.zero()
        k = -1 - n
        left = self._comm_term(t.left, cs)
        for _ in range(k):
            left = cs.diff(left)
        fact = 1
        for i in range(2, k + 1):
            fact *= i
        left = cs.scale(Q(1, fact), left)
        return cs.mul(left, self._comm_term(t.right, cs))


def evaluate(x: Element, model: Model, semantics: str = "commutative", **kw):
    if semantics == "commutative":
        return model.evaluate_commutative(x)
    if semantics == "reduction":
        from ..rewrite import RuleSet, reduce_element

        policy = kw.get("policy") or TruncationPolicy()
        rules = kw.get("rules") or RuleSet.stock(model, policy)
        budget = kw.get("budget", 10000)
        return reduce_element(x, rules, budget=budget).result
    raise ValueError(f"unknown semantics {semantics!r}")


# validation ----------------------------------------------------------------


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


def validate_model(model: Model, pair_cap: int = None, case_cap: int = None) -> list:
    """Exhaustive symbol-level law checks; cap-exceeding cases are skipped
    and counted.  case_cap, when set, stride-samples each check's case list
    down to that many (large alphabets).  Returns {id, status, ...} dicts."""
    syms = model.symbols()
    if pair_cap is not None:
        syms = syms[:pair_cap]
    lie = [s for s in syms if s.kind == "lie"]
    comm = [s for s in syms if s.kind in ("algebra", "unit")]
    checks = []

    def run(check_id, fn):
        ok, skipped, total, witness = True, 0, 0, None
        cases = fn.cases()
        if case_cap is not None and len(cases) > case_cap:
            stride = len(cases) // case_cap + 1
            cases = cases[::stride]
        for args in cases:
            total += 1
            try:
                if not fn(*args):
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

    def pairs(xs, ys):
        return [(a, b) for a in xs for b in ys]

    def triples(xs, ys, zs):
        return [(a, b, c) for a in xs for b in ys for c in zs]

    def bracket_antisym(s, t):
        return model.bracket(s, t) == -_sign(s.parity * t.parity) * model.bracket(t, s)

    bracket_antisym.cases = lambda: pairs(syms, syms)

    def product_comm(a, b):
        return model.mul(a, b) == _sign(a.parity * b.parity) * model.mul(b, a)

    product_comm.cases = lambda: pairs(comm, comm)

    def jacobi(s, t, u):
        lhs = model.bracket_elem(
            Element.of_term(model.alphabet, Leaf(s)), model.bracket(t, u)
        )
        rhs = model.bracket_elem(
            model.bracket(s, t), Element.of_term(model.alphabet, Leaf(u))
        ) + _sign(s.parity * t.parity) * model.bracket_elem(
            Element.of_term(model.alphabet, Leaf(t)), model.bracket(s, u)
        )
        return lhs == rhs

    jacobi.cases = lambda: triples(syms, syms, syms)

    def compat(g, a, x):
        # bracket is a superderivation over the action/product
        lhs = model.bracket_elem(
            Element.of_term(model.alphabet, Leaf(g)), model.act(a, x)
        )
        rhs = model.act_elem(
            model.bracket(g, a), Element.of_term(model.alphabet, Leaf(x))
        ) + _sign(g.parity * a.parity) * model.act_elem(
            Element.of_term(model.alphabet, Leaf(a)), model.bracket(g, x)
        )
        return lhs == rhs

    compat.cases = lambda: triples(lie, comm, syms)

    def action_assoc(a, b, x):
        lhs = model.act_elem(
            model.mul(a, b), Element.of_term(model.alphabet, Leaf(x))
        )
        rhs = model.act_elem(
            Element.of_term(model.alphabet, Leaf(a)), model.act(b, x)
        )
        return lhs == rhs

    action_assoc.cases = lambda: triples(comm, comm, syms)

    def unit_laws(x):
        one = model.alphabet.unit
        return model.act(one, x) == Element.of_term(model.alphabet, Leaf(x))

    unit_laws.cases = lambda: [(s,) for s in syms]

    run("bracket-antisymmetry", bracket_antisym)
    run("product-commutativity", product_comm)
    run("jacobi", jacobi)
    run("bracket-derivation-compat", compat)
    run("action-associativity", action_assoc)
    run("unit-action", unit_laws)
    return checks


# module laws ----------------------------------------------------------------


def check_module_laws(
    model: Model,
    policy: TruncationPolicy = None,
    samples: int = 100,
    seed: int = 0,
) -> dict:
    """Both module laws, two ways per law.

    Leaf samples are closed by the rewrite rules alone; compound samples are
    certified by an exact generator-combination identity.
    """
    from ..rewrite import RuleSet, reduce_element

    policy = policy or TruncationPolicy(default_locality=3)
    rng = random.Random(seed)
    rules = RuleSet.stock(model, policy)
    al = model.alphabet
    lie = [s for s in model.sample_symbols(("lie",))] or model.sample_symbols(
        ("algebra",)
    )
    comm = model.sample_symbols(("algebra", "unit"))
    everything = model.sample_symbols()

    def leaf(sym):
        return Element.of_term(al, Leaf(sym))

    def rand_monomial():
        kind = rng.randrange(3)
        if kind == 0:
            return leaf(rng.choice(everything))
        a = leaf(rng.choice(everything))
        b = leaf(rng.choice(everything))
        node = a.o(rng.randrange(-3, 2), b)
        if kind == 1:
            return node
        return node.o(rng.randrange(-3, 2), leaf(rng.choice(everything)))

    def koszul(s, t):
        return _sign(s.parity * t.parity)

    law1_reduced = law1_exact = law2_reduced = law2_exact = skipped = 0
    failures = []
    for _ in range(samples):
        s, t = rng.choice(lie), rng.choice(lie)
        a, b = rng.choice(comm), rng.choice(comm)
        x_leaf = leaf(rng.choice(everything))
        x_cmp = rand_monomial()

        # law 1, leaf closure: [s,t]_0 x = s_0(t_0 x) - koszul t_0(s_0 x)
        try:
            lhs = model.bracket(s, t).o(0, x_leaf)
            rhs = leaf(s).o(0, leaf(t).o(0, x_leaf)) - koszul(s, t) * leaf(t).o(
                0, leaf(s).o(0, x_leaf)
            )
            report = reduce_element(lhs - rhs, rules, budget=10000)
            if report.status == "normal-form" and report.result.is_zero():
                law1_reduced += 1
            else:
                failures.append(("law1-reduction", s.name, t.name))

            # law 1, exact certificate on a compound argument
            diff = (
                model.bracket(s, t).o(0, x_cmp)
                - leaf(s).o(0, leaf(t).o(0, x_cmp))
                + koszul(s, t) * leaf(t).o(0, leaf(s).o(0, x_cmp))
            )
            cert = fam_qa(leaf(s), leaf(t), x_cmp, 0, 0, policy) - fam_s(
                leaf(s), leaf(t), model
            ).o(0, x_cmp)
            if diff == cert:
                law1_exact += 1
            else:
                failures.append(("law1-certificate", s.name, t.name))
        except ModelDegreeError:
            skipped += 1

        # law 2, leaf closure: (ab)_{-1} x = a_{-1}(b_{-1} x)
        try:
            ab = model.mul(a, b)
        except ModelDegreeError:
            ab = None
            skipped += 1
        if ab is not None:
            try:
                lhs2 = ab.o(-1, x_leaf)
                rhs2 = leaf(a).o(-1, leaf(b).o(-1, x_leaf))
                report2 = reduce_element(lhs2 - rhs2, rules, budget=10000)
                if report2.status == "normal-form" and report2.result.is_zero():
                    law2_reduced += 1
                else:
                    failures.append(("law2-reduction", a.name, b.name))

                # law 2, exact certificate
                diff2 = ab.o(-1, x_cmp) - leaf(a).o(-1, leaf(b).o(-1, x_cmp))
                cert2 = fam_am(leaf(a), leaf(b), x_cmp, model)
                if diff2 == cert2:
                    law2_exact += 1
                else:
                    failures.append(("law2-certificate", a.name, b.name))
            except ModelDegreeError:
                skipped += 1

    return {
        "model": model.name,
        "samples": samples,
        "law1_reduced": law1_reduced,
        "law1_exact": law1_exact,
        "law2_reduced": law2_reduced,
        "law2_exact": law2_exact,
        "skipped": skipped,
        "failures": failures[:5],
        "status": "pass" if not failures else "fail",
    }
