"""Free integer-indexed nonassociative algebra with exact coefficients.

Elements are Fraction-linear combinations of binary trees.  A leaf is a
named symbol; an inner node o_n(x, y) is the n-th product of its children.
The formal derivative is Dx := o_{-2}(x, 1) where 1 is the unit leaf.
Everything is immutable; operations build new objects.
"""

from dataclasses import dataclass
from fractions import Fraction

from .intervals import SupportSet

Q = Fraction


def binom(m: int, k: int) -> int:
    """Binomial coefficient for arbitrary integer m, k (0 for k < 0)."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= m - i
    val = Q(num, 1)
    for i in range(2, k + 1):
        val /= i
    assert val.denominator == 1
    return val.numerator


def falling(p: int, i: int) -> int:
    """Falling factorial p(p-1)...(p-i+1), i factors; 1 for i = 0."""
    out = 1
    for j in range(i):
        out *= p - j
    return out


@dataclass(frozen=True)
class Symbol:
    name: str
    parity: int = 0
    degree: Fraction = Q(0)
    kind: str = "generic"  # unit | algebra | lie | generic
    support: SupportSet = None

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")
        if self.kind not in ("unit", "algebra", "lie", "generic"):
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        object.__setattr__(self, "degree", Q(self.degree))


@dataclass(frozen=True)
class Leaf:
    symbol: Symbol


@dataclass(frozen=True)
class Node:
    index: int
    left: object
    right: object


Term = (Leaf, Node)


def sort_key(t):
    if isinstance(t, Leaf):
        return (0, t.symbol.name)
    return (1, t.index, sort_key(t.left), sort_key(t.right))


def leaves(t):
    if isinstance(t, Leaf):
        yield t.symbol
    else:
        yield from leaves(t.left)
        yield from leaves(t.right)


def term_length(t) -> int:
    return sum(1 for _ in leaves(t))


def term_parity(t) -> int:
    return sum(s.parity for s in leaves(t)) % 2


def term_degree(t) -> Fraction:
    # |o_n(x, y)| = |x| + (-n - 1) + |y|
    if isinstance(t, Leaf):
        return t.symbol.degree
    return term_degree(t.left) + Q(-t.index - 1) + term_degree(t.right)


def shape_key(t) -> str:
    """Canonical string of the product shape including indices."""
    if isinstance(t, Leaf):
        return "*"
    return f"({shape_key(t.left)}o{t.index}{shape_key(t.right)})"


def bare_shape(t) -> str:
    """Product shape with indices erased."""
    if isinstance(t, Leaf):
        return "*"
    return f"({bare_shape(t.left)}{bare_shape(t.right)})"


class Alphabet:
    """Named symbol table with exactly one unit symbol.

    Append-only: registering the same symbol twice is a no-op, a clashing
    redefinition is an error.  Safe to share between threads as a cache.
    """

    def __init__(self, symbols=(), unit_name: str = "1"):
        self._by_name = {}
        self.unit = Symbol(unit_name, 0, Q(0), "unit")
        self._by_name[unit_name] = self.unit
        for s in symbols:
            self.add(s)

    def add(self, sym: Symbol) -> Symbol:
        old = self._by_name.get(sym.name)
        if old is None:
            if sym.kind == "unit":
                raise ValueError("alphabet already has a unit symbol")
            self._by_name[sym.name] = sym
            return sym
        if old != sym:
            raise ValueError(f"symbol {sym.name!r} redefined inconsistently")
        return old

    def symbol(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown symbol {name!r}") from None

    def has(self, name: str) -> bool:
        return name in self._by_name

    def names(self):
        return list(self._by_name)


def _as_coeff(c) -> Fraction:
    if isinstance(c, float):
        raise TypeError("float coefficients are not allowed; use Fraction")
    return Q(c)


class Element:
    """Exact linear combination of trees over a fixed alphabet."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms=None):
        self.alphabet = alphabet
        clean = {}
        if terms:
            for t, c in terms.items():
                c = _as_coeff(c)
                if c != 0:
                    clean[t] = c
        self.terms = clean

    # construction helpers

    @staticmethod
    def zero(alphabet: Alphabet) -> "Element":
        return Element(alphabet)

    @staticmethod
    def of_term(alphabet: Alphabet, t, coeff=1) -> "Element":
        return Element(alphabet, {t: _as_coeff(coeff)})

    @staticmethod
    def sym(alphabet: Alphabet, name: str, coeff=1) -> "Element":
        return Element.of_term(alphabet, Leaf(alphabet.symbol(name)), coeff)

    @staticmethod
    def unit(alphabet: Alphabet, coeff=1) -> "Element":
        return Element.of_term(alphabet, Leaf(alphabet.unit), coeff)

    # ring-ish operations

    def _check(self, other: "Element"):
        if self.alphabet is not other.alphabet:
            raise ValueError("elements over different alphabets")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, Q(0)) + c
        return Element(self.alphabet, out)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.alphabet, {t: -c for t, c in self.terms.items()})

    def __mul__(self, c) -> "Element":
        c = _as_coeff(c)
        return Element(self.alphabet, {t: v * c for t, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Element":
        return self * (Q(1) / _as_coeff(c))

    def o(self, n: int, other: "Element") -> "Element":
        """n-th product, extended bilinearly."""
        self._check(other)
        out = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                t = Node(n, t1, t2)
                out[t] = out.get(t, Q(0)) + c1 * c2
        return Element(self.alphabet, out)

    def D(self) -> "Element":
        return self.o(-2, Element.unit(self.alphabet))

    def D_pow(self, k: int, divide_factorial: bool = False) -> "Element":
        if k < 0:
            raise ValueError("negative derivative power")
        out = self
        fact = 1
        for i in range(k):
            out = out.D()
            fact *= i + 1
        if divide_factorial:
            out = out / fact
        return out

    # predicates and views

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.alphabet is other.alphabet
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda tc: sort_key(tc[0]))

    def coeff(self, t) -> Fraction:
        return self.terms.get(t, Q(0))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        from .parsing import to_text

        return f"<Element {to_text(self)}>"


def product(x: Element, n: int, y: Element) -> Element:
    return x.o(n, y)


def derivation_D(x: Element) -> Element:
    return x.D()


def D_power(x: Element, k: int, divide_factorial: bool = False) -> Element:
    return x.D_pow(k, divide_factorial)


def canonicalize(x: Element) -> Element:
    # maps are canonical by construction; kept for API symmetry
    return Element(x.alphabet, dict(x.terms))


def parity(x: Element):
    """Common parity of all monomials, or None if mixed (0 for zero)."""
    seen = {term_parity(t) for t in x.terms}
    if not seen:
        return 0
    if len(seen) > 1:
        return None
    return seen.pop()


@dataclass(frozen=True)
class GradeReport:
    degree: object  # Fraction, or None when inhomogeneous
    lengths: tuple  # multiset of leaf counts, sorted
    shape_keys: tuple  # multiset of per-monomial shape keys, sorted


def grade(x: Element) -> GradeReport:
    degrees = {term_degree(t) for t in x.terms}
    degree = degrees.pop() if len(degrees) == 1 else None
    lengths = tuple(sorted(term_length(t) for t in x.terms))
    shapes = tuple(sorted(shape_key(t) for t in x.terms))
    return GradeReport(degree, lengths, shapes)


def is_homogeneous(x: Element) -> bool:
    return grade(x).degree is not None or x.is_zero()


def is_monomial(x: Element) -> bool:
    """True iff x is a scalar multiple of a single factorizable tensor.

    All trees must share one product-shape key and the coefficient tensor
    over the leaf slots must have rank one (checked by pivot division).
    """
    if not x.terms:
        return True
    shapes = {shape_key(t) for t in x.terms}
    if len(shapes) > 1:
        return False
    entries = {tuple(s.name for s in leaves(t)): c for t, c in x.terms.items()}
    nslots = len(next(iter(entries)))
    pivot = min(entries)
    cp = entries[pivot]
    slot_ratio = [{} for _ in range(nslots)]
    for tup in entries:
        for k in range(nslots):
            hybrid = pivot[:k] + (tup[k],) + pivot[k + 1 :]
            if hybrid not in entries:
                return False
            slot_ratio[k][tup[k]] = entries[hybrid] / cp
    for tup, c in entries.items():
        acc = cp
        for k in range(nslots):
            acc *= slot_ratio[k][tup[k]]
        if acc != c:
            return False
    return True
