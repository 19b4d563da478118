"""Ideal generator families and certified truncation.

Infinite-tail families (qc, qa) are built up to a finite bound K together
with a certificate that every dropped summand contains a leaf-pair product
at or past its locality threshold, so dropping it agrees with truncate().
"""

from dataclasses import dataclass
from fractions import Fraction

from .terms import Element, Leaf, binom, parity

Q = Fraction


class CertificationError(ValueError):
    pass


def _pair_key(u: str, v: str) -> tuple:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class TruncationPolicy:
    """Locality assignments plus the default tail bound (level).

    `overrides` holds unordered-pair localities ((name, name, N), ...);
    `exempt` lists (name, name, n) leaf-pair products that truncation must
    keep alive even past the locality threshold (punctured locality).
    """

    default_locality: int = 1
    overrides: tuple = ()
    level: int = 8
    exempt: frozenset = frozenset()

    def __post_init__(self):
        table = {}
        for u, v, loc in self.overrides:
            table[_pair_key(u, v)] = int(loc)
        object.__setattr__(self, "_table", table)
        punct = set()
        for u, v, n in self.exempt:
            punct.add(_pair_key(u, v) + (int(n),))
        object.__setattr__(self, "_punct", frozenset(punct))

    def locality(self, u, v) -> int:
        u = u.name if not isinstance(u, str) else u
        v = v.name if not isinstance(v, str) else v
        return self._table.get(_pair_key(u, v), self.default_locality)

    def is_exempt(self, u, v, n: int) -> bool:
        u = u.name if not isinstance(u, str) else u
        v = v.name if not isinstance(v, str) else v
        return _pair_key(u, v) + (n,) in self._punct

    def is_dead(self, u, v, n: int) -> bool:
        return n >= self.locality(u, v) and not self.is_exempt(u, v, n)

    def exempt_indices(self, u, v) -> list:
        u = u.name if not isinstance(u, str) else u
        v = v.name if not isinstance(v, str) else v
        key = _pair_key(u, v)
        return sorted(n for (a, b, n) in self._punct if (a, b) == key)


def _term_is_dead(t, policy: TruncationPolicy) -> bool:
    if isinstance(t, Leaf):
        return False
    if isinstance(t.left, Leaf) and isinstance(t.right, Leaf):
        if policy.is_dead(t.left.symbol, t.right.symbol, t.index):
            return True
        return False
    return _term_is_dead(t.left, policy) or _term_is_dead(t.right, policy)


def truncate(x: Element, policy: TruncationPolicy) -> Element:
    kept = {t: c for t, c in x.terms.items() if not _term_is_dead(t, policy)}
    return Element(x.alphabet, kept)


def _parity_of(x: Element, what: str) -> int:
    p = parity(x)
    if p is None:
        raise ValueError(f"{what} is parity-inhomogeneous")
    return p


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _leaf_symbols(x: Element):
    """Leaf symbols of x if every monomial is a leaf, else None."""
    syms = []
    for t in x.terms:
        if not isinstance(t, Leaf):
            return None
        syms.append(t.symbol)
    return syms


def _tail_bound_for_pairs(pairs, offset: int, policy: TruncationPolicy) -> int:
    """Smallest K such that for every (u, v) the product u o_{offset+k} v is
    truncation-dead for all k > K."""
    need = 0
    for u, v in pairs:
        need = max(need, policy.locality(u, v) - offset - 1)
        for n in policy.exempt_indices(u, v):
            need = max(need, n - offset)
    return need


def _certify(pairs, offset: int, K: int, policy: TruncationPolicy, what: str):
    needed = _tail_bound_for_pairs(pairs, offset, policy)
    if K < needed:
        raise CertificationError(
            f"{what}: bound K={K} keeps alive dropped terms; need K>={needed}"
        )
    return needed


# family builders ------------------------------------------------------------

def fam_i(x: Element, n: int) -> Element:
    unit = Element.unit(x.alphabet)
    out = unit.o(n, x)
    if n == -1:
        out = out - x
    return out


def fam_c(u: Element, v: Element, n: int, policy: TruncationPolicy) -> Element:
    us, vs = _leaf_symbols(u), _leaf_symbols(v)
    if us is None or vs is None:
        raise ValueError("c-family arguments must be leaf combinations")
    for a in us:
        for b in vs:
            if not policy.is_dead(a, b, n):
                raise ValueError(
                    f"c-family needs a dead pair: {a.name} o_{n} {b.name} "
                    f"is below locality {policy.locality(a, b)} or exempt"
                )
    return u.o(n, v)


def fam_d(x: Element, y: Element, n: int) -> Element:
    return x.o(n, y).D() - x.D().o(n, y) - x.o(n, y.D())


def fam_e(x: Element, y: Element, n: int) -> Element:
    return x.D().o(n, y) + n * x.o(n - 1, y)


def fam_f(x: Element, y: Element, n: int) -> Element:
    return fam_d(x, y, n) + fam_e(x, y, n)


def fam_qc(
    x: Element,
    y: Element,
    n: int,
    policy: TruncationPolicy,
    K: int = None,
    certify: bool = True,
) -> Element:
    sign = _sign(_parity_of(x, "qc arg x") * _parity_of(y, "qc arg y"))
    if K is None or certify:
        ys, xs = _leaf_symbols(y), _leaf_symbols(x)
        if ys is None or xs is None:
            if certify:
                raise CertificationError(
                    "qc tail over compound arguments has no leaf-pair certificate"
                )
            needed = None
        else:
            pairs = [(a, b) for a in ys for b in xs]
            needed = _tail_bound_for_pairs(pairs, n, policy)
        if K is None:
            if needed is None:
                raise CertificationError("qc needs an explicit bound K here")
            K = max(policy.level, needed)
        elif needed is not None and K < needed:
            raise CertificationError(
                f"qc: bound K={K} keeps alive dropped terms; need K>={needed}"
            )
    out = x.o(n, y)
    for k in range(K + 1):
        coeff = Q(sign * _sign(n + k), _factorial(k))
        out = out + coeff * y.o(n + k, x).D_pow(k)
    return out


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def fam_qa(
    x: Element,
    y: Element,
    z: Element,
    m: int,
    n: int,
    policy: TruncationPolicy,
    K: int = None,
    certify: bool = True,
) -> Element:
    sign_xy = _sign(m + _parity_of(x, "qa arg x") * _parity_of(y, "qa arg y"))
    if m >= 0:
        needed = m  # binomial support is finite
    elif certify or K is None:
        ys, zs = _leaf_symbols(y), _leaf_symbols(z)
        xs = _leaf_symbols(x)
        if ys is None or zs is None or xs is None:
            if certify:
                raise CertificationError(
                    "qa tail over compound arguments has no leaf-pair certificate"
                )
            needed = None
        else:
            k1 = _tail_bound_for_pairs(
                [(a, b) for a in ys for b in zs], n, policy
            )
            k2 = _tail_bound_for_pairs(
                [(a, b) for a in xs for b in zs], 0, policy
            )
            needed = max(k1, k2)
    else:
        needed = None
    if K is None:
        if needed is None:
            raise CertificationError("qa needs an explicit bound K here")
        K = max(policy.level, needed)
    elif certify and needed is not None and K < needed:
        raise CertificationError(
            f"qa: bound K={K} keeps alive dropped terms; need K>={needed}"
        )
    out = x.o(m, y).o(n, z)
    for k in range(K + 1):
        c = binom(m, k) * _sign(k)
        if c == 0:
            continue
        out = out - c * x.o(m - k, y.o(n + k, z))
        out = out + c * sign_xy * y.o(m + n - k, x.o(k, z))
    return out


def fam_s(s: Element, t: Element, model) -> Element:
    return s.o(0, t) - model.bracket_elem(s, t)


def fam_a(a: Element, s: Element, model) -> Element:
    return a.o(-1, s) - model.act_elem(a, s)


def fam_am(a: Element, b: Element, x: Element, model) -> Element:
    return model.mul_elem(a, b).o(-1, x) - a.o(-1, b.o(-1, x))


# dispatch -------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    args: tuple
    indices: tuple = ()
    bound: int = None


@dataclass(frozen=True)
class BuildResult:
    element: Element
    family: str
    indices: tuple
    bound: int = None


FAMILY_IDS = ("i", "c", "d", "e", "qc", "qa", "s", "a", "am", "k")


def build_generator(
    spec: GeneratorSpec,
    policy: TruncationPolicy,
    model=None,
    context=None,
    certify: bool = True,
) -> BuildResult:
    fam, args, idx = spec.family, spec.args, spec.indices
    if fam == "i":
        (x,) = args
        (n,) = idx
        el = fam_i(x, n)
    elif fam == "c":
        u, v = args
        (n,) = idx
        el = fam_c(u, v, n, policy)
    elif fam == "d":
        x, y = args
        (n,) = idx
        el = fam_d(x, y, n)
    elif fam == "e":
        x, y = args
        (n,) = idx
        el = fam_e(x, y, n)
    elif fam == "qc":
        x, y = args
        (n,) = idx
        el = fam_qc(x, y, n, policy, K=spec.bound, certify=certify)
    elif fam == "qa":
        x, y, z = args
        m, n = idx
        el = fam_qa(x, y, z, m, n, policy, K=spec.bound, certify=certify)
    elif fam == "s":
        s, t = args
        el = fam_s(s, t, _need(model, "s"))
    elif fam == "a":
        a, s = args
        el = fam_a(a, s, _need(model, "a"))
    elif fam == "am":
        a, b, x = args
        el = fam_am(a, b, x, _need(model, "am"))
    elif fam == "k":
        from .sheaf import k_generator

        (x,) = args
        if context is None:
            raise ValueError("k-family needs a sheaf context")
        el = k_generator(x, context)
    else:
        raise ValueError(f"unknown family {fam!r}")
    return BuildResult(el, fam, idx, spec.bound)


def _need(model, fam):
    if model is None:
        raise ValueError(f"{fam}-family needs a model")
    return model
