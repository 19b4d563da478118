"""Bridge identities tying the generator families to one another.

`borcherds_bridge` builds both sides of the equalities that let the family
presentation emulate the classical axioms: the e-as-sum bridge, the
index-lowering inductions for d, i, qc and qa, the n-symmetry of qc, and
the commutator decomposition.  Every infinite tail is cut at one shared
bound K on both sides, so closed-form identities come back equal as raw
Elements and tail-carrying ones agree after truncation once K clears the
locality thresholds.

Also here: the derived-locality machinery that extends pair locality to
longer products (binomial rank matrix, memoized bound table, and the tail
classification certificate for negative product indices).
"""

from fractions import Fraction
from math import factorial
from typing import Mapping

from .generators import (
    CertificationError,
    TruncationPolicy,
    fam_d,
    fam_e,
    fam_f,
    fam_i,
    fam_qa,
    fam_qc,
    truncate,
)
from .models.polys import column_rank
from .terms import Element, Leaf, Node, binom, parity

Q = Fraction


def _sg(e: int) -> int:
    return -1 if e % 2 else 1


def _par(x: Element, what: str) -> int:
    p = parity(x)
    if p is None:
        raise ValueError(f"{what} is parity-inhomogeneous")
    return p


def _koszul(x: Element, y: Element) -> int:
    return _sg(_par(x, "bridge arg") * _par(y, "bridge arg"))


def _ff(p: int, i: int) -> int:
    """Falling factorial p(p-1)...(p-i+1); 1 at i = 0."""
    out = 1
    for t in range(i):
        out *= p - t
    return out


def _shared_bound(policy: TruncationPolicy, *indices: int) -> int:
    """Series bound K at which every surviving boundary term is dead.

    The top-of-series terms carry inner indices like n + K, so deadness
    needs K >= locality + |index|; below that the two sides of an
    induction identity stop their telescopes at different places.
    """
    need = 2 + max((abs(i) for i in indices), default=0)
    if policy is None:
        return max(4, need)
    return max(policy.level, policy.default_locality + need)


# identity builders -----------------------------------------------------------
#
# Each returns an untruncated (lhs, rhs) pair at the shared bound K.  The
# sign conventions follow the qa/qc family builders, so even-parity
# arguments reproduce the classical displays verbatim.

def _eb(x: Element, y: Element, n: int, K: int):
    """e as a qa value plus i-family corrections; exact once K >= |n| - 1."""
    one = Element.unit(x.alphabet)
    lhs = fam_e(x, y, n)
    rhs = fam_qa(x, one, y, -2, n, None, K=K, certify=False)
    for k in range(K + 1):
        c = binom(-2, k) * _sg(k)  # = k + 1
        rhs = rhs + c * (
            x.o(-2 - k, fam_i(y, n + k)) - fam_i(x.o(k, y), -2 + n - k)
        )
    return lhs, rhs


def _di(x: Element, y: Element, n: int, K: int):
    """Closed form, K unused: lowers the d index by one."""
    lhs = n * fam_d(x, y, n - 1)
    rhs = (
        fam_e(x, y, n).D()
        - fam_d(x.D(), y, n)
        - fam_e(x.D(), y, n)
        - fam_e(x, y.D(), n)
    )
    return lhs, rhs


def _ii(x: Element, n: int, reading: int, K: int):
    """Closed form, K unused: lowers the i index by one.

    The source display applies i to two arguments, which family i does not
    take; `reading` selects which argument the display meant (2 = the
    element x, 1 = the unit).  Reading 2 makes the identity hold.
    """
    if reading not in (1, 2):
        raise ValueError("i-induction reading must be 1 or 2")
    one = Element.unit(x.alphabet)
    probe = x if reading == 2 else one
    lhs = n * fam_i(x, n - 1)
    rhs = fam_i(x.D(), n) - fam_i(probe, n).D() + fam_f(one, x, n)
    return lhs, rhs


def _qci(x: Element, y: Element, n: int, K: int):
    """Lowers the qc index; boundary terms die under truncation for
    K >= locality - n."""
    kosz = _koszul(x, y)
    lhs = n * fam_qc(x, y, n - 1, None, K=K, certify=False)
    rhs = -fam_qc(x.D(), y, n, None, K=K, certify=False) + fam_e(x, y, n)
    for k in range(K + 1):
        rhs = rhs - kosz * Q(_sg(n + k), factorial(k)) * fam_f(y, x, n + k).D_pow(k)
    return lhs, rhs


def _qami(x: Element, y: Element, z: Element, m: int, n: int, K: int):
    """Lowers the first qa index; exact for m >= 0 once K >= m, otherwise
    the residual tail is truncation-dead."""
    lhs = m * fam_qa(x, y, z, m - 1, n, None, K=K, certify=False)
    rhs = -fam_qa(x.D(), y, z, m, n, None, K=K, certify=False) + fam_e(
        x, y, m
    ).o(n, z)
    sp = _sg(m + _par(x, "qa arg x") * _par(y, "qa arg y"))
    for k in range(K + 1):
        c = binom(m, k) * _sg(k)
        if c == 0:
            continue
        rhs = rhs - c * (
            fam_e(x, y.o(n + k, z), m - k)
            - sp * y.o(m + n - k, fam_e(x, z, k))
        )
    return lhs, rhs


def _qani(x: Element, y: Element, z: Element, m: int, n: int, K: int):
    """Lowers the second qa index; exact for m >= 0, truncated for m < 0."""
    lhs = n * fam_qa(x, y, z, m, n - 1, None, K=K, certify=False)
    rhs = (
        -fam_qa(x, y, z, m, n, None, K=K, certify=False).D()
        + fam_qa(x, y, z.D(), m, n, None, K=K, certify=False)
        + fam_f(x.o(m, y), z, n)
    )
    sp = _sg(m + _par(x, "qa arg x") * _par(y, "qa arg y"))
    for k in range(K + 1):
        c = binom(m, k) * _sg(k)
        if c == 0:
            continue
        rhs = rhs - c * (
            fam_f(x, y.o(n + k, z), m - k) - sp * fam_f(y, x.o(k, z), m + n - k)
        )
        rhs = rhs - c * (
            x.o(m - k, fam_f(y, z, n + k)) - sp * y.o(m + n - k, fam_f(x, z, k))
        )
    return lhs, rhs


def _qcs(x: Element, y: Element, n: int, K: int):
    """n-symmetry: y o_n x recovered from the qc generator minus its tail.
    Definitionally exact at any shared K."""
    lhs = y.o(n, x)
    rhs = fam_qc(y, x, n, None, K=K, certify=False)
    sp = _koszul(x, y)
    for k in range(K + 1):
        rhs = rhs - sp * Q(_sg(n + k), factorial(k)) * x.o(n + k, y).D_pow(k)
    return lhs, rhs


def _comm(x: Element, y: Element, z: Element, m: int, n: int, K: int):
    """Commutator decomposition in three index regimes.

    The left side is [x_m, y_n]z minus the binomial sum of products; the
    right side exhibits it inside the ideal.  m >= 0 is closed-form; the
    m = -1 regimes carry tails that die under truncation.
    """
    kosz = _koszul(x, y)
    lhs = x.o(m, y.o(n, z)) - kosz * y.o(n, x.o(m, z))
    rhs = Element.zero(x.alphabet)
    if m >= 0:
        for k in range(m + 1):
            c = binom(m, k)
            lhs = lhs - c * x.o(k, y).o(m + n - k, z)
            rhs = rhs - c * fam_qa(x, y, z, k, m + n - k, None, K=K, certify=False)
        return lhs, rhs
    if m == -1 and n == -1:
        for k in range(K + 1):
            lhs = lhs - _sg(k) * x.o(k, y).o(-2 - k, z)
        rhs = (
            -fam_qa(x, y, z, -1, -1, None, K=K, certify=False)
            + kosz * fam_qa(y, x, z, -1, -1, None, K=K, certify=False)
            - kosz * fam_qc(y, x, -1, None, K=K, certify=False).o(-1, z)
        )
        for j in range(K + 1):
            for i in range(j + 1):
                c = Q(_sg(j + 1) * factorial(i), factorial(j + 1))
                rhs = rhs - c * fam_e(x.o(j, y).D_pow(j - i), z, -1 - i)
        return lhs, rhs
    if m == -1 and n >= 0:
        for k in range(K + 1):
            lhs = lhs - _sg(k) * x.o(k, y).o(n - 1 - k, z)
        for k in range(n + 1):
            ck = binom(n, k)
            rhs = rhs + kosz * ck * fam_qa(
                y, x, z, k, n - 1 - k, None, K=K, certify=False
            )
            rhs = rhs - kosz * ck * fam_qc(y, x, k, None, K=K, certify=False).o(
                n - 1 - k, z
            )
            for j in range(1, K + 1):
                for i in range(j):
                    c = Q(ck * _sg(k + j + i) * _ff(n - 1 - k, i), factorial(j))
                    rhs = rhs + c * fam_e(
                        x.o(k + j, y).D_pow(j - 1 - i), z, n - 1 - k - i
                    )
        return lhs, rhs
    raise ValueError("commutator decomposition covers m >= -1 only")


_SIGNATURES = {
    "e-bridge": ("x", "y", "n"),
    "d-induction": ("x", "y", "n"),
    "i-induction": ("x", "n", "reading"),
    "qc-induction": ("x", "y", "n"),
    "qa-m-induction": ("x", "y", "z", "m", "n"),
    "qa-n-induction": ("x", "y", "z", "m", "n"),
    "qc-symmetry": ("x", "y", "n"),
    "commutator": ("x", "y", "z", "m", "n"),
}

_BUILDERS = {
    "e-bridge": _eb,
    "d-induction": _di,
    "i-induction": _ii,
    "qc-induction": _qci,
    "qa-m-induction": _qami,
    "qa-n-induction": _qani,
    "qc-symmetry": _qcs,
    "commutator": _comm,
}

BRIDGE_IDS = tuple(_SIGNATURES)


def borcherds_bridge(identity_id, args, policy, K=None):
    """Build both sides of the named identity, truncated under `policy`.

    `args` is a mapping over the identity's slots (or a sequence in slot
    order): x, y, z for elements, m, n for indices, and `reading` for
    i-induction (defaults to 2, the reading that holds).  `K` overrides
    the shared series bound, which otherwise comes from the policy level
    and the index sizes.  Returns (lhs, rhs).
    """
    try:
        names = _SIGNATURES[identity_id]
    except KeyError:
        raise ValueError(f"unknown bridge identity {identity_id!r}") from None
    if isinstance(args, Mapping):
        got = dict(args)
    else:
        seq = tuple(args)
        if len(seq) > len(names):
            raise ValueError(f"{identity_id} takes at most {len(names)} args")
        got = dict(zip(names, seq))
    if identity_id == "i-induction":
        got.setdefault("reading", 2)
    missing = [nm for nm in names if nm not in got]
    if missing:
        raise ValueError(f"{identity_id} missing args: {', '.join(missing)}")
    extra = sorted(set(got) - set(names))
    if extra:
        raise ValueError(f"{identity_id} got unknown args: {', '.join(extra)}")
    if K is None:
        K = _shared_bound(policy, *(got[nm] for nm in names if nm in ("m", "n")))
    lhs, rhs = _BUILDERS[identity_id](K=K, **got)
    if policy is not None:
        lhs, rhs = truncate(lhs, policy), truncate(rhs, policy)
    return lhs, rhs


# derived locality ------------------------------------------------------------

def dong_matrix(M: int, m: int):
    """Rows j = 0..M of binomial coefficients (binom(m - j, k))_{k < M}.

    Row j is the coefficient vector of the commutator decomposition at
    indices (m - j, m - M + j); all rows share the total index 2m - M.
    """
    return [[Q(binom(m - j, k)) for k in range(M)] for j in range(M + 1)]


def dong_rank(M: int, m: int) -> int:
    return column_rank(dong_matrix(M, m))


def dong_row(x: Element, y: Element, z: Element, M: int, m: int, j: int):
    """Row j of the vanishing system: sum_k binom(m-j, k) (x_k y) o_{2m-M-k} z."""
    out = Element.zero(x.alphabet)
    for k in range(M):
        c = binom(m - j, k)
        if c:
            out = out + c * x.o(k, y).o(2 * m - M - k, z)
    return out


class DongTable:
    """Memoized derived-locality bounds over trees.

    Leaf pairs read the policy table.  A product u = x o_r y against v gets
    max(0, 3*M - r) where M is the largest pairwise bound among x, y, v;
    when both sides are products the smaller of the two decompositions
    wins, which keeps the table symmetric.
    """

    def __init__(self, policy: TruncationPolicy):
        self.policy = policy
        self._memo = {}

    def bound(self, u, v) -> int:
        key = (u, v)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(u, Leaf) and isinstance(v, Leaf):
            out = self.policy.locality(u.symbol, v.symbol)
        elif isinstance(u, Leaf):
            out = self.bound(v, u)
        elif isinstance(v, Leaf):
            out = self._via(u, v)
        else:
            out = min(self._via(u, v), self._via(v, u))
        self._memo[key] = out
        self._memo[(v, u)] = out
        return out

    def _via(self, u: Node, v) -> int:
        M = max(
            self.bound(u.left, u.right),
            self.bound(u.left, v),
            self.bound(u.right, v),
        )
        return max(0, 3 * M - u.index)


def _only_leaf(x: Element, what: str) -> Leaf:
    terms = list(x.terms)
    if len(terms) == 1 and isinstance(terms[0], Leaf):
        return terms[0]
    raise ValueError(f"{what} must be a single leaf")


def dong_tail_certificate(
    x: Element,
    y: Element,
    z: Element,
    r: int,
    n: int,
    policy: TruncationPolicy,
    K: int = None,
) -> dict:
    """Certify (x o_r y) o_n z for r < 0 at n at/above the derived bound.

    Expands through the qa generator at bound K and classifies every
    residual term: `dead` if its inner leaf pair is past locality, or
    `derived` if its outer index reaches the derived bound of its two
    factors (the regime the rank argument already covers).  Raises
    CertificationError if any term is neither.
    """
    if r >= 0:
        raise ValueError("tail certificate applies to r < 0 only")
    lx, ly, lz = (
        _only_leaf(x, "x"),
        _only_leaf(y, "y"),
        _only_leaf(z, "z"),
    )
    table = DongTable(policy)
    want = table.bound(Node(r, lx, ly), lz)
    if n < want:
        raise CertificationError(
            f"index n={n} is below the derived bound {want}"
        )
    if K is None:
        K = max(policy.level, want + abs(r) + 2)
    counts = {"generator": 1, "dead": 0, "derived": 0}
    for k in range(K + 1):
        for head, outer, inner in (
            (lx, r - k, Node(n + k, ly, lz)),
            (ly, r + n - k, Node(k, lx, lz)),
        ):
            if policy.is_dead(inner.left.symbol, inner.right.symbol, inner.index):
                counts["dead"] += 1
            elif outer >= table.bound(head, inner):
                counts["derived"] += 1
            else:
                raise CertificationError(
                    f"term at k={k} (outer index {outer}) is neither dead "
                    "nor at the derived bound"
                )
    return counts
