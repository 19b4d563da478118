"""Supports on a rational interval, section contexts, and the gluing check.

Symbols get a support tag: a window (where the section may be nonzero)
plus a list of bump factors, each a named function with a support set and
a plateau where it is identically 1.  Products propagate supports by the
closed-overlap rule supp(x o_n y) = cl(int supp x  cap  int supp y).

Two readings of "where does this element live" coexist:

  support           per-monomial recursive overlap rule, union over terms.
  semantic_support  groups monomials into classes that share a tree shape
                    and per-slot base sections, evaluates each class on
                    the open cells cut by all declared breakpoints, and
                    keeps the cells where the class polynomial in the
                    bump unknowns survives the declared partition
                    relations.  Cancellation between a section and its
                    bump-dressed copy is visible here and not above.

pi keeps leaves and the classes alive somewhere; k = id - pi spans the
kernel ideal used by the gluing argument.  glue assembles bump-weighted
restricted sections over a cover, and sheaf_axiom_check replays the
existence chain patch by patch, certifying each hop either by an empty
semantic support or by a unit reduction, then witnesses uniqueness.
"""

import json
from dataclasses import dataclass
from fractions import Fraction as Q

from .intervals import SupportSet, overlap_core
from .models.polys import PolyVars
from .rewrite import ReductionReport, RuleSet, reduce_element
from .terms import Alphabet, Element, Leaf, Node, Symbol, leaves


class SupportError(ValueError):
    pass


@dataclass(frozen=True)
class BumpDeclaration:
    name: str
    support: SupportSet
    plateau: SupportSet  # subset of support where the bump is exactly 1


@dataclass(frozen=True)
class TaggedInfo:
    base: str          # underlying section name; unit name for pure bumps
    bumps: tuple       # bump names dressing the section, sorted, with multiplicity
    window: SupportSet  # where this symbol may be nonzero


@dataclass(frozen=True)
class CoverPatch:
    name: str
    window: SupportSet   # the open set U^i, stored closed
    core: SupportSet     # the shrunk set T^i, cl(T^i) inside U^i
    sigma: str           # bump with support window and plateau core
    rho: str             # partition member with support core


class SheafContext:
    """Registry of tagged symbols over one closed universe.

    Declared sections and bumps get stable names; products of restriction
    and bump dressing mint derived symbols with canonical names, so the
    same section restricted along two different paths to the same window
    is the same Symbol and element equality stays exact.
    """

    def __init__(self, universe: SupportSet, alphabet: Alphabet = None):
        if universe.is_empty() or universe != universe.closure():
            raise SupportError("universe must be a nonempty closed set")
        self.universe = universe
        self.alphabet = alphabet if alphabet is not None else Alphabet()
        self._tags = {}        # symbol name -> TaggedInfo
        self._bumps = {}       # bump name -> BumpDeclaration
        self._partitions = []  # tuples of bump names summing to 1 on the universe

    # -- declarations ------------------------------------------------------

    def declare_section(self, name: str, support: SupportSet, parity: int = 0,
                        degree=0, kind: str = "algebra") -> Symbol:
        if not support.subset_of(self.universe):
            raise SupportError(f"support of {name} leaves the universe")
        support = support.closure()
        sym = Symbol(name, parity, Q(degree), kind, support)
        self.alphabet.add(sym)
        self._tags[name] = TaggedInfo(name, (), support)
        return sym

    def declare_bump(self, name: str, support: SupportSet,
                     plateau: SupportSet = None) -> Symbol:
        plateau = plateau if plateau is not None else SupportSet.empty()
        if not support.subset_of(self.universe):
            raise SupportError(f"support of bump {name} leaves the universe")
        if not plateau.subset_of(support):
            raise SupportError(f"plateau of bump {name} leaves its support")
        support = support.closure()
        self._bumps[name] = BumpDeclaration(name, support, plateau.closure())
        # the pure bump is the unit dressed by one factor
        sym = Symbol(name, 0, Q(0), "algebra", support)
        self.alphabet.add(sym)
        self._tags[name] = TaggedInfo(self.alphabet.unit.name, (name,), support)
        return sym

    def declare_partition(self, members) -> None:
        """Impose sum(members) = 1 on the whole universe.

        Only accepted when the geometry can carry it: on every cell either
        some member is free to vary, or exactly one sits on its plateau.
        """
        members = tuple(members)
        for m in members:
            if m not in self._bumps:
                raise SupportError(f"partition member {m} is not a declared bump")
        cover = SupportSet.empty()
        for m in members:
            cover = cover.union(self._bumps[m].support)
        if not self.universe.subset_of(cover):
            raise SupportError("partition members do not cover the universe")
        for lo, hi in self._cells_raw(extra=()):
            mid = (lo + hi) / 2
            ones = sum(1 for m in members
                       if self._bumps[m].plateau.contains_point(mid))
            free = [m for m in members
                    if not self._bumps[m].plateau.contains_point(mid)
                    and self._bumps[m].support.contains_point(mid)]
            if ones > 1 or (not free and ones != 1):
                raise SupportError(
                    f"partition {members} cannot sum to 1 near {mid}")
        self._partitions.append(members)

    # -- tagged symbol minting ---------------------------------------------

    def info(self, sym) -> TaggedInfo:
        name = sym.name if isinstance(sym, Symbol) else sym
        if name == self.alphabet.unit.name:
            return TaggedInfo(name, (), self.universe)
        try:
            return self._tags[name]
        except KeyError:
            raise SupportError(f"leaf {name} carries no support tag") from None

    def window_of(self, sym) -> SupportSet:
        return self.info(sym).window

    def _natural_window(self, base: str, bumps: tuple) -> SupportSet:
        win = self.info(base).window
        for b in bumps:
            win = win.intersect(self._bumps[b].support)
        return win

    def _mint(self, base: str, bumps: tuple, window: SupportSet):
        """Return the Symbol for a dressed, windowed section, or None when
        the window is degenerate (the section is already zero there).
        Bumps whose plateau covers the whole window are dropped: they are
        identically 1 there, so the dressed symbol is the bare one."""
        bumps = tuple(sorted(bumps))
        window = window.intersect(self._natural_window(base, bumps))
        if window.interior().is_empty():
            return None
        kept = tuple(b for b in bumps
                     if not window.subset_of(self._bumps[b].plateau))
        if not kept and bumps and base == self.alphabet.unit.name \
                and window != self.universe:
            kept = bumps  # a windowed bare unit is not a symbol
        bumps = kept
        if base == self.alphabet.unit.name and not bumps:
            return self.alphabet.unit
        stem = "*".join(bumps + ((base,) if base != self.alphabet.unit.name else ()))
        if window == self._natural_window(base, bumps):
            name = stem
        else:
            key = ";".join(f"{p.lo}..{p.hi}" for p in window.pieces)
            name = f"{stem}|{key}"
        if name in self._tags:
            return self.alphabet.symbol(name)
        if base != self.alphabet.unit.name:
            proto = self.alphabet.symbol(base)
            sym = Symbol(name, proto.parity, proto.degree, proto.kind, window)
        else:
            # windowed pure bump; constants carry no parity or degree
            sym = Symbol(name, 0, Q(0), "algebra", window)
        self.alphabet.add(sym)
        self._tags[name] = TaggedInfo(base, bumps, window)
        return sym

    def restricted_symbol(self, name: str, window: SupportSet):
        info = self.info(name)
        return self._mint(info.base, info.bumps, info.window.intersect(window))

    # -- cells and pointwise values ------------------------------------------

    def _cells_raw(self, extra=()):
        pts = set(self.universe.breakpoints())
        for bd in self._bumps.values():
            pts.update(bd.support.breakpoints())
            pts.update(bd.plateau.breakpoints())
        for info in self._tags.values():
            pts.update(info.window.breakpoints())
        for s in extra:
            pts.update(s.breakpoints())
        pts = sorted(pts)
        out = []
        for lo, hi in zip(pts, pts[1:]):
            if lo < hi and self.universe.contains_point((lo + hi) / 2):
                out.append((lo, hi))
        return out

    def cells(self):
        """Open intervals between consecutive declared breakpoints, inside
        the universe.  No declared set has a boundary point inside a cell,
        so one midpoint decides membership for the whole cell."""
        return self._cells_raw()

    def _leaf_value(self, name: str, mid) -> PolyVars:
        if name == self.alphabet.unit.name:
            return PolyVars.const(1)
        info = self.info(name)
        if not info.window.contains_point(mid):
            return PolyVars.const(0)
        out = PolyVars.const(1)
        for b in info.bumps:
            bd = self._bumps[b]
            if bd.plateau.contains_point(mid):
                continue
            if bd.support.contains_point(mid):
                out = out * PolyVars.var(b)
            else:
                return PolyVars.const(0)
        return out

    def _impose(self, poly: PolyVars, mid) -> PolyVars:
        """Eliminate one unknown per partition family using sum = 1 on the
        cell around mid; declaration time already checked solvability."""
        for fam in self._partitions:
            ones = 0
            free = []
            for m in fam:
                bd = self._bumps[m]
                if bd.plateau.contains_point(mid):
                    ones += 1
                elif bd.support.contains_point(mid):
                    free.append(m)
            if free:
                repl = PolyVars.const(1 - ones)
                for m in free[:-1]:
                    repl = repl - PolyVars.var(m)
                poly = poly.substitute(free[-1], repl)
        return poly


# -- class grouping -----------------------------------------------------------


def _class_key(tree, context):
    if isinstance(tree, Leaf):
        return ("s", context.info(tree.symbol).base)
    return ("n", tree.index,
            _class_key(tree.left, context), _class_key(tree.right, context))


def _monomial_poly(tree, mid, context) -> PolyVars:
    out = PolyVars.const(1)
    for leaf in leaves(tree):
        out = out * context._leaf_value(leaf.name, mid)
        if not out.c:
            break
    return out


def _class_cells(members, context):
    """Open cells where the class polynomial survives the partition
    relations.  members is a list of (tree, coeff)."""
    alive = []
    for lo, hi in context.cells():
        mid = (lo + hi) / 2
        poly = PolyVars()
        for tree, coeff in members:
            poly = poly + coeff * _monomial_poly(tree, mid, context)
        poly = context._impose(poly, mid)
        if not poly.is_zero():
            alive.append((lo, hi))
    return alive


def _classes(x: Element, context):
    """All monomials bucketed by class key, leaves included."""
    classes = {}
    for tree, coeff in x.terms.items():
        classes.setdefault(_class_key(tree, context), []).append((tree, coeff))
    return classes


# -- the two support readings -------------------------------------------------


def _term_support(tree, context) -> SupportSet:
    if isinstance(tree, Leaf):
        return context.window_of(tree.symbol)
    return overlap_core(_term_support(tree.left, context),
                        _term_support(tree.right, context))


def support(x: Element, context: SheafContext) -> SupportSet:
    """Recursive overlap-rule support, union over monomials.  Blind to
    cancellation between monomials; see semantic_support for that."""
    out = SupportSet.empty()
    for tree in x.terms:
        out = out.union(_term_support(tree, context))
    return out


def semantic_support(x: Element, context: SheafContext) -> SupportSet:
    out = SupportSet.empty()
    for members in _classes(x, context).values():
        for lo, hi in _class_cells(members, context):
            out = out.union(SupportSet.closed(lo, hi))
    return out


# -- projection, kernel, dressing, restriction ---------------------------------


def pi(x: Element, context: SheafContext) -> Element:
    """Identity on leaves; kills every product class that is dead on all
    open cells.  Idempotent, and on a single generator instance it acts
    all-or-nothing because the monomials share one class."""
    kept = {}
    classes = {}
    for tree, coeff in x.terms.items():
        if isinstance(tree, Leaf):
            kept[tree] = coeff
        else:
            classes.setdefault(_class_key(tree, context), []).append((tree, coeff))
    for members in classes.values():
        if _class_cells(members, context):
            for tree, coeff in members:
                kept[tree] = coeff
    return Element(x.alphabet, kept)


def k_generator(x: Element, context: SheafContext) -> Element:
    return x - pi(x, context)


def sigma_star(sigma, x: Element, context: SheafContext) -> Element:
    """Multiply every tensor slot by the bump: each leaf s becomes the
    dressed section sigma*s, the unit becomes the pure bump.  Slots whose
    window misses the bump entirely drop out."""
    name = sigma.name if isinstance(sigma, (Symbol, BumpDeclaration)) else sigma
    if name not in context._bumps:
        raise SupportError(f"{name} is not a declared bump")
    bd = context._bumps[name]

    def dress(tree):
        if isinstance(tree, Leaf):
            info = context.info(tree.symbol)
            sym = context._mint(info.base, info.bumps + (name,),
                                info.window.intersect(bd.support))
            return Leaf(sym) if sym is not None else None
        left = dress(tree.left)
        right = dress(tree.right)
        if left is None or right is None:
            return None
        return Node(tree.index, left, right)

    out = Element.zero(x.alphabet)
    for tree, coeff in x.terms.items():
        dressed = dress(tree)
        if dressed is not None:
            out = out + Element.of_term(x.alphabet, dressed, coeff)
    return out


def restrict(x: Element, window: SupportSet, context: SheafContext) -> Element:
    """Shrink every non-unit leaf window to its trace on the target set,
    drop slots that die, then project.  Restricting to a set that is not
    inside the universe is an error, not a clamp."""
    if not window.subset_of(context.universe):
        raise SupportError("restriction target leaves the universe")

    def rewindow(tree):
        if isinstance(tree, Leaf):
            if tree.symbol.name == context.alphabet.unit.name:
                return tree
            info = context.info(tree.symbol)
            sym = context._mint(info.base, info.bumps,
                                info.window.intersect(window))
            return Leaf(sym) if sym is not None else None
        left = rewindow(tree.left)
        right = rewindow(tree.right)
        if left is None or right is None:
            return None
        return Node(tree.index, left, right)

    out = Element.zero(x.alphabet)
    for tree, coeff in x.terms.items():
        moved = rewindow(tree)
        if moved is not None:
            out = out + Element.of_term(x.alphabet, moved, coeff)
    return pi(out, context)


# -- covers, gluing, axiom check ------------------------------------------------


def check_cover(cover, context: SheafContext):
    """Geometric side conditions: cores shrink their windows, cores cover
    the universe, each sigma fills its window and sits at 1 on the core,
    each rho lives inside the core, and the rhos form a declared
    partition of unity."""
    problems = []
    union_cores = SupportSet.empty()
    for p in cover:
        union_cores = union_cores.union(p.core)
        if not p.core.subset_of(p.window):
            problems.append(f"{p.name}: core not inside window")
        sig = context._bumps.get(p.sigma)
        rho = context._bumps.get(p.rho)
        if sig is None or rho is None:
            problems.append(f"{p.name}: undeclared bump")
            continue
        if not sig.support.subset_of(p.window):
            problems.append(f"{p.name}: sigma spills out of the window")
        if not p.core.subset_of(sig.plateau):
            problems.append(f"{p.name}: sigma is not 1 on the core")
        if not rho.support.subset_of(p.core):
            problems.append(f"{p.name}: rho spills out of the core")
    if not context.universe.subset_of(union_cores):
        problems.append("cores do not cover the universe")
    rhos = tuple(p.rho for p in cover)
    if not any(tuple(sorted(fam)) == tuple(sorted(rhos))
               for fam in context._partitions):
        problems.append("the rhos are not a declared partition of unity")
    return problems


def glue(cover, sections, context: SheafContext) -> Element:
    """sum_j rho_j o_{-1} (sigma_j * x_j); raises on a broken cover or on
    sections that disagree on an overlap."""
    problems = check_cover(cover, context)
    if problems:
        raise SupportError("; ".join(problems))
    if len(sections) != len(cover):
        raise SupportError("one section per patch required")
    for i in range(len(cover)):
        for j in range(i + 1, len(cover)):
            meet = cover[i].window.intersect(cover[j].window)
            if meet.interior().is_empty():
                continue
            a = restrict(sections[i], meet, context)
            b = restrict(sections[j], meet, context)
            if a != b:
                raise SupportError(
                    f"overlap disagreement between {cover[i].name} "
                    f"and {cover[j].name} on {meet}")
    al = context.alphabet
    out = Element.zero(al)
    for p, x in zip(cover, sections):
        rho_leaf = Element.sym(al, p.rho)
        out = out + rho_leaf.o(-1, sigma_star(p.sigma, x, context))
    return out


def _unit_reduce(x: Element) -> ReductionReport:
    rules = RuleSet(None, None, ("unit_left", "unit_strip"))
    return reduce_element(x, rules)


def sheaf_axiom_check(cover, sections, context: SheafContext,
                      probe: Element = None):
    """Existence and uniqueness, mechanically.

    For each patch the restriction of the glued element is walked to the
    local section through four hops: strip the sigma dressing, swap every
    neighbour section for this patch's on the rho cores, collapse the rho
    sum to the unit by the partition relation, and strip the unit by a
    rewrite.  Hops one to three are certified by an empty semantic
    support (membership in the kernel ideal); hop four is a unit_left
    reduction to zero.  Uniqueness: the probe (default: one Cor-style
    difference rho o (x - sigma*x)) has empty semantic support, so pi
    kills it and k returns it whole.
    """
    checks = []

    def add(cid, ok, detail=""):
        checks.append({"id": cid, "ok": bool(ok), "detail": detail})

    problems = check_cover(cover, context)
    add("cover-geometry", not problems, "; ".join(problems))

    for i in range(len(cover)):
        for j in range(i + 1, len(cover)):
            meet = cover[i].window.intersect(cover[j].window)
            if meet.interior().is_empty():
                continue
            a = restrict(sections[i], meet, context)
            b = restrict(sections[j], meet, context)
            add(f"overlap-{cover[i].name}-{cover[j].name}", a == b,
                f"on {meet}")

    if any(not c["ok"] for c in checks):
        return checks

    al = context.alphabet
    glued = glue(cover, sections, context)

    def rho_sum(parts):
        out = Element.zero(al)
        for p, x in zip(cover, parts):
            out = out + Element.sym(al, p.rho).o(-1, x)
        return out

    g0 = glued
    g1 = rho_sum([sigma_star(p.sigma, x, context)
                  for p, x in zip(cover, sections)])
    add("glue-definition", g0 == g1)

    g2 = rho_sum(sections)
    add("strip-sigma", semantic_support(g1 - g2, context).is_empty(),
        "rho kills x - sigma*x")

    for i, p in enumerate(cover):
        gi2 = rho_sum([sections[i]] * len(cover))
        d = restrict(g2 - gi2, p.window, context)
        add(f"swap-to-{p.name}", semantic_support(d, context).is_empty(),
            "neighbour sections agree under each rho inside this window")

        gi3 = Element.unit(al).o(-1, sections[i])
        add(f"partition-collapse-{p.name}",
            semantic_support(gi2 - gi3, context).is_empty(),
            "sum of rhos is 1")

        rep = _unit_reduce(restrict(gi3, p.window, context)
                           - restrict(sections[i], p.window, context))
        add(f"unit-strip-{p.name}",
            bool(rep) and rep.result == Element.zero(al),
            f"{rep.steps} rewrite steps")

        hops = [c["ok"] for c in checks if c["id"] in
                ("glue-definition", "strip-sigma", f"swap-to-{p.name}",
                 f"partition-collapse-{p.name}", f"unit-strip-{p.name}")]
        add(f"restricts-to-{p.name}", all(hops),
            "restrict(glue) = local section modulo the kernel ideal")

    if probe is None:
        p0 = cover[0]
        x0 = sections[0]
        probe = (Element.sym(al, p0.rho).o(-1, x0)
                 - Element.sym(al, p0.rho).o(-1, sigma_star(p0.sigma, x0, context)))
    empty = semantic_support(probe, context).is_empty()
    killed = pi(probe, context) == Element.zero(al)
    whole = k_generator(probe, context) == probe
    add("uniqueness-probe", empty and killed and whole,
        "empty support forces membership in the kernel ideal")
    return checks


# -- the two statements the gluing rests on ------------------------------------


def bump_support_check(sigma, x: Element, window: SupportSet,
                       core: SupportSet, context: SheafContext):
    """x - sigma*x lives on cl(int(window) - core) when every slot of x
    lives inside the window and sigma is 1 on the core."""
    diff = x - sigma_star(sigma, x, context)
    region = window.interior().minus(core).closure()
    got = semantic_support(diff, context)
    return {"ok": got.subset_of(region), "support": str(got),
            "region": str(region)}


def rho_transfer_check(rho, sigma, x: Element, n: int,
                       context: SheafContext):
    """rho o_n x = rho o_n (sigma*x) modulo the kernel ideal, when rho
    lives inside sigma's plateau."""
    al = context.alphabet
    r = Element.sym(al, rho)
    diff = r.o(n, x) - r.o(n, sigma_star(sigma, x, context))
    empty = semantic_support(diff, context).is_empty()
    killed = pi(diff, context) == Element.zero(al)
    return {"ok": empty and killed, "support": str(semantic_support(diff, context))}


# -- shipped covers -------------------------------------------------------------


def _closed(a, b) -> SupportSet:
    return SupportSet.closed(Q(a), Q(b))


def make_cover_two():
    """Universe [0,3], two patches overlapping on [1,2], cores split at
    3/2.  Sections f (global), g on [0,2], h on [1,3]."""
    ctx = SheafContext(_closed(0, 3))
    ctx.declare_section("f", _closed(0, 3))
    ctx.declare_section("g", _closed(0, 2))
    ctx.declare_section("h", _closed(1, 3))
    ctx.declare_bump("s1", _closed(0, 2), _closed(0, Q(3, 2)))
    ctx.declare_bump("s2", _closed(1, 3), _closed(Q(3, 2), 3))
    ctx.declare_bump("r1", _closed(0, Q(3, 2)))
    ctx.declare_bump("r2", _closed(Q(3, 2), 3))
    ctx.declare_partition(("r1", "r2"))
    cover = (
        CoverPatch("U1", _closed(0, 2), _closed(0, Q(3, 2)), "s1", "r1"),
        CoverPatch("U2", _closed(1, 3), _closed(Q(3, 2), 3), "s2", "r2"),
    )
    return ctx, cover


def make_cover_three():
    """Universe [0,4], three patches in a chain, cores split at 3/2 and
    5/2.  Sections f (global), g on [0,8/3], h on [4/3,4]."""
    ctx = SheafContext(_closed(0, 4))
    ctx.declare_section("f", _closed(0, 4))
    ctx.declare_section("g", _closed(0, Q(8, 3)))
    ctx.declare_section("h", _closed(Q(4, 3), 4))
    pieces = (
        ("1", _closed(0, Q(5, 3)), _closed(0, Q(3, 2))),
        ("2", _closed(Q(4, 3), Q(8, 3)), _closed(Q(3, 2), Q(5, 2))),
        ("3", _closed(Q(7, 3), 4), _closed(Q(5, 2), 4)),
    )
    cover = []
    for tag, window, core in pieces:
        ctx.declare_bump("s" + tag, window, core)
        ctx.declare_bump("r" + tag, core)
        cover.append(CoverPatch("U" + tag, window, core, "s" + tag, "r" + tag))
    ctx.declare_partition(tuple("r" + tag for tag, _, _ in pieces))
    return ctx, tuple(cover)


def load_cover(source):
    """Build a context and cover from a JSON description.  Rationals are
    strings ("3/2"); each patch gives its window, core, and bump names;
    sections list name and support.  The rho partition is declared
    automatically."""
    if isinstance(source, (str, bytes)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = source

    def span(pair):
        return SupportSet.closed(Q(str(pair[0])), Q(str(pair[1])))

    ctx = SheafContext(span(data["universe"]))
    for sec in data.get("sections", ()):
        ctx.declare_section(sec["name"], span(sec["support"]),
                            parity=int(sec.get("parity", 0)),
                            degree=Q(str(sec.get("degree", 0))))
    cover = []
    for patch in data["patches"]:
        window = span(patch["window"])
        core = span(patch["core"])
        ctx.declare_bump(patch["sigma"], window, core)
        ctx.declare_bump(patch["rho"], core)
        cover.append(CoverPatch(patch.get("name", patch["sigma"]),
                                window, core, patch["sigma"], patch["rho"]))
    ctx.declare_partition(tuple(p.rho for p in cover))
    return ctx, tuple(cover)
