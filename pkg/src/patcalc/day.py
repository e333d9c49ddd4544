"""Category-valued monoids over a pattern and Day convolution.

A CatMonoid assigns a finite category to every object of a pattern and a
functor to every morphism, strictly functorially, with each fiber
isomorphic to the product of its elementary cell fibers.  Unstraightening
such a monoid (`grothendieck`) produces a new pattern fibred over the
base; presheaves on the cell fibers convolve along any active morphism
into an elementary object by a pointwise left Kan extension
(`day_convolve`), and Segal functors on the fiberwise-opposite total
pattern restrict to presheaf families with convolution comparison maps
(`monoid_algebra_bridge`).

Fiber categories are compared by identity, so presheaves handed to
`day_convolve` must live on this monoid's own `op_fiber` categories.
"""

from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from . import kan
from .errors import TableError
from .fincat import (
    CategoryBuilder,
    FinFunctor,
    opposite,
    validate_category,
)
from .kan import SetFunctor, SetNat
from .patterns import (
    PatternData,
    PatternMorphism,
    check_cartesian_pattern,
    check_monoid,
    check_operad_fibration,
)
from .report import Report


def discrete_category(k, name, labels=None):
    """k objects and nothing but identities."""
    bld = CategoryBuilder(name)
    for x in range(k):
        bld.add_object(labels[x] if labels else str(x), x)
        bld.add_morphism(x, x, "id", "id%d" % x)
    return bld.finish(["id"] * k, compose_data=lambda gd, fd, a, b, c: "id")


def _op_name(name):
    return name[:-3] if name.endswith("^op") else name + "^op"


@dataclass
class CatMonoid:
    """A strict functor from the base pattern to finite categories whose
    value at every object is the product of its elementary cell values."""

    name: str
    pattern: PatternData
    fibers: tuple  # per base object, a FinCat
    actions: tuple  # per base morphism, a FinFunctor between fibers

    def __post_init__(self):
        self._op = None
        self._gr = None
        self._wit = {}
        self._cell = {}

    def fiber(self, o):
        return self.fibers[o]

    def action(self, m):
        return self.actions[m]

    def cells(self, o):
        if o not in self._cell:
            n = self.pattern.obj_size(o)
            self._cell[o] = tuple(
                self.pattern.canonical_lift(o, i) for i in range(1, n + 1)
            )
        return self._cell[o]

    def cell_targets(self, o):
        return tuple(int(self.pattern.cat.tgt[l]) for l in self.cells(o))

    def cell_objects(self, o, x):
        return tuple(int(self.actions[l].ob(x)) for l in self.cells(o))

    def cell_morphisms(self, o, xi):
        return tuple(int(self.actions[l].mor(xi)) for l in self.cells(o))

    def op(self):
        """Fiberwise opposite, sharing this monoid's index tables; applying
        it twice gives back this very monoid."""
        if self._op is None:
            ops = tuple(opposite(C) for C in self.fibers)
            B = self.pattern.cat
            acts = tuple(
                FinFunctor(
                    F.name,
                    ops[int(B.src[m])],
                    ops[int(B.tgt[m])],
                    F.obj_map,
                    F.mor_map,
                )
                for m, F in enumerate(self.actions)
            )
            other = CatMonoid(_op_name(self.name), self.pattern, ops, acts)
            other._op = self
            self._op = other
        return self._op

    def op_fiber(self, o):
        return self.op().fibers[o]

    def _witness(self, o):
        """Cellwise evaluation tables of the Segal comparison at o."""
        if o not in self._wit:
            C = self.fibers[o]
            obj_t = tuple(self.cell_objects(o, x) for x in range(C.n_obj))
            mor_t = tuple(self.cell_morphisms(o, m) for m in range(C.n_mor))
            self._wit[o] = (
                obj_t,
                mor_t,
                {t: x for x, t in enumerate(obj_t)},
                {t: m for m, t in enumerate(mor_t)},
            )
        return self._wit[o]

    def assemble(self, o, cell_objs):
        return self._witness(o)[2][tuple(cell_objs)]

    def assemble_mor(self, o, cell_mors):
        return self._witness(o)[3][tuple(cell_mors)]

    def validate(self):
        rep = Report("cat-monoid(%s)" % self.name)
        B = self.pattern.cat
        bad = []
        for o in range(B.n_obj):
            sub = validate_category(self.fibers[o])
            if not sub.passed:
                bad.append(B.obj_labels[o])
        rep.check("fiber-categories", not bad, counterexamples=tuple(bad[:4]))
        bad = []
        for m in range(B.n_mor):
            F = self.actions[m]
            if (
                F.source is not self.fibers[int(B.src[m])]
                or F.target is not self.fibers[int(B.tgt[m])]
                or not F.validate().passed
            ):
                bad.append(B.mor_str(m))
        if not rep.check("action-typing", not bad, counterexamples=tuple(bad[:4])):
            return rep
        bad = []
        for o in range(B.n_obj):
            F = self.actions[B.identity_of(o)]
            C = self.fibers[o]
            if not (
                np.array_equal(F.obj_map, np.arange(C.n_obj))
                and np.array_equal(F.mor_map, np.arange(C.n_mor))
            ):
                bad.append(B.obj_labels[o])
        rep.check("identity-actions", not bad, counterexamples=tuple(bad[:4]))
        bad = None
        for (a, b, c), blk in B.comp.items():
            lo_f, hi_f = B.hom_bounds(a, b)
            lo_g, hi_g = B.hom_bounds(b, c)
            for g in range(lo_g, hi_g):
                Fg = self.actions[g]
                for f in range(lo_f, hi_f):
                    Ff = self.actions[f]
                    Fgf = self.actions[int(blk[g - lo_g, f - lo_f])]
                    if not (
                        np.array_equal(Fgf.obj_map, Fg.obj_map[Ff.obj_map])
                        and np.array_equal(Fgf.mor_map, Fg.mor_map[Ff.mor_map])
                    ):
                        bad = "%s after %s" % (B.mor_str(g), B.mor_str(f))
                        break
                if bad:
                    break
            if bad:
                break
        rep.check("strict-functoriality", bad is None,
                  counterexamples=(bad,) if bad else ())
        bad = []
        for o in range(B.n_obj):
            C = self.fibers[o]
            obj_t, mor_t, obj_inv, mor_inv = self._witness(o)
            n_obj = 1
            n_mor = 1
            for t in self.cell_targets(o):
                n_obj *= self.fibers[t].n_obj
                n_mor *= self.fibers[t].n_mor
            if not (
                len(obj_inv) == C.n_obj == n_obj
                and len(mor_inv) == C.n_mor == n_mor
            ):
                bad.append(B.obj_labels[o])
        rep.check("segal-witness-iso", not bad, counterexamples=tuple(bad[:4]))
        return rep


def discrete_cat_monoid(P, M, name=None):
    """The discrete monoid with object sets M(O); M must be a Segal functor
    on the base for the result to validate."""
    if M.cat is not P.cat:
        raise TableError("monoid values must live on the pattern's category")
    nm = name or "disc(%s)" % M.name
    fibers = tuple(
        discrete_category(M.sizes[o], "%s[%s]" % (nm, P.cat.obj_labels[o]))
        for o in range(P.cat.n_obj)
    )
    actions = []
    for m in range(P.cat.n_mor):
        arr = np.asarray(M.maps[m], dtype=np.int32)
        actions.append(
            FinFunctor(
                "act[%s]" % P.cat.mor_labels[m],
                fibers[int(P.cat.src[m])],
                fibers[int(P.cat.tgt[m])],
                arr,
                arr,
            )
        )
    return CatMonoid(nm, P, fibers, tuple(actions))


def one_object_cat_monoid(P, M, mult, name=None):
    """The monoid with one object per fiber and M(O) as its morphisms,
    composed by mult(o, g, h); for a group law the fibers are one-object
    groupoids with nontrivial automorphisms."""
    if M.cat is not P.cat:
        raise TableError("monoid values must live on the pattern's category")
    nm = name or "b(%s)" % M.name
    fibers = []
    for o in range(P.cat.n_obj):
        bld = CategoryBuilder("%s[%s]" % (nm, P.cat.obj_labels[o]))
        bld.add_object("*", "*")
        for g in range(M.sizes[o]):
            bld.add_morphism(0, 0, g, "g%d" % g)
        fibers.append(
            bld.finish(
                [0],
                compose_data=lambda gd, fd, a, b, c, o=o: mult(o, gd, fd),
            )
        )
    fibers = tuple(fibers)
    actions = tuple(
        FinFunctor(
            "act[%s]" % P.cat.mor_labels[m],
            fibers[int(P.cat.src[m])],
            fibers[int(P.cat.tgt[m])],
            np.zeros(1, dtype=np.int32),
            np.asarray(M.maps[m], dtype=np.int32),
        )
        for m in range(P.cat.n_mor)
    )
    return CatMonoid(nm, P, fibers, actions)


def fiberwise_op(M):
    """Opposite category in every fiber; an involution."""
    return M.op()


# -- unstraightening --------------------------------------------------------


@dataclass
class Fibration:
    """A pattern fibred over another one, with chosen cocartesian lifts.

    `lifts[(x, m)]` is the lift of the base morphism m starting at the
    total object x; every total morphism factors uniquely as a vertical
    morphism after the lift of its projection.
    """

    total: PatternData
    projection: PatternMorphism
    lifts: dict

    def lift(self, x, m):
        return self.lifts[(x, m)]

    def validate(self):
        rep = Report("fibration(%s)" % self.total.name)
        rep.add(validate_category(self.total.cat))
        rep.add(check_cartesian_pattern(self.total))
        rep.add(self.projection.check())
        rep.add(check_operad_fibration(self.total))
        TC = self.total.cat
        BC = self.projection.target.cat
        pr = self.projection.functor
        bad = None
        for (x, m), t in self.lifts.items():
            if (
                int(TC.src[t]) != x
                or int(pr.mor(t)) != m
                or int(pr.ob(x)) != int(BC.src[m])
            ):
                bad = "lift of %s at %s is ill-typed" % (
                    BC.mor_str(m),
                    TC.obj_labels[x],
                )
                break
        rep.check("lift-typing", bad is None, counterexamples=(bad,) if bad else ())
        if bad:
            return rep
        for u in range(TC.n_mor):
            x, z = int(TC.src[u]), int(TC.tgt[u])
            m = int(pr.mor(u))
            l = self.lifts.get((x, m))
            if l is None:
                bad = "no lift of %s at %s" % (BC.mor_str(m), TC.obj_labels[x])
                break
            y = int(TC.tgt[l])
            vid = BC.identity_of(int(pr.ob(z)))
            lo, hi = TC.hom_bounds(y, z)
            cands = [
                w
                for w in range(lo, hi)
                if int(pr.mor(w)) == vid and TC.compose(w, l) == u
            ]
            if len(cands) != 1:
                bad = "%s has %d vertical factorizations" % (
                    TC.mor_str(u),
                    len(cands),
                )
                break
        rep.check(
            "cocartesian-factorization",
            bad is None,
            counterexamples=(bad,) if bad else (),
        )
        return rep


def grothendieck(M, name=None):
    """Unstraighten a CatMonoid into a pattern over its base.

    Objects are pairs (base object, fiber object); a morphism over m from
    (O, x) is a fiber morphism out of m's action on x.  Inert morphisms
    are the cocartesian ones over inert, active morphisms are everything
    over active, and elementary objects are those over elementary.
    """
    if M._gr is not None:
        return M._gr
    P = M.pattern
    B = P.cat
    nm = name or "gr(%s)" % M.name
    bld = CategoryBuilder(nm)
    for O in range(B.n_obj):
        C = M.fibers[O]
        for x in range(C.n_obj):
            bld.add_object(
                "(%s,%s)" % (B.obj_labels[O], C.obj_labels[x]), (O, x)
            )
    for m in range(B.n_mor):
        O, O2 = int(B.src[m]), int(B.tgt[m])
        C2 = M.fibers[O2]
        act = M.actions[m]
        for x in range(M.fibers[O].n_obj):
            ax = int(act.ob(x))
            for x2 in range(C2.n_obj):
                lo, hi = C2.hom_bounds(ax, x2)
                for xi in range(lo, hi):
                    bld.add_morphism(
                        bld.obj_id((O, x)),
                        bld.obj_id((O2, x2)),
                        (m, xi),
                        "(%s,%s)" % (B.mor_labels[m], C2.mor_labels[xi]),
                    )
    identity_data = [
        (B.identity_of(O), M.fibers[O].identity_of(x))
        for O in range(B.n_obj)
        for x in range(M.fibers[O].n_obj)
    ]

    def compose_pair(gd, fd, a, b, c):
        m2, xi2 = gd
        m1, xi1 = fd
        C = M.fibers[int(B.tgt[m2])]
        return (B.compose(m2, m1), C.compose(xi2, int(M.actions[m2].mor(xi1))))

    cat = bld.finish(identity_data, compose_data=compose_pair)
    base_m = np.array([d[0] for d in cat.mor_data], dtype=np.int32)
    base_o = np.array([d[0] for d in cat.obj_data], dtype=np.int32)
    iso = np.zeros(cat.n_mor, dtype=bool)
    for t in range(cat.n_mor):
        m, xi = cat.mor_data[t]
        iso[t] = M.fibers[int(B.tgt[m])].is_iso(xi)
    inert = P.inert[base_m] & iso
    active = P.active[base_m]
    elem = P.elementary[base_o]
    size = FinFunctor(
        "size",
        cat,
        P.size.target,
        P.size.obj_map[base_o],
        P.size.mor_map[base_m],
    )
    total = PatternData(nm, cat, inert, active, elem, size, P.level)
    proj = PatternMorphism(
        total, P, FinFunctor("proj", cat, B, base_o, base_m)
    )
    dix = cat.data_index()
    oix = cat.obj_index()
    lifts = {}
    for O in range(B.n_obj):
        for x in range(M.fibers[O].n_obj):
            xid = oix[(O, x)]
            for m in range(B.n_mor):
                if int(B.src[m]) != O:
                    continue
                O2 = int(B.tgt[m])
                ax = int(M.actions[m].ob(x))
                tid = oix[(O2, ax)]
                lifts[(xid, m)] = dix[
                    (xid, tid, (m, M.fibers[O2].identity_of(ax)))
                ]
    M._gr = Fibration(total, proj, lifts)
    return M._gr


# -- convolution ------------------------------------------------------------


def _encode(dims, tup):
    v = 0
    for d, t in zip(dims, tup):
        v = v * d + t
    return v


def _decode(dims, v):
    out = []
    for d in reversed(dims):
        v, r = divmod(v, d)
        out.append(r)
    out.reverse()
    return tuple(out)


def _cell_product(M, O, presheaves, name):
    """Pointwise product of cell presheaves, as a presheaf on fiber(O)."""
    opO = M.op_fiber(O)
    dims_at = [
        [presheaves[i].sizes[c] for i, c in enumerate(M.cell_objects(O, x))]
        for x in range(opO.n_obj)
    ]
    sizes = []
    for x in range(opO.n_obj):
        n = 1
        for d in dims_at[x]:
            n *= d
        sizes.append(n)
    maps = []
    for m in range(opO.n_mor):
        a, b = int(opO.src[m]), int(opO.tgt[m])
        cm = M.cell_morphisms(O, m)
        out = []
        for v in range(sizes[a]):
            tup = _decode(dims_at[a], v)
            img = tuple(
                presheaves[i].apply(cm[i], t) for i, t in enumerate(tup)
            )
            out.append(_encode(dims_at[b], img))
        maps.append(tuple(out))
    return SetFunctor(name, opO, sizes, maps), dims_at


def _day_lan(M, phi, presheaves, name=None):
    """Day convolution with its full left-Kan bookkeeping."""
    P, B = M.pattern, M.pattern.cat
    if not P.active[phi]:
        raise TableError("day convolution needs an active morphism")
    O, E = int(B.src[phi]), int(B.tgt[phi])
    if not P.elementary[E]:
        raise TableError("day convolution lands in an elementary object")
    cells = M.cells(O)
    if len(presheaves) != len(cells):
        raise TableError(
            "expected %d cell presheaves, got %d" % (len(cells), len(presheaves))
        )
    for i, t in enumerate(M.cell_targets(O)):
        if presheaves[i].cat is not M.op_fiber(t):
            raise TableError(
                "presheaf %d must live on the opposite fiber of %s"
                % (i, B.obj_labels[t])
            )
    nm = name or "day(%s)" % ",".join(F.name for F in presheaves)
    prodF, _ = _cell_product(M, O, presheaves, "%s|cells" % nm)
    act = M.actions[phi]
    K = FinFunctor(
        "push(%s)" % B.mor_labels[phi],
        M.op_fiber(O),
        M.op_fiber(E),
        act.obj_map,
        act.mor_map,
    )
    return kan.lan(prodF, K, name=nm)


def day_convolve(M, phi, presheaves, name=None):
    """Convolve cell presheaves along an active morphism into an
    elementary object: the left Kan extension of their pointwise product
    along the opposite of phi's action."""
    return _day_lan(M, phi, presheaves, name=name).functor


def _identity_loc(C, o):
    return C.loc(C.identity_of(o))


def check_yoneda_monoidal(M, phi=None, objects=None):
    """Convolving representable presheaves gives the representable at the
    pushforward, naturally.  With no arguments this sweeps every cell
    object tuple of every active morphism into an elementary object;
    `objects` restricts to one tuple of cell objects of phi."""
    rep = Report("yoneda(%s)" % M.name)
    P, B = M.pattern, M.pattern.cat
    if phi is None:
        phis = [
            m
            for m in range(B.n_mor)
            if P.active[m] and P.elementary[int(B.tgt[m])]
        ]
    else:
        phis = [phi]
    for ph in phis:
        O, E = int(B.src[ph]), int(B.tgt[ph])
        opE = M.op_fiber(E)
        tgts = M.cell_targets(O)
        if objects is None:
            combos = iproduct(*[range(M.fibers[t].n_obj) for t in tgts])
        else:
            combos = [tuple(objects)]
        for combo in combos:
            Fs = [
                kan.representable(M.op_fiber(t), c)
                for t, c in zip(tgts, combo)
            ]
            day = _day_lan(M, ph, Fs)
            x0 = M.assemble(O, combo)
            t0 = int(M.actions[ph].ob(x0))
            T = kan.representable(opE, t0)
            dims = [
                Fs[i].sizes[c] for i, c in enumerate(M.cell_objects(O, x0))
            ]
            xe = _encode(
                dims,
                tuple(
                    _identity_loc(M.op_fiber(t), c)
                    for t, c in zip(tgts, combo)
                ),
            )
            comps = []
            for c in range(opE.n_obj):
                lo, hi = opE.hom_bounds(t0, c)
                comps.append(
                    tuple(day.class_of(c, x0, v, xe) for v in range(lo, hi))
                )
            nat = SetNat(T, day.functor, tuple(comps))
            ok = nat.validate().passed and nat.is_bijection()
            rep.check(
                "iso(%s@%s)" % (B.mor_labels[ph], ",".join(map(str, combo))),
                ok,
                witnesses=(
                    "represented at %s"
                    % M.fibers[E].obj_labels[t0],
                )
                if ok
                else (),
            )
    return rep


# -- algebras over the monoid ----------------------------------------------


@dataclass
class DayPresheafFamily:
    """Restrictions of a Segal functor on the fiberwise-opposite total
    pattern: one presheaf per base elementary object, convolution
    comparison maps for every active morphism into one, and for each
    restriction a representing fiber object when one exists."""

    monoid: CatMonoid
    presheaves: dict
    days: dict
    comparisons: dict
    representing: dict


def _representing_object(C_op, F):
    """A fiber object t with Hom(-, t) isomorphic to F, or None."""
    for t in range(C_op.n_obj):
        for e in range(F.sizes[t]):
            ok = True
            for c in range(C_op.n_obj):
                lo, hi = C_op.hom_bounds(t, c)
                img = [F.apply(v, e) for v in range(lo, hi)]
                if len(set(img)) != len(img) or len(img) != F.sizes[c]:
                    ok = False
                    break
            if ok:
                return t
    return None


def monoid_algebra_bridge(M, N):
    """Check that N is a Segal functor on grothendieck(fiberwise_op(M)) and
    unpack it into its cellwise presheaf family with the convolution
    comparison maps its multiplication induces."""
    GR = grothendieck(fiberwise_op(M))
    total = GR.total
    if N.cat is not total.cat:
        raise TableError(
            "the functor must live on the fiberwise-opposite total category"
        )
    rep = Report("bridge(%s)" % N.name)
    rep.add(check_monoid(total, N))
    P, B = M.pattern, M.pattern.cat
    oix = total.cat.obj_index()
    dix = total.cat.data_index()
    presheaves = {}
    for E in range(B.n_obj):
        if not P.elementary[E]:
            continue
        opE = M.op_fiber(E)
        ide = B.identity_of(E)
        sizes = [N.sizes[oix[(E, c)]] for c in range(opE.n_obj)]
        maps = []
        for xi in range(opE.n_mor):
            a, b = int(opE.src[xi]), int(opE.tgt[xi])
            tid = dix[(oix[(E, a)], oix[(E, b)], (ide, xi))]
            maps.append(N.maps[tid])
        presheaves[E] = SetFunctor(
            "%s|%s" % (N.name, B.obj_labels[E]), opE, sizes, maps
        )
    if not rep.passed:
        return DayPresheafFamily(M, presheaves, {}, {}, {}), rep

    seg_inv = {}

    def segal_inverse(oid):
        if oid not in seg_inv:
            lifts = [
                total.canonical_lift(oid, i)
                for i in range(1, total.obj_size(oid) + 1)
            ]
            seg_inv[oid] = {
                tuple(N.apply(l, n) for l in lifts): n
                for n in range(N.sizes[oid])
            }
        return seg_inv[oid]

    days = {}
    comparisons = {}
    for ph in range(B.n_mor):
        O, E = int(B.src[ph]), int(B.tgt[ph])
        if not (P.active[ph] and P.elementary[E]):
            continue
        tgts = M.cell_targets(O)
        Rs = [presheaves[t] for t in tgts]
        day = _day_lan(M, ph, Rs, name="day(%s)" % B.mor_labels[ph])
        days[ph] = day
        opE = M.op_fiber(E)
        bad = None
        per_obj = []
        for c in range(opE.n_obj):
            vals = []
            for k in range(day.functor.sizes[c]):
                out = set()
                for (x0, t, xe) in day.classes[c][k]:
                    dims = [
                        Rs[i].sizes[ci]
                        for i, ci in enumerate(M.cell_objects(O, x0))
                    ]
                    parts = _decode(dims, xe)
                    e = segal_inverse(oix[(O, x0)])[tuple(parts)]
                    tid = dix[(oix[(O, x0)], oix[(E, c)], (ph, t))]
                    out.add(N.apply(tid, e))
                if len(out) != 1:
                    bad = "class %d at %s maps to %d values" % (
                        k,
                        opE.obj_labels[c],
                        len(out),
                    )
                    break
                vals.append(out.pop())
            if bad:
                break
            per_obj.append(tuple(vals))
        rep.check(
            "multiplication(%s)" % B.mor_labels[ph],
            bad is None,
            counterexamples=(bad,) if bad else (),
        )
        if bad is None:
            comparisons[ph] = tuple(per_obj)
    representing = {}
    for E, F in presheaves.items():
        t = _representing_object(M.op_fiber(E), F)
        representing[E] = t
        rep.note(
            "restriction at %s is %s"
            % (
                B.obj_labels[E],
                "representable at %s" % M.fibers[E].obj_labels[t]
                if t is not None
                else "not representable",
            )
        )
    return DayPresheafFamily(M, presheaves, days, comparisons, representing), rep
