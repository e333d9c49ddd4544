"""Patterns: finite categories with an inert/active factorization system,
elementary objects and a size functor to the pointed-sets category.

The base category of pointed sets is built here, truncated at a level N: its
objects are <0> .. <N> where <n> stands for {0, 1, .., n} pointed at 0, and a
morphism <n> -> <m> is the tuple of images of 1..n.  A morphism is inert when
every nonzero element of the target has exactly one preimage, and active when
nothing nonzero is sent to the basepoint.  Every pattern carries a size
functor into this category and its morphism classes must be compatible with
it; the checks in this module verify the factorization axioms and the
essentially unique inert lifts onto elementary objects.
"""

from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from . import kan
from .errors import MissingFactorization, TableError
from .fincat import CategoryBuilder, FinFunctor
from .report import Report


def _mask(values, length):
    out = np.array(values, dtype=bool)
    if len(out) != length:
        raise TableError("mask length %d, expected %d" % (len(out), length))
    out.setflags(write=False)
    return out


class PatternData:
    __slots__ = (
        "name",
        "cat",
        "inert",
        "active",
        "elementary",
        "size",
        "level",
        "_fact",
        "_lifts",
        "_int",
        "_el",
    )

    def __init__(self, name, cat, inert, active, elementary, size, level):
        self.name = name
        self.cat = cat
        self.inert = _mask(inert, cat.n_mor)
        self.active = _mask(active, cat.n_mor)
        self.elementary = _mask(elementary, cat.n_obj)
        self.size = size
        self.level = level
        self._fact = None
        self._lifts = {}
        self._int = None
        self._el = None
        if size.source is not cat:
            raise TableError("size functor must live on the pattern category")

    def obj_size(self, o):
        """Size of an object as an integer n (its image is <n>)."""
        return self.size.ob(o)

    def is_inert(self, m):
        return bool(self.inert[m])

    def is_active(self, m):
        return bool(self.active[m])

    def inert_ids(self, a, b):
        ids = self.cat.hom(a, b)
        return ids[self.inert[ids]]

    def active_ids(self, a, b):
        ids = self.cat.hom(a, b)
        return ids[self.active[ids]]

    def elementary_ids(self):
        return [o for o in range(self.cat.n_obj) if self.elementary[o]]

    def __repr__(self):
        return "PatternData(%s, level=%d)" % (self.name, self.level)

    # -- canonical factorizations ------------------------------------------

    def factorizations(self):
        """All (inert, active) pairs composing to each morphism."""
        if self._fact is not None:
            return self._fact
        C = self.cat
        fact = {m: [] for m in range(C.n_mor)}
        for (a, b, c), blk in C.comp.items():
            iner = self.inert_ids(a, b)
            act = self.active_ids(b, c)
            if len(iner) == 0 or len(act) == 0:
                continue
            lo_ab = C.hom_bounds(a, b)[0]
            lo_bc = C.hom_bounds(b, c)[0]
            sub = blk[np.ix_(act - lo_bc, iner - lo_ab)]
            for gi in range(len(act)):
                row = sub[gi]
                g = int(act[gi])
                for fi in range(len(iner)):
                    fact[int(row[fi])].append((int(iner[fi]), g))
        for m in fact:
            fact[m].sort()
        self._fact = fact
        return fact

    # -- elementary inert lifts --------------------------------------------

    def lifts(self, o, i):
        """Inert maps out of o onto an elementary object, lying over the
        i-th projection of size(o)."""
        key = (o, i)
        if key in self._lifts:
            return self._lifts[key]
        C = self.cat
        rho = rho_id(self.level, self.obj_size(o), i)
        out = []
        for e in self.elementary_ids():
            lo, hi = C.hom_bounds(o, e)
            for f in range(lo, hi):
                if self.inert[f] and self.size.mor(f) == rho:
                    out.append(f)
        out = tuple(out)
        self._lifts[key] = out
        return out

    def canonical_lift(self, o, i):
        out = self.lifts(o, i)
        if not out:
            raise MissingFactorization(o, "no elementary inert lift of %s at %d"
                                       % (self.cat.obj_labels[o], i))
        return out[0]


def factorize(P, m):
    """Canonical inert-then-active factorization of a morphism."""
    fact = P.factorizations()[m]
    if not fact:
        raise MissingFactorization(m, P.cat.mor_str(m))
    return fact[0]


# -- base category of pointed sets ------------------------------------------

_FSTAR_CACHE = {}
_FSTAR_INDEX = {}


def _pointed_label(data):
    return ",".join(str(v) for v in data) if data else "()"


def f_star(level):
    """Pointed sets <0>..<level>; cached per level."""
    if level in _FSTAR_CACHE:
        return _FSTAR_CACHE[level]
    if level < 0:
        raise TableError("level must be nonnegative")
    bld = CategoryBuilder("f_star(%d)" % level)
    for n in range(level + 1):
        bld.add_object("<%d>" % n, n)
    for n in range(level + 1):
        for m in range(level + 1):
            for data in iproduct(range(m + 1), repeat=n):
                bld.add_morphism(n, m, data, _pointed_label(data))

    def compose_pointed(gd, fd, a, b, c):
        return tuple(0 if v == 0 else gd[v - 1] for v in fd)

    identity = [tuple(range(1, n + 1)) for n in range(level + 1)]
    cat = bld.finish(identity, compose_data=compose_pointed)

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    index = {}
    for mid in range(cat.n_mor):
        data = cat.mor_data[mid]
        m = int(cat.tgt[mid])
        counts = [0] * (m + 1)
        for v in data:
            counts[v] += 1
        inert[mid] = all(counts[s] == 1 for s in range(1, m + 1))
        active[mid] = counts[0] == 0
        index[(int(cat.src[mid]), m, data)] = mid

    elementary = [n == 1 for n in range(level + 1)]
    size = FinFunctor.identity(cat)
    pat = PatternData("f_star(%d)" % level, cat, inert, active, elementary, size, level)
    _FSTAR_CACHE[level] = pat
    _FSTAR_INDEX[level] = index
    return pat


def fstar_mor_id(level, src, tgt, data):
    f_star(level)
    return _FSTAR_INDEX[level][(src, tgt, tuple(data))]


def rho_id(level, n, i):
    """The inert map <n> -> <1> keeping only the i-th element."""
    if not 1 <= i <= n:
        raise TableError("projection index %d out of range for <%d>" % (i, n))
    data = tuple(1 if k == i else 0 for k in range(1, n + 1))
    return fstar_mor_id(level, n, 1, data)


# -- derived patterns: inert part and elementary part -----------------------


def int_pattern(P):
    """Wide subcategory of inert maps, seen as a pattern whose active maps
    are the isomorphisms."""
    from .fincat import subcategory

    if P._int is not None:
        return P._int
    sub = subcategory(P.cat, None, P.inert, name="%s^int" % P.name)
    C = sub.cat
    iso_mask, _ = C.iso_info()
    size = FinFunctor(
        "size",
        C,
        P.size.target,
        P.size.obj_map,
        P.size.mor_map[sub.mor_to_old],
    )
    pat = PatternData(
        "%s^int" % P.name,
        C,
        np.ones(C.n_mor, dtype=bool),
        iso_mask,
        P.elementary,
        size,
        P.level,
    )
    P._int = (pat, sub.incl)
    return P._int


def el_pattern(P):
    """Elementary objects with the inert maps between them."""
    from .fincat import subcategory

    if P._el is not None:
        return P._el
    els = P.elementary_ids()
    sub = subcategory(P.cat, els, P.inert, name="%s^el" % P.name)
    C = sub.cat
    iso_mask, _ = C.iso_info()
    size = FinFunctor(
        "size",
        C,
        P.size.target,
        P.size.obj_map[sub.obj_to_old],
        P.size.mor_map[sub.mor_to_old],
    )
    pat = PatternData(
        "%s^el" % P.name,
        C,
        np.ones(C.n_mor, dtype=bool),
        iso_mask,
        np.ones(C.n_obj, dtype=bool),
        size,
        P.level,
    )
    P._el = (pat, sub.incl)
    return P._el


# -- validation -------------------------------------------------------------


def check_factorization_system(P):
    """Inert and active form an orthogonal factorization system."""
    rep = Report("factorization-system(%s)" % P.name)
    C = P.cat
    ids = C.identity
    rep.check("identities-inert", bool(P.inert[ids].all()))
    rep.check("identities-active", bool(P.active[ids].all()))

    iso_mask, _ = C.iso_info()
    both = P.inert & P.active
    bad = np.nonzero(iso_mask & ~both)[0]
    rep.check(
        "isos-in-both-classes",
        len(bad) == 0,
        counterexamples=tuple(C.mor_str(int(m)) for m in bad[:3]),
    )
    bad = np.nonzero(both & ~iso_mask)[0]
    rep.check(
        "both-classes-only-isos",
        len(bad) == 0,
        counterexamples=tuple(C.mor_str(int(m)) for m in bad[:3]),
    )

    for label, mask in (("inert", P.inert), ("active", P.active)):
        bad = None
        for (a, b, c), blk in C.comp.items():
            fs = C.hom(a, b)
            gs = C.hom(b, c)
            fsel = fs[mask[fs]]
            gsel = gs[mask[gs]]
            if len(fsel) == 0 or len(gsel) == 0:
                continue
            sub = blk[np.ix_(gsel - C.hom_bounds(b, c)[0],
                             fsel - C.hom_bounds(a, b)[0])]
            out = np.nonzero(~mask[sub])
            if len(out[0]):
                g = int(gsel[out[0][0]])
                f = int(fsel[out[1][0]])
                bad = "%s after %s" % (C.mor_str(g), C.mor_str(f))
                break
        rep.check(
            "%s-closed-under-composition" % label,
            bad is None,
            counterexamples=(bad,) if bad else (),
        )

    fact = P.factorizations()
    missing = [m for m in range(C.n_mor) if not fact[m]]
    rep.check(
        "factorization-exists",
        not missing,
        counterexamples=tuple(C.mor_str(m) for m in missing[:3]),
    )
    if missing:
        return rep

    bad = None
    for m in range(C.n_mor):
        a = int(C.src[m])
        b = int(C.tgt[m])
        i0, a0 = fact[m][0]
        mid0 = int(C.tgt[i0])
        loc_i0 = C.loc(i0)
        for (i1, a1) in fact[m]:
            mid1 = int(C.tgt[i1])
            lo, hi = C.hom_bounds(mid0, mid1)
            if lo == hi:
                found = np.empty(0, dtype=np.int64)
            else:
                left = C.comp[(a, mid0, mid1)][:, loc_i0] == i1
                right = C.comp[(mid0, mid1, b)][C.loc(a1), :] == a0
                found = np.nonzero(left & right)[0] + lo
            if len(found) != 1 or not iso_mask[found[0]]:
                bad = "%s: %d comparison maps between factorizations" % (
                    C.mor_str(m),
                    len(found),
                )
                break
        if bad:
            break
    rep.check(
        "factorization-essentially-unique",
        bad is None,
        counterexamples=(bad,) if bad else (),
    )
    return rep


def check_size_functor(P):
    """Size lands in the pointed-set pattern and preserves both classes."""
    rep = Report("size-functor(%s)" % P.name)
    FS = f_star(P.level)
    if P.size.target is not FS.cat:
        rep.check("target", False, counterexamples=("not the pointed-set category",))
        return rep
    rep.add(P.size.validate())
    if not rep.passed:
        return rep
    C = P.cat
    for label, mask, fsmask in (
        ("inert", P.inert, FS.inert),
        ("active", P.active, FS.active),
    ):
        sel = np.nonzero(mask)[0]
        bad = sel[~fsmask[P.size.mor_map[sel]]]
        rep.check(
            "%s-preserved" % label,
            len(bad) == 0,
            counterexamples=tuple(C.mor_str(int(m)) for m in bad[:3]),
        )
    return rep


def check_cartesian_pattern(P):
    """Full pattern validation apart from the associativity sweep of the
    underlying category (validate_category covers that)."""
    rep = Report("cartesian-pattern(%s)" % P.name)
    rep.add(check_size_functor(P))
    if not rep.passed:
        return rep
    rep.add(check_factorization_system(P))

    C = P.cat
    bad = [C.obj_labels[o] for o in P.elementary_ids() if P.obj_size(o) != 1]
    rep.check("elementary-size-one", not bad, counterexamples=tuple(bad[:3]))

    iso_mask, _ = C.iso_info()
    bad = ()
    for e in P.elementary_ids():
        for e2 in P.elementary_ids():
            lo, hi = C.hom_bounds(e, e2)
            for f in range(lo, hi):
                if P.inert[f] and not iso_mask[f]:
                    bad = (C.mor_str(f),)
                    break
            if bad:
                break
        if bad:
            break
    rep.check("elementary-inerts-invertible", not bad, counterexamples=bad)

    bad = None
    for o in range(C.n_obj):
        n = P.obj_size(o)
        for i in range(1, n + 1):
            L = P.lifts(o, i)
            if not L:
                bad = "no lift of %s at coordinate %d" % (C.obj_labels[o], i)
                break
            for f in L:
                for f2 in L:
                    e, e2 = int(C.tgt[f]), int(C.tgt[f2])
                    lo, hi = C.hom_bounds(e, e2)
                    conn = [
                        u
                        for u in range(lo, hi)
                        if P.inert[u] and C.compose(u, f) == f2
                    ]
                    if len(conn) != 1:
                        bad = "%d comparison maps between lifts of %s at %d" % (
                            len(conn),
                            C.obj_labels[o],
                            i,
                        )
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    rep.check(
        "elementary-lifts-contractible",
        bad is None,
        counterexamples=(bad,) if bad else (),
    )
    return rep


def check_pattern_morphism(P, Q, F):
    """F is a functor preserving inert, active and elementary parts, strictly
    compatible with the size functors."""
    rep = Report("pattern-morphism(%s)" % F.name)
    if F.source is not P.cat or F.target is not Q.cat:
        rep.check("typing", False, counterexamples=("wrong source or target",))
        return rep
    rep.add(F.validate())
    if not rep.passed:
        return rep

    sel = np.nonzero(P.inert)[0]
    bad = sel[~Q.inert[F.mor_map[sel]]]
    rep.check(
        "inert-preserved",
        len(bad) == 0,
        counterexamples=tuple(P.cat.mor_str(int(m)) for m in bad[:3]),
    )
    sel = np.nonzero(P.active)[0]
    bad = sel[~Q.active[F.mor_map[sel]]]
    rep.check(
        "active-preserved",
        len(bad) == 0,
        counterexamples=tuple(P.cat.mor_str(int(m)) for m in bad[:3]),
    )
    bad = [
        P.cat.obj_labels[o]
        for o in P.elementary_ids()
        if not Q.elementary[F.ob(o)]
    ]
    rep.check("elementary-preserved", not bad, counterexamples=tuple(bad[:3]))

    if P.level == Q.level:
        sizes_ok = np.array_equal(
            Q.size.obj_map[F.obj_map], P.size.obj_map
        ) and np.array_equal(Q.size.mor_map[F.mor_map], P.size.mor_map)
        rep.check("size-compatible", bool(sizes_ok))
    else:
        rep.check("size-compatible", False, counterexamples=("level mismatch",))
    return rep


@dataclass
class PatternMorphism:
    """A functor between patterns, bundled with both endpoints."""

    source: PatternData
    target: PatternData
    functor: FinFunctor

    @property
    def name(self):
        return self.functor.name

    def check(self):
        return check_pattern_morphism(self.source, self.target, self.functor)

    def then(self, other):
        if other.source is not self.target:
            raise TableError("pattern morphisms do not compose")
        return PatternMorphism(
            self.source, other.target, self.functor.then(other.functor)
        )


def identity_morphism(P):
    return PatternMorphism(P, P, FinFunctor.identity(P.cat))


# -- Segal condition --------------------------------------------------------


def segal_map(P, X, o):
    """Images of X(o) under the canonical elementary lifts, plus the size of
    the product they should biject onto."""
    n = P.obj_size(o)
    lifts = [P.canonical_lift(o, i) for i in range(1, n + 1)]
    tuples = [
        tuple(X.apply(f, x) for f in lifts) for x in range(X.sizes[o])
    ]
    prod = 1
    for f in lifts:
        prod *= X.sizes[int(P.cat.tgt[f])]
    return tuples, prod


def check_monoid(P, X):
    """X satisfies the Segal condition: X(O) -> prod of elementary values is
    a bijection for every object."""
    rep = Report("monoid(%s)" % X.name)
    rep.add(X.validate())
    if not rep.passed:
        return rep
    bad = []
    witnesses = []
    for o in range(P.cat.n_obj):
        n = P.obj_size(o)
        missing = [i for i in range(1, n + 1) if not P.lifts(o, i)]
        if missing:
            bad.append(
                "%s: no elementary lift at %d" % (P.cat.obj_labels[o], missing[0])
            )
            continue
        tuples, prod = segal_map(P, X, o)
        if len(set(tuples)) != len(tuples) or len(tuples) != prod:
            bad.append(
                "%s: %d elements against product %d"
                % (P.cat.obj_labels[o], len(tuples), prod)
            )
    if not bad:
        witnesses.append(
            "sizes " + ",".join(str(s) for s in X.sizes)
        )
    rep.check(
        "segal-condition",
        not bad,
        witnesses=tuple(witnesses),
        counterexamples=tuple(bad[:4]),
    )
    return rep


def check_operad_fibration(P):
    """Unique inert lifting along the size functor: every inert map out of
    the size of an object lifts essentially uniquely to an inert map."""
    rep = Report("operad-fibration(%s)" % P.name)
    C = P.cat
    FS = f_star(P.level)
    bad = None
    for o in range(C.n_obj):
        n = P.obj_size(o)
        for phi in range(FS.cat.n_mor):
            if int(FS.cat.src[phi]) != n or not FS.inert[phi]:
                continue
            lifts = []
            for o2 in range(C.n_obj):
                lo, hi = C.hom_bounds(o, o2)
                for f in range(lo, hi):
                    if P.inert[f] and P.size.mor(f) == phi:
                        lifts.append(f)
            if not lifts:
                bad = "%s has no inert lift of %s" % (
                    C.obj_labels[o],
                    FS.cat.mor_str(phi),
                )
                break
            for f in lifts:
                for f2 in lifts:
                    t, t2 = int(C.tgt[f]), int(C.tgt[f2])
                    lo, hi = C.hom_bounds(t, t2)
                    conn = [
                        u
                        for u in range(lo, hi)
                        if P.inert[u] and C.compose(u, f) == f2
                    ]
                    if len(conn) != 1:
                        bad = "%s over %s: %d comparison maps" % (
                            C.obj_labels[o],
                            FS.cat.mor_str(phi),
                            len(conn),
                        )
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    rep.check(
        "unique-inert-lifting",
        bad is None,
        counterexamples=(bad,) if bad else (),
    )
    return rep


def commutative_monoid_functor(level, table, name="monoid"):
    """Segal functor of a finite commutative monoid on the pointed-set
    pattern; table is the k x k multiplication table with unit 0.  The value
    at <n> is the set of n-tuples encoded in base k."""
    k = len(table)
    table = tuple(tuple(int(v) for v in row) for row in table)
    for x in range(k):
        assert table[0][x] == x and table[x][0] == x
        for y in range(k):
            assert table[x][y] == table[y][x]
            for z in range(k):
                assert table[table[x][y]][z] == table[x][table[y][z]]

    FS = f_star(level)
    C = FS.cat

    def decode(n, e):
        out = []
        for _ in range(n):
            e, r = divmod(e, k)
            out.append(r)
        return tuple(reversed(out))

    def encode(xs):
        e = 0
        for x in xs:
            e = e * k + x
        return e

    sizes = [k ** n for n in range(level + 1)]
    maps = []
    for mid in range(C.n_mor):
        n, m = int(C.src[mid]), int(C.tgt[mid])
        data = C.mor_data[mid]
        out = []
        for e in range(sizes[n]):
            xs = decode(n, e)
            ys = [0] * m
            for i, s in enumerate(data):
                if s > 0:
                    ys[s - 1] = table[ys[s - 1]][xs[i]]
            out.append(encode(ys))
        maps.append(tuple(out))
    return kan.SetFunctor(name, C, sizes, maps)


# -- the pattern of inert maps over pointed sets ----------------------------


@dataclass
class GammaResult:
    """Pattern whose objects are the inert pointed maps, with the source
    projection ev0 and size given by the target projection."""

    pattern: PatternData
    ev0: FinFunctor

    def obj_of(self, j):
        return self._obj_index[j]

    def mor_of(self, src, tgt, alpha, beta):
        # the same (alpha, beta) pair can occur in several hom-blocks
        return self._mor_index[(src, tgt, alpha, beta)]


_GAMMA_CACHE = {}


def gamma_times(level):
    if level in _GAMMA_CACHE:
        return _GAMMA_CACHE[level]
    FS = f_star(level)
    C = FS.cat
    bld = CategoryBuilder("gamma(%d)" % level)
    inert_ids = [j for j in range(C.n_mor) if FS.inert[j]]
    jdata = {}
    for j in inert_ids:
        m, n = int(C.src[j]), int(C.tgt[j])
        data = C.mor_data[j]
        pre = [0] * (n + 1)  # pre[s] = the unique preimage of s, 1-based
        for x, s in enumerate(data, start=1):
            if s > 0:
                pre[s] = x
        jdata[j] = (m, n, data, pre)
        bld.add_object("(%d>%d|%s)" % (m, n, _pointed_label(data)), j)

    for j in inert_ids:
        m, n, data, pre = jdata[j]
        ker = [x for x in range(1, m + 1) if data[x - 1] == 0]
        for j2 in inert_ids:
            m2, n2, data2, _ = jdata[j2]
            lo, hi = C.hom_bounds(m, m2)
            for alpha in range(lo, hi):
                adata = C.mor_data[alpha]

                def through(x):
                    v = adata[x - 1]
                    return 0 if v == 0 else data2[v - 1]

                if any(through(x) != 0 for x in ker):
                    continue
                bdata = tuple(through(pre[s]) for s in range(1, n + 1))
                beta = fstar_mor_id(level, n, n2, bdata)
                bld.add_morphism(
                    bld.obj_id(j),
                    bld.obj_id(j2),
                    (alpha, beta),
                    "(%s|%s)" % (C.mor_labels[alpha], C.mor_labels[beta]),
                )

    identity_data = [
        (C.identity_of(jdata[j][0]), C.identity_of(jdata[j][1]))
        for j in inert_ids
    ]
    bld.assign_ids()

    def compose_block(b_, a, b, c):
        # alpha determines the morphism within a block and insertion is
        # alpha-ascending, so composite ids come from a sorted search
        f_al = np.array([d[0] for d in b_.hom_data(a, b)], dtype=np.int64)
        g_al = np.array([d[0] for d in b_.hom_data(b, c)], dtype=np.int64)
        t_al = np.array([d[0] for d in b_.hom_data(a, c)], dtype=np.int64)
        ma = jdata[b_.obj_data[a]][0]
        mb = jdata[b_.obj_data[b]][0]
        mc = jdata[b_.obj_data[c]][0]
        blk = C.comp[(ma, mb, mc)]
        comp_al = blk[
            np.ix_(g_al - C.hom_bounds(mb, mc)[0], f_al - C.hom_bounds(ma, mb)[0])
        ]
        start = b_.block_range(a, c)[0]
        return (start + np.searchsorted(t_al, comp_al)).astype(np.int32)

    cat = bld.finish(identity_data, compose_block=compose_block)

    inert = np.array(
        [FS.inert[a] and FS.inert[b] for (a, b) in cat.mor_data], dtype=bool
    )
    active = np.array(
        [FS.active[a] and FS.active[b] for (a, b) in cat.mor_data], dtype=bool
    )
    el_obj = fstar_mor_id(level, 1, 1, (1,))
    elementary = np.array([j == el_obj for j in cat.obj_data], dtype=bool)
    size = FinFunctor(
        "ev1",
        cat,
        C,
        np.array([jdata[j][1] for j in cat.obj_data], dtype=np.int32),
        np.array([b for (_, b) in cat.mor_data], dtype=np.int32),
    )
    ev0 = FinFunctor(
        "ev0",
        cat,
        C,
        np.array([jdata[j][0] for j in cat.obj_data], dtype=np.int32),
        np.array([a for (a, _) in cat.mor_data], dtype=np.int32),
    )
    pat = PatternData("gamma(%d)" % level, cat, inert, active, elementary, size, level)
    out = GammaResult(pat, ev0)
    out._obj_index = {j: i for i, j in enumerate(cat.obj_data)}
    out._mor_index = {
        (int(cat.src[i]), int(cat.tgt[i])) + d: i
        for i, d in enumerate(cat.mor_data)
    }
    _GAMMA_CACHE[level] = out
    return out


# -- fiber product of a pattern with the inert-map pattern ------------------


@dataclass
class FiberProduct:
    """Pattern of pairs (object of P, inert map out of its size), with the
    two projections and the canonical section i_p at identity inert maps."""

    pattern: PatternData
    pr_p: FinFunctor
    pr_g: FinFunctor
    i_p: FinFunctor
    gamma: GammaResult

    def obj_of(self, o, j):
        return self._obj_index[(o, j)]


def fiber_product_with_gamma(P, name=None):
    G = gamma_times(P.level)
    GP = G.pattern
    GC = GP.cat
    C = P.cat
    FS = f_star(P.level)

    bld = CategoryBuilder(name or "%s*gamma" % P.name)
    for o in range(C.n_obj):
        m = P.obj_size(o)
        for go in range(GC.n_obj):
            if G.ev0.ob(go) == m:
                bld.add_object(
                    "(%s,%s)" % (C.obj_labels[o], GC.obj_labels[go]),
                    (o, go),
                )

    by_alpha = {}
    for h in range(GC.n_mor):
        by_alpha.setdefault(G.ev0.mor(h), []).append(h)

    for f in range(C.n_mor):
        alpha = P.size.mor(f)
        o, o2 = int(C.src[f]), int(C.tgt[f])
        for h in by_alpha.get(alpha, ()):
            s = bld.obj_id((o, int(GC.src[h])))
            t = bld.obj_id((o2, int(GC.tgt[h])))
            bld.add_morphism(
                s,
                t,
                (f, h),
                "(%s,%s)" % (C.mor_labels[f], GC.mor_labels[h]),
            )

    identity_data = [
        (C.identity_of(o), GC.identity_of(go)) for (o, go) in bld.obj_data
    ]
    bld.assign_ids()

    def compose_block(b_, a, b, c):
        # data pairs (f, h) are inserted f-major ascending, so the flat keys
        # f * |GC| + h are sorted and composite ids come from a sorted search
        def keys(x, y):
            data = b_.hom_data(x, y)
            f = np.array([d[0] for d in data], dtype=np.int64)
            h = np.array([d[1] for d in data], dtype=np.int64)
            return f, h, f * GC.n_mor + h

        f_ab, h_ab, _ = keys(a, b)
        f_bc, h_bc, _ = keys(b, c)
        _, _, key_ac = keys(a, c)
        pa, pb, pc = (bld.obj_data[x][0] for x in (a, b, c))
        ga, gb, gc = (bld.obj_data[x][1] for x in (a, b, c))
        f3 = C.comp[(pa, pb, pc)][
            np.ix_(f_bc - C.hom_bounds(pb, pc)[0],
                   f_ab - C.hom_bounds(pa, pb)[0])
        ].astype(np.int64)
        h3 = GC.comp[(ga, gb, gc)][
            np.ix_(h_bc - GC.hom_bounds(gb, gc)[0],
                   h_ab - GC.hom_bounds(ga, gb)[0])
        ].astype(np.int64)
        start = b_.block_range(a, c)[0]
        return (
            start + np.searchsorted(key_ac, f3 * GC.n_mor + h3)
        ).astype(np.int32)

    cat = bld.finish(identity_data, compose_block=compose_block)

    inert = np.array(
        [P.inert[f] and GP.inert[h] for (f, h) in cat.mor_data], dtype=bool
    )
    active = np.array(
        [P.active[f] and GP.active[h] for (f, h) in cat.mor_data], dtype=bool
    )
    elementary = np.array(
        [P.elementary[o] and GP.elementary[go] for (o, go) in cat.obj_data],
        dtype=bool,
    )
    size = FinFunctor(
        "size",
        cat,
        FS.cat,
        GP.size.obj_map[np.array([go for (_, go) in cat.obj_data])],
        GP.size.mor_map[np.array([h for (_, h) in cat.mor_data])],
    )
    pat = PatternData(
        name or "%s*gamma" % P.name, cat, inert, active, elementary, size, P.level
    )

    pr_p = FinFunctor(
        "pr-left",
        cat,
        C,
        np.array([o for (o, _) in cat.obj_data], dtype=np.int32),
        np.array([f for (f, _) in cat.mor_data], dtype=np.int32),
    )
    pr_g = FinFunctor(
        "pr-right",
        cat,
        GC,
        np.array([go for (_, go) in cat.obj_data], dtype=np.int32),
        np.array([h for (_, h) in cat.mor_data], dtype=np.int32),
    )

    obj_index = {d: i for i, d in enumerate(cat.obj_data)}
    mor_index = {d: i for i, d in enumerate(cat.mor_data)}
    iobj = []
    for o in range(C.n_obj):
        m = P.obj_size(o)
        go = G.obj_of(FS.cat.identity_of(m))
        iobj.append(obj_index[(o, go)])
    imor = []
    for f in range(C.n_mor):
        alpha = P.size.mor(f)
        src = G.obj_of(FS.cat.identity_of(P.obj_size(int(C.src[f]))))
        tgt = G.obj_of(FS.cat.identity_of(P.obj_size(int(C.tgt[f]))))
        h = G.mor_of(src, tgt, alpha, alpha)
        imor.append(mor_index[(f, h)])
    i_p = FinFunctor(
        "section",
        C,
        cat,
        np.array(iobj, dtype=np.int32),
        np.array(imor, dtype=np.int32),
    )

    out = FiberProduct(pat, pr_p, pr_g, i_p, G)
    out._obj_index = obj_index
    return out


@dataclass
class RoundTrip:
    report: Report
    fiber: FiberProduct
    extended: kan.RanResult


def monoid_gamma_roundtrip(P, X):
    """Extend a monoid on P to the fiber product pattern along the section
    and check the extension is a monoid restricting back to X."""
    rep = Report("monoid-roundtrip(%s)" % X.name)
    rep.add(check_monoid(P, X))
    FP = fiber_product_with_gamma(P)
    R = kan.ran(X, FP.i_p, name="%s-ext" % X.name)
    rep.add(check_monoid(FP.pattern, R.functor))

    back = kan.precompose(R.functor, FP.i_p)
    counit = kan.SetNat(back, X, R.counit)
    nat = counit.validate()
    rep.add(nat)
    rep.check("restriction-recovers-monoid", counit.is_bijection())

    sizes = []
    for o in range(P.cat.n_obj):
        fo = FP.i_p.ob(o)
        sizes.append(
            "%s:%d" % (FP.pattern.cat.obj_labels[fo], R.functor.sizes[fo])
        )
    rep.note("extension sizes at sections " + " ".join(sizes))
    return RoundTrip(rep, FP, R)
