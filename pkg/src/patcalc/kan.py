"""Set-valued functors on finite categories and their (co)limits and Kan
extensions.

A SetFunctor assigns a finite set {0..n-1} to every object and a tuple-encoded
map to every morphism.  Everything downstream (colimits, limits, pointwise Kan
extensions) works with explicit elements, so every universal object produced
here carries representatives that later layers can exhibit as witnesses.
"""

from dataclasses import dataclass

import numpy as np

from .errors import TableError
from .fincat import CategoryBuilder, FinFunctor
from .report import Report


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return ri
        if rj < ri:
            ri, rj = rj, ri
        self.parent[rj] = ri
        return ri

    def classes(self):
        """Classes as tuples of members, ordered by smallest member."""
        groups = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return tuple(tuple(groups[r]) for r in sorted(groups))


class SetFunctor:
    __slots__ = ("name", "cat", "sizes", "maps")

    def __init__(self, name, cat, sizes, maps):
        self.name = name
        self.cat = cat
        self.sizes = tuple(int(s) for s in sizes)
        self.maps = tuple(tuple(int(v) for v in m) for m in maps)
        if len(self.sizes) != cat.n_obj or len(self.maps) != cat.n_mor:
            raise TableError("set functor tables disagree with category")
        for m in range(cat.n_mor):
            a, b = int(cat.src[m]), int(cat.tgt[m])
            if len(self.maps[m]) != self.sizes[a]:
                raise TableError("map %s has wrong domain size" % cat.mor_str(m))
            if any(not (0 <= v < self.sizes[b]) for v in self.maps[m]):
                raise TableError("map %s leaves its codomain" % cat.mor_str(m))

    def map(self, m):
        return self.maps[m]

    def apply(self, m, x):
        return self.maps[m][x]

    def size(self, o):
        return self.sizes[o]

    @property
    def total_size(self):
        return sum(self.sizes)

    def offsets(self):
        out = [0]
        for s in self.sizes:
            out.append(out[-1] + s)
        return out

    def validate(self):
        rep = Report("set-functor-valid(%s)" % self.name)
        C = self.cat
        ok_id = True
        bad = ()
        for o in range(C.n_obj):
            if self.maps[C.identity_of(o)] != tuple(range(self.sizes[o])):
                ok_id, bad = False, (C.obj_labels[o],)
                break
        rep.check("identities", ok_id, counterexamples=bad)
        bad = ()
        for (a, b, c), blk in C.comp.items():
            lo_ab, hi_ab = C.hom_bounds(a, b)
            lo_bc, hi_bc = C.hom_bounds(b, c)
            for g in range(lo_bc, hi_bc):
                mg = self.maps[g]
                for f in range(lo_ab, hi_ab):
                    mf = self.maps[f]
                    gf = int(blk[g - lo_bc, f - lo_ab])
                    if self.maps[gf] != tuple(mg[x] for x in mf):
                        bad = ("%s after %s" % (C.mor_str(g), C.mor_str(f)),)
                        break
                if bad:
                    break
            if bad:
                break
        rep.check("composition", not bad, counterexamples=bad)
        return rep

    def __repr__(self):
        return "SetFunctor(%s on %s, sizes=%s)" % (self.name, self.cat.name, list(self.sizes))


def constant_functor(cat, n, name=None):
    sizes = [n] * cat.n_obj
    maps = [tuple(range(n))] * cat.n_mor
    return SetFunctor(name or "const%d" % n, cat, sizes, maps)


def representable(cat, o, name=None):
    """Covariant hom-functor Hom(o, -), elements indexed within each hom block."""
    sizes = [cat.hom_size(o, b) for b in range(cat.n_obj)]
    maps = []
    for m in range(cat.n_mor):
        b, c = int(cat.src[m]), int(cat.tgt[m])
        lo_b, _ = cat.hom_bounds(o, b)
        lo_c, _ = cat.hom_bounds(o, c)
        maps.append(
            tuple(cat.compose(m, lo_b + x) - lo_c for x in range(sizes[b]))
        )
    return SetFunctor(name or "hom(%s,-)" % cat.obj_labels[o], cat, sizes, maps)


def precompose(F, K, name=None):
    """F ∘ K for K : A -> B and F a SetFunctor on B."""
    if K.target is not F.cat:
        raise TableError("precompose needs K into the functor's category")
    sizes = [F.sizes[K.ob(a)] for a in range(K.source.n_obj)]
    maps = [F.maps[K.mor(m)] for m in range(K.source.n_mor)]
    return SetFunctor(name or "%s.%s" % (F.name, K.name), K.source, sizes, maps)


def pointwise_product(F, G, name=None):
    """Objectwise product; element (x, y) at o is encoded x * G.size(o) + y."""
    if F.cat is not G.cat:
        raise TableError("pointwise product needs a shared category")
    C = F.cat
    sizes = [F.sizes[o] * G.sizes[o] for o in range(C.n_obj)]
    maps = []
    for m in range(C.n_mor):
        b = int(C.tgt[m])
        fm, gm = F.maps[m], G.maps[m]
        gb = G.sizes[b]
        maps.append(
            tuple(
                fm[x] * gb + gm[y]
                for x in range(F.sizes[int(C.src[m])])
                for y in range(G.sizes[int(C.src[m])])
            )
        )
    return SetFunctor(name or "(%s*%s)" % (F.name, G.name), C, sizes, maps)


def pair_encode(G_size, x, y):
    return x * G_size + y


def pair_decode(G_size, v):
    return divmod(v, G_size)


@dataclass
class SetNat:
    """Natural transformation between SetFunctors on one category."""

    source: SetFunctor
    target: SetFunctor
    components: tuple  # per object, tuple mapping source elements to target

    def at(self, o, x):
        return self.components[o][x]

    def validate(self):
        rep = Report("natural(%s->%s)" % (self.source.name, self.target.name))
        F, G = self.source, self.target
        C = F.cat
        ok = True
        bad = ()
        for o in range(C.n_obj):
            comp = self.components[o]
            if len(comp) != F.sizes[o] or any(
                not (0 <= v < G.sizes[o]) for v in comp
            ):
                ok, bad = False, ("component at %s ill-typed" % C.obj_labels[o],)
                break
        rep.check("typing", ok, counterexamples=bad)
        if not ok:
            return rep
        bad = ()
        for m in range(C.n_mor):
            a, b = int(C.src[m]), int(C.tgt[m])
            ca, cb = self.components[a], self.components[b]
            for x in range(F.sizes[a]):
                if cb[F.apply(m, x)] != G.apply(m, ca[x]):
                    bad = ("square at %s, x=%d" % (C.mor_str(m), x),)
                    break
            if bad:
                break
        rep.check("naturality", not bad, counterexamples=bad)
        return rep

    def is_bijection(self):
        return all(
            len(set(c)) == len(c) == self.target.sizes[o]
            for o, c in enumerate(self.components)
        )


# -- colimits and limits ----------------------------------------------------


@dataclass
class Colimit:
    """Colimit of a SetFunctor: classes of elements (obj, x) under the
    relation generated by x ~ F(m)(x)."""

    classes: tuple  # tuple of tuples of (obj, x)
    index: dict  # (obj, x) -> class position

    @property
    def size(self):
        return len(self.classes)

    def class_of(self, o, x):
        return self.index[(o, x)]

    def representative(self, k):
        return self.classes[k][0]


def colimit(F):
    C = F.cat
    off = F.offsets()
    uf = UnionFind(F.total_size)
    for m in range(C.n_mor):
        a, b = int(C.src[m]), int(C.tgt[m])
        fm = F.maps[m]
        for x in range(F.sizes[a]):
            uf.union(off[a] + x, off[b] + fm[x])

    def decode(gid):
        o = 0
        while off[o + 1] <= gid:
            o += 1
        return (o, gid - off[o])

    classes = tuple(tuple(decode(g) for g in cls) for cls in uf.classes())
    index = {}
    for k, cls in enumerate(classes):
        for el in cls:
            index[el] = k
    return Colimit(classes, index)


@dataclass
class Limit:
    """Limit of a SetFunctor: all compatible tuples, one value per object."""

    elements: tuple  # tuple of tuples, position o holds the value at object o

    @property
    def size(self):
        return len(self.elements)

    def project(self, k, o):
        return self.elements[k][o]


def limit(F):
    C = F.cat
    n = C.n_obj
    if n == 0:
        return Limit(((),))
    order = list(range(n))
    solutions = []
    assign = [None] * n

    def candidates(i):
        o = order[i]
        for j in range(i):
            p = order[j]
            lo, hi = C.hom_bounds(p, o)
            if hi > lo:
                # value determined by any one morphism from an assigned object
                return [F.apply(lo, assign[p])]
        return list(range(F.sizes[o]))

    def consistent(i, v):
        o = order[i]
        for j in range(i + 1):
            p = order[j]
            xp = v if p == o else assign[p]
            lo, hi = C.hom_bounds(p, o)
            for m in range(lo, hi):
                if F.apply(m, xp) != v:
                    return False
            if p != o:
                lo, hi = C.hom_bounds(o, p)
                for m in range(lo, hi):
                    if F.apply(m, v) != xp:
                        return False
        return True

    def extend(i):
        if i == n:
            solutions.append(tuple(assign))
            return
        o = order[i]
        for v in candidates(i):
            if consistent(i, v):
                assign[o] = v
                extend(i + 1)
                assign[o] = None

    extend(0)
    return Limit(tuple(sorted(solutions)))


# -- Kan extensions ---------------------------------------------------------


@dataclass
class LanResult:
    """Pointwise left Kan extension of F along K.

    At each target object b the value is the set of classes of triples
    (a, t, x) with t : K a -> b and x in F(a), modulo the zig-zag relation;
    `classes[b]` lists each class as a tuple of triples, `reps[b][k]` is the
    least triple of class k, and `unit` gives the comparison F -> Lan ∘ K.
    """

    functor: SetFunctor
    classes: tuple
    index: tuple  # per b, dict (a, t, x) -> class
    unit: tuple  # per source object a, tuple over x of class at K(a)

    def class_of(self, b, a, t, x):
        return self.index[b][(a, t, x)]

    def rep_of(self, b, k):
        return self.classes[b][k][0]


def lan(F, K, name=None):
    """Left Kan extension along K : A -> B of F : A -> Set."""
    if K.source is not F.cat:
        raise TableError("lan needs F on the source of K")
    A, B = K.source, K.target

    triples = []
    tri_index = []
    for b in range(B.n_obj):
        tb = []
        for a in range(A.n_obj):
            lo, hi = B.hom_bounds(K.ob(a), b)
            for t in range(lo, hi):
                for x in range(F.sizes[a]):
                    tb.append((a, t, x))
        tb.sort()
        triples.append(tb)
        tri_index.append({tr: i for i, tr in enumerate(tb)})

    classes = []
    index = []
    for b in range(B.n_obj):
        uf = UnionFind(len(triples[b]))
        for w in range(A.n_mor):
            a, a2 = int(A.src[w]), int(A.tgt[w])
            kw = K.mor(w)
            lo, hi = B.hom_bounds(K.ob(a2), b)
            for t2 in range(lo, hi):
                t = B.compose(t2, kw)
                for x in range(F.sizes[a]):
                    uf.union(
                        tri_index[b][(a, t, x)],
                        tri_index[b][(a2, t2, F.apply(w, x))],
                    )
        cls = tuple(
            tuple(triples[b][i] for i in members) for members in uf.classes()
        )
        classes.append(cls)
        idx = {}
        for k, members in enumerate(cls):
            for tr in members:
                idx[tr] = k
        index.append(idx)

    sizes = [len(c) for c in classes]
    maps = []
    for u in range(B.n_mor):
        b, b2 = int(B.src[u]), int(B.tgt[u])
        out = []
        for k in range(sizes[b]):
            a, t, x = classes[b][k][0]
            out.append(index[b2][(a, B.compose(u, t), x)])
        maps.append(tuple(out))
    functor = SetFunctor(name or "lan(%s)" % F.name, B, sizes, maps)

    unit = tuple(
        tuple(
            index[K.ob(a)][(a, B.identity_of(K.ob(a)), x)]
            for x in range(F.sizes[a])
        )
        for a in range(A.n_obj)
    )
    return LanResult(functor, tuple(classes), tuple(index), unit)


@dataclass
class RanResult:
    """Pointwise right Kan extension of F along K.

    At each b the value is the set of compatible families over the pairs
    (a, t : b -> K a); `pairs[b]` fixes the coordinate order and
    `elements[b][k]` is the k-th family as a tuple of values.  `counit` gives
    the comparison Ran ∘ K -> F.
    """

    functor: SetFunctor
    pairs: tuple
    elements: tuple
    index: tuple  # per b, dict family -> position
    counit: tuple  # per source object a, tuple over families at K(a)

    def family(self, b, k):
        return self.elements[b][k]

    def value_at(self, b, k, a, t):
        return self.elements[b][k][self.pairs[b].index((a, t))]


def ran(F, K, name=None):
    """Right Kan extension along K : A -> B of F : A -> Set."""
    if K.source is not F.cat:
        raise TableError("ran needs F on the source of K")
    A, B = K.source, K.target

    pairs = []
    pair_index = []
    for b in range(B.n_obj):
        pb = []
        for a in range(A.n_obj):
            lo, hi = B.hom_bounds(b, K.ob(a))
            for t in range(lo, hi):
                pb.append((a, t))
        pb.sort()
        pairs.append(pb)
        pair_index.append({p: i for i, p in enumerate(pb)})

    elements = []
    index = []
    for b in range(B.n_obj):
        pb = pairs[b]
        np_ = len(pb)
        constraints = []  # (i, w, j): F(w)(phi[i]) == phi[j]
        for i, (a, t) in enumerate(pb):
            for w in range(A.n_mor):
                if int(A.src[w]) != a:
                    continue
                a2 = int(A.tgt[w])
                t2 = B.compose(K.mor(w), t)
                constraints.append((i, w, pair_index[b][(a2, t2)]))
        sols = []
        fam = [None] * np_
        by_target = [[] for _ in range(np_)]
        closing = [[] for _ in range(np_)]  # constraints fully decided at step i
        for (ci, w, cj) in constraints:
            by_target[cj].append((ci, w))
            closing[max(ci, cj)].append((ci, w, cj))

        def extend(i):
            if i == np_:
                sols.append(tuple(fam))
                return
            a, _ = pb[i]
            cands = range(F.sizes[a])
            for (ci, w) in by_target[i]:
                if ci < i:
                    # value forced by an already decided coordinate
                    cands = (F.apply(w, fam[ci]),)
                    break
            for v in cands:
                fam[i] = v
                if all(F.apply(w, fam[ci]) == fam[cj] for (ci, w, cj) in closing[i]):
                    extend(i + 1)
            fam[i] = None

        extend(0)
        sols = sorted(sols)
        elements.append(tuple(sols))
        index.append({s: k for k, s in enumerate(sols)})

    sizes = [len(e) for e in elements]
    maps = []
    for u in range(B.n_mor):
        b, b2 = int(B.src[u]), int(B.tgt[u])
        out = []
        for k in range(sizes[b]):
            fam = elements[b][k]
            fam2 = tuple(
                fam[pair_index[b][(a, B.compose(t, u))]]
                for (a, t) in pairs[b2]
            )
            out.append(index[b2][fam2])
        maps.append(tuple(out))
    functor = SetFunctor(name or "ran(%s)" % F.name, B, sizes, maps)

    counit = tuple(
        tuple(
            elements[K.ob(a)][k][
                pair_index[K.ob(a)][(a, B.identity_of(K.ob(a)))]
            ]
            for k in range(sizes[K.ob(a)])
        )
        for a in range(A.n_obj)
    )
    return RanResult(functor, tuple(pairs), tuple(elements), tuple(index), counit)


# -- category of elements and cofinality ------------------------------------


@dataclass
class ElementsCat:
    cat: object
    proj: FinFunctor


def elements(F, name=None):
    """Category of elements of a SetFunctor; objects are (obj, x)."""
    C = F.cat
    bld = CategoryBuilder(name or "el(%s)" % F.name)
    for o in range(C.n_obj):
        for x in range(F.sizes[o]):
            bld.add_object("(%s,%d)" % (C.obj_labels[o], x), (o, x))
    for m in range(C.n_mor):
        a, b = int(C.src[m]), int(C.tgt[m])
        for x in range(F.sizes[a]):
            bld.add_morphism(
                bld.obj_id((a, x)),
                bld.obj_id((b, F.apply(m, x))),
                (m, x),
                "%s@%d" % (C.mor_labels[m], x),
            )
    identity_data = [
        (C.identity_of(o), x) for (o, x) in bld.obj_data
    ]

    def compose_el(gd, fd, a, b, c):
        return (C.compose(gd[0], fd[0]), fd[1])

    cat = bld.finish(identity_data, compose_data=compose_el)
    proj = FinFunctor(
        "pr",
        cat,
        C,
        np.array([o for (o, _) in cat.obj_data], dtype=np.int32),
        np.array([m for (m, _) in cat.mor_data], dtype=np.int32),
    )
    return ElementsCat(cat, proj)


def check_cofinal(K):
    """K : A -> B is cofinal iff every coslice b ↓ K is nonempty and
    connected; colimits restricted along such K agree."""
    A, B = K.source, K.target
    rep = Report("cofinal(%s)" % K.name)
    for b in range(B.n_obj):
        objs = []
        for a in range(A.n_obj):
            lo, hi = B.hom_bounds(b, K.ob(a))
            for t in range(lo, hi):
                objs.append((a, t))
        if not objs:
            rep.check(
                "coslice(%s)" % B.obj_labels[b],
                False,
                counterexamples=("empty coslice",),
            )
            continue
        pos = {p: i for i, p in enumerate(objs)}
        uf = UnionFind(len(objs))
        for w in range(A.n_mor):
            a, a2 = int(A.src[w]), int(A.tgt[w])
            kw = K.mor(w)
            lo, hi = B.hom_bounds(b, K.ob(a))
            for t in range(lo, hi):
                uf.union(pos[(a, t)], pos[(a2, B.compose(kw, t))])
        n_comp = len(uf.classes())
        rep.check(
            "coslice(%s)" % B.obj_labels[b],
            n_comp == 1,
            counterexamples=("%d components" % n_comp,) if n_comp != 1 else (),
        )
    return rep


def set_functor_equal(F, G):
    return F.cat is G.cat and F.sizes == G.sizes and F.maps == G.maps
