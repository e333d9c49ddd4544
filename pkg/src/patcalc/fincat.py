"""Finite categories as fully materialised tables.

A FinCat stores every object, every morphism and the whole composition table.
Objects and morphisms are opaque contiguous integer ids with separate label
maps; builders that care about what a morphism *is* keep the canonical data in
`obj_data` / `mor_data` (hashable tuples) and recover ids through their own
indexes.

Layout invariants (enforced at construction):

* morphism ids are grouped so every hom-set hom(a, b) is one contiguous id
  range, recorded in `block_bounds[(a, b)]`;
* composition is stored per object triple: `comp[(a, b, c)]` is an int32
  matrix whose (g_loc, f_loc) entry is the global id of g∘f, for f in
  hom(a, b) and g in hom(b, c), and these keys exist exactly when both
  hom-sets are nonempty.

The associativity sweep is the only operation that touches all composable
triples; it is dispatched to the `_kernel` package (compiled extension when
built, numpy fallback otherwise).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernel
from .errors import TableError
from .report import Report


def _frozen(arr, dtype=np.int32):
    out = np.ascontiguousarray(arr, dtype=dtype)
    out.setflags(write=False)
    return out


class FinCat:
    __slots__ = (
        "name",
        "n_obj",
        "obj_labels",
        "mor_labels",
        "src",
        "tgt",
        "identity",
        "block_bounds",
        "comp",
        "obj_data",
        "mor_data",
        "_iso_cache",
        "_index_cache",
    )

    def __init__(
        self,
        name,
        obj_labels,
        src,
        tgt,
        identity,
        comp,
        mor_labels=None,
        obj_data=None,
        mor_data=None,
    ):
        self.name = name
        self.obj_labels = tuple(obj_labels)
        self.n_obj = len(self.obj_labels)
        self.src = _frozen(src)
        self.tgt = _frozen(tgt)
        self.identity = _frozen(identity)
        if mor_labels is None:
            mor_labels = tuple("m%d" % i for i in range(len(self.src)))
        self.mor_labels = tuple(mor_labels)
        self.obj_data = tuple(obj_data) if obj_data is not None else None
        self.mor_data = tuple(mor_data) if mor_data is not None else None
        self._iso_cache = None
        self._index_cache = None

        n = self.n_mor
        if len(self.tgt) != n or len(self.mor_labels) != n:
            raise TableError("morphism arrays disagree in length")
        if len(self.identity) != self.n_obj:
            raise TableError("one identity per object required")

        bounds = {}
        i = 0
        while i < n:
            a, b = int(self.src[i]), int(self.tgt[i])
            j = i
            while j < n and int(self.src[j]) == a and int(self.tgt[j]) == b:
                j += 1
            if (a, b) in bounds:
                raise TableError("hom(%d,%d) is not a contiguous id range" % (a, b))
            bounds[(a, b)] = (i, j)
            i = j
        self.block_bounds = bounds

        self.comp = {}
        for key, blk in comp.items():
            a, b, c = key
            blk = _frozen(blk)
            n_ab = self._count(a, b)
            n_bc = self._count(b, c)
            if blk.shape != (n_bc, n_ab):
                raise TableError("composition block %s has wrong shape" % (key,))
            self.comp[key] = blk
        for (a, b) in bounds:
            for (b2, c) in bounds:
                if b2 == b and (a, b, c) not in self.comp:
                    raise TableError("missing composition block (%d,%d,%d)" % (a, b, c))

    # -- basic access -------------------------------------------------------

    @property
    def n_mor(self):
        return len(self.src)

    def hom_bounds(self, a, b):
        return self.block_bounds.get((a, b), (0, 0))

    def hom(self, a, b):
        lo, hi = self.hom_bounds(a, b)
        return np.arange(lo, hi, dtype=np.int32)

    def hom_size(self, a, b):
        lo, hi = self.hom_bounds(a, b)
        return hi - lo

    def _count(self, a, b):
        lo, hi = self.hom_bounds(a, b)
        return hi - lo

    def loc(self, m):
        lo, _ = self.hom_bounds(int(self.src[m]), int(self.tgt[m]))
        return int(m) - lo

    def identity_of(self, o):
        return int(self.identity[o])

    def compose(self, g, f):
        """Composite g∘f (f first, then g)."""
        a, b = int(self.src[f]), int(self.tgt[f])
        c = int(self.tgt[g])
        if int(self.src[g]) != b:
            raise TableError(
                "cannot compose %s after %s" % (self.mor_str(g), self.mor_str(f))
            )
        blk = self.comp[(a, b, c)]
        return int(blk[self.loc(g), self.loc(f)])

    def compose_many(self, gs, fs):
        gs = np.asarray(gs, dtype=np.int64)
        fs = np.asarray(fs, dtype=np.int64)
        out = np.empty(len(fs), dtype=np.int64)
        for i in range(len(fs)):
            out[i] = self.compose(int(gs[i]), int(fs[i]))
        return out

    def obj_str(self, o):
        return self.obj_labels[o]

    def mor_str(self, m):
        m = int(m)
        return "%s:%s->%s" % (
            self.mor_labels[m],
            self.obj_labels[int(self.src[m])],
            self.obj_labels[int(self.tgt[m])],
        )

    def __repr__(self):
        return "FinCat(%s, %d objects, %d morphisms)" % (
            self.name,
            self.n_obj,
            self.n_mor,
        )

    def obj_index(self):
        """obj_data -> object id; requires obj_data."""
        return self._indexes()[0]

    def data_index(self):
        """(src, tgt, mor_data) -> morphism id; requires mor_data."""
        return self._indexes()[1]

    def _indexes(self):
        if self._index_cache is None:
            if self.obj_data is None or self.mor_data is None:
                raise TableError("%s carries no canonical data" % self.name)
            by_obj = {d: o for o, d in enumerate(self.obj_data)}
            by_mor = {
                (int(self.src[m]), int(self.tgt[m]), self.mor_data[m]): m
                for m in range(self.n_mor)
            }
            self._index_cache = (by_obj, by_mor)
        return self._index_cache

    # -- isomorphisms -------------------------------------------------------

    def iso_info(self):
        """(mask, inverse): mask[m] iff m invertible, inverse[m] its inverse."""
        if self._iso_cache is not None:
            return self._iso_cache
        n = self.n_mor
        mask = np.zeros(n, dtype=bool)
        inverse = np.full(n, -1, dtype=np.int32)
        for (a, b), (lo, hi) in self.block_bounds.items():
            if (b, a) not in self.block_bounds:
                continue
            lo2, hi2 = self.block_bounds[(b, a)]
            gf = self.comp[(a, b, a)]  # (n_ba, n_ab): g∘f for f: a->b, g: b->a
            fg = self.comp[(b, a, b)]  # (n_ab, n_ba): f∘g
            id_a, id_b = self.identity_of(a), self.identity_of(b)
            pairs = np.argwhere((gf == id_a) & (fg.T == id_b))
            for g_loc, f_loc in pairs:
                f = lo + int(f_loc)
                g = lo2 + int(g_loc)
                mask[f] = True
                inverse[f] = g
        inverse.setflags(write=False)
        mask.setflags(write=False)
        self._iso_cache = (mask, inverse)
        return self._iso_cache

    def is_iso(self, m):
        return bool(self.iso_info()[0][m])

    def inverse(self, m):
        mask, inv = self.iso_info()
        if not mask[m]:
            raise TableError("%s is not invertible" % self.mor_str(m))
        return int(inv[m])


# -- construction -----------------------------------------------------------


class CategoryBuilder:
    """Accumulates objects and per-hom morphism data, then assigns contiguous
    ids and builds the composition table."""

    def __init__(self, name):
        self.name = name
        self.obj_labels = []
        self.obj_data = []
        self._obj_index = {}
        self._hom = {}  # (a,b) -> list of (data, label)
        self._frozen = False

    def add_object(self, label, data=None):
        if data is None:
            data = label
        if data in self._obj_index:
            raise TableError("duplicate object data %r" % (data,))
        oid = len(self.obj_labels)
        self._obj_index[data] = oid
        self.obj_labels.append(label)
        self.obj_data.append(data)
        return oid

    def obj_id(self, data):
        return self._obj_index[data]

    def add_morphism(self, a, b, data, label=None):
        self._hom.setdefault((a, b), []).append((data, label))

    # id assignment ---------------------------------------------------------

    def assign_ids(self):
        """Freeze objects/morphisms and hand out contiguous ids per block."""
        if self._frozen:
            return
        self._frozen = True
        self.src = []
        self.tgt = []
        self.mor_labels = []
        self.mor_data = []
        self._mor_index = {}  # (a,b) -> {data: id}
        self._block_bounds = {}
        for (a, b) in sorted(self._hom):
            index = {}
            start = len(self.src)
            for data, label in self._hom[(a, b)]:
                if data in index:
                    raise TableError("duplicate morphism data %r in hom" % (data,))
                mid = len(self.src)
                index[data] = mid
                self.src.append(a)
                self.tgt.append(b)
                self.mor_data.append(data)
                self.mor_labels.append(label if label is not None else "m%d" % mid)
            self._mor_index[(a, b)] = index
            self._block_bounds[(a, b)] = (start, len(self.src))

    def mor_id(self, a, b, data):
        return self._mor_index[(a, b)][data]

    def block_range(self, a, b):
        return self._block_bounds.get((a, b), (0, 0))

    def hom_data(self, a, b):
        return [d for d, _ in self._hom.get((a, b), [])]

    def finish(self, identity_data, compose_data=None, compose_block=None):
        """Build the FinCat.

        identity_data: per-object canonical data of the identity morphism.
        compose_data(g_data, f_data, a, b, c) -> composite data; or
        compose_block(builder, a, b, c) -> int32 matrix of global ids.
        """
        self.assign_ids()
        n_obj = len(self.obj_labels)
        identity = [
            self.mor_id(o, o, identity_data[o]) for o in range(n_obj)
        ]
        comp = {}
        keys = sorted(self._hom)
        by_src = {}
        for (a, b) in keys:
            by_src.setdefault(a, []).append((a, b))
        for (a, b) in keys:
            for (b2, c) in by_src.get(b, []):
                if compose_block is not None:
                    blk = compose_block(self, a, b, c)
                else:
                    fs = self._hom[(a, b)]
                    gs = self._hom[(b, c)]
                    target = self._mor_index.get((a, c))
                    if target is None:
                        raise TableError(
                            "composable pair exists but hom(%d,%d) is empty" % (a, c)
                        )
                    blk = np.empty((len(gs), len(fs)), dtype=np.int32)
                    for gi, (gd, _) in enumerate(gs):
                        for fi, (fd, _) in enumerate(fs):
                            cd = compose_data(gd, fd, a, b, c)
                            try:
                                blk[gi, fi] = target[cd]
                            except KeyError:
                                raise TableError(
                                    "composite %r of hom(%d,%d) after hom(%d,%d)"
                                    " is not a declared morphism" % (cd, b, c, a, b)
                                )
                comp[(a, b, c)] = blk
        return FinCat(
            self.name,
            self.obj_labels,
            np.array(self.src, dtype=np.int32),
            np.array(self.tgt, dtype=np.int32),
            np.array(identity, dtype=np.int32),
            comp,
            mor_labels=self.mor_labels,
            obj_data=self.obj_data,
            mor_data=self.mor_data,
        )


# -- functors ---------------------------------------------------------------


class FinFunctor:
    __slots__ = ("name", "source", "target", "obj_map", "mor_map")

    def __init__(self, name, source, target, obj_map, mor_map):
        self.name = name
        self.source = source
        self.target = target
        self.obj_map = _frozen(obj_map)
        self.mor_map = _frozen(mor_map)
        if len(self.obj_map) != source.n_obj or len(self.mor_map) != source.n_mor:
            raise TableError("functor map lengths disagree with source tables")

    def ob(self, o):
        return int(self.obj_map[o])

    def mor(self, m):
        return int(self.mor_map[m])

    def then(self, other):
        """other ∘ self."""
        if other.source is not self.target:
            raise TableError("functor composition target/source mismatch")
        return FinFunctor(
            "%s;%s" % (self.name, other.name),
            self.source,
            other.target,
            other.obj_map[self.obj_map],
            other.mor_map[self.mor_map],
        )

    @staticmethod
    def identity(cat):
        return FinFunctor(
            "id",
            cat,
            cat,
            np.arange(cat.n_obj, dtype=np.int32),
            np.arange(cat.n_mor, dtype=np.int32),
        )

    def validate(self):
        rep = Report("functor-valid(%s)" % self.name)
        S, T = self.source, self.target
        if S.n_mor:
            ok_src = T.src[self.mor_map] == self.obj_map[S.src]
            ok_tgt = T.tgt[self.mor_map] == self.obj_map[S.tgt]
            bad = np.nonzero(~(ok_src & ok_tgt))[0]
            rep.check(
                "typing",
                len(bad) == 0,
                counterexamples=tuple(S.mor_str(int(m)) for m in bad[:3]),
            )
            if bad.size:
                return rep
        ok_id = all(
            self.mor(S.identity_of(o)) == T.identity_of(self.ob(o))
            for o in range(S.n_obj)
        )
        rep.check("identities", ok_id)
        bad_comp = None
        for (a, b, c), blk in S.comp.items():
            if blk.size == 0:
                continue
            fa, fb, fc = self.ob(a), self.ob(b), self.ob(c)
            tblk = T.comp[(fa, fb, fc)]
            lo_ab = T.hom_bounds(fa, fb)[0]
            lo_bc = T.hom_bounds(fb, fc)[0]
            f_loc = self.mor_map[S.hom(a, b)] - lo_ab
            g_loc = self.mor_map[S.hom(b, c)] - lo_bc
            expected = tblk[g_loc[:, None], f_loc[None, :]]
            got = self.mor_map[blk]
            if not np.array_equal(expected, got):
                g_i, f_i = np.argwhere(expected != got)[0]
                f = int(S.hom(a, b)[f_i])
                g = int(S.hom(b, c)[g_i])
                bad_comp = "%s after %s" % (S.mor_str(g), S.mor_str(f))
                break
        rep.check(
            "composition",
            bad_comp is None,
            counterexamples=(bad_comp,) if bad_comp else (),
        )
        return rep


@dataclass
class FinGroupoid:
    """A FinCat in which every morphism is invertible, plus the inverse table."""

    cat: FinCat
    inverse: np.ndarray

    @staticmethod
    def from_cat(cat):
        mask, inv = cat.iso_info()
        if not mask.all():
            bad = int(np.nonzero(~mask)[0][0])
            raise TableError("not a groupoid: %s" % cat.mor_str(bad))
        return FinGroupoid(cat, inv)

    def validate(self):
        rep = Report("groupoid-valid(%s)" % self.cat.name)
        C = self.cat
        ok = True
        bad = ()
        for m in range(C.n_mor):
            i = int(self.inverse[m])
            a, b = int(C.src[m]), int(C.tgt[m])
            if (
                i < 0
                or C.compose(i, m) != C.identity_of(a)
                or C.compose(m, i) != C.identity_of(b)
            ):
                ok, bad = False, (C.mor_str(m),)
                break
        rep.check("inverses", ok, counterexamples=bad)
        return rep


# -- subcategories ----------------------------------------------------------


@dataclass
class SubCat:
    cat: FinCat
    incl: FinFunctor
    obj_to_old: np.ndarray
    mor_to_old: np.ndarray
    obj_to_new: dict
    mor_to_new: dict


def subcategory(C, keep_obj=None, keep_mor=None, name=None):
    """Subcategory on the given objects and morphism mask.

    Identities of kept objects are forced in; closure under composition and
    typing are checked.  Returns the reindexed category plus the inclusion.
    """
    if keep_obj is None:
        keep_obj = range(C.n_obj)
    keep_obj = sorted(int(o) for o in keep_obj)
    obj_set = set(keep_obj)
    if keep_mor is None:
        mask = np.ones(C.n_mor, dtype=bool)
    else:
        mask = np.array(keep_mor, dtype=bool).copy()
    for m in range(C.n_mor):
        if mask[m] and not (int(C.src[m]) in obj_set and int(C.tgt[m]) in obj_set):
            mask[m] = False
    for o in keep_obj:
        mask[C.identity_of(o)] = True

    obj_to_new = {o: i for i, o in enumerate(keep_obj)}
    kept = [m for m in range(C.n_mor) if mask[m]]
    kept.sort(key=lambda m: (int(C.src[m]), int(C.tgt[m]), m))
    mor_to_new = {m: i for i, m in enumerate(kept)}

    for m in kept:  # closure check
        b = int(C.tgt[m])
        for (b2, c), (lo, hi) in C.block_bounds.items():
            if b2 != b or c not in obj_set:
                continue
            for g in range(lo, hi):
                if mask[g] and not mask[C.compose(g, m)]:
                    raise TableError(
                        "morphism subset not closed: %s after %s"
                        % (C.mor_str(g), C.mor_str(m))
                    )

    src = [obj_to_new[int(C.src[m])] for m in kept]
    tgt = [obj_to_new[int(C.tgt[m])] for m in kept]
    identity = [mor_to_new[C.identity_of(o)] for o in keep_obj]
    comp = {}
    bb = {}
    i = 0
    while i < len(kept):
        a, b = src[i], tgt[i]
        j = i
        while j < len(kept) and src[j] == a and tgt[j] == b:
            j += 1
        bb[(a, b)] = (i, j)
        i = j
    for (a, b), (lo, hi) in bb.items():
        for (b2, c), (lo2, hi2) in bb.items():
            if b2 != b:
                continue
            blk = np.empty((hi2 - lo2, hi - lo), dtype=np.int32)
            for gi in range(lo2, hi2):
                for fi in range(lo, hi):
                    blk[gi - lo2, fi - lo] = mor_to_new[
                        C.compose(kept[gi], kept[fi])
                    ]
            comp[(a, b, c)] = blk
    cat = FinCat(
        name or "%s|sub" % C.name,
        [C.obj_labels[o] for o in keep_obj],
        np.array(src, dtype=np.int32),
        np.array(tgt, dtype=np.int32),
        np.array(identity, dtype=np.int32),
        comp,
        mor_labels=[C.mor_labels[m] for m in kept],
        obj_data=[C.obj_data[o] for o in keep_obj] if C.obj_data else None,
        mor_data=[C.mor_data[m] for m in kept] if C.mor_data else None,
    )
    incl = FinFunctor(
        "incl",
        cat,
        C,
        np.array(keep_obj, dtype=np.int32),
        np.array(kept, dtype=np.int32),
    )
    return SubCat(
        cat,
        incl,
        np.array(keep_obj, dtype=np.int32),
        np.array(kept, dtype=np.int32),
        obj_to_new,
        mor_to_new,
    )


def full_subcategory(C, keep_obj, name=None):
    return subcategory(C, keep_obj, None, name=name)


def groupoid_core(C, keep_obj=None, name=None):
    """Maximal subgroupoid (optionally restricted to some objects)."""
    mask, _ = C.iso_info()
    sub = subcategory(C, keep_obj, mask, name=name or "%s|core" % C.name)
    return sub


# -- operations -------------------------------------------------------------


def validate_category(C):
    """Exhaustive check of the category laws on the tables."""
    rep = Report("validate-category(%s)" % C.name)

    ok = True
    bad = ()
    for o in range(C.n_obj):
        e = C.identity_of(o)
        if int(C.src[e]) != o or int(C.tgt[e]) != o:
            ok, bad = False, (C.obj_labels[o],)
            break
    rep.check("identity-typing", ok, counterexamples=bad)

    ok = True
    bad = ()
    for (a, b, c), blk in C.comp.items():
        lo, hi = C.hom_bounds(a, c)
        if blk.size and (blk.min() < lo or blk.max() >= hi):
            ok = False
            bad = ("block(%d,%d,%d) leaves hom(%d,%d)" % (a, b, c, a, c),)
            break
    rep.check("composite-typing", ok, counterexamples=bad)
    if not rep.passed:
        return rep

    ok = True
    bad = ()
    for (a, b), (lo, hi) in C.block_bounds.items():
        ids = np.arange(lo, hi, dtype=np.int32)
        left = C.comp[(a, b, b)][C.loc(C.identity_of(b)), :]
        right = C.comp[(a, a, b)][:, C.loc(C.identity_of(a))]
        if not (np.array_equal(left, ids) and np.array_equal(right, ids)):
            ok, bad = False, ("unit law fails on hom(%s,%s)" % (a, b),)
            break
    rep.check("unit-laws", ok, counterexamples=bad)
    if not rep.passed:
        return rep

    viol = _assoc_violation(C)
    rep.check(
        "associativity",
        viol is None,
        counterexamples=(
            ("h=%s g=%s f=%s" % tuple(C.mor_str(m) for m in viol),) if viol else ()
        ),
        note="kernel=%s" % _kernel.IMPL,
    )
    return rep


def _assoc_violation(C):
    """First failing triple (h, g, f) with h(gf) != (hg)f, or None."""
    for (a, b, c), blk_abc in C.comp.items():
        if blk_abc.size == 0:
            continue
        for (c2, d) in C.block_bounds:
            if c2 != c or C.hom_size(c, d) == 0:
                continue
            blk_bcd = C.comp[(b, c, d)]
            blk_acd = C.comp[(a, c, d)]
            blk_abd = C.comp[(a, b, d)]
            idx = _kernel.assoc_quad(
                blk_abc,
                blk_bcd,
                blk_acd,
                blk_abd,
                C.hom_bounds(a, c)[0],
                C.hom_bounds(b, d)[0],
            )
            if idx >= 0:
                n_bc, n_ab = blk_abc.shape
                h_loc, rest = divmod(idx, n_bc * n_ab)
                g_loc, f_loc = divmod(rest, n_ab)
                return (
                    C.hom_bounds(c, d)[0] + h_loc,
                    C.hom_bounds(b, c)[0] + g_loc,
                    C.hom_bounds(a, b)[0] + f_loc,
                )
    return None


def opposite(C):
    """Opposite category; ids, labels and data are unchanged."""
    comp = {}
    for (a, b, c), blk in C.comp.items():
        comp[(c, b, a)] = np.ascontiguousarray(blk.T)
    return FinCat(
        C.name[:-3] if C.name.endswith("^op") else C.name + "^op",
        C.obj_labels,
        C.tgt,
        C.src,
        C.identity,
        comp,
        mor_labels=C.mor_labels,
        obj_data=C.obj_data,
        mor_data=C.mor_data,
    )


@dataclass
class ProductCat:
    cat: FinCat
    p1: FinFunctor
    p2: FinFunctor

    def obj_id(self, a, b):
        return self._obj_index[(a, b)]

    def mor_id(self, f, g):
        return self._mor_index[(f, g)]


def product(C, D, name=None):
    """Product category; objects and morphisms are ordered pairs."""
    bld = CategoryBuilder(name or "%sx%s" % (C.name, D.name))
    for a in range(C.n_obj):
        for b in range(D.n_obj):
            bld.add_object("(%s,%s)" % (C.obj_labels[a], D.obj_labels[b]), (a, b))
    for (a, a2) in sorted(C.block_bounds):
        for (b, b2) in sorted(D.block_bounds):
            s = bld.obj_id((a, b))
            t = bld.obj_id((a2, b2))
            for f in range(*C.block_bounds[(a, a2)]):
                for g in range(*D.block_bounds[(b, b2)]):
                    bld.add_morphism(
                        s,
                        t,
                        (f, g),
                        "(%s,%s)" % (C.mor_labels[f], D.mor_labels[g]),
                    )
    identity_data = [
        (C.identity_of(a), D.identity_of(b))
        for a in range(C.n_obj)
        for b in range(D.n_obj)
    ]

    def compose_pair(gd, fd, a, b, c):
        return (C.compose(gd[0], fd[0]), D.compose(gd[1], fd[1]))

    cat = bld.finish(identity_data, compose_data=compose_pair)
    p1 = FinFunctor(
        "pr1",
        cat,
        C,
        np.array([d[0] for d in cat.obj_data], dtype=np.int32),
        np.array([d[0] for d in cat.mor_data], dtype=np.int32),
    )
    p2 = FinFunctor(
        "pr2",
        cat,
        D,
        np.array([d[1] for d in cat.obj_data], dtype=np.int32),
        np.array([d[1] for d in cat.mor_data], dtype=np.int32),
    )
    out = ProductCat(cat, p1, p2)
    out._obj_index = {d: i for i, d in enumerate(cat.obj_data)}
    out._mor_index = {d: i for i, d in enumerate(cat.mor_data)}
    return out


@dataclass
class CommaCat:
    """Comma category F ↓ G with its two projections.

    Objects are triples (a, b, t: F a -> G b); `arrow[i]` is the morphism id
    t in the shared target category for comma object i.
    """

    cat: FinCat
    left: FinFunctor
    right: FinFunctor
    arrow: tuple


def comma(F, G, name=None):
    if F.target is not G.target:
        raise TableError("comma needs functors into one category")
    A, B, C = F.source, G.source, F.target
    bld = CategoryBuilder(name or "comma")
    for a in range(A.n_obj):
        for b in range(B.n_obj):
            lo, hi = C.hom_bounds(F.ob(a), G.ob(b))
            for t in range(lo, hi):
                bld.add_object(
                    "(%s,%s,%s)" % (A.obj_labels[a], B.obj_labels[b], C.mor_labels[t]),
                    (a, b, t),
                )
    objs = list(bld.obj_data)
    for (a, b, t) in objs:
        s = bld.obj_id((a, b, t))
        for (a_, a2) in sorted(A.block_bounds):
            if a_ != a:
                continue
            for (b_, b2) in sorted(B.block_bounds):
                if b_ != b:
                    continue
                for u in range(*A.block_bounds[(a, a2)]):
                    fu = F.mor(u)
                    for v in range(*B.block_bounds[(b, b2)]):
                        t2 = C.compose(G.mor(v), t)
                        # square condition: t'∘F(u) = G(v)∘t
                        lo2, hi2 = C.hom_bounds(F.ob(a2), G.ob(b2))
                        for t_ in range(lo2, hi2):
                            if C.compose(t_, fu) == t2:
                                bld.add_morphism(
                                    s,
                                    bld.obj_id((a2, b2, t_)),
                                    (u, v),
                                    "(%s,%s)" % (A.mor_labels[u], B.mor_labels[v]),
                                )
    identity_data = [
        (A.identity_of(a), B.identity_of(b)) for (a, b, t) in objs
    ]

    def compose_pair(gd, fd, a, b, c):
        return (A.compose(gd[0], fd[0]), B.compose(gd[1], fd[1]))

    cat = bld.finish(identity_data, compose_data=compose_pair)
    left = FinFunctor(
        "pr-left",
        cat,
        A,
        np.array([o[0] for o in cat.obj_data], dtype=np.int32),
        np.array([m[0] for m in cat.mor_data], dtype=np.int32),
    )
    right = FinFunctor(
        "pr-right",
        cat,
        B,
        np.array([o[1] for o in cat.obj_data], dtype=np.int32),
        np.array([m[1] for m in cat.mor_data], dtype=np.int32),
    )
    return CommaCat(cat, left, right, tuple(o[2] for o in cat.obj_data))


def terminal_category():
    bld = CategoryBuilder("1")
    bld.add_object("*", "*")
    bld.add_morphism(0, 0, "id", "id")
    return bld.finish(["id"], compose_data=lambda g, f, a, b, c: "id")


def const_functor(B, b, terminal=None):
    """Constant functor 1 -> B at object b."""
    T = terminal if terminal is not None else terminal_category()
    return FinFunctor(
        "const(%s)" % B.obj_labels[b],
        T,
        B,
        np.array([b], dtype=np.int32),
        np.array([B.identity_of(b)], dtype=np.int32),
    )


def check_equivalence(F):
    """Fully faithful + essentially surjective, with witnesses."""
    rep = Report("equivalence(%s)" % F.name)
    rep.add(F.validate())
    if not rep.passed:
        return rep
    S, T = F.source, F.target

    ff_bad = ()
    for (a, b), (lo, hi) in sorted(S.block_bounds.items()):
        images = set(int(F.mor_map[m]) for m in range(lo, hi))
        t_lo, t_hi = T.hom_bounds(F.ob(a), F.ob(b))
        if len(images) != hi - lo or len(images) != t_hi - t_lo:
            ff_bad = (
                "hom(%s,%s): %d morphisms onto %d of %d"
                % (S.obj_labels[a], S.obj_labels[b], hi - lo, len(images), t_hi - t_lo),
            )
            break
    if not ff_bad:
        # object pairs with empty source hom but nonempty target hom
        im = set(int(x) for x in F.obj_map)
        for (x, y), (lo, hi) in sorted(T.block_bounds.items()):
            if hi == lo or x not in im or y not in im:
                continue
            srcs_x = [a for a in range(S.n_obj) if F.ob(a) == x]
            srcs_y = [b for b in range(S.n_obj) if F.ob(b) == y]
            for a in srcs_x:
                for b in srcs_y:
                    if S.hom_size(a, b) != hi - lo:
                        ff_bad = (
                            "hom(%s,%s): %d vs %d in target"
                            % (
                                S.obj_labels[a],
                                S.obj_labels[b],
                                S.hom_size(a, b),
                                hi - lo,
                            ),
                        )
                        break
                if ff_bad:
                    break
            if ff_bad:
                break
    rep.check("fully-faithful", not ff_bad, counterexamples=ff_bad)

    mask, _ = T.iso_info()
    hit = np.zeros(T.n_obj, dtype=bool)
    for a in range(S.n_obj):
        hit[F.ob(a)] = True
    changed = True
    while changed:  # iso reachability to a fixpoint
        changed = False
        for m in range(T.n_mor):
            if mask[m] and hit[int(T.src[m])] and not hit[int(T.tgt[m])]:
                hit[int(T.tgt[m])] = True
                changed = True
    missed = [T.obj_labels[o] for o in range(T.n_obj) if not hit[o]]
    rep.check(
        "essentially-surjective",
        not missed,
        counterexamples=tuple(missed[:4]),
    )
    return rep


def same_tables(C, D):
    """Structural equality of two FinCats (used in tests)."""
    if C.n_obj != D.n_obj or C.n_mor != D.n_mor:
        return False
    if not (
        np.array_equal(C.src, D.src)
        and np.array_equal(C.tgt, D.tgt)
        and np.array_equal(C.identity, D.identity)
    ):
        return False
    if set(C.comp) != set(D.comp):
        return False
    return all(np.array_equal(C.comp[k], D.comp[k]) for k in C.comp)
