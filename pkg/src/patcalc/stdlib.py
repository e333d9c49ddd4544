"""Builders for the standard pattern families and the functors between them.

Pattern families, each truncated at a level N:

  f_star           pointed sets <0> .. <N>
  delta_op         opposite simplex category on [0] .. [N]
  delta_k_op       k-fold delta_op, kept where the product of sizes is <= N
  ass              pointed maps carrying linear orders on their fibers
  bimod            ass objects decorated with chains of interval endpoints
  cmod             pointed sets with 0/1 marks, maps summing marks over fibers
  fstar_coslice    pointed sets with a chosen element
  delta_op_slice1  monotone 0/1 sequences, i.e. simplices over [1]

Morphism families: cut (delta_op -> ass), cut_prime (delta_op_slice1 ->
bimod), mu (fstar_coslice -> cmod), and the wide inert part int_inclusion
and its elementary part el_inclusion of any base family.

A morphism [n] -> [m] of delta_op is stored as the monotone tuple
(phi(0), .., phi(m)) of the underlying simplex map [m] -> [n]; its size map
<n> -> <m> sends i to the j with phi(j-1) < i <= phi(j), or to 0 when there
is no such j.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations
from itertools import product as iproduct
from math import prod

import numpy as np

from .errors import TableError
from .fincat import CategoryBuilder, FinFunctor
from .patterns import (
    PatternData,
    PatternMorphism,
    el_pattern,
    f_star,
    fstar_mor_id,
    int_pattern,
)

PATTERN_FAMILIES = (
    "f_star",
    "delta_op",
    "delta_k_op",
    "ass",
    "bimod",
    "cmod",
    "fstar_coslice",
    "delta_op_slice1",
)

MORPHISM_FAMILIES = ("cut", "cut_prime", "mu", "int_inclusion", "el_inclusion")

_CACHE = {}


@dataclass(frozen=True)
class BuilderSpec:
    family: str
    level: int
    k: int = 1


@dataclass(frozen=True)
class MorphismSpec:
    family: str
    level: int
    base: str = ""
    k: int = 1


def _plabel(data):
    return ",".join(str(v) for v in data) if data else "()"


def _monotone(length, top):
    """All nondecreasing tuples of the given length with values 0..top."""
    return combinations_with_replacement(range(top + 1), length)


def _delta_inert(data):
    return all(data[j] == data[0] + j for j in range(len(data)))


def _cut_data(phi, n):
    """Pointed map <n> -> <m> attached to the simplex map phi: [m] -> [n]."""
    m = len(phi) - 1
    out = []
    for i in range(1, n + 1):
        s = 0
        for j in range(1, m + 1):
            if phi[j - 1] < i <= phi[j]:
                s = j
                break
        out.append(s)
    return tuple(out)


def _pointed_classes(data, m):
    counts = [0] * (m + 1)
    for v in data:
        counts[v] += 1
    inert = all(counts[s] == 1 for s in range(1, m + 1))
    return inert, counts[0] == 0


def _obj_index(cat):
    return cat.obj_index()


def _mor_index(cat):
    return cat.data_index()


# -- opposite simplices -----------------------------------------------------


def delta_op(level):
    key = ("delta_op", level)
    if key in _CACHE:
        return _CACHE[key]
    FS = f_star(level)
    bld = CategoryBuilder("delta_op(%d)" % level)
    for n in range(level + 1):
        bld.add_object("[%d]" % n, n)
    for n in range(level + 1):
        for m in range(level + 1):
            for data in _monotone(m + 1, n):
                bld.add_morphism(n, m, data, "(%s)" % _plabel(data))

    def compose(gd, fd, a, b, c):
        # data go the other way around, so the composite precomposes
        return tuple(fd[v] for v in gd)

    identity = [tuple(range(n + 1)) for n in range(level + 1)]
    cat = bld.finish(identity, compose_data=compose)

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    size_mor = np.zeros(cat.n_mor, dtype=np.int32)
    for mid in range(cat.n_mor):
        data = cat.mor_data[mid]
        n = int(cat.src[mid])
        inert[mid] = _delta_inert(data)
        active[mid] = data[0] == 0 and data[-1] == n
        size_mor[mid] = fstar_mor_id(
            level, n, int(cat.tgt[mid]), _cut_data(data, n)
        )
    size = FinFunctor(
        "size", cat, FS.cat, np.arange(level + 1, dtype=np.int32), size_mor
    )
    elementary = [n == 1 for n in range(level + 1)]
    pat = PatternData(cat.name, cat, inert, active, elementary, size, level)
    _CACHE[key] = pat
    return pat


def _smash_decode(e, dims):
    e -= 1
    out = []
    for d in dims:
        out.append(e % d + 1)
        e //= d
    return tuple(out)


def _smash_encode(idx, dims):
    e = 0
    stride = 1
    for i, d in zip(idx, dims):
        e += (i - 1) * stride
        stride *= d
    return e + 1


def delta_k_op(level, k):
    """k-fold product of delta_op with the smash size functor; objects are
    kept when every factor and the product of their sizes stay within the
    level."""
    key = ("delta_k_op", level, k)
    if key in _CACHE:
        return _CACHE[key]
    if k < 1:
        raise TableError("k must be at least 1")
    FS = f_star(level)
    objs = [
        ms
        for ms in iproduct(range(level + 1), repeat=k)
        if prod(ms) <= level
    ]
    bld = CategoryBuilder("delta_k_op(%d,%d)" % (level, k))
    for ms in objs:
        bld.add_object("(%s)" % ",".join("[%d]" % m for m in ms), ms)
    for ns in objs:
        for ms in objs:
            a, b = bld.obj_id(ns), bld.obj_id(ms)
            for datas in iproduct(
                *[_monotone(m + 1, n) for n, m in zip(ns, ms)]
            ):
                label = ";".join(_plabel(d) for d in datas)
                bld.add_morphism(a, b, datas, label)

    def compose(gd, fd, a, b, c):
        return tuple(tuple(f[v] for v in g) for g, f in zip(gd, fd))

    identity = [tuple(tuple(range(m + 1)) for m in ms) for ms in objs]
    cat = bld.finish(identity, compose_data=compose)

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    size_mor = np.zeros(cat.n_mor, dtype=np.int32)
    for mid in range(cat.n_mor):
        datas = cat.mor_data[mid]
        ns = cat.obj_data[int(cat.src[mid])]
        ms = cat.obj_data[int(cat.tgt[mid])]
        inert[mid] = all(_delta_inert(d) for d in datas)
        active[mid] = all(
            d[0] == 0 and d[-1] == n for d, n in zip(datas, ns)
        )
        cuts = [_cut_data(d, n) for d, n in zip(datas, ns)]
        sdata = []
        for e in range(1, prod(ns) + 1):
            js = [c[i - 1] for c, i in zip(cuts, _smash_decode(e, ns))]
            sdata.append(0 if 0 in js else _smash_encode(js, ms))
        size_mor[mid] = fstar_mor_id(level, prod(ns), prod(ms), tuple(sdata))
    size = FinFunctor(
        "size",
        cat,
        FS.cat,
        np.array([prod(ms) for ms in objs], dtype=np.int32),
        size_mor,
    )
    elementary = [ms == (1,) * k for ms in objs]
    pat = PatternData(cat.name, cat, inert, active, elementary, size, level)
    _CACHE[key] = pat
    return pat


# -- ordered variants of pointed maps ---------------------------------------


def _ass_morphisms(n, m):
    """All (phi, orders) with phi: <n> -> <m> pointed and orders listing each
    nonzero fiber in some linear order."""
    for phi in iproduct(range(m + 1), repeat=n):
        fibers = [
            [j for j in range(1, n + 1) if phi[j - 1] == i]
            for i in range(1, m + 1)
        ]
        for ords in iproduct(*[permutations(f) for f in fibers]):
            yield phi, tuple(ords)


def _ass_label(phi, ords):
    return _plabel(phi) + "|" + ";".join(
        ",".join(str(x) for x in o) for o in ords
    )


def _ass_compose(gd, fd):
    phi_g, ord_g = gd
    phi_f, ord_f = fd
    phi = tuple(0 if v == 0 else phi_g[v - 1] for v in phi_f)
    # fibers of the composite concatenate the f-fibers along the g-order
    ords = tuple(
        tuple(x for i in og for x in ord_f[i - 1]) for og in ord_g
    )
    return (phi, ords)


def ass(level):
    key = ("ass", level)
    if key in _CACHE:
        return _CACHE[key]
    FS = f_star(level)
    bld = CategoryBuilder("ass(%d)" % level)
    for n in range(level + 1):
        bld.add_object("<%d>" % n, n)
    for n in range(level + 1):
        for m in range(level + 1):
            for phi, ords in _ass_morphisms(n, m):
                bld.add_morphism(n, m, (phi, ords), _ass_label(phi, ords))

    def compose(gd, fd, a, b, c):
        return _ass_compose(gd, fd)

    identity = [
        (tuple(range(1, n + 1)), tuple((i,) for i in range(1, n + 1)))
        for n in range(level + 1)
    ]
    cat = bld.finish(identity, compose_data=compose)
    if level >= 2:
        assert cat.hom_size(2, 1) == 5

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    size_mor = np.zeros(cat.n_mor, dtype=np.int32)
    for mid in range(cat.n_mor):
        phi, _ = cat.mor_data[mid]
        m = int(cat.tgt[mid])
        inert[mid], active[mid] = _pointed_classes(phi, m)
        size_mor[mid] = fstar_mor_id(level, int(cat.src[mid]), m, phi)
    size = FinFunctor(
        "size", cat, FS.cat, np.arange(level + 1, dtype=np.int32), size_mor
    )
    elementary = [n == 1 for n in range(level + 1)]
    pat = PatternData(cat.name, cat, inert, active, elementary, size, level)
    _CACHE[key] = pat
    return pat


_BIMOD_DECOR = ((0, 0), (0, 1), (1, 1))


def bimod(level):
    """ass objects whose elements carry endpoint pairs a <= b; a morphism
    must chain the pairs along each ordered fiber, and an empty fiber forces
    equal endpoints on its target element."""
    key = ("bimod", level)
    if key in _CACHE:
        return _CACHE[key]
    FS = f_star(level)
    bld = CategoryBuilder("bimod(%d)" % level)
    for n in range(level + 1):
        for dec in iproduct(_BIMOD_DECOR, repeat=n):
            label = "<%d>(%s)" % (n, ",".join("%d%d" % ab for ab in dec))
            bld.add_object(label, (n, dec))
    src_objs = list(bld.obj_data)
    for n, dec in src_objs:
        a_of = [ab[0] for ab in dec]
        b_of = [ab[1] for ab in dec]
        src = bld.obj_id((n, dec))
        for m in range(level + 1):
            for phi, ords in _ass_morphisms(n, m):
                fixed = {}
                ok = True
                for j, o in enumerate(ords):
                    if not o:
                        continue
                    if any(
                        b_of[o[t] - 1] != a_of[o[t + 1] - 1]
                        for t in range(len(o) - 1)
                    ):
                        ok = False
                        break
                    fixed[j] = (a_of[o[0] - 1], b_of[o[-1] - 1])
                if not ok:
                    continue
                free = [j for j in range(m) if j not in fixed]
                for fill in iproduct((0, 1), repeat=len(free)):
                    dec2 = list(fixed.get(j) for j in range(m))
                    for j, v in zip(free, fill):
                        dec2[j] = (v, v)
                    tgt = bld.obj_id((m, tuple(dec2)))
                    bld.add_morphism(
                        src, tgt, (phi, ords), _ass_label(phi, ords)
                    )

    def compose(gd, fd, a, b, c):
        return _ass_compose(gd, fd)

    identity = [
        (tuple(range(1, n + 1)), tuple((i,) for i in range(1, n + 1)))
        for n, _ in src_objs
    ]
    cat = bld.finish(identity, compose_data=compose)

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    size_mor = np.zeros(cat.n_mor, dtype=np.int32)
    for mid in range(cat.n_mor):
        phi, _ = cat.mor_data[mid]
        n = cat.obj_data[int(cat.src[mid])][0]
        m = cat.obj_data[int(cat.tgt[mid])][0]
        inert[mid], active[mid] = _pointed_classes(phi, m)
        size_mor[mid] = fstar_mor_id(level, n, m, phi)
    size = FinFunctor(
        "size",
        cat,
        FS.cat,
        np.array([n for n, _ in src_objs], dtype=np.int32),
        size_mor,
    )
    elementary = [n == 1 for n, _ in src_objs]
    if level >= 1:
        assert sum(elementary) == 3
    pat = PatternData(cat.name, cat, inert, active, elementary, size, level)
    _CACHE[key] = pat
    return pat


def cmod(level):
    """Pointed sets with 0/1 marks; a map must send the marks of each fiber
    to their sum, so no fiber may contain two marked elements."""
    key = ("cmod", level)
    if key in _CACHE:
        return _CACHE[key]
    FS = f_star(level)
    bld = CategoryBuilder("cmod(%d)" % level)
    for n in range(level + 1):
        for marks in iproduct((0, 1), repeat=n):
            label = "<%d>(%s)" % (n, "".join(str(v) for v in marks))
            bld.add_object(label, (n, marks))
    src_objs = list(bld.obj_data)
    for n, marks in src_objs:
        src = bld.obj_id((n, marks))
        for m in range(level + 1):
            for phi in iproduct(range(m + 1), repeat=n):
                sums = [0] * m
                for j in range(1, n + 1):
                    if phi[j - 1] != 0:
                        sums[phi[j - 1] - 1] += marks[j - 1]
                if any(s > 1 for s in sums):
                    continue
                tgt = bld.obj_id((m, tuple(sums)))
                bld.add_morphism(src, tgt, phi, _plabel(phi))

    def compose(gd, fd, a, b, c):
        return tuple(0 if v == 0 else gd[v - 1] for v in fd)

    identity = [tuple(range(1, n + 1)) for n, _ in src_objs]
    cat = bld.finish(identity, compose_data=compose)

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    size_mor = np.zeros(cat.n_mor, dtype=np.int32)
    for mid in range(cat.n_mor):
        phi = cat.mor_data[mid]
        n = cat.obj_data[int(cat.src[mid])][0]
        m = cat.obj_data[int(cat.tgt[mid])][0]
        inert[mid], active[mid] = _pointed_classes(phi, m)
        size_mor[mid] = fstar_mor_id(level, n, m, phi)
    size = FinFunctor(
        "size",
        cat,
        FS.cat,
        np.array([n for n, _ in src_objs], dtype=np.int32),
        size_mor,
    )
    elementary = [n == 1 for n, _ in src_objs]
    pat = PatternData(cat.name, cat, inert, active, elementary, size, level)
    _CACHE[key] = pat
    return pat


# -- slice variants ---------------------------------------------------------


def fstar_coslice(level):
    """Pointed sets with a chosen element i in 0..n; maps must preserve the
    choice."""
    key = ("fstar_coslice", level)
    if key in _CACHE:
        return _CACHE[key]
    FS = f_star(level)
    bld = CategoryBuilder("fstar_coslice(%d)" % level)
    for n in range(level + 1):
        for i in range(n + 1):
            bld.add_object("(<%d>,%d)" % (n, i), (n, i))
    src_objs = list(bld.obj_data)
    for n, i in src_objs:
        src = bld.obj_id((n, i))
        for m in range(level + 1):
            for phi in iproduct(range(m + 1), repeat=n):
                j = phi[i - 1] if i >= 1 else 0
                bld.add_morphism(src, bld.obj_id((m, j)), phi, _plabel(phi))

    def compose(gd, fd, a, b, c):
        return tuple(0 if v == 0 else gd[v - 1] for v in fd)

    identity = [tuple(range(1, n + 1)) for n, _ in src_objs]
    cat = bld.finish(identity, compose_data=compose)

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    size_mor = np.zeros(cat.n_mor, dtype=np.int32)
    for mid in range(cat.n_mor):
        phi = cat.mor_data[mid]
        n = cat.obj_data[int(cat.src[mid])][0]
        m = cat.obj_data[int(cat.tgt[mid])][0]
        inert[mid], active[mid] = _pointed_classes(phi, m)
        size_mor[mid] = fstar_mor_id(level, n, m, phi)
    size = FinFunctor(
        "size",
        cat,
        FS.cat,
        np.array([n for n, _ in src_objs], dtype=np.int32),
        size_mor,
    )
    elementary = [n == 1 for n, _ in src_objs]
    pat = PatternData(cat.name, cat, inert, active, elementary, size, level)
    _CACHE[key] = pat
    return pat


def delta_op_slice1(level):
    """Opposite simplices over [1]: objects are monotone 0/1 sequences, one
    entry per vertex, and morphisms are delta_op morphisms matching them."""
    key = ("delta_op_slice1", level)
    if key in _CACHE:
        return _CACHE[key]
    FS = f_star(level)
    bld = CategoryBuilder("delta_op_slice1(%d)" % level)
    for n in range(level + 1):
        for ones in range(n + 2):
            seq = (0,) * (n + 1 - ones) + (1,) * ones
            bld.add_object("(%s)" % _plabel(seq), seq)
    src_objs = list(bld.obj_data)
    for seq in src_objs:
        n = len(seq) - 1
        src = bld.obj_id(seq)
        for m in range(level + 1):
            for data in _monotone(m + 1, n):
                seq2 = tuple(seq[v] for v in data)
                bld.add_morphism(
                    src, bld.obj_id(seq2), data, "(%s)" % _plabel(data)
                )

    def compose(gd, fd, a, b, c):
        return tuple(fd[v] for v in gd)

    identity = [tuple(range(len(seq))) for seq in src_objs]
    cat = bld.finish(identity, compose_data=compose)

    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    size_mor = np.zeros(cat.n_mor, dtype=np.int32)
    for mid in range(cat.n_mor):
        data = cat.mor_data[mid]
        n = len(cat.obj_data[int(cat.src[mid])]) - 1
        m = len(cat.obj_data[int(cat.tgt[mid])]) - 1
        inert[mid] = _delta_inert(data)
        active[mid] = data[0] == 0 and data[-1] == n
        size_mor[mid] = fstar_mor_id(level, n, m, _cut_data(data, n))
    size = FinFunctor(
        "size",
        cat,
        FS.cat,
        np.array([len(seq) - 1 for seq in src_objs], dtype=np.int32),
        size_mor,
    )
    elementary = [len(seq) == 2 for seq in src_objs]
    pat = PatternData(cat.name, cat, inert, active, elementary, size, level)
    _CACHE[key] = pat
    return pat


# -- registry ---------------------------------------------------------------


def build_pattern(spec):
    if spec.level < 0:
        raise TableError("level must be nonnegative")
    if spec.family == "f_star":
        return f_star(spec.level)
    if spec.family == "delta_op":
        return delta_op(spec.level)
    if spec.family == "delta_k_op":
        return delta_k_op(spec.level, spec.k)
    if spec.family == "ass":
        return ass(spec.level)
    if spec.family == "bimod":
        return bimod(spec.level)
    if spec.family == "cmod":
        return cmod(spec.level)
    if spec.family == "fstar_coslice":
        return fstar_coslice(spec.level)
    if spec.family == "delta_op_slice1":
        return delta_op_slice1(spec.level)
    raise TableError("unknown pattern family %r" % spec.family)


# -- comparison functors ----------------------------------------------------


def _cut_orders(psi, n, m):
    return tuple(
        tuple(j for j in range(1, n + 1) if psi[j - 1] == t)
        for t in range(1, m + 1)
    )


def cut(level):
    """delta_op -> ass: the size map with each interval fiber in its numeric
    order."""
    key = ("cut", level)
    if key in _CACHE:
        return _CACHE[key]
    D = delta_op(level)
    A = ass(level)
    idx = _mor_index(A.cat)
    mor_map = np.zeros(D.cat.n_mor, dtype=np.int32)
    for mid in range(D.cat.n_mor):
        n = int(D.cat.src[mid])
        m = int(D.cat.tgt[mid])
        psi = _cut_data(D.cat.mor_data[mid], n)
        mor_map[mid] = idx[(n, m, (psi, _cut_orders(psi, n, m)))]
    F = FinFunctor(
        "cut", D.cat, A.cat, np.arange(level + 1, dtype=np.int32), mor_map
    )
    out = PatternMorphism(D, A, F)
    _CACHE[key] = out
    return out


def cut_prime(level):
    """delta_op_slice1 -> bimod: a sequence becomes its tuple of adjacent
    endpoint pairs."""
    key = ("cut_prime", level)
    if key in _CACHE:
        return _CACHE[key]
    S = delta_op_slice1(level)
    B = bimod(level)
    oidx = _obj_index(B.cat)
    midx = _mor_index(B.cat)
    obj_map = np.zeros(S.cat.n_obj, dtype=np.int32)
    for o in range(S.cat.n_obj):
        seq = S.cat.obj_data[o]
        dec = tuple(zip(seq, seq[1:]))
        obj_map[o] = oidx[(len(seq) - 1, dec)]
    mor_map = np.zeros(S.cat.n_mor, dtype=np.int32)
    for mid in range(S.cat.n_mor):
        n = len(S.cat.obj_data[int(S.cat.src[mid])]) - 1
        m = len(S.cat.obj_data[int(S.cat.tgt[mid])]) - 1
        psi = _cut_data(S.cat.mor_data[mid], n)
        mor_map[mid] = midx[
            (
                int(obj_map[S.cat.src[mid]]),
                int(obj_map[S.cat.tgt[mid]]),
                (psi, _cut_orders(psi, n, m)),
            )
        ]
    F = FinFunctor("cut_prime", S.cat, B.cat, obj_map, mor_map)
    out = PatternMorphism(S, B, F)
    _CACHE[key] = out
    return out


def mu(level):
    """fstar_coslice -> cmod: mark the chosen element."""
    key = ("mu", level)
    if key in _CACHE:
        return _CACHE[key]
    CS = fstar_coslice(level)
    CM = cmod(level)
    oidx = _obj_index(CM.cat)
    midx = _mor_index(CM.cat)
    obj_map = np.zeros(CS.cat.n_obj, dtype=np.int32)
    for o in range(CS.cat.n_obj):
        n, i = CS.cat.obj_data[o]
        marks = tuple(1 if t == i else 0 for t in range(1, n + 1))
        obj_map[o] = oidx[(n, marks)]
    mor_map = np.zeros(CS.cat.n_mor, dtype=np.int32)
    for mid in range(CS.cat.n_mor):
        mor_map[mid] = midx[
            (
                int(obj_map[CS.cat.src[mid]]),
                int(obj_map[CS.cat.tgt[mid]]),
                CS.cat.mor_data[mid],
            )
        ]
    F = FinFunctor("mu", CS.cat, CM.cat, obj_map, mor_map)
    out = PatternMorphism(CS, CM, F)
    _CACHE[key] = out
    return out


def int_inclusion(P):
    """The wide inert part of a pattern, included back into it."""
    sub, incl = int_pattern(P)
    return PatternMorphism(sub, P, incl)


def el_inclusion(P):
    """The elementary part of a pattern, included into its inert part."""
    E, e_incl = el_pattern(P)
    I, _ = int_pattern(P)
    idx = _mor_index(I.cat)
    # the inert part keeps every object, so object ids agree with P
    mor_map = np.array(
        [
            idx[
                (
                    int(P.cat.src[m]),
                    int(P.cat.tgt[m]),
                    P.cat.mor_data[m],
                )
            ]
            for m in e_incl.mor_map
        ],
        dtype=np.int32,
    )
    F = FinFunctor("el_incl", E.cat, I.cat, e_incl.obj_map.copy(), mor_map)
    return PatternMorphism(E, I, F)


def build_morphism(spec):
    if spec.level < 0:
        raise TableError("level must be nonnegative")
    if spec.family == "cut":
        return cut(spec.level)
    if spec.family == "cut_prime":
        return cut_prime(spec.level)
    if spec.family == "mu":
        return mu(spec.level)
    if spec.family in ("int_inclusion", "el_inclusion"):
        base = build_pattern(BuilderSpec(spec.base, spec.level, spec.k))
        if spec.family == "int_inclusion":
            return int_inclusion(base)
        return el_inclusion(base)
    raise TableError("unknown morphism family %r" % spec.family)
