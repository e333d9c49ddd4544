"""Independent reference computations for the test suite.

Everything here is deliberately naive: direct enumeration, union-find,
backtracking.  The package must agree with these on small inputs; none
of the package's own indexing or caching is used.
"""

import itertools
from math import comb

import numpy as np


# -- combinatorial counts ----------------------------------------------------


def multiset_count(symbols, degree):
    """Multisets of a given size from a symbol count."""
    if symbols == 0:
        return 1 if degree == 0 else 0
    return comb(symbols + degree - 1, degree)


def word_count(symbols, degree):
    return symbols**degree


def orbit_count(n, perms):
    """Orbits of {0..n-1} under the group generated by permutations."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i in range(n):
            a, b = find(i), find(p[i])
            if a != b:
                parent[a] = b
    return len({find(i) for i in range(n)})


# -- union-find over functor elements ---------------------------------------


def _offsets(sizes):
    out = [0]
    for s in sizes:
        out.append(out[-1] + s)
    return out


def brute_colimit(F):
    """(number of classes, class id per flat element) by naive union-find."""
    C = F.cat
    off = _offsets(F.sizes)
    parent = list(range(off[-1]))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in range(C.n_mor):
        a, b = int(C.src[m]), int(C.tgt[m])
        for x in range(F.sizes[a]):
            p, q = find(off[a] + x), find(off[b] + F.maps[m][x])
            if p != q:
                parent[p] = q
    reps = sorted({find(i) for i in range(off[-1])})
    lab = {r: i for i, r in enumerate(reps)}
    return len(reps), [lab[find(i)] for i in range(off[-1])]


def brute_limit(F):
    """Number of compatible tuples, by filtering the full product."""
    C = F.cat
    count = 0
    for tup in itertools.product(*[range(s) for s in F.sizes]):
        if all(
            F.maps[m][tup[int(C.src[m])]] == tup[int(C.tgt[m])]
            for m in range(C.n_mor)
        ):
            count += 1
    return count


def brute_lan_sizes(F, K):
    """Left Kan extension value sizes by union-find over triples (a, t, x)."""
    A, B = K.source, K.target
    out = []
    for b in range(B.n_obj):
        triples = []
        index = {}
        for a in range(A.n_obj):
            for t in range(B.n_mor):
                if int(B.src[t]) != int(K.obj_map[a]) or int(B.tgt[t]) != b:
                    continue
                for x in range(F.sizes[a]):
                    index[(a, t, x)] = len(triples)
                    triples.append((a, t, x))
        parent = list(range(len(triples)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for u in range(A.n_mor):
            a, a2 = int(A.src[u]), int(A.tgt[u])
            for t2 in range(B.n_mor):
                if int(B.src[t2]) != int(K.obj_map[a2]) or int(B.tgt[t2]) != b:
                    continue
                t = B.compose(t2, int(K.mor_map[u]))
                for x in range(F.sizes[a]):
                    i = find(index[(a, t, x)])
                    j = find(index[(a2, t2, F.maps[u][x])])
                    if i != j:
                        parent[i] = j
        out.append(len({find(i) for i in range(len(triples))}))
    return out


def brute_ran_sizes(F, K):
    """Right Kan extension value sizes by backtracking over cone families."""
    A, B = K.source, K.target
    out = []
    for b in range(B.n_obj):
        legs = []
        for a in range(A.n_obj):
            for t in range(B.n_mor):
                if int(B.src[t]) == b and int(B.tgt[t]) == int(K.obj_map[a]):
                    legs.append((a, t))
        leg_ix = {at: i for i, at in enumerate(legs)}
        count = 0
        for vals in itertools.product(
            *[range(F.sizes[a]) for a, _ in legs]
        ):
            ok = True
            for u in range(A.n_mor):
                a, a2 = int(A.src[u]), int(A.tgt[u])
                for (la, lt) in legs:
                    if la != a:
                        continue
                    t2 = B.compose(int(K.mor_map[u]), lt)
                    if F.maps[u][vals[leg_ix[(a, lt)]]] != vals[leg_ix[(a2, t2)]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                count += 1
        out.append(count)
    return out


# -- Day convolution double sum ---------------------------------------------


def discrete_day_sizes(table, F_sizes, G_sizes):
    """|(F * G)(c)| = sum over a.b = c of |F(a)| |G(b)| for a discrete
    monoid with the given multiplication table."""
    k = len(table)
    out = [0] * k
    for a in range(k):
        for b in range(k):
            out[table[a][b]] += F_sizes[a] * G_sizes[b]
    return out


# -- generators for random inputs -------------------------------------------


def random_preorder(rng, n):
    """Reflexive-transitive closure of a random relation on n points."""
    rel = np.eye(n, dtype=bool)
    for _ in range(rng.integers(0, 2 * n + 1)):
        i, j = rng.integers(0, n, size=2)
        rel[i, j] = True
    for _ in range(n):
        rel = rel | (rel @ rel)
    return rel


def preorder_category(rel, name="preorder"):
    from patcalc.fincat import CategoryBuilder

    n = rel.shape[0]
    bld = CategoryBuilder(name)
    for i in range(n):
        bld.add_object("p%d" % i, i)
    pairs = [(i, j) for i in range(n) for j in range(n) if rel[i, j]]
    for i, j in pairs:
        bld.add_morphism(i, j, (i, j), "le(%d,%d)" % (i, j))
    return bld.finish(
        [(i, i) for i in range(n)],
        compose_data=lambda gd, fd, a, b, c: (a, c),
    )


def codiscrete_groupoid(blocks, name="codiscrete"):
    """Disjoint union of codiscrete groupoids with the given block sizes."""
    from patcalc.fincat import CategoryBuilder

    bld = CategoryBuilder(name)
    objs = []
    for bi, sz in enumerate(blocks):
        for i in range(sz):
            objs.append((bi, len(objs)))
            bld.add_object("o%d" % (len(objs) - 1), objs[-1])
    for a, (ba, _) in enumerate(objs):
        for b, (bb, _) in enumerate(objs):
            if ba == bb:
                bld.add_morphism(a, b, (a, b), "u(%d,%d)" % (a, b))
    return bld.finish(
        [(a, a) for a in range(len(objs))],
        compose_data=lambda gd, fd, a, b, c: (a, c),
    )


def cyclic_monoid_category(k, name=None):
    """One object, morphisms Z/k under addition."""
    from patcalc.fincat import CategoryBuilder

    bld = CategoryBuilder(name or "Z%d" % k)
    bld.add_object("*", "*")
    for g in range(k):
        bld.add_morphism(0, 0, g, "g%d" % g)
    return bld.finish(
        [0], compose_data=lambda gd, fd, a, b, c, k=k: (gd + fd) % k
    )


def random_category(rng, max_obj=5):
    kind = int(rng.integers(0, 3))
    if kind == 0:
        n = int(rng.integers(1, max_obj + 1))
        return preorder_category(random_preorder(rng, n))
    if kind == 1:
        blocks = []
        left = int(rng.integers(1, max_obj + 1))
        while left > 0:
            b = int(rng.integers(1, left + 1))
            blocks.append(b)
            left -= b
        return codiscrete_groupoid(blocks)
    return cyclic_monoid_category(int(rng.integers(1, 5)))


def constant_functor(cat, size, name="const"):
    from patcalc.kan import SetFunctor

    ident = tuple(range(size))
    return SetFunctor(name, cat, [size] * cat.n_obj, [ident] * cat.n_mor)


def sum_functor(F, G, name=None):
    from patcalc.kan import SetFunctor

    C = F.cat
    sizes = [F.sizes[o] + G.sizes[o] for o in range(C.n_obj)]
    maps = []
    for m in range(C.n_mor):
        a = int(C.src[m])
        maps.append(
            tuple(F.maps[m])
            + tuple(G.maps[m][x] + F.sizes[int(C.tgt[m])] for x in range(G.sizes[a]))
        )
    return SetFunctor(name or "%s+%s" % (F.name, G.name), C, sizes, maps)


def random_set_functor(rng, cat, depth=2):
    """Random functor built from representables and constants by sums and
    products; functorial by construction."""
    from patcalc.kan import pointwise_product, representable

    if depth == 0 or rng.random() < 0.4:
        if cat.n_mor and rng.random() < 0.6:
            return representable(cat, int(rng.integers(0, cat.n_obj)))
        return constant_functor(cat, int(rng.integers(0, 3)))
    F = random_set_functor(rng, cat, depth - 1)
    G = random_set_functor(rng, cat, depth - 1)
    if rng.random() < 0.5:
        return sum_functor(F, G)
    return pointwise_product(F, G)


def codiscrete_obj_functor(A, B, obj_map, name="col"):
    """Between codiscrete-style categories any object map is a functor."""
    from patcalc.fincat import FinFunctor

    mor_map = np.zeros(A.n_mor, dtype=np.int32)
    ok = True
    for m in range(A.n_mor):
        a, b = obj_map[int(A.src[m])], obj_map[int(A.tgt[m])]
        hom = B.hom(a, b)
        if len(hom) == 0:
            ok = False
            break
        mor_map[m] = hom[0]
    if not ok:
        return None
    return FinFunctor(name, A, B, np.asarray(obj_map, dtype=np.int32), mor_map)


def random_kan_instance(rng):
    """A functor K: A -> B suitable for testing Kan extensions against the
    brute-force oracles, drawn from several construction families."""
    from patcalc.fincat import FinFunctor, full_subcategory, terminal_category

    kind = int(rng.integers(0, 5))
    if kind == 0:
        B = random_category(rng)
        keep = [o for o in range(B.n_obj) if rng.random() < 0.7]
        if not keep:
            keep = [int(rng.integers(0, B.n_obj))]
        return full_subcategory(B, keep).incl
    if kind == 1:
        A = codiscrete_groupoid([1] * int(rng.integers(1, 4)) + [2])
        B = codiscrete_groupoid([int(rng.integers(1, 3)), int(rng.integers(1, 3))])
        K = codiscrete_obj_functor(
            A, B, [int(rng.integers(0, B.n_obj)) for _ in range(A.n_obj)]
        )
        if K is not None:
            return K
    if kind == 2:
        j = int(rng.integers(1, 4))
        k = j * int(rng.integers(1, 4))
        A, B = cyclic_monoid_category(k), cyclic_monoid_category(j)
        return FinFunctor(
            "mod%d" % j,
            A,
            B,
            np.zeros(1, dtype=np.int32),
            np.asarray([g % j for g in range(k)], dtype=np.int32),
        )
    if kind == 3:
        A = random_category(rng)
        return FinFunctor(
            "id",
            A,
            A,
            np.arange(A.n_obj, dtype=np.int32),
            np.arange(A.n_mor, dtype=np.int32),
        )
    A = random_category(rng)
    T = terminal_category()
    return FinFunctor(
        "bang",
        A,
        T,
        np.zeros(A.n_obj, dtype=np.int32),
        np.zeros(A.n_mor, dtype=np.int32),
    )
