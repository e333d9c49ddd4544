import numpy as np

import oracles
from patcalc import stdlib
from patcalc.fincat import FinFunctor, full_subcategory, terminal_category
from patcalc.kan import (
    SetNat,
    check_cofinal,
    colimit,
    lan,
    limit,
    pointwise_product,
    precompose,
    ran,
    representable,
    set_functor_equal,
)

RNG = np.random.default_rng(7)


def test_colimit_limit_against_brute():
    for _ in range(40):
        C = oracles.random_category(RNG)
        F = oracles.random_set_functor(RNG, C)
        assert F.validate().passed
        col = colimit(F)
        n, classes = oracles.brute_colimit(F)
        assert col.size == n
        # the package's class map must induce the same partition
        off = 0
        mine = []
        for o in range(C.n_obj):
            for x in range(F.sizes[o]):
                mine.append(col.class_of(o, x))
            off += F.sizes[o]
        pairing = {}
        for k, b in zip(mine, classes):
            assert pairing.setdefault(k, b) == b
        assert limit(F).size == oracles.brute_limit(F)


def test_lan_ran_against_brute():
    for _ in range(30):
        K = oracles.random_kan_instance(RNG)
        F = oracles.random_set_functor(RNG, K.source)
        L = lan(F, K)
        assert list(L.functor.sizes) == oracles.brute_lan_sizes(F, K)
        R = ran(F, K)
        assert list(R.functor.sizes) == oracles.brute_ran_sizes(F, K)
        assert L.functor.validate().passed
        assert R.functor.validate().passed


def test_lan_ran_along_identity():
    C = stdlib.f_star(2).cat
    ident = FinFunctor(
        "id", C, C, np.arange(C.n_obj, dtype=np.int32), np.arange(C.n_mor, dtype=np.int32)
    )
    F = representable(C, 1)
    L = lan(F, ident)
    R = ran(F, ident)
    assert list(L.functor.sizes) == list(F.sizes)
    assert list(R.functor.sizes) == list(F.sizes)


def test_colimit_of_representable_is_a_point():
    for o in range(3):
        C = stdlib.f_star(2).cat
        assert colimit(representable(C, o)).size == 1


def test_lan_along_bang_is_colimit():
    T = terminal_category()
    for _ in range(10):
        C = oracles.random_category(RNG)
        F = oracles.random_set_functor(RNG, C)
        K = FinFunctor(
            "bang", C, T,
            np.zeros(C.n_obj, dtype=np.int32), np.zeros(C.n_mor, dtype=np.int32),
        )
        assert lan(F, K).functor.sizes[0] == colimit(F).size
        assert ran(F, K).functor.sizes[0] == limit(F).size


def test_cofinal_max_of_chain():
    rel = np.zeros((3, 3), dtype=bool)
    for i in range(3):
        for j in range(i, 3):
            rel[i, j] = True
    C = oracles.preorder_category(rel)
    top = full_subcategory(C, [2])
    bot = full_subcategory(C, [0])
    assert check_cofinal(top.incl).passed
    assert not check_cofinal(bot.incl).passed


def test_cofinal_invariance_of_colimit():
    for _ in range(15):
        n = int(RNG.integers(2, 5))
        rel = oracles.random_preorder(RNG, n)
        rel[:, n - 1] = True  # force a maximum, then re-close
        for _ in range(n):
            rel = rel | (rel @ rel)
        C = oracles.preorder_category(rel)
        F = oracles.random_set_functor(RNG, C)
        K = full_subcategory(C, [n - 1]).incl
        assert check_cofinal(K).passed
        assert colimit(F).size == colimit(precompose(F, K)).size


def test_pointwise_product_sizes():
    C = stdlib.f_star(2).cat
    F = representable(C, 1)
    G = representable(C, 2)
    P = pointwise_product(F, G)
    assert list(P.sizes) == [F.sizes[o] * G.sizes[o] for o in range(C.n_obj)]
    assert P.validate().passed


def test_setnat_validate_and_bijection():
    rel = np.zeros((2, 2), dtype=bool)
    rel[0, 0] = rel[1, 1] = rel[0, 1] = True
    C = oracles.preorder_category(rel)
    F = representable(C, 0)
    G = oracles.constant_functor(C, 2)
    ident = SetNat(F, F, [tuple(range(F.sizes[o])) for o in range(C.n_obj)])
    assert ident.validate().passed and ident.is_bijection()
    # constant target: both components must pick the same value
    bad = SetNat(F, G, [(0,), (1,)])
    assert not bad.validate().passed
    good = SetNat(F, G, [(1,), (1,)])
    assert good.validate().passed and not good.is_bijection()


def test_set_functor_equal():
    C = stdlib.f_star(2).cat
    F = representable(C, 1)
    assert set_functor_equal(F, representable(C, 1))
    assert not set_functor_equal(F, representable(C, 2))
