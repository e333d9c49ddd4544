import numpy as np
import pytest

import oracles
from patcalc import stdlib
from patcalc.errors import TableError
from patcalc.fincat import (
    CategoryBuilder,
    FinFunctor,
    check_equivalence,
    full_subcategory,
    groupoid_core,
    opposite,
    product,
    same_tables,
    subcategory,
    terminal_category,
    validate_category,
)

RNG = np.random.default_rng(20260823)


def test_builder_families_validate():
    for spec in [
        stdlib.BuilderSpec("f_star", 3),
        stdlib.BuilderSpec("delta_op", 3),
        stdlib.BuilderSpec("delta_k_op", 2, 2),
        stdlib.BuilderSpec("ass", 2),
        stdlib.BuilderSpec("bimod", 2),
        stdlib.BuilderSpec("cmod", 2),
        stdlib.BuilderSpec("fstar_coslice", 2),
        stdlib.BuilderSpec("delta_op_slice1", 2),
    ]:
        cat = stdlib.build_pattern(spec).cat
        rep = validate_category(cat)
        assert rep.passed, (spec.family, rep.summary())


def test_builder_rejects_wrong_identity():
    bld = CategoryBuilder("bad")
    bld.add_object("a", "a")
    bld.add_morphism(0, 0, "id")
    bld.add_morphism(0, 0, "e")
    # every composite collapses to "id", so e.id = id breaks the identity law
    cat = bld.finish(["id"], compose_data=lambda gd, fd, a, b, c: "id")
    rep = validate_category(cat)
    assert not rep.passed


def test_random_preorders_validate():
    for _ in range(25):
        rel = oracles.random_preorder(RNG, int(RNG.integers(1, 6)))
        cat = oracles.preorder_category(rel)
        assert validate_category(cat).passed


def test_opposite_involution_and_homs():
    C = stdlib.f_star(2).cat
    Cop = opposite(C)
    assert Cop.n_mor == C.n_mor
    for a in range(C.n_obj):
        for b in range(C.n_obj):
            assert C.hom_size(a, b) == Cop.hom_size(b, a)
    assert same_tables(opposite(Cop), C)
    # composition transposes
    m = C.hom(1, 2)[0]
    n = C.hom(2, 2)[0]
    assert Cop.compose(m, n) == C.compose(n, m)


def test_product_counts():
    A = oracles.cyclic_monoid_category(2)
    B = oracles.cyclic_monoid_category(3)
    PR = product(A, B)
    assert PR.cat.n_obj == 1
    assert PR.cat.n_mor == 6
    assert validate_category(PR.cat).passed
    assert PR.p1.validate().passed and PR.p2.validate().passed


def test_terminal_category():
    T = terminal_category()
    assert T.n_obj == 1 and T.n_mor == 1
    assert validate_category(T).passed


def test_full_subcategory_and_inclusion():
    C = stdlib.f_star(2).cat
    sub = full_subcategory(C, [0, 1])
    assert sub.cat.n_obj == 2
    # hom blocks restrict exactly
    for a in range(2):
        for b in range(2):
            old_a, old_b = sub.obj_to_old[a], sub.obj_to_old[b]
            assert sub.cat.hom_size(a, b) == C.hom_size(int(old_a), int(old_b))
    assert sub.incl.validate().passed


def test_groupoid_core_is_groupoid():
    C = stdlib.f_star(2).cat
    core = groupoid_core(C)
    G = core.cat
    assert validate_category(G).passed
    iso_mask, _ = G.iso_info()
    assert iso_mask.all()
    # <n> has n! automorphisms in the core
    sizes = sorted(G.hom_size(o, o) for o in range(G.n_obj))
    assert sizes == [1, 1, 2]


def test_check_equivalence_identity_and_collapse():
    C = stdlib.f_star(2).cat
    ident = FinFunctor(
        "id", C, C, np.arange(C.n_obj, dtype=np.int32), np.arange(C.n_mor, dtype=np.int32)
    )
    assert check_equivalence(ident).passed
    # codiscrete collapse: 2 objects -> 1 object is an equivalence
    A = oracles.codiscrete_groupoid([2])
    B = oracles.codiscrete_groupoid([1])
    K = oracles.codiscrete_obj_functor(A, B, [0, 0])
    assert check_equivalence(K).passed
    # two components -> one is not essentially surjective the other way
    A2 = oracles.codiscrete_groupoid([1, 1])
    K2 = oracles.codiscrete_obj_functor(B, A2, [0])
    assert not check_equivalence(K2).passed


def test_compose_rejects_noncomposable():
    C = stdlib.f_star(2).cat
    f = C.hom(0, 1)[0]
    with pytest.raises(TableError):
        C.compose(f, f)


def test_subcategory_closure_check():
    C = oracles.cyclic_monoid_category(4)
    keep = np.ones(C.n_mor, dtype=bool)
    keep[3] = False  # g1.g2 = g3 escapes
    with pytest.raises(TableError):
        subcategory(C, keep_mor=keep)


def test_iso_info_matches_brute():
    C = stdlib.f_star(2).cat
    iso_mask, inv = C.iso_info()
    for m in range(C.n_mor):
        a, b = int(C.src[m]), int(C.tgt[m])
        has_inverse = any(
            C.compose(w, m) == C.identity_of(a) and C.compose(m, w) == C.identity_of(b)
            for w in C.hom(b, a)
        )
        assert bool(iso_mask[m]) == has_inverse
        if iso_mask[m]:
            w = int(inv[m])
            assert C.compose(w, m) == C.identity_of(a)
