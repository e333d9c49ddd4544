import numpy as np
import pytest

import oracles
from patcalc import stdlib
from patcalc.errors import MissingFactorization
from patcalc.kan import SetFunctor, representable
from patcalc.patterns import (
    PatternData,
    check_cartesian_pattern,
    check_monoid,
    check_operad_fibration,
    commutative_monoid_functor,
    el_pattern,
    factorize,
    fiber_product_with_gamma,
    gamma_times,
    identity_morphism,
    int_pattern,
    monoid_gamma_roundtrip,
)

SMALL = [
    stdlib.BuilderSpec("f_star", 3),
    stdlib.BuilderSpec("delta_op", 3),
    stdlib.BuilderSpec("delta_k_op", 2, 2),
    stdlib.BuilderSpec("ass", 2),
    stdlib.BuilderSpec("bimod", 2),
    stdlib.BuilderSpec("cmod", 2),
    stdlib.BuilderSpec("fstar_coslice", 2),
    stdlib.BuilderSpec("delta_op_slice1", 2),
]


def test_families_are_cartesian_patterns():
    for spec in SMALL:
        P = stdlib.build_pattern(spec)
        rep = check_cartesian_pattern(P)
        assert rep.passed, (spec.family, rep.summary())
    assert check_cartesian_pattern(gamma_times(2).pattern).passed
    assert check_cartesian_pattern(
        fiber_product_with_gamma(stdlib.f_star(2)).pattern
    ).passed


def test_swapped_classes_fail_with_witness():
    P = stdlib.f_star(2)
    Q = PatternData(
        "swapped", P.cat, P.active, P.inert, P.elementary, P.size, P.level
    )
    rep = check_cartesian_pattern(Q)
    assert not rep.passed
    assert rep.all_counterexamples()


def test_factorize_composes_back():
    for spec in [stdlib.BuilderSpec("f_star", 2), stdlib.BuilderSpec("delta_op", 2)]:
        P = stdlib.build_pattern(spec)
        C = P.cat
        for m in range(C.n_mor):
            i, a = factorize(P, m)
            assert P.inert[i] and P.active[a]
            assert C.compose(a, i) == m


def test_factorize_missing_is_reported():
    # the toy pattern with only identities inert and everything active still
    # factors; a pattern where some morphism has no inert part within the
    # classes must raise
    P = stdlib.f_star(2)
    C = P.cat
    inert = np.zeros(C.n_mor, dtype=bool)
    inert[C.identity] = True
    Q = PatternData("inert-poor", C, inert, P.active, P.elementary, P.size, P.level)
    bad = [m for m in range(C.n_mor) if not Q.active[m] and not m in C.identity]
    with pytest.raises(MissingFactorization):
        factorize(Q, bad[0])


def test_el_and_int_pattern_cached():
    P = stdlib.f_star(2)
    E1, i1 = el_pattern(P)
    E2, i2 = el_pattern(P)
    assert E1.cat is E2.cat and i1 is i2
    I1, j1 = int_pattern(P)
    I2, _ = int_pattern(P)
    assert I1.cat is I2.cat
    assert j1.validate().passed


def test_elementary_parts():
    P = stdlib.f_star(3)
    E, _ = el_pattern(P)
    assert E.cat.n_obj == 1  # just <1>
    assert E.cat.n_mor == 1
    D = stdlib.build_pattern(stdlib.BuilderSpec("bimod", 2))
    E, _ = el_pattern(D)
    assert E.cat.n_obj == 3  # (1,0), (0,1)-marked, (0,1)


def test_operad_fibration_families():
    assert check_operad_fibration(stdlib.f_star(3)).passed
    assert check_operad_fibration(stdlib.build_pattern(stdlib.BuilderSpec("ass", 2))).passed
    assert check_operad_fibration(stdlib.build_pattern(stdlib.BuilderSpec("bimod", 2))).passed
    # the simplex side has two interval inclusions lifting each inert
    # projection, so the strict uniqueness clause fails there
    rep = check_operad_fibration(stdlib.build_pattern(stdlib.BuilderSpec("delta_op", 2)))
    assert not rep.passed
    assert "comparison maps" in rep.all_counterexamples()[0]


def test_commutative_monoid_functor_values():
    for k in (2, 3):
        X = commutative_monoid_functor(3, tuple(tuple((i + j) % k for j in range(k)) for i in range(k)))
        assert X.validate().passed
        assert list(X.sizes) == [k**n for n in range(4)]
        rep = check_monoid(stdlib.f_star(3), X)
        assert rep.passed, rep.summary()


def test_check_monoid_rejects_valid_non_monoids():
    P = stdlib.f_star(2)
    # constant functor of size 2 is functorial but its value at <0> is not
    # a point
    X = oracles.constant_functor(P.cat, 2)
    rep = check_monoid(P, X)
    assert not rep.passed and rep.all_counterexamples()
    # representable at <1> is functorial but fails the Segal comparison
    Y = representable(P.cat, 1)
    rep = check_monoid(P, Y)
    assert not rep.passed and rep.all_counterexamples()


def test_monoid_gamma_roundtrip_small():
    P = stdlib.f_star(2)
    X = commutative_monoid_functor(2, ((0, 1), (1, 0)))
    out = monoid_gamma_roundtrip(P, X)
    assert out.report.passed, out.report.summary()


def test_gamma_times_structure():
    G = gamma_times(2)
    assert check_cartesian_pattern(G.pattern).passed
    # ev0 lands in the base pattern
    assert G.ev0.validate().passed


def test_fiber_product_sections():
    FP = fiber_product_with_gamma(stdlib.f_star(2))
    assert FP.i_p.validate().passed
    assert FP.pr_p.validate().passed
    assert check_cartesian_pattern(FP.pattern).passed
    # the section followed by the first projection is the identity on objects
    for o in range(stdlib.f_star(2).cat.n_obj):
        assert FP.pr_p.ob(FP.i_p.ob(o)) == o


def test_pattern_morphism_checks_and_composition():
    c = stdlib.build_morphism(stdlib.MorphismSpec("cut", 2))
    assert c.check().passed
    cp = stdlib.build_morphism(stdlib.MorphismSpec("cut_prime", 2))
    assert cp.check().passed
    m = stdlib.build_morphism(stdlib.MorphismSpec("mu", 2))
    assert m.check().passed
    ident = identity_morphism(c.target)
    comp = c.then(ident)
    assert comp.check().passed
    assert comp.source is c.source and comp.target is c.target
