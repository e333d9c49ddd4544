"""Morita comparisons between patterns.

A morphism of extendable patterns induces the same category of algebras on
both sides exactly when it is an equivalence on elementary objects and, for
every elementary E, an equivalence Act(E) -> Act(f E) of action groupoids.
`check_morita` decides both conditions on the materialised tables and
`transport_free_algebra` verifies the practical consequence: free algebras
on pulled-back generators match degreewise across the morphism.

Both checks are truncation-aware: they compare what exists inside the size
budgets of the two patterns, which must agree for the verdict to be honest.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, TableError
from .fincat import FinFunctor, check_equivalence, groupoid_core
from .freealg import act_groupoid, check_extendable_pattern, free_algebra
from .kan import precompose
from .patterns import el_pattern
from .report import Report


@dataclass
class MoritaReport:
    """Verdict of `check_morita`: the elementary comparison, the per
    elementary Act comparison, and the size budget they were run at."""

    morphism: object
    elementary_check: Report
    act_check: Report
    budget: int

    @property
    def passed(self):
        return self.elementary_check.passed and self.act_check.passed

    def to_report(self):
        rep = Report("morita(%s)" % self.morphism.name)
        rep.add(self.elementary_check)
        rep.add(self.act_check)
        rep.note("compared at size budget %d" % self.budget)
        return rep

    def summary(self):
        return self.to_report().summary()


def _elementary_functor(f):
    """Restrict f to the elementary parts; None plus a witness when some
    elementary object lands outside the target's elementary part."""
    S_el, s_incl = el_pattern(f.source)
    T_el, t_incl = el_pattern(f.target)
    F = f.functor
    t_obj_of = {int(t_incl.ob(j)): j for j in range(T_el.cat.n_obj)}
    obj_map = []
    for i in range(S_el.cat.n_obj):
        im = int(F.ob(int(s_incl.ob(i))))
        if im not in t_obj_of:
            return None, "%s maps to non-elementary %s" % (
                S_el.cat.obj_labels[i],
                f.target.cat.obj_labels[im],
            )
        obj_map.append(t_obj_of[im])
    t_mor_of = {int(t_incl.mor(m)): m for m in range(T_el.cat.n_mor)}
    mor_map = []
    for m in range(S_el.cat.n_mor):
        im = int(F.mor(int(s_incl.mor(m))))
        if im not in t_mor_of:
            return None, "%s maps outside the elementary part" % (
                S_el.cat.mor_str(m)
            )
        mor_map.append(t_mor_of[im])
    return (
        FinFunctor(
            "%s^el" % f.name,
            S_el.cat,
            T_el.cat,
            np.asarray(obj_map, dtype=np.int32),
            np.asarray(mor_map, dtype=np.int32),
        ),
        None,
    )


def _elementary_check(f):
    """Condition (1): equivalence of elementary groupoids."""
    rep = Report("morita-elementary(%s)" % f.name)
    f_el, bad = _elementary_functor(f)
    if not rep.check(
        "elementary-image", bad is None, counterexamples=(bad,) if bad else ()
    ):
        return rep, None
    core_S = groupoid_core(f_el.source)
    core_T = groupoid_core(f_el.target)
    cobj = [
        int(core_T.obj_to_new[f_el.ob(int(core_S.obj_to_old[i]))])
        for i in range(core_S.cat.n_obj)
    ]
    cmor = [
        int(core_T.mor_to_new[f_el.mor(int(core_S.mor_to_old[m]))])
        for m in range(core_S.cat.n_mor)
    ]
    core_f = FinFunctor(
        "%s^core" % f_el.name,
        core_S.cat,
        core_T.cat,
        np.asarray(cobj, dtype=np.int32),
        np.asarray(cmor, dtype=np.int32),
    )
    rep.add(check_equivalence(core_f))
    return rep, f_el


def _act_comparison_functor(f, E, agS, agT):
    """Act(E) -> Act(f E), alpha |-> f(alpha) on objects and arrows."""
    F = f.functor
    CS = agS.cat
    obj_map = []
    for al in agS.objects:
        alT = int(F.mor(al))
        if alT not in agT.index:
            return None, "%s has no image in Act(%s)" % (
                f.source.cat.mor_str(al),
                f.target.cat.obj_labels[int(F.ob(E))],
            )
        obj_map.append(agT.index[alT])
    dix = agT.cat.data_index()
    mor_map = []
    for m in range(CS.n_mor):
        key = (
            obj_map[int(CS.src[m])],
            obj_map[int(CS.tgt[m])],
            int(F.mor(int(CS.mor_data[m]))),
        )
        if key not in dix:
            return None, "image of %s is not an Act morphism" % CS.mor_str(m)
        mor_map.append(dix[key])
    return (
        FinFunctor(
            "act[%s]" % f.source.cat.obj_labels[E],
            CS,
            agT.cat,
            np.asarray(obj_map, dtype=np.int32),
            np.asarray(mor_map, dtype=np.int32),
        ),
        None,
    )


def _act_check(f):
    """Condition (2): Act(E) -> Act(f E) is an equivalence for every
    elementary E of the source."""
    rep = Report("morita-act(%s)" % f.name)
    for E in f.source.elementary_ids():
        label = f.source.cat.obj_labels[E]
        agS = act_groupoid(f.source, E)
        agT = act_groupoid(f.target, int(f.functor.ob(E)))
        comp, bad = _act_comparison_functor(f, E, agS, agT)
        if not rep.check(
            "act-image(%s)" % label,
            bad is None,
            counterexamples=(bad,) if bad else (),
        ):
            continue
        rep.add(check_equivalence(comp))
    return rep


def check_morita(f):
    """Decide whether f is a Morita equivalence of extendable patterns.

    Both endpoints must pass `check_extendable_pattern`; otherwise the
    question is not well-posed and a PreconditionError is raised.
    """
    pre_s = check_extendable_pattern(f.source)
    if not pre_s.passed:
        raise PreconditionError(
            "source %s is not extendable at budget %d"
            % (f.source.name, f.source.level)
        )
    pre_t = check_extendable_pattern(f.target)
    if not pre_t.passed:
        raise PreconditionError(
            "target %s is not extendable at budget %d"
            % (f.target.name, f.target.level)
        )
    el_rep, _ = _elementary_check(f)
    act_rep = _act_check(f)
    if el_rep.passed and not act_rep.passed:
        act_rep.note(
            "elementary comparison passed while an Act comparison failed,"
            " so the Act condition rules independently here"
        )
    return MoritaReport(f, el_rep, act_rep, min(f.source.level, f.target.level))


def transport_free_algebra(f, phi, bound):
    """Compare free algebras across f: generators phi on the target's
    elementary part are pulled back along f and the degreewise orbit sets
    must biject under alpha |-> f(alpha)."""
    T_el, t_incl = el_pattern(f.target)
    if phi.cat is not T_el.cat:
        raise TableError("generators must live on the target's elementary part")
    rep = Report("transport(%s)" % f.name)
    f_el, bad = _elementary_functor(f)
    if not rep.check(
        "elementary-image", bad is None, counterexamples=(bad,) if bad else ()
    ):
        return rep
    phi_S = precompose(phi, f_el, name="%s.%s" % (phi.name, f_el.name))
    A_S = free_algebra(f.source, phi_S, bound)
    A_T = free_algebra(f.target, phi, bound)
    F = f.functor
    TC = f.target.cat
    t_obj_of = {int(t_incl.ob(j)): j for j in range(T_el.cat.n_obj)}
    for E in A_S.elementaries:
        label = f.source.cat.obj_labels[E]
        TE = int(F.ob(E))
        agS, agT = A_S.acts[E], A_T.acts[TE]
        for d in range(bound + 1):
            colS = A_S.components[(E, d)]
            colT = A_T.components[(TE, d)]
            layS = A_S.layouts[(E, d)]
            layT = A_T.layouts[(TE, d)]
            images = []
            bad = None
            for k in range(colS.size):
                si, xi = colS.representative(k)
                loc = layS.order[si]
                x = layS.elems[si][xi]
                alT = int(F.mor(agS.objects[loc]))
                locT = agT.index.get(alT)
                if locT is None:
                    bad = "class %d has no Act image" % k
                    break
                y = []
                for i in range(d):
                    lT = A_T.lifts[TE][locT][i]
                    FlS = int(F.mor(A_S.lifts[E][loc][i]))
                    a_el = t_obj_of[int(TC.tgt[lT])]
                    b_el = t_obj_of[int(TC.tgt[FlS])]
                    lo, hi = T_el.cat.hom_bounds(a_el, b_el)
                    es = [
                        me
                        for me in range(lo, hi)
                        if TC.compose(int(t_incl.mor(me)), lT) == FlS
                    ]
                    if len(es) != 1 or not T_el.cat.is_iso(es[0]):
                        bad = "no unique elementary iso aligning cell %d" % i
                        break
                    y.append(phi.apply(T_el.cat.inverse(es[0]), x[i]))
                if bad:
                    break
                ti = layT.sub_of(locT)
                images.append(colT.class_of(ti, layT.pos[ti][tuple(y)]))
            ok = (
                bad is None
                and len(set(images)) == colS.size
                and colS.size == colT.size
            )
            rep.check(
                "degree-%d(%s)" % (d, label),
                ok,
                witnesses=("%d orbits on both sides" % colS.size,) if ok else (),
                counterexamples=(bad,)
                if bad
                else ()
                if ok
                else ("%d vs %d orbits" % (colS.size, colT.size),),
            )
    rep.note("degrees compared up to bound %d" % bound)
    return rep
