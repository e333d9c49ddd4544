"""Workspace loading and the `patcalc` command line.

A workspace maps names to categories, patterns, pattern morphisms,
functors, presheaves and monoids, loaded from DSL files (`-f FILE`) and
validated on load.  Command arguments resolve against the workspace
first and then against the builtin registry, so `morita cut --level 3`
works without any file.  Builtin shorthands: pattern families by name
(`delta_k_op:K` selects the K-fold variant), morphisms `cut`,
`cut_prime`, `mu`, `int_inclusion:FAMILY`, `el_inclusion:FAMILY`,
`identity:FAMILY`, monoids `zK` (discrete cyclic) and `bK` (one-object
cyclic) over the pointed-sets pattern.

Every command accepts `--json` and `--level N`; the default level comes
from PATCALC_LEVEL (else 3).  JSON reports carry the fields command,
inputs, status, witnesses, counterexamples, budget, timings in that
order; timings are wall-clock and excluded from golden comparisons.
Exit code 0 means pass, 1 fail, 2 error.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import day, dsl, freealg, morita, stdlib
from .errors import (
    CommandError,
    DslError,
    MissingFactorization,
    PatcalcError,
    TypeMismatch,
    UnknownCommand,
    UnknownReference,
)
from .fincat import FinFunctor, validate_category
from .kan import SetFunctor, representable
from .patterns import (
    PatternData,
    check_cartesian_pattern,
    check_monoid,
    check_operad_fibration,
    commutative_monoid_functor,
    factorize,
    gamma_times,
    identity_morphism,
    monoid_gamma_roundtrip,
)
from .report import Report

_PATTERN_FAMILIES = (
    "f_star",
    "delta_op",
    "delta_k_op",
    "ass",
    "bimod",
    "cmod",
    "fstar_coslice",
    "delta_op_slice1",
)


def _zk_table(k):
    return tuple(tuple((i + j) % k for j in range(k)) for i in range(k))


def _is_f_star(P):
    return P.cat is stdlib.f_star(P.level).cat


def _digitwise_mult(P, k):
    def mult(o, g, h):
        n = P.obj_size(o)
        gd, hd = [], []
        for _ in range(n):
            g, r = divmod(g, k)
            gd.append(r)
            h, r = divmod(h, k)
            hd.append(r)
        out = 0
        for a, b in zip(reversed(gd), reversed(hd)):
            out = out * k + (a + b) % k
        return out

    return mult


def builtin_pattern(name, level):
    fam, _, karg = name.partition(":")
    if fam == "gamma_times":
        return gamma_times(level).pattern
    if fam not in _PATTERN_FAMILIES:
        return None
    k = int(karg) if karg else 2
    return stdlib.build_pattern(stdlib.BuilderSpec(fam, level, k))


def builtin_morphism(name, level):
    fam, _, base = name.partition(":")
    if fam in ("cut", "cut_prime", "mu"):
        return stdlib.build_morphism(stdlib.MorphismSpec(fam, level))
    if fam in ("int_inclusion", "el_inclusion", "identity") and base:
        P = builtin_pattern(base, level)
        if P is None:
            return None
        if fam == "int_inclusion":
            return stdlib.int_inclusion(P)
        if fam == "el_inclusion":
            return stdlib.el_inclusion(P)
        return identity_morphism(P)
    return None


def builtin_monoid(name, level):
    if len(name) >= 2 and name[0] in "zb" and name[1:].isdigit():
        k = int(name[1:])
        if k >= 1:
            P = stdlib.f_star(level)
            M = commutative_monoid_functor(level, _zk_table(k), name="z%d" % k)
            if name[0] == "z":
                return day.discrete_cat_monoid(P, M, name=name)
            return day.one_object_cat_monoid(
                P, M, _digitwise_mult(P, k), name=name
            )
    return None


def builtin_set_functor(name, level, cat):
    if name.startswith("z") and name[1:].isdigit():
        M = commutative_monoid_functor(
            level, _zk_table(int(name[1:])), name=name
        )
        if M.cat is not cat:
            raise TypeMismatch(
                "builtin %s lives on the pointed-sets pattern at level %d"
                % (name, level)
            )
        return M
    return None


# -- workspace --------------------------------------------------------------


class Workspace:
    """Named bindings, each validated when loaded."""

    def __init__(self):
        self.bindings = {}
        self.kinds = {}
        self.functor_targets = {}

    def bind(self, name, kind, value, line=0, col=0):
        if name in self.bindings:
            raise dsl.DuplicateName(name, line, col)
        self.bindings[name] = value
        self.kinds[name] = kind

    def get(self, name, kind=None):
        if name not in self.bindings:
            return None
        if kind is not None and self.kinds[name] != kind:
            raise TypeMismatch(
                "%s is a %s, not a %s" % (name, self.kinds[name], kind)
            )
        return self.bindings[name]

    def load_text(self, text, default_level=3):
        self.load_document(dsl.parse_dsl(text), default_level)

    def load_document(self, doc, default_level=3):
        for d in doc.decls:
            if isinstance(d, dsl.CategoryDecl):
                self.bind(d.name, "category", _build_category(d), d.line, d.col)
            elif isinstance(d, dsl.PatternFromDecl):
                self.bind(
                    d.name, "pattern", _build_pattern_from(self, d), d.line, d.col
                )
            elif isinstance(d, dsl.BuiltinDecl):
                kind, value = _build_builtin(self, d, default_level)
                self.bind(d.name, kind, value, d.line, d.col)
            elif isinstance(d, dsl.FunctorDecl):
                self.bind(
                    d.name, "functor", _build_functor(self, d), d.line, d.col
                )
                self.functor_targets[d.name] = d.dst.text
            elif isinstance(d, dsl.PresheafDecl):
                self.bind(
                    d.name, "presheaf", _build_presheaf(self, d), d.line, d.col
                )
            else:
                raise CommandError("unhandled declaration %r" % (d,))


def _underlying_cat(ws, ref):
    got = ws.get(ref.text)
    if got is None:
        raise UnknownReference(ref.text, ref.line, ref.col)
    kind = ws.kinds[ref.text]
    if kind == "category":
        return got
    if kind == "pattern":
        return got.cat
    raise TypeMismatch("%s is a %s, not a category" % (ref.text, kind))


def _obj_by_ref(cat, ref):
    if ref.text.isdigit():
        o = int(ref.text)
        if 0 <= o < cat.n_obj:
            return o
        raise UnknownReference(ref.text, ref.line, ref.col)
    for o in range(cat.n_obj):
        if cat.obj_labels[o] == ref.text:
            return o
    raise UnknownReference(ref.text, ref.line, ref.col)


def _mor_by_ref(cat, ref):
    if ref.text.isdigit():
        m = int(ref.text)
        if 0 <= m < cat.n_mor:
            return m
        raise UnknownReference(ref.text, ref.line, ref.col)
    for m in range(cat.n_mor):
        if cat.mor_labels[m] == ref.text:
            return m
    raise UnknownReference(ref.text, ref.line, ref.col)


def _build_category(d):
    from .fincat import CategoryBuilder

    bld = CategoryBuilder(d.name)
    for r in d.objects:
        bld.add_object(r.text, r.text)
    for o, r in enumerate(d.objects):
        bld.add_morphism(o, o, "id_" + r.text, "id_" + r.text)
    obj_of = {r.text: i for i, r in enumerate(d.objects)}
    for mname, src, tgt in d.mors:
        bld.add_morphism(obj_of[src.text], obj_of[tgt.text], mname.text, mname.text)
    table = {(g.text, f.text): h.text for g, f, h in d.composes}
    idents = {"id_" + r.text for r in d.objects}

    def compose_data(gd, fd, a, b, c):
        if fd in idents:
            return gd
        if gd in idents:
            return fd
        try:
            return table[(gd, fd)]
        except KeyError:
            raise CommandError(
                "category %s: composite %s.%s is not declared"
                % (d.name, gd, fd)
            )

    cat = bld.finish(["id_" + r.text for r in d.objects], compose_data=compose_data)
    for g, f, h in d.composes:
        gid = _mor_by_ref(cat, g)
        fid = _mor_by_ref(cat, f)
        if int(cat.src[gid]) != int(cat.tgt[fid]):
            raise CommandError(
                "category %s: %s.%s is not composable" % (d.name, g, f)
            )
        if cat.compose(gid, fid) != _mor_by_ref(cat, h):
            raise CommandError(
                "category %s: declared composite %s.%s = %s conflicts"
                % (d.name, g, f, h)
            )
    rep = validate_category(cat)
    if not rep.passed:
        raise CommandError(
            "category %s failed validation: %s"
            % (d.name, "; ".join(str(c.name) for c in rep.failures()))
        )
    return cat


def _build_pattern_from(ws, d):
    cat = _underlying_cat(ws, d.base)
    size = ws.get(d.size.text)
    if size is None:
        raise UnknownReference(d.size.text, d.size.line, d.size.col)
    if ws.kinds[d.size.text] != "functor":
        raise TypeMismatch("%s is not a functor" % d.size.text)
    dst_name = ws.functor_targets.get(d.size.text)
    dst = ws.get(dst_name) if dst_name else None
    if (
        dst is None
        or ws.kinds.get(dst_name) != "pattern"
        or not _is_f_star(dst)
    ):
        raise TypeMismatch(
            "size functor %s must land in a builtin pointed-sets pattern"
            % d.size.text
        )
    if size.source is not cat:
        raise TypeMismatch(
            "size functor %s does not start at %s" % (d.size.text, d.base.text)
        )
    inert = np.zeros(cat.n_mor, dtype=bool)
    active = np.zeros(cat.n_mor, dtype=bool)
    inert[cat.identity] = True
    active[cat.identity] = True
    for r in d.inert:
        inert[_mor_by_ref(cat, r)] = True
    for r in d.active:
        active[_mor_by_ref(cat, r)] = True
    elem = np.zeros(cat.n_obj, dtype=bool)
    for r in d.elementary:
        elem[_obj_by_ref(cat, r)] = True
    P = PatternData(d.name, cat, inert, active, elem, size, dst.level)
    rep = check_cartesian_pattern(P)
    if not rep.passed:
        raise CommandError(
            "pattern %s failed validation: %s"
            % (d.name, "; ".join(str(c.name) for c in rep.failures()))
        )
    return P


def _build_builtin(ws, d, default_level):
    fam = d.family.text
    args = [r.text for r in d.args]
    ints = [int(a) for a in args if a.isdigit()]
    names = [a for a in args if not a.isdigit()]
    level = ints[0] if ints else default_level

    def named_pattern():
        if not names:
            raise CommandError(
                "builtin %s needs a pattern argument" % fam
            )
        ref = [r for r in d.args if r.text == names[0]][0]
        P = ws.get(names[0])
        if P is None:
            raise UnknownReference(ref.text, ref.line, ref.col)
        if ws.kinds[names[0]] != "pattern":
            raise TypeMismatch("%s is not a pattern" % names[0])
        return P

    if d.kind == "pattern":
        if fam == "fiber_product":
            return "pattern", stdlib.fiber_product_with_gamma(named_pattern()).pattern
        if fam == "gamma_times":
            return "pattern", gamma_times(level).pattern
        if fam in _PATTERN_FAMILIES:
            k = ints[1] if len(ints) > 1 else 2
            return "pattern", stdlib.build_pattern(
                stdlib.BuilderSpec(fam, level, k)
            )
        raise CommandError("unknown pattern builtin %r" % fam)
    if d.kind == "morphism":
        if fam in ("cut", "cut_prime", "mu"):
            return "morphism", stdlib.build_morphism(
                stdlib.MorphismSpec(fam, level)
            )
        if fam == "int_inclusion":
            return "morphism", stdlib.int_inclusion(named_pattern())
        if fam == "el_inclusion":
            return "morphism", stdlib.el_inclusion(named_pattern())
        if fam == "identity":
            return "morphism", identity_morphism(named_pattern())
        raise CommandError("unknown morphism builtin %r" % fam)
    if d.kind == "monoid":
        if fam in ("discrete_monoid", "one_object_monoid"):
            P = named_pattern()
            if not _is_f_star(P):
                raise TypeMismatch(
                    "builtin %s needs a pointed-sets pattern" % fam
                )
            k = ints[0] if ints else 2
            M = commutative_monoid_functor(
                P.level, _zk_table(k), name="z%d" % k
            )
            if fam == "discrete_monoid":
                value = day.discrete_cat_monoid(P, M, name=d.name)
            else:
                value = day.one_object_cat_monoid(
                    P, M, _digitwise_mult(P, k), name=d.name
                )
            rep = value.validate()
            if not rep.passed:
                raise CommandError("monoid %s failed validation" % d.name)
            return "monoid", value
        raise CommandError("unknown monoid builtin %r" % fam)
    raise CommandError("unknown builtin kind %r" % d.kind)


def _build_functor(ws, d):
    src = _underlying_cat(ws, d.src)
    dst = _underlying_cat(ws, d.dst)
    obj_map = np.full(src.n_obj, -1, dtype=np.int32)
    for key, val in d.obj_clauses:
        obj_map[_obj_by_ref(src, key)] = _obj_by_ref(dst, val)
    if (obj_map < 0).any():
        missing = int(np.nonzero(obj_map < 0)[0][0])
        raise CommandError(
            "functor %s leaves object %s unmapped"
            % (d.name, src.obj_labels[missing])
        )
    mor_map = np.full(src.n_mor, -1, dtype=np.int32)
    for o in range(src.n_obj):
        mor_map[src.identity_of(o)] = dst.identity_of(int(obj_map[o]))
    for key, val in d.mor_clauses:
        mor_map[_mor_by_ref(src, key)] = _mor_by_ref(dst, val)
    if (mor_map < 0).any():
        missing = int(np.nonzero(mor_map < 0)[0][0])
        raise CommandError(
            "functor %s leaves morphism %s unmapped"
            % (d.name, src.mor_str(missing))
        )
    F = FinFunctor(d.name, src, dst, obj_map, mor_map)
    rep = F.validate()
    if not rep.passed:
        raise CommandError(
            "functor %s failed validation: %s"
            % (d.name, "; ".join(str(c.name) for c in rep.failures()))
        )
    return F


def _build_presheaf(ws, d):
    cat = _underlying_cat(ws, d.base)
    sizes = [0] * cat.n_obj
    elem_of = {}
    for key, elems in d.obj_clauses:
        o = _obj_by_ref(cat, key)
        sizes[o] = len(elems)
        elem_of[o] = {e.text: i for i, e in enumerate(elems)}
    maps = [None] * cat.n_mor
    for o in range(cat.n_obj):
        maps[cat.identity_of(o)] = tuple(range(sizes[o]))
    for key, pairs in d.mor_clauses:
        m = _mor_by_ref(cat, key)
        a, b = int(cat.src[m]), int(cat.tgt[m])
        out = [None] * sizes[a]
        for p, q in pairs:
            if p.text not in elem_of.get(a, {}):
                raise UnknownReference(p.text, p.line, p.col)
            if q.text not in elem_of.get(b, {}):
                raise UnknownReference(q.text, q.line, q.col)
            out[elem_of[a][p.text]] = elem_of[b][q.text]
        if None in out:
            raise CommandError(
                "presheaf %s maps %s on only %d of %d elements"
                % (d.name, key.text, sum(v is not None for v in out), sizes[a])
            )
        maps[m] = tuple(out)
    for m in range(cat.n_mor):
        if maps[m] is None:
            if sizes[int(cat.src[m])] == 0:
                maps[m] = ()
            else:
                raise CommandError(
                    "presheaf %s has no clause for %s"
                    % (d.name, cat.mor_str(m))
                )
    X = SetFunctor(d.name, cat, sizes, maps)
    rep = X.validate()
    if not rep.passed:
        raise CommandError(
            "presheaf %s failed validation: %s"
            % (d.name, "; ".join(str(c.name) for c in rep.failures()))
        )
    return X


# -- command-level resolution ------------------------------------------------


def _resolve_pattern(ws, name, level):
    got = ws.get(name)
    if got is not None:
        if ws.kinds[name] != "pattern":
            raise TypeMismatch(
                "%s is a %s, not a pattern" % (name, ws.kinds[name])
            )
        return got
    P = builtin_pattern(name, level)
    if P is None:
        raise CommandError("unknown pattern %r" % name)
    return P


def _resolve_morphism(ws, name, level):
    got = ws.get(name)
    if got is not None:
        if ws.kinds[name] != "morphism":
            raise TypeMismatch(
                "%s is a %s, not a pattern morphism" % (name, ws.kinds[name])
            )
        return got
    f = builtin_morphism(name, level)
    if f is None:
        raise CommandError("unknown pattern morphism %r" % name)
    return f


def _resolve_monoid(ws, name, level):
    got = ws.get(name)
    if got is not None:
        if ws.kinds[name] != "monoid":
            raise TypeMismatch(
                "%s is a %s, not a monoid" % (name, ws.kinds[name])
            )
        return got
    M = builtin_monoid(name, level)
    if M is None:
        raise CommandError("unknown monoid %r" % name)
    return M


def _resolve_set_functor(ws, name, level, cat):
    got = ws.get(name)
    if got is not None:
        if ws.kinds[name] != "presheaf":
            raise TypeMismatch(
                "%s is a %s, not a presheaf" % (name, ws.kinds[name])
            )
        if got.cat is not cat:
            raise TypeMismatch(
                "presheaf %s lives on %s, not on the command's category"
                % (name, got.cat.name)
            )
        return got
    X = builtin_set_functor(name, level, cat)
    if X is None:
        raise CommandError("unknown presheaf %r" % name)
    return X


def _resolve_any(ws, name, level):
    if ws.get(name) is not None:
        return ws.kinds[name], ws.bindings[name]
    for kind, fn in (
        ("pattern", builtin_pattern),
        ("morphism", builtin_morphism),
        ("monoid", builtin_monoid),
    ):
        got = fn(name, level)
        if got is not None:
            return kind, got
    raise CommandError("unknown binding %r" % name)


def _parse_genspec(spec):
    if spec is None:
        return 1
    if spec.isdigit():
        return int(spec)
    out = {}
    for part in spec.split(","):
        label, eq, num = part.partition("=")
        if not eq or not num.isdigit():
            raise CommandError("bad generator spec %r" % spec)
        out[label] = int(num)
    return out


def _mor_arg(cat, text):
    if text.isdigit():
        m = int(text)
        if 0 <= m < cat.n_mor:
            return m
        raise CommandError("morphism id %s out of range" % text)
    for m in range(cat.n_mor):
        if cat.mor_labels[m] == text:
            return m
    raise CommandError("unknown morphism %r" % text)


def _obj_arg(cat, text):
    if text.isdigit():
        o = int(text)
        if 0 <= o < cat.n_obj:
            return o
        raise CommandError("object id %s out of range" % text)
    for o in range(cat.n_obj):
        if cat.obj_labels[o] == text:
            return o
    raise CommandError("unknown object %r" % text)


# -- commands ----------------------------------------------------------------


def _cmd_validate(ws, ns, level):
    kind, got = _resolve_any(ws, ns.name, level)
    if kind == "category":
        return validate_category(got), level
    if kind == "pattern":
        rep = Report("validate(%s)" % got.name)
        rep.add(validate_category(got.cat))
        rep.add(check_cartesian_pattern(got))
        return rep, got.level
    if kind == "morphism":
        return got.check(), got.source.level
    if kind == "monoid":
        return got.validate(), got.pattern.level
    return got.validate(), level


def _cmd_factorize(ws, ns, level):
    P = _resolve_pattern(ws, ns.name, level)
    m = _mor_arg(P.cat, ns.morphism)
    rep = Report("factorize(%s)" % P.name)
    try:
        i, a = factorize(P, m)
        rep.check(
            "factors",
            True,
            witnesses=(
                "inert %s" % P.cat.mor_str(i),
                "active %s" % P.cat.mor_str(a),
            ),
        )
    except MissingFactorization as e:
        rep.check("factors", False, counterexamples=(str(e),))
    return rep, P.level


def _cmd_check_monoid(ws, ns, level):
    P = _resolve_pattern(ws, ns.name, level)
    X = _resolve_set_functor(ws, ns.functor, P.level, P.cat)
    return check_monoid(P, X), P.level


def _cmd_check_operad(ws, ns, level):
    P = _resolve_pattern(ws, ns.name, level)
    return check_operad_fibration(P), P.level


def _cmd_gamma(ws, ns, level):
    G = gamma_times(level)
    rep = Report("gamma(%d)" % level)
    rep.add(check_cartesian_pattern(G.pattern))
    rep.check(
        "tables",
        True,
        witnesses=(
            "%d objects" % G.pattern.cat.n_obj,
            "%d morphisms" % G.pattern.cat.n_mor,
        ),
    )
    return rep, level


def _cmd_roundtrip(ws, ns, level):
    P = _resolve_pattern(ws, ns.name, level)
    X = _resolve_set_functor(ws, ns.functor, P.level, P.cat)
    return monoid_gamma_roundtrip(P, X).report, P.level


def _cmd_extendable(ws, ns, level):
    P = _resolve_pattern(ws, ns.name, level)
    return freealg.check_extendable_pattern(P), P.level


def _cmd_extendable_morphism(ws, ns, level):
    f = _resolve_morphism(ws, ns.name, level)
    return freealg.check_extendable_morphism(f), f.source.level


def _cmd_free(ws, ns, level):
    P = _resolve_pattern(ws, ns.name, level)
    bound = ns.bound if ns.bound is not None else P.level
    phi = freealg.generators(P, _parse_genspec(ns.gen))
    A = freealg.free_algebra(P, phi, bound)
    rep = Report("free(%s)" % P.name)
    for E in A.elementaries:
        sizes = A.degree_sizes(E)
        rep.check(
            "degrees(%s)" % P.cat.obj_labels[E],
            True,
            witnesses=(
                "degrees %s" % (sizes,),
                "total %d" % sum(sizes),
            ),
        )
    return rep, bound


def _cmd_lan_monoid(ws, ns, level):
    f = _resolve_morphism(ws, ns.name, level)
    X = _resolve_set_functor(ws, ns.functor, f.source.level, f.source.cat)
    out = freealg.lan_monoid(f, X)
    rep = Report("lan-monoid(%s)" % f.name)
    rep.add(out.report)
    for E in f.target.elementary_ids():
        rep.check(
            "value(%s)" % f.target.cat.obj_labels[E],
            True,
            witnesses=("size %d" % out.functor.sizes[E],),
        )
    return rep, f.source.level


def _default_phi(M):
    P, B = M.pattern, M.pattern.cat
    best = None
    for m in range(B.n_mor):
        if P.active[m] and P.elementary[int(B.tgt[m])]:
            sz = P.obj_size(int(B.src[m]))
            key = (sz != 2, sz, m)
            if best is None or key < best[0]:
                best = (key, m)
    if best is None:
        raise CommandError("monoid base has no active map into an elementary")
    return best[1]


def _cmd_day(ws, ns, level):
    M = _resolve_monoid(ws, ns.name, level)
    B = M.pattern.cat
    phi = _mor_arg(B, ns.phi) if ns.phi else _default_phi(M)
    O, E = int(B.src[phi]), int(B.tgt[phi])
    tgts = M.cell_targets(O)
    if ns.at:
        cells = [
            _obj_arg(M.fibers[t], c)
            for t, c in zip(tgts, ns.at.split(","))
        ]
        if len(cells) != len(tgts):
            raise CommandError(
                "expected %d cell objects, got %d" % (len(tgts), len(cells))
            )
    else:
        cells = [0] * len(tgts)
    Fs = [representable(M.op_fiber(t), c) for t, c in zip(tgts, cells)]
    out = day.day_convolve(M, phi, Fs)
    rep = Report("day(%s)" % M.name)
    rep.check(
        "convolved(%s)" % B.mor_labels[phi],
        True,
        witnesses=tuple(
            "size %d at %s" % (out.sizes[c], M.fibers[E].obj_labels[c])
            for c in range(M.fibers[E].n_obj)
        ),
    )
    return rep, M.pattern.level


def _cmd_yoneda(ws, ns, level):
    M = _resolve_monoid(ws, ns.name, level)
    phi = _mor_arg(M.pattern.cat, ns.phi) if ns.phi else None
    return day.check_yoneda_monoidal(M, phi), M.pattern.level


def _terminal_algebra(M):
    GR = day.grothendieck(day.fiberwise_op(M))
    TC = GR.total.cat
    return SetFunctor(
        "terminal", TC, [1] * TC.n_obj, [(0,)] * TC.n_mor
    )


def _cmd_bridge(ws, ns, level):
    M = _resolve_monoid(ws, ns.name, level)
    if ns.functor:
        GR = day.grothendieck(day.fiberwise_op(M))
        N = _resolve_set_functor(ws, ns.functor, M.pattern.level, GR.total.cat)
    else:
        N = _terminal_algebra(M)
    _, rep = day.monoid_algebra_bridge(M, N)
    return rep, M.pattern.level


def _cmd_morita(ws, ns, level):
    f = _resolve_morphism(ws, ns.name, level)
    out = morita.check_morita(f)
    return out.to_report(), out.budget


def _cmd_transport(ws, ns, level):
    f = _resolve_morphism(ws, ns.name, level)
    bound = ns.bound if ns.bound is not None else f.source.level
    phi = freealg.generators(f.target, _parse_genspec(ns.gen))
    return morita.transport_free_algebra(f, phi, bound), bound


_COMMANDS = {
    "validate": (_cmd_validate, ("name",), ()),
    "factorize": (_cmd_factorize, ("name", "morphism"), ()),
    "check-monoid": (_cmd_check_monoid, ("name", "functor"), ()),
    "check-operad": (_cmd_check_operad, ("name",), ()),
    "gamma": (_cmd_gamma, (), ()),
    "roundtrip": (_cmd_roundtrip, ("name", "functor"), ()),
    "extendable": (_cmd_extendable, ("name",), ()),
    "extendable-morphism": (_cmd_extendable_morphism, ("name",), ()),
    "free": (_cmd_free, ("name",), ("gen", "bound")),
    "lan-monoid": (_cmd_lan_monoid, ("name", "functor"), ()),
    "day": (_cmd_day, ("name",), ("phi", "at")),
    "yoneda": (_cmd_yoneda, ("name",), ("phi",)),
    "bridge": (_cmd_bridge, ("name",), ("optfunctor",)),
    "morita": (_cmd_morita, ("name",), ()),
    "transport": (_cmd_transport, ("name",), ("gen", "bound")),
}


def _build_parser(command):
    handler, positionals, options = _COMMANDS[command]
    p = argparse.ArgumentParser(prog="patcalc %s" % command, add_help=True)
    for pos in positionals:
        p.add_argument(pos)
    if "optfunctor" in options:
        p.add_argument("functor", nargs="?", default=None)
    if "gen" in options:
        p.add_argument("--gen", default=None)
    if "bound" in options:
        p.add_argument("--bound", type=int, default=None)
    if "phi" in options:
        p.add_argument("--phi", default=None)
    if "at" in options:
        p.add_argument("--at", default=None)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("-f", "--file", action="append", default=[])
    return handler, p


def _emit(payload, as_json):
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for w in payload["witnesses"]:
            print("witness: %s" % w)
        for c in payload["counterexamples"]:
            print("counterexample: %s" % c)
        print(
            "%s: %s (budget %d)"
            % (payload["command"], payload["status"], payload["budget"])
        )


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    value_opts = {"-f", "--file", "--level", "--gen", "--bound", "--phi", "--at"}
    command = None
    skip = False
    for a in argv:
        if skip:
            skip = False
        elif a in value_opts:
            skip = True
        elif not a.startswith("-"):
            command = a
            break
    inputs = [a for a in argv if a != "--json"]
    started = time.perf_counter()

    def finish(status, witnesses, counterexamples, budget, code):
        payload = {
            "command": command or "",
            "inputs": inputs,
            "status": status,
            "witnesses": list(witnesses),
            "counterexamples": list(counterexamples),
            "budget": budget,
            "timings": {"seconds": round(time.perf_counter() - started, 6)},
        }
        _emit(payload, as_json)
        return code

    try:
        if command is None:
            raise UnknownCommand(
                "no command given; expected one of %s"
                % ", ".join(sorted(_COMMANDS))
            )
        if command not in _COMMANDS:
            raise UnknownCommand("unknown command %r" % command)
        handler, parser = _build_parser(command)
        rest = [a for a in argv if a != "--json"]
        rest.remove(command)
        try:
            ns = parser.parse_args(rest)
        except SystemExit as e:
            if e.code == 0:
                return 0
            raise CommandError("bad arguments for %s" % command)
        level = ns.level
        if level is None:
            level = int(os.environ.get("PATCALC_LEVEL", "3"))
        ws = Workspace()
        for path in ns.file:
            with open(path, "r", encoding="utf-8") as fh:
                ws.load_text(fh.read(), default_level=level)
        report, budget = handler(ws, ns, level)
        status = "pass" if report.passed else "fail"
        return finish(
            status,
            report.all_witnesses(),
            report.all_counterexamples(),
            budget,
            0 if report.passed else 1,
        )
    except (PatcalcError, DslError, OSError) as e:
        return finish("error", (), (str(e),), -1, 2)


if __name__ == "__main__":
    sys.exit(main())
