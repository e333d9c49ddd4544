"""A small line-oriented declaration language for categories, patterns,
functors, presheaves and builtin-backed bindings.

The grammar names every table entry explicitly:

    category C {
      objects: a, b;
      mor f: a -> b;
      compose g.f = h;
    }
    pattern P from C { inert: f; active: g; elementary: a; size: s; }
    pattern F = builtin f_star(3);
    morphism M = builtin cut(3);
    monoid Z = builtin discrete_monoid(F, 2);
    functor G: C -> D { obj a => x; mor f => u; }
    presheaf X on C { a: {p, q}; f: p => q; }

Comments run from `#` to end of line.  Identities are implicit: every
category object gets `id_NAME`, functors and presheaves map them
automatically, and both pattern classes always contain them.  References
into builtin-backed categories may use raw integer ids in place of names,
since builtin labels are not always identifier-shaped.

`parse_dsl` raises DslSyntaxError / DuplicateName / UnknownReference with
one-based line and column; documents compare equal up to formatting, so
parse -> print -> parse is the identity.
"""

from dataclasses import dataclass, field

from .errors import DslSyntaxError, DuplicateName, UnknownReference

_PUNCT = ("->", "=>", "{", "}", "(", ")", ":", ";", ",", "=", ".")


@dataclass(frozen=True)
class Token:
    kind: str  # name | int | punct | end
    value: str
    line: int
    col: int


def tokenize(text):
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        two = text[i : i + 2]
        if two in ("->", "=>"):
            toks.append(Token("punct", two, line, col))
            i += 2
            col += 2
            continue
        if c in "{}():;,=.":
            toks.append(Token("punct", c, line, col))
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise DslSyntaxError("unexpected character %r" % c, line, col)
    toks.append(Token("end", "", line, col))
    return toks


# -- syntax tree ------------------------------------------------------------


@dataclass
class Ref:
    """A name or raw-integer reference with its source position."""

    text: str
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)

    def __str__(self):
        return self.text


@dataclass
class CategoryDecl:
    name: str
    objects: tuple  # of Ref
    mors: tuple  # of (Ref name, Ref src, Ref tgt)
    composes: tuple  # of (Ref g, Ref f, Ref h)
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass
class PatternFromDecl:
    name: str
    base: Ref
    inert: tuple
    active: tuple
    elementary: tuple
    size: Ref
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass
class BuiltinDecl:
    kind: str  # pattern | morphism | monoid
    name: str
    family: Ref
    args: tuple  # of Ref
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass
class FunctorDecl:
    name: str
    src: Ref
    dst: Ref
    obj_clauses: tuple  # of (Ref, Ref)
    mor_clauses: tuple  # of (Ref, Ref)
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass
class PresheafDecl:
    name: str
    base: Ref
    obj_clauses: tuple  # of (Ref object, tuple of Ref elements)
    mor_clauses: tuple  # of (Ref morphism, tuple of (Ref, Ref))
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass
class DslDocument:
    decls: tuple

    def names(self):
        return [d.name for d in self.decls]

    def print(self):
        return print_document(self)


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self, ahead=0):
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def fail(self, message, expected=()):
        t = self.peek()
        raise DslSyntaxError(message, t.line, t.col, expected=expected)

    def expect_punct(self, p):
        t = self.peek()
        if t.kind != "punct" or t.value != p:
            self.fail("found %r" % (t.value or "end of input"), expected=(p,))
        return self.next()

    def expect_name(self, what="name"):
        t = self.peek()
        if t.kind != "name":
            self.fail(
                "found %r" % (t.value or "end of input"), expected=(what,)
            )
        return self.next()

    def expect_keyword(self, word):
        t = self.peek()
        if t.kind != "name" or t.value != word:
            self.fail(
                "found %r" % (t.value or "end of input"), expected=(word,)
            )
        return self.next()

    def at_punct(self, p):
        t = self.peek()
        return t.kind == "punct" and t.value == p

    def ref(self, what="name"):
        t = self.peek()
        if t.kind not in ("name", "int"):
            self.fail(
                "found %r" % (t.value or "end of input"), expected=(what,)
            )
        self.next()
        return Ref(t.value, t.line, t.col)

    def ref_list(self, what="name"):
        out = [self.ref(what)]
        while self.at_punct(","):
            self.next()
            out.append(self.ref(what))
        return tuple(out)

    # declarations ----------------------------------------------------------

    def document(self):
        decls = []
        seen = {}
        while self.peek().kind != "end":
            d = self.declaration()
            if d.name in seen:
                raise DuplicateName(d.name, d.line, d.col)
            seen[d.name] = d
            decls.append(d)
        return DslDocument(tuple(decls))

    def declaration(self):
        t = self.peek()
        if t.kind != "name":
            self.fail(
                "found %r" % (t.value or "end of input"),
                expected=("category", "pattern", "morphism", "monoid",
                          "functor", "presheaf"),
            )
        if t.value == "category":
            return self.category_decl()
        if t.value == "pattern":
            return self.pattern_decl()
        if t.value in ("morphism", "monoid"):
            return self.builtin_decl(t.value)
        if t.value == "functor":
            return self.functor_decl()
        if t.value == "presheaf":
            return self.presheaf_decl()
        self.fail(
            "found %r" % t.value,
            expected=("category", "pattern", "morphism", "monoid",
                      "functor", "presheaf"),
        )

    def category_decl(self):
        kw = self.next()
        name = self.expect_name("category name")
        self.expect_punct("{")
        objects = []
        obj_seen = {}
        mors = []
        mor_seen = {}
        composes = []
        while not self.at_punct("}"):
            stmt = self.expect_name("objects, mor, compose")
            if stmt.value == "objects":
                self.expect_punct(":")
                for r in self.ref_list("object name"):
                    if r.text in obj_seen:
                        raise DuplicateName(r.text, r.line, r.col)
                    obj_seen[r.text] = r
                    objects.append(r)
                self.expect_punct(";")
            elif stmt.value == "mor":
                mname = self.ref("morphism name")
                self.expect_punct(":")
                src = self.ref("object name")
                self.expect_punct("->")
                tgt = self.ref("object name")
                self.expect_punct(";")
                if mname.text in mor_seen:
                    raise DuplicateName(mname.text, mname.line, mname.col)
                mor_seen[mname.text] = mname
                for r in (src, tgt):
                    if r.text not in obj_seen:
                        raise UnknownReference(r.text, r.line, r.col)
                mors.append((mname, src, tgt))
            elif stmt.value == "compose":
                g = self.ref("morphism name")
                self.expect_punct(".")
                f = self.ref("morphism name")
                self.expect_punct("=")
                h = self.ref("morphism name")
                self.expect_punct(";")
                for r in (g, f, h):
                    if r.text not in mor_seen and not (
                        r.text.startswith("id_")
                        and r.text[3:] in obj_seen
                    ):
                        raise UnknownReference(r.text, r.line, r.col)
                composes.append((g, f, h))
            else:
                self.i -= 1
                self.fail(
                    "found %r" % stmt.value,
                    expected=("objects", "mor", "compose"),
                )
        self.expect_punct("}")
        return CategoryDecl(
            name.value,
            tuple(objects),
            tuple(mors),
            tuple(composes),
            kw.line,
            kw.col,
        )

    def pattern_decl(self):
        kw = self.next()
        name = self.expect_name("pattern name")
        t = self.peek()
        if t.kind == "punct" and t.value == "=":
            self.next()
            return self.builtin_tail("pattern", name.value, kw)
        self.expect_keyword("from")
        base = self.ref("category name")
        self.expect_punct("{")
        parts = {"inert": (), "active": (), "elementary": ()}
        size = None
        while not self.at_punct("}"):
            stmt = self.expect_name("inert, active, elementary, size")
            if stmt.value in parts:
                self.expect_punct(":")
                parts[stmt.value] = parts[stmt.value] + self.ref_list()
                self.expect_punct(";")
            elif stmt.value == "size":
                self.expect_punct(":")
                size = self.ref("functor name")
                self.expect_punct(";")
            else:
                self.i -= 1
                self.fail(
                    "found %r" % stmt.value,
                    expected=("inert", "active", "elementary", "size"),
                )
        close = self.expect_punct("}")
        if size is None:
            raise DslSyntaxError(
                "pattern %s declares no size functor" % name.value,
                close.line,
                close.col,
            )
        return PatternFromDecl(
            name.value,
            base,
            parts["inert"],
            parts["active"],
            parts["elementary"],
            size,
            kw.line,
            kw.col,
        )

    def builtin_decl(self, kind):
        kw = self.next()
        name = self.expect_name("%s name" % kind)
        self.expect_punct("=")
        return self.builtin_tail(kind, name.value, kw)

    def builtin_tail(self, kind, name, kw):
        self.expect_keyword("builtin")
        family = self.ref("builtin family")
        self.expect_punct("(")
        args = ()
        if not self.at_punct(")"):
            args = self.ref_list("argument")
        self.expect_punct(")")
        self.expect_punct(";")
        return BuiltinDecl(kind, name, family, args, kw.line, kw.col)

    def functor_decl(self):
        kw = self.next()
        name = self.expect_name("functor name")
        self.expect_punct(":")
        src = self.ref("category name")
        self.expect_punct("->")
        dst = self.ref("category name")
        self.expect_punct("{")
        obj_clauses = []
        mor_clauses = []
        seen = {}
        while not self.at_punct("}"):
            stmt = self.expect_name("obj, mor")
            if stmt.value not in ("obj", "mor"):
                self.i -= 1
                self.fail("found %r" % stmt.value, expected=("obj", "mor"))
            key = self.ref()
            self.expect_punct("=>")
            val = self.ref()
            self.expect_punct(";")
            if (stmt.value, key.text) in seen:
                raise DuplicateName(key.text, key.line, key.col)
            seen[(stmt.value, key.text)] = key
            (obj_clauses if stmt.value == "obj" else mor_clauses).append(
                (key, val)
            )
        self.expect_punct("}")
        return FunctorDecl(
            name.value,
            src,
            dst,
            tuple(obj_clauses),
            tuple(mor_clauses),
            kw.line,
            kw.col,
        )

    def presheaf_decl(self):
        kw = self.next()
        name = self.expect_name("presheaf name")
        self.expect_keyword("on")
        base = self.ref("category name")
        self.expect_punct("{")
        obj_clauses = []
        mor_clauses = []
        seen = {}
        while not self.at_punct("}"):
            key = self.ref()
            self.expect_punct(":")
            if self.at_punct("{"):
                self.next()
                elems = ()
                if not self.at_punct("}"):
                    elems = self.ref_list("element name")
                self.expect_punct("}")
                self.expect_punct(";")
                if ("obj", key.text) in seen:
                    raise DuplicateName(key.text, key.line, key.col)
                seen[("obj", key.text)] = key
                named = set()
                for e in elems:
                    if e.text in named:
                        raise DuplicateName(e.text, e.line, e.col)
                    named.add(e.text)
                obj_clauses.append((key, elems))
            else:
                pairs = []
                while True:
                    p = self.ref("element name")
                    self.expect_punct("=>")
                    q = self.ref("element name")
                    pairs.append((p, q))
                    if self.at_punct(","):
                        self.next()
                        continue
                    break
                self.expect_punct(";")
                if ("mor", key.text) in seen:
                    raise DuplicateName(key.text, key.line, key.col)
                seen[("mor", key.text)] = key
                mor_clauses.append((key, tuple(pairs)))
        self.expect_punct("}")
        return PresheafDecl(
            name.value,
            base,
            tuple(obj_clauses),
            tuple(mor_clauses),
            kw.line,
            kw.col,
        )


def parse_dsl(text):
    """Parse a document; empty input gives an empty document."""
    return _Parser(tokenize(text)).document()


# -- printer ----------------------------------------------------------------


def _print_decl(d):
    if isinstance(d, CategoryDecl):
        lines = ["category %s {" % d.name]
        if d.objects:
            lines.append(
                "  objects: %s;" % ", ".join(r.text for r in d.objects)
            )
        for mname, src, tgt in d.mors:
            lines.append("  mor %s: %s -> %s;" % (mname, src, tgt))
        for g, f, h in d.composes:
            lines.append("  compose %s.%s = %s;" % (g, f, h))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, PatternFromDecl):
        lines = ["pattern %s from %s {" % (d.name, d.base)]
        for label, refs in (
            ("inert", d.inert),
            ("active", d.active),
            ("elementary", d.elementary),
        ):
            if refs:
                lines.append(
                    "  %s: %s;" % (label, ", ".join(r.text for r in refs))
                )
        lines.append("  size: %s;" % d.size)
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, BuiltinDecl):
        return "%s %s = builtin %s(%s);" % (
            d.kind,
            d.name,
            d.family,
            ", ".join(r.text for r in d.args),
        )
    if isinstance(d, FunctorDecl):
        lines = ["functor %s: %s -> %s {" % (d.name, d.src, d.dst)]
        for key, val in d.obj_clauses:
            lines.append("  obj %s => %s;" % (key, val))
        for key, val in d.mor_clauses:
            lines.append("  mor %s => %s;" % (key, val))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, PresheafDecl):
        lines = ["presheaf %s on %s {" % (d.name, d.base)]
        for key, elems in d.obj_clauses:
            lines.append(
                "  %s: {%s};" % (key, ", ".join(r.text for r in elems))
            )
        for key, pairs in d.mor_clauses:
            lines.append(
                "  %s: %s;"
                % (key, ", ".join("%s => %s" % (p, q) for p, q in pairs))
            )
        lines.append("}")
        return "\n".join(lines)
    raise TypeError("not a declaration: %r" % (d,))


def print_document(doc):
    out = "\n".join(_print_decl(d) for d in doc.decls)
    return out + "\n" if out else ""
