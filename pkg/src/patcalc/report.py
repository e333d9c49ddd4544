"""Structured pass/fail reports.

Every checker in this package returns a Report rather than a bare bool, so
callers (and the CLI) can see which law failed and on which witnesses.  A
Report is a named list of Checks plus nested subreports; it passes iff every
check and subreport passes.  Witness and counterexample entries are plain
JSON-able values (strings, ints, small tuples) so reports serialise stably.
"""

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    witnesses: tuple = ()
    counterexamples: tuple = ()
    note: str = ""


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)
    subreports: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def check(self, name, passed, witnesses=(), counterexamples=(), note=""):
        passed = bool(passed)
        self.checks.append(
            Check(name, passed, tuple(witnesses), tuple(counterexamples), note)
        )
        return passed

    def add(self, subreport):
        self.subreports.append(subreport)
        return subreport.passed

    def note(self, text):
        self.notes.append(str(text))

    @property
    def passed(self):
        return all(c.passed for c in self.checks) and all(
            r.passed for r in self.subreports
        )

    def failures(self):
        out = [c for c in self.checks if not c.passed]
        for r in self.subreports:
            out.extend(r.failures())
        return out

    def all_witnesses(self):
        out = []
        for c in self.checks:
            out.extend(c.witnesses)
        for r in self.subreports:
            out.extend(r.all_witnesses())
        return out

    def all_counterexamples(self):
        out = []
        for c in self.checks:
            out.extend(c.counterexamples)
        for r in self.subreports:
            out.extend(r.all_counterexamples())
        return out

    def to_dict(self):
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "checks": [
                {
                    "name": c.name,
                    "status": "pass" if c.passed else "fail",
                    "witnesses": list(c.witnesses),
                    "counterexamples": list(c.counterexamples),
                    "note": c.note,
                }
                for c in self.checks
            ],
            "notes": list(self.notes),
            "subreports": [r.to_dict() for r in self.subreports],
        }

    def summary(self, indent=0):
        pad = "  " * indent
        lines = ["%s%s: %s" % (pad, self.name, "pass" if self.passed else "FAIL")]
        for c in self.checks:
            if c.passed:
                continue
            lines.append("%s  %s: FAIL" % (pad, c.name))
            for x in c.counterexamples[:4]:
                lines.append("%s    counterexample: %s" % (pad, x))
            if c.note:
                lines.append("%s    note: %s" % (pad, c.note))
        for n in self.notes:
            lines.append("%s  note: %s" % (pad, n))
        for r in self.subreports:
            lines.extend(r.summary(indent + 1))
        return lines if indent else "\n".join(lines)
