"""Parser for the line-oriented protocol language.

Statements (``#`` starts a comment; blocks in braces may span lines)::

    register <name> { <label> ... } [ready <label>]
    init <reg> = <amp>|<label>> [+|- <amp>|<label>> ...]
    basis <name> on <reg>[,<reg>...] { <vec> = <amp>|<l1,l2>> [+|- ...]; ... }
    step <id> measure <basis> recorder <reg> outcomes { <vec> -> <label>; ... } [collapse <vec>]
    step <id> prepare <target> by <control> { <label> -> <amp>|<label>> [+ ...]; ... }
    step <id> postselect <event>
    perspective <name> { <step-id> collapse <vec>; <step-id> entangle; ... }
    query [at] <step-id> probability <event> [given <event>]
    check { <event>; ... } [postselect <event>]

Events are atoms ``<reg>=<label>`` or ``<basis>:<vec>`` joined by ``&``.  A
register name used where a basis is expected means its computational basis
(one vector per non-ready label).  Amplitudes are exact: integers,
``sqrt(n)``, ``*``, ``/`` (monomial divisors only), unary minus, and sums in
parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import NotMonomial, ProtocolSyntaxError, SemanticError, StateError
from ..scalar import ONE, ZERO, RadicalScalar, as_scalar, sqrt_int
from ..state import (
    Basis,
    BasisAtom,
    BasisError,
    BasisVector,
    Event,
    LabelAtom,
    RegisterSpec,
    SystemSpec,
    build_initial,
)
from .model import (
    CheckSpec,
    Measure,
    Perspective,
    Postselect,
    Prepare,
    ProtocolSpec,
    Query,
    Step,
)

__all__ = ["parse_protocol", "parse_scalar", "parse_event", "tokenize"]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*|[0-9][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<punct>[{}()\[\],;=+\-*/&:|>])
  | (?P<rangle>⟩)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"register", "init", "basis", "step", "perspective", "query", "check"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'word', 'op' or 'eof'
    text: str
    line: int
    col: int

    def __str__(self):
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ProtocolSyntaxError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group()
        if kind == "word":
            tokens.append(Token("word", value, line, pos - line_start + 1))
        elif kind in ("arrow", "punct"):
            tokens.append(Token("op", value, line, pos - line_start + 1))
        elif kind == "rangle":
            tokens.append(Token("op", ">", line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers --------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ProtocolSyntaxError(tok.line, tok.col, message)

    def at_op(self, *ops):
        return self.tok.kind == "op" and self.tok.text in ops

    def at_word(self, *words):
        return self.tok.kind == "word" and (not words or self.tok.text in words)

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect_op(self, op) -> Token:
        if not self.at_op(op):
            raise self.error(f"expected {op!r}, found {self.tok}")
        return self.advance()

    def expect_keyword(self, word) -> Token:
        if not self.at_word(word):
            raise self.error(f"expected {word!r}, found {self.tok}")
        return self.advance()

    def expect_name(self, what="name") -> Token:
        if self.tok.kind != "word":
            raise self.error(f"expected {what}, found {self.tok}")
        return self.advance()

    # -- scalars --------------------------------------------------------

    def scalar_sum(self) -> RadicalScalar:
        total = self.scalar_product()
        while self.at_op("+", "-"):
            op = self.advance().text
            term = self.scalar_product()
            total = total + term if op == "+" else total - term
        return total

    def scalar_product(self) -> RadicalScalar:
        value = self.scalar_unary()
        while self.at_op("*", "/"):
            op = self.advance()
            rhs = self.scalar_unary()
            if op.text == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise self.error("division by zero", op)
                try:
                    value = value / rhs
                except NotMonomial:
                    raise self.error(f"divisor {rhs} is not a monomial", op) from None
        return value

    def scalar_unary(self) -> RadicalScalar:
        if self.at_op("-"):
            self.advance()
            return -self.scalar_unary()
        if self.at_op("+"):
            self.advance()
            return self.scalar_unary()
        return self.scalar_atom()

    def scalar_atom(self) -> RadicalScalar:
        tok = self.tok
        if self.at_op("("):
            self.advance()
            value = self.scalar_sum()
            self.expect_op(")")
            return value
        if tok.kind == "word" and tok.text.isdigit():
            self.advance()
            return as_scalar(int(tok.text))
        if tok.kind == "word" and tok.text == "sqrt":
            self.advance()
            self.expect_op("(")
            n = self.tok
            if not (n.kind == "word" and n.text.isdigit()) or int(n.text) < 1:
                raise self.error("sqrt() takes a positive integer")
            self.advance()
            self.expect_op(")")
            return sqrt_int(int(n.text))
        raise self.error(f"expected a number, sqrt(n) or '(', found {tok}")

    # -- kets and linear combinations -------------------------------------

    def ket(self) -> tuple[str, ...]:
        self.expect_op("|")
        labels = [self.expect_name("label").text]
        while self.at_op(","):
            self.advance()
            labels.append(self.expect_name("label").text)
        self.expect_op(">")
        return tuple(labels)

    def lincomb(self):
        """``[sign] [amp] |labels> ((+|-) [amp] |labels>)*`` -> list of (labels, amp, token)."""
        terms = []
        first = True
        while True:
            sign = ONE
            if self.at_op("+", "-"):
                sign = -ONE if self.advance().text == "-" else ONE
            elif not first:
                break
            start = self.tok
            amp = ONE if self.at_op("|") else self.scalar_product()
            if self.at_op("*") and self.peek().kind == "op" and self.peek().text == "|":
                self.advance()
            terms.append((self.ket(), sign * amp, start))
            first = False
            if not self.at_op("+", "-"):
                break
        return terms

    # -- events ---------------------------------------------------------

    def event_atoms(self):
        atoms = [self.event_atom()]
        while self.at_op("&"):
            self.advance()
            atoms.append(self.event_atom())
        return atoms

    def event_atom(self):
        name = self.expect_name("register or basis name")
        if self.at_op("="):
            self.advance()
            return ("label", name, self.expect_name("label"))
        if self.at_op(":"):
            self.advance()
            return ("basis", name, self.expect_name("basis vector name"))
        raise self.error(f"expected '=' or ':' after {name.text!r}")


# ---------------------------------------------------------------------------
# Semantic assembly
# ---------------------------------------------------------------------------

class _Builder:
    def __init__(self, parser: _Parser):
        self.p = parser
        self.registers: list[RegisterSpec] = []
        self.reg_tokens: dict[str, Token] = {}
        self.inits: dict[str, list] = {}
        self.bases: dict[str, Basis] = {}
        self.steps: list[Step] = []
        self.perspectives: list[Perspective] = []
        self.queries: list[Query] = []
        self.check: CheckSpec | None = None
        self._system: SystemSpec | None = None

    @staticmethod
    def sem(tok: Token, message: str) -> SemanticError:
        return SemanticError(f"line {tok.line}, col {tok.col}: {message}")

    @property
    def system(self) -> SystemSpec:
        if self._system is None or len(self._system) != len(self.registers):
            self._system = SystemSpec(tuple(self.registers))
        return self._system

    def need_register(self, tok: Token) -> RegisterSpec:
        if tok.text not in self.reg_tokens:
            raise self.sem(tok, f"undeclared register {tok.text!r}")
        return self.system.register(tok.text)

    def need_label(self, reg: RegisterSpec, tok: Token):
        if tok.text not in reg.labels:
            raise self.sem(tok, f"{tok.text!r} is not a label of register {reg.name!r}")

    def need_basis(self, tok: Token) -> Basis:
        if tok.text in self.bases:
            return self.bases[tok.text]
        if tok.text in self.reg_tokens:
            return Basis.computational(self.system.register(tok.text))
        raise self.sem(tok, f"undeclared basis or register {tok.text!r}")

    def need_step(self, tok: Token) -> Step:
        for s in self.steps:
            if s.id == tok.text:
                return s
        raise self.sem(tok, f"unknown step {tok.text!r}")

    def build_event(self, raw) -> Event:
        atoms = []
        for kind, name, value in raw:
            if kind == "label":
                reg = self.need_register(name)
                self.need_label(reg, value)
                atoms.append(LabelAtom(reg.name, value.text))
            else:
                basis = self.need_basis(name)
                if value.text not in basis.vector_names:
                    raise self.sem(value, f"basis {basis.name!r} has no vector {value.text!r}")
                atoms.append(BasisAtom(basis, value.text))
        try:
            return Event(tuple(atoms))
        except ValueError as exc:
            raise self.sem(raw[0][1], str(exc)) from None

    # -- statements -------------------------------------------------------

    def statement(self):
        p = self.p
        tok = p.tok
        if tok.kind != "word" or tok.text not in _KEYWORDS:
            raise p.error(f"expected a statement keyword ({', '.join(sorted(_KEYWORDS))}), found {tok}")
        getattr(self, "st_" + tok.text)()

    def st_register(self):
        p = self.p
        p.advance()
        name = p.expect_name("register name")
        if name.text in self.reg_tokens:
            raise self.sem(name, f"register {name.text!r} declared twice")
        if name.text in self.bases:
            raise self.sem(name, f"{name.text!r} is already a basis name")
        p.expect_op("{")
        labels = []
        while not p.at_op("}"):
            lab = p.expect_name("label")
            if lab.text in labels:
                raise self.sem(lab, f"duplicate label {lab.text!r}")
            labels.append(lab.text)
        p.advance()
        if not labels:
            raise self.sem(name, f"register {name.text!r} has no labels")
        ready = None
        if p.at_word("ready"):
            p.advance()
            rtok = p.expect_name("ready label")
            if rtok.text not in labels:
                raise self.sem(rtok, f"ready label {rtok.text!r} is not a label of {name.text!r}")
            ready = rtok.text
        if self.steps:
            raise self.sem(name, "registers must be declared before steps")
        self.registers.append(RegisterSpec(name.text, tuple(labels), ready))
        self.reg_tokens[name.text] = name

    def st_init(self):
        p = self.p
        kw = p.advance()
        reg = self.need_register(p.expect_name("register name"))
        if reg.name in self.inits:
            raise self.sem(kw, f"register {reg.name!r} initialised twice")
        p.expect_op("=")
        sup = []
        for labels, amp, start in p.lincomb():
            if len(labels) != 1:
                raise self.sem(start, "init kets name a single label")
            lab = Token("word", labels[0], start.line, start.col)
            self.need_label(reg, lab)
            sup.append((labels[0], amp))
        try:
            build_initial(SystemSpec((reg,)), {reg.name: sup})
        except StateError as exc:
            raise self.sem(kw, f"init {reg.name}: {exc}") from None
        self.inits[reg.name] = sup

    def st_basis(self):
        p = self.p
        p.advance()
        name = p.expect_name("basis name")
        if name.text in self.bases or name.text in self.reg_tokens:
            raise self.sem(name, f"name {name.text!r} already in use")
        p.expect_keyword("on")
        regs = [self.need_register(p.expect_name("register name"))]
        while p.at_op(","):
            p.advance()
            regs.append(self.need_register(p.expect_name("register name")))
        subsystems = tuple(r.name for r in regs)
        p.expect_op("{")
        vectors = []
        while not p.at_op("}"):
            vname = p.expect_name("basis vector name")
            p.expect_op("=")
            comps: dict[tuple[str, ...], RadicalScalar] = {}
            for labels, amp, start in p.lincomb():
                if len(labels) != len(regs):
                    raise self.sem(start, f"ket has {len(labels)} labels, basis is over {len(regs)} registers")
                for reg, lab in zip(regs, labels):
                    self.need_label(reg, Token("word", lab, start.line, start.col))
                comps[labels] = comps.get(labels, ZERO) + amp
            try:
                vectors.append(BasisVector(vname.text, subsystems, tuple(comps.items())))
            except BasisError as exc:
                raise self.sem(vname, str(exc)) from None
            if not p.at_op(";"):
                break
            p.advance()
        p.expect_op("}")
        try:
            self.bases[name.text] = Basis(name.text, subsystems, tuple(vectors))
        except BasisError as exc:
            raise self.sem(name, str(exc)) from None

    def st_step(self):
        p = self.p
        p.advance()
        sid = p.expect_name("step id")
        if any(s.id == sid.text for s in self.steps):
            raise self.sem(sid, f"duplicate step id {sid.text!r}")
        kind = p.expect_name("step kind")
        if kind.text == "measure":
            action = self._measure()
        elif kind.text == "prepare":
            action = self._prepare()
        elif kind.text == "postselect":
            action = Postselect(self.build_event(p.event_atoms()))
        else:
            raise p.error(f"unknown step kind {kind.text!r} (measure, prepare, postselect)", kind)
        self.steps.append(Step(sid.text, action))

    def _measure(self):
        p = self.p
        btok = p.expect_name("basis name")
        basis = self.need_basis(btok)
        p.expect_keyword("recorder")
        rtok = p.expect_name("recorder register")
        recorder = self.need_register(rtok)
        if recorder.name in basis.subsystems:
            raise self.sem(rtok, f"recorder {recorder.name!r} is one of the measured registers")
        p.expect_keyword("outcomes")
        p.expect_op("{")
        outcomes = {}
        while not p.at_op("}"):
            v = p.expect_name("basis vector name")
            if v.text not in basis.vector_names:
                raise self.sem(v, f"basis {basis.name!r} has no vector {v.text!r}")
            p.expect_op("->")
            lab = p.expect_name("recorder label")
            self.need_label(recorder, lab)
            outcomes[v.text] = lab.text
            if not p.at_op(";"):
                break
            p.advance()
        p.expect_op("}")
        missing = [v for v in basis.vector_names if v not in outcomes]
        if missing:
            raise self.sem(btok, f"outcomes missing for {missing}")
        collapse = None
        if p.at_word("collapse"):
            p.advance()
            ctok = p.expect_name("outcome")
            if ctok.text not in basis.vector_names:
                raise self.sem(ctok, f"basis {basis.name!r} has no vector {ctok.text!r}")
            collapse = ctok.text
        ordered = tuple((v, outcomes[v]) for v in basis.vector_names)
        return Measure(basis.name, recorder.name, ordered, collapse)

    def _prepare(self):
        p = self.p
        target = self.need_register(p.expect_name("target register"))
        p.expect_keyword("by")
        ctok = p.expect_name("control register")
        control = self.need_register(ctok)
        if control.name == target.name:
            raise self.sem(ctok, "control and target must differ")
        p.expect_op("{")
        rules = {}
        while not p.at_op("}"):
            lab = p.expect_name("control label")
            self.need_label(control, lab)
            if lab.text in rules:
                raise self.sem(lab, f"duplicate rule for {lab.text!r}")
            p.expect_op("->")
            sup: dict[str, RadicalScalar] = {}
            for labels, amp, start in p.lincomb():
                if len(labels) != 1:
                    raise self.sem(start, "prepare kets name a single target label")
                self.need_label(target, Token("word", labels[0], start.line, start.col))
                sup[labels[0]] = sup.get(labels[0], ZERO) + amp
            sup = {k: v for k, v in sup.items() if v}
            n2 = ZERO
            for v in sup.values():
                n2 = n2 + v * v
            if n2 != 1:
                raise self.sem(lab, f"rule {lab.text!r} has squared norm {n2}, not 1")
            rules[lab.text] = tuple(sup.items())
            if not p.at_op(";"):
                break
            p.advance()
        p.expect_op("}")
        return Prepare(target.name, control.name, tuple(rules.items()))

    def st_perspective(self):
        p = self.p
        p.advance()
        name = p.expect_name("perspective name")
        if any(x.name == name.text for x in self.perspectives):
            raise self.sem(name, f"perspective {name.text!r} declared twice")
        p.expect_op("{")
        overrides = {}
        while not p.at_op("}"):
            stok = p.expect_name("step id")
            step = self.need_step(stok)
            if not isinstance(step.action, Measure):
                raise self.sem(stok, f"step {stok.text!r} is not a measurement")
            if stok.text in overrides:
                raise self.sem(stok, f"step {stok.text!r} overridden twice")
            mode = p.expect_name("'collapse' or 'entangle'")
            if mode.text == "collapse":
                v = p.expect_name("outcome")
                basis = self.need_basis(Token("word", step.action.basis, stok.line, stok.col))
                if v.text not in basis.vector_names:
                    raise self.sem(v, f"basis {basis.name!r} has no vector {v.text!r}")
                overrides[stok.text] = v.text
            elif mode.text == "entangle":
                overrides[stok.text] = None
            else:
                raise p.error(f"expected 'collapse' or 'entangle', found {mode}", mode)
            if not p.at_op(";"):
                break
            p.advance()
        p.expect_op("}")
        self.perspectives.append(Perspective(name.text, tuple(overrides.items())))

    def st_query(self):
        p = self.p
        p.advance()
        if p.at_word("at"):
            p.advance()
        stok = p.expect_name("step id")
        self.need_step(stok)
        p.expect_keyword("probability")
        event = self.build_event(p.event_atoms())
        given = None
        if p.at_word("given"):
            p.advance()
            given = self.build_event(p.event_atoms())
        self.queries.append(Query(stok.text, event, given))

    def st_check(self):
        p = self.p
        kw = p.advance()
        if self.check is not None:
            raise self.sem(kw, "only one check statement is allowed")
        p.expect_op("{")
        events = []
        while not p.at_op("}"):
            events.append(self.build_event(p.event_atoms()))
            if not p.at_op(";"):
                break
            p.advance()
        p.expect_op("}")
        if not events:
            raise self.sem(kw, "check lists no events")
        post = None
        if p.at_word("postselect"):
            p.advance()
            post = self.build_event(p.event_atoms())
        self.check = CheckSpec(tuple(events), post)

    def finish(self, first: Token) -> ProtocolSpec:
        if not self.registers:
            raise self.sem(first, "protocol declares no registers")
        system = self.system
        for reg in system.registers:
            if reg.name not in self.inits and reg.ready_label is None:
                raise self.sem(self.reg_tokens[reg.name],
                               f"register {reg.name!r} has neither an init nor a ready label")
        initial = tuple((reg.name, tuple(self.inits[reg.name]))
                        for reg in system.registers if reg.name in self.inits)
        return ProtocolSpec(
            system=system,
            initial=initial,
            bases=tuple(self.bases.values()),
            steps=tuple(self.steps),
            perspectives=tuple(self.perspectives),
            queries=tuple(self.queries),
            check=self.check,
        )


def parse_protocol(text: str) -> ProtocolSpec:
    """Parse and validate protocol source.

    Raises :class:`ProtocolSyntaxError` (with line and column) for malformed
    input and :class:`SemanticError` for well-formed input that references
    undeclared names or declares non-orthonormal bases / non-unit states.
    """
    parser = _Parser(text)
    if parser.tok.kind == "eof":
        raise parser.error("empty protocol")
    first = parser.tok
    builder = _Builder(parser)
    while parser.tok.kind != "eof":
        builder.statement()
    return builder.finish(first)


def parse_scalar(text: str) -> RadicalScalar:
    """Parse a standalone amplitude expression such as ``-1/6*sqrt(3)``."""
    parser = _Parser(text)
    if parser.tok.kind == "eof":
        raise parser.error("empty expression")
    value = parser.scalar_sum()
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected {parser.tok} after expression")
    return value


def parse_event(text: str, spec: ProtocolSpec) -> Event:
    """Parse an event such as ``W_L=ok & Wbar=ok`` against ``spec``'s names."""
    parser = _Parser(text)
    builder = _Builder(parser)
    builder.registers = list(spec.system.registers)
    builder.reg_tokens = {r.name: None for r in spec.system.registers}
    builder.bases = {b.name: b for b in spec.bases}
    if parser.tok.kind == "eof":
        raise parser.error("empty event")
    event = builder.build_event(parser.event_atoms())
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected {parser.tok} after event")
    return event
