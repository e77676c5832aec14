"""Recursive-descent parser for the typed-STRIPS PDDL subset.

No external dependencies: a small tokenizer plus a parser over the token
stream. Every failure raises :class:`PddlParseError` carrying the source
location; the message format is stable: ``file:line:col: message``.

Supported requirement flags: ``:strips`` and ``:typing``. Anything outside
the subset (negated preconditions, conditional effects, quantifiers,
disjunctions, numeric expressions, ...) is rejected with an
"unsupported construct" error naming the construct.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    ROOT_TYPE,
    ActionSchema,
    Atom,
    Domain,
    Parameter,
    Predicate,
    Problem,
    TypedObject,
)

SUPPORTED_REQUIREMENTS = {":strips", ":typing"}

_WORD_RE = re.compile(r"[?:]?[a-zA-Z0-9_\-=<>.]+")


class PddlParseError(Exception):
    """Parse or validation failure with a source location."""

    def __init__(self, message: str, filename: str = "<string>", line: int = 0, col: int = 0):
        self.message = message
        self.filename = filename
        self.line = line
        self.col = col
        super().__init__(f"{filename}:{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # '(', ')', or 'word'
    value: str
    line: int
    col: int


def tokenize(text: str, filename: str = "<string>") -> list[Token]:
    """Split PDDL text into tokens, tracking line/column and lowercasing."""
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append(Token(ch, ch, line, col))
            col += 1
            i += 1
        else:
            m = _WORD_RE.match(text, i)
            if not m:
                raise PddlParseError(f"unexpected character {ch!r}", filename, line, col)
            word = m.group(0)
            tokens.append(Token("word", word.lower(), line, col))
            col += len(word)
            i = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.tokens = tokens
        self.filename = filename
        self.pos = 0

    # -- token helpers --------------------------------------------------

    def error(self, message: str, token: Token | None = None) -> PddlParseError:
        if token is None:
            token = self.tokens[self.pos - 1] if self.pos > 0 else Token("word", "", 1, 1)
        return PddlParseError(message, self.filename, token.line, token.col)

    def peek(self) -> Token:
        if self.pos >= len(self.tokens):
            last = self.tokens[-1] if self.tokens else Token("word", "", 1, 1)
            raise PddlParseError("unexpected end of input", self.filename, last.line, last.col)
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise self.error(f"expected {kind!r}, got {tok.value!r}", tok)
        return tok

    def expect_word(self, value: str | None = None) -> Token:
        tok = self.next()
        if tok.kind != "word":
            raise self.error(f"expected identifier, got {tok.value!r}", tok)
        if value is not None and tok.value != value:
            raise self.error(f"expected {value!r}, got {tok.value!r}", tok)
        return tok

    def at_word(self, value: str) -> bool:
        return self.pos < len(self.tokens) and self.tokens[self.pos].kind == "word" and self.tokens[self.pos].value == value

    def at_close(self) -> bool:
        return self.pos < len(self.tokens) and self.tokens[self.pos].kind == ")"

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    # -- shared productions ----------------------------------------------

    def parse_typed_names(self, variables: bool) -> list[tuple[Token, str]]:
        """Parse ``n1 n2 - type n3 - type2 n4`` groups; untyped means object.

        Returns (token, type) pairs in declaration order.
        """
        out: list[tuple[Token, str]] = []
        pending: list[Token] = []
        while not self.at_close():
            tok = self.next()
            if tok.kind != "word":
                raise self.error(f"expected name, got {tok.value!r}", tok)
            if tok.value == "-":
                type_tok = self.next()
                if type_tok.kind == "(":
                    raise self.error("unsupported construct: either-type", type_tok)
                if type_tok.kind != "word":
                    raise self.error("expected type name", type_tok)
                if not pending:
                    raise self.error("dangling type separator", tok)
                out.extend((p, type_tok.value) for p in pending)
                pending = []
            else:
                if variables and not tok.value.startswith("?"):
                    raise self.error(f"expected variable, got {tok.value!r}", tok)
                if not variables and tok.value.startswith("?"):
                    raise self.error(f"expected object name, got variable {tok.value!r}", tok)
                pending.append(tok)
        out.extend((p, ROOT_TYPE) for p in pending)
        return out

    def parse_atom(self) -> tuple[Atom, Token]:
        """Parse one ``(pred t1 t2 ...)`` list; rejects nested structure."""
        open_tok = self.expect("(")
        parts: list[str] = []
        while not self.at_close():
            tok = self.next()
            if tok.kind == "(":
                raise self.error("unsupported construct: nested term", tok)
            parts.append(tok.value)
        self.expect(")")
        if not parts:
            raise self.error("empty atom", open_tok)
        return tuple(parts), open_tok

    def parse_conjunction(self, context: str, allow_not: bool) -> list[tuple[Atom, bool, Token]]:
        """Parse an atom, ``(and ...)``, or ``()`` into (atom, negated, token) triples.

        ``allow_not`` admits ``(not ...)`` wrappers (effects only); other
        connectives are reported as unsupported constructs.
        """
        self.expect("(")
        if self.at_close():  # empty conjunction
            self.expect(")")
            return []
        head = self.peek()
        out: list[tuple[Atom, bool, Token]] = []
        if head.kind == "word" and head.value == "and":
            self.next()
            while not self.at_close():
                out.extend(self._parse_literal(context, allow_not))
            self.expect(")")
            return out
        # single literal without the (and ...) wrapper: rewind the '('
        self.pos -= 1
        return self._parse_literal(context, allow_not)

    def _parse_literal(self, context: str, allow_not: bool) -> list[tuple[Atom, bool, Token]]:
        open_pos = self.pos
        open_tok = self.expect("(")
        head = self.peek()
        if head.kind == "word":
            if head.value == "not":
                if not allow_not:
                    raise self.error(f"unsupported construct: negated {context}", head)
                self.next()
                atom, tok = self.parse_atom()
                self.expect(")")
                return [(atom, True, tok)]
            if head.value in ("or", "imply"):
                raise self.error(f"unsupported construct: disjunctive {context}", head)
            if head.value in ("forall", "exists"):
                raise self.error(f"unsupported construct: quantified {context}", head)
            if head.value == "when":
                raise self.error("unsupported construct: conditional effect", head)
            if head.value in ("=", "increase", "decrease", "assign", "scale-up", "scale-down"):
                raise self.error(f"unsupported construct: numeric or equality {context}", head)
            if head.value == "and":
                raise self.error(f"unsupported construct: nested conjunction in {context}", head)
        self.pos = open_pos
        atom, tok = self.parse_atom()
        return [(atom, False, tok)]


# -- domain -----------------------------------------------------------------


def parse_domain(text: str, filename: str = "<string>") -> Domain:
    """Parse domain text into a validated :class:`Domain`."""
    p = _Parser(tokenize(text, filename), filename)
    p.expect("(")
    p.expect_word("define")
    p.expect("(")
    p.expect_word("domain")
    name = p.expect_word().value
    p.expect(")")

    types: list[tuple[str, str]] = []
    predicates: list[Predicate] = []
    schemas: list[ActionSchema] = []
    seen_sections: set[str] = set()

    while not p.at_close():
        p.expect("(")
        kw = p.expect_word()
        if not kw.value.startswith(":"):
            raise p.error(f"expected a :section, got {kw.value!r}", kw)
        section = kw.value[1:]
        if section == "requirements":
            while not p.at_close():
                req = p.expect_word()
                if req.value not in SUPPORTED_REQUIREMENTS:
                    raise p.error(f"unknown requirement flag {req.value!r}", req)
            p.expect(")")
        elif section == "types":
            if "types" in seen_sections:
                raise p.error("duplicate declaration of :types", kw)
            seen_sections.add("types")
            declared: set[str] = set()
            for tok, parent in p.parse_typed_names(variables=False):
                if tok.value in declared or tok.value == ROOT_TYPE:
                    raise p.error(f"duplicate declaration of type {tok.value!r}", tok)
                declared.add(tok.value)
                types.append((tok.value, parent))
            # parents used before (or never) being declared hang off object
            known = {ROOT_TYPE} | declared
            for _, parent in list(types):
                if parent not in known:
                    known.add(parent)
                    types.append((parent, ROOT_TYPE))
            p.expect(")")
        elif section == "predicates":
            if "predicates" in seen_sections:
                raise p.error("duplicate declaration of :predicates", kw)
            seen_sections.add("predicates")
            while not p.at_close():
                p.expect("(")
                pred_tok = p.expect_word()
                params = _to_params(p, p.parse_typed_names(variables=True))
                if any(pred.name == pred_tok.value for pred in predicates):
                    raise p.error(f"duplicate declaration of predicate {pred_tok.value!r}", pred_tok)
                predicates.append(Predicate(pred_tok.value, params))
                p.expect(")")
            p.expect(")")
        elif section == "action":
            schema_tok = p.expect_word()
            schemas.append(_parse_action_body(p, schema_tok))
            p.expect(")")
        elif section in ("functions", "constants", "derived", "durative-action"):
            raise p.error(f"unsupported construct: :{section} section", kw)
        else:
            raise p.error(f"unknown section :{section}", kw)
    p.expect(")")
    if not p.at_end():
        raise p.error("trailing input after domain definition", p.peek())

    seen_schemas: set[str] = set()
    for s in schemas:
        if s.name in seen_schemas:
            raise PddlParseError(f"duplicate declaration of action {s.name!r}", filename)
        seen_schemas.add(s.name)

    domain = Domain(name=name, types=tuple(types), predicates=tuple(predicates), schemas=tuple(schemas))
    _validate_domain(domain, filename)
    return domain


def _to_params(p: _Parser, named: list[tuple[Token, str]]) -> tuple[Parameter, ...]:
    seen: set[str] = set()
    params = []
    for tok, type_name in named:
        if tok.value in seen:
            raise p.error(f"duplicate declaration of parameter {tok.value!r}", tok)
        seen.add(tok.value)
        params.append(Parameter(tok.value, type_name))
    return tuple(params)


def _parse_action_body(p: _Parser, schema_tok: Token) -> ActionSchema:
    params: tuple[Parameter, ...] = ()
    precondition: frozenset[Atom] = frozenset()
    add_effects: set[Atom] = set()
    del_effects: set[Atom] = set()
    while not p.at_close():
        kw = p.expect_word()
        if kw.value == ":parameters":
            p.expect("(")
            params = _to_params(p, p.parse_typed_names(variables=True))
            p.expect(")")
        elif kw.value == ":precondition":
            literals = p.parse_conjunction("precondition", allow_not=False)
            precondition = frozenset(atom for atom, _, _ in literals)
        elif kw.value == ":effect":
            for atom, negated, tok in p.parse_conjunction("effect", allow_not=True):
                target = del_effects if negated else add_effects
                if atom in (add_effects if negated else del_effects):
                    raise p.error(f"atom {atom!r} appears as both add and delete effect", tok)
                target.add(atom)
        else:
            raise p.error(f"unknown action keyword {kw.value!r}", kw)
    return ActionSchema(
        name=schema_tok.value,
        params=params,
        precondition=precondition,
        add_effects=frozenset(add_effects),
        del_effects=frozenset(del_effects),
    )


def _validate_domain(domain: Domain, filename: str) -> None:
    def fail(message: str) -> PddlParseError:
        return PddlParseError(message, filename)

    for _, parent in domain.types:
        if not domain.has_type(parent):
            raise fail(f"unknown parent type {parent!r}")
    for pred in domain.predicates:
        for param in pred.params:
            if not domain.has_type(param.type):
                raise fail(f"unknown type {param.type!r} in predicate {pred.name!r}")
    for schema in domain.schemas:
        param_names = {param.name for param in schema.params}
        for param in schema.params:
            if not domain.has_type(param.type):
                raise fail(f"unknown type {param.type!r} in action {schema.name!r}")
        for group, atoms in (
            ("precondition", schema.precondition),
            ("effect", schema.add_effects | schema.del_effects),
        ):
            for atom in atoms:
                pred = domain.predicate(atom[0])
                if pred is None:
                    raise fail(f"undeclared predicate {atom[0]!r} in {group} of action {schema.name!r}")
                if len(atom) - 1 != pred.arity:
                    raise fail(
                        f"arity mismatch for predicate {atom[0]!r} in action {schema.name!r}: "
                        f"expected {pred.arity}, got {len(atom) - 1}"
                    )
                for arg in atom[1:]:
                    if arg.startswith("?") and arg not in param_names:
                        raise fail(f"unbound variable {arg!r} in action {schema.name!r}")
                    if not arg.startswith("?"):
                        raise fail(
                            f"unsupported construct: constant {arg!r} in action {schema.name!r}"
                        )


# -- problem ----------------------------------------------------------------


def parse_problem(text: str, domain: Domain, filename: str = "<string>") -> Problem:
    """Parse problem text and type-check it against ``domain``."""
    p = _Parser(tokenize(text, filename), filename)
    p.expect("(")
    p.expect_word("define")
    p.expect("(")
    p.expect_word("problem")
    name = p.expect_word().value
    p.expect(")")

    domain_name: str | None = None
    objects: list[TypedObject] = []
    init: set[Atom] = set()
    init_tokens: dict[Atom, Token] = {}
    goal: set[Atom] = set()
    goal_tokens: dict[Atom, Token] = {}
    seen_sections: set[str] = set()

    while not p.at_close():
        p.expect("(")
        kw = p.expect_word()
        section = kw.value[1:] if kw.value.startswith(":") else ""
        if section == "domain":
            domain_name = p.expect_word().value
            p.expect(")")
            if domain_name != domain.name:
                raise p.error(f"problem references domain {domain_name!r}, expected {domain.name!r}", kw)
        elif section == "requirements":
            while not p.at_close():
                req = p.expect_word()
                if req.value not in SUPPORTED_REQUIREMENTS:
                    raise p.error(f"unknown requirement flag {req.value!r}", req)
            p.expect(")")
        elif section == "objects":
            if "objects" in seen_sections:
                raise p.error("duplicate declaration of :objects", kw)
            seen_sections.add("objects")
            seen_objects: set[str] = set()
            for tok, type_name in p.parse_typed_names(variables=False):
                if tok.value in seen_objects:
                    raise p.error(f"duplicate declaration of object {tok.value!r}", tok)
                seen_objects.add(tok.value)
                objects.append(TypedObject(tok.value, type_name))
            p.expect(")")
        elif section == "init":
            if "init" in seen_sections:
                raise p.error("duplicate declaration of :init", kw)
            seen_sections.add("init")
            while not p.at_close():
                atom, tok = p.parse_atom()
                if atom[0] == "not":
                    raise p.error("unsupported construct: negated init atom", tok)
                if atom[0] == "=":
                    raise p.error("unsupported construct: numeric init", tok)
                init.add(atom)
                init_tokens.setdefault(atom, tok)
            p.expect(")")
        elif section == "goal":
            if "goal" in seen_sections:
                raise p.error("duplicate declaration of :goal", kw)
            seen_sections.add("goal")
            for atom, _, tok in p.parse_conjunction("goal", allow_not=False):
                goal.add(atom)
                goal_tokens.setdefault(atom, tok)
            p.expect(")")
        elif section in ("metric", "length"):
            raise p.error(f"unsupported construct: :{section} section", kw)
        else:
            raise p.error(f"unknown section {kw.value!r}", kw)
    p.expect(")")
    if not p.at_end():
        raise p.error("trailing input after problem definition", p.peek())
    if domain_name is None:
        raise PddlParseError("problem is missing a (:domain ...) declaration", filename)
    for obj in objects:
        if not domain.has_type(obj.type):
            raise PddlParseError(f"unknown type {obj.type!r} for object {obj.name!r}", filename)

    problem = Problem(
        name=name,
        domain_name=domain_name,
        objects=tuple(objects),
        init=frozenset(init),
        goal=frozenset(goal),
    )
    for atoms, tokens in ((init, init_tokens), (goal, goal_tokens)):
        for atom in atoms:
            _check_ground_atom(domain, problem, atom, tokens[atom], filename)
    return problem


def _check_ground_atom(domain: Domain, problem: Problem, atom: Atom, tok: Token, filename: str) -> None:
    pred = domain.predicate(atom[0])
    if pred is None:
        raise PddlParseError(f"undeclared predicate {atom[0]!r}", filename, tok.line, tok.col)
    if len(atom) - 1 != pred.arity:
        raise PddlParseError(
            f"arity mismatch for predicate {atom[0]!r}: expected {pred.arity}, got {len(atom) - 1}",
            filename,
            tok.line,
            tok.col,
        )
    for arg, param in zip(atom[1:], pred.params):
        obj_type = problem.object_type(arg)
        if obj_type is None:
            raise PddlParseError(f"undeclared object {arg!r}", filename, tok.line, tok.col)
        if not domain.is_subtype(obj_type, param.type):
            raise PddlParseError(
                f"type mismatch: object {arg!r} has type {obj_type!r}, predicate {pred.name!r} expects {param.type!r}",
                filename,
                tok.line,
                tok.col,
            )


def parse_domain_file(path: str) -> Domain:
    with open(path, encoding="utf-8") as fh:
        return parse_domain(fh.read(), filename=str(path))


def parse_problem_file(path: str, domain: Domain) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read(), domain, filename=str(path))
