"""Text syntax for formulas.

Canonical grammar (what :func:`to_text` emits)::

    formula := quant | binary
    quant   := ("all" | "ex") var formula
    binary  := "(" formula ("&" | "|" | "->" | "<->") formula ")" | "~" formula | atom
    atom    := predvar indvar+ | indvar "=" indvar

The parser also accepts unparenthesised binary chains (``&`` binds tighter
than ``|``, then ``->`` (right associative), then ``<->``), redundant
parentheses, ``!=`` and the usual Unicode connectives.
"""

from __future__ import annotations

import re

from .syntax import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    is_individual,
    is_predicate,
)


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_UNICODE = {"∀": "all", "∃": "ex", "¬": "~", "∧": "&", "∨": "|", "→": "->", "↔": "<->", "≠": "!="}
_TOKEN_RE = re.compile(r"\s*(<->|->|!=|[&|~()=]|[A-Za-z][A-Za-z0-9_]*|∀|∃|¬|∧|∨|→|↔|≠)")
_BINARY = {"&": And, "|": Or, "->": Implies, "<->": Iff}
_LEVELS = ["<->", "->", "|", "&"]


def tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tok = _UNICODE.get(m.group(1), m.group(1))
        out.append((tok, m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.end = len(text)

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else self.end

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input" + (f", expected {expected!r}" if expected else ""), self.pos())
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.expr(0)
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def expr(self, level: int) -> Formula:
        if level == len(_LEVELS):
            return self.unary()
        op = _LEVELS[level]
        left = self.expr(level + 1)
        if op == "->":
            if self.peek() == "->":
                self.take()
                return Implies(left, self.expr(level))
            return left
        if op == "<->":
            while self.peek() == "<->":
                self.take()
                left = Iff(left, self.expr(level + 1))
            return left
        parts = [left]
        while self.peek() == op:
            self.take()
            parts.append(self.expr(level + 1))
        return parts[0] if len(parts) == 1 else _BINARY[op](tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in ("all", "ex"):
            self.take()
            at = self.pos()
            var = self.take()
            if not (is_individual(var) or is_predicate(var)):
                raise FormulaSyntaxError(f"expected a variable after {tok!r}, found {var!r}", at)
            body = self.unary()
            return Forall(var, body) if tok == "all" else Exists(var, body)
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.expr(0)
            self.take(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        at = self.pos()
        tok = self.take()
        if is_predicate(tok):
            args = []
            while self.peek() is not None and is_individual(self.peek()):
                args.append(self.take())
            if not args:
                raise FormulaSyntaxError(f"predicate {tok} needs arguments", at)
            return Pred(tok, tuple(args))
        if is_individual(tok):
            op = self.peek()
            if op not in ("=", "!="):
                raise FormulaSyntaxError(f"expected '=' after {tok!r}", self.pos())
            self.take()
            rat = self.pos()
            right = self.take()
            if not is_individual(right):
                raise FormulaSyntaxError(f"expected an individual variable, found {right!r}", rat)
            return Eq(tok, right) if op == "=" else Not(Eq(tok, right))
        raise FormulaSyntaxError(f"unexpected token {tok!r}", at)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


def to_text(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Pred):
        return f.name + " " + " ".join(f.args)
    if isinstance(f, Not):
        return "~" + to_text(f.body)
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        # right-nested binary form of an n-ary junction
        out = to_text(f.parts[-1])
        for p in reversed(f.parts[:-1]):
            out = "(" + to_text(p) + op + out + ")"
        return out
    if isinstance(f, Implies):
        return f"({to_text(f.left)} -> {to_text(f.right)})"
    if isinstance(f, Iff):
        return f"({to_text(f.left)} <-> {to_text(f.right)})"
    if isinstance(f, Forall):
        return f"all {f.var} {to_text(f.body)}"
    if isinstance(f, Exists):
        return f"ex {f.var} {to_text(f.body)}"
    raise TypeError(f"not a formula: {f!r}")
