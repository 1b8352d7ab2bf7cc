"""S-expression text form for programs.

`(and (exists_object (get_objects IMG) cake) (exists_property (get_objects
IMG) round))` — primitive names head each form, IMG and integers are bare
tokens, and grounded symbols are bare words or double-quoted strings when
they contain whitespace or delimiter characters. Parsing is signature
directed: the expected argument type decides whether a token is a symbol,
an integer, or the image input, so symbol strings may collide with
primitive names without ambiguity.
"""

from __future__ import annotations

from .dsl import (
    IMG_INPUT,
    App,
    ImageInput,
    IntLiteral,
    Primitive,
    PrimitiveKind,
    Program,
    SemanticType,
    SymbolRef,
    primitive_by_name,
)
from .errors import ParseError

_NEEDS_QUOTE = set(' \t\n\r()"')


def _atom(text: str) -> str:
    if text == "" or any(ch in _NEEDS_QUOTE for ch in text):
        return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return text


def serialize(program: Program) -> str:
    if isinstance(program, ImageInput):
        return "IMG"
    if isinstance(program, IntLiteral):
        return str(program.value)
    if isinstance(program, SymbolRef):
        return _atom(program.value)
    parts = [program.primitive.name] + [serialize(c) for c in program.children]
    return "(" + " ".join(parts) + ")"


# -- parsing ----------------------------------------------------------------


class _Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind: str, text: str, offset: int):
        self.kind = kind  # "(", ")", "atom", "string", "eof"
        self.text = text
        self.offset = offset


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            i += 1
        elif ch in "()":
            tokens.append(_Token(ch, ch, i))
            i += 1
        elif ch == '"':
            start = i
            i += 1
            buf = []
            while i < n and source[i] != '"':
                if source[i] == "\\" and i + 1 < n:
                    buf.append(source[i + 1])
                    i += 2
                else:
                    buf.append(source[i])
                    i += 1
            if i >= n:
                raise ParseError("unterminated string", start)
            i += 1
            tokens.append(_Token("string", "".join(buf), start))
        else:
            start = i
            while i < n and source[i] not in ' \t\r\n()"':
                i += 1
            tokens.append(_Token("atom", source[start:i], start))
    tokens.append(_Token("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], resolve):
        self.tokens = tokens
        self.pos = 0
        self.resolve = resolve

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def parse_expr(self, expected: SemanticType) -> Program:
        tok = self.take()
        if tok.kind == "eof":
            raise ParseError("unexpected end of input", tok.offset)
        if tok.kind == ")":
            raise ParseError("unexpected ')'", tok.offset)
        if tok.kind == "(":
            return self.parse_application(expected, tok.offset)
        return self.parse_leaf(tok, expected)

    def parse_application(self, expected: SemanticType, open_offset: int) -> Program:
        head = self.take()
        if head.kind == "eof":
            raise ParseError("unexpected end of input", head.offset)
        if head.kind != "atom":
            raise ParseError("expected a primitive name", head.offset)
        prim = self.resolve(head.text)
        if prim is None:
            raise ParseError(f"unknown primitive {head.text!r}", head.offset)
        if prim.return_type is not expected:
            raise ParseError(
                f"{prim.name} returns {prim.return_type}, expected {expected}", head.offset
            )
        children = []
        for arg_t in prim.arg_types:
            nxt = self.peek()
            if nxt.kind == ")":
                raise ParseError(f"{prim.name} expects {prim.arity} arguments", nxt.offset)
            children.append(self.parse_expr(arg_t))
        closing = self.take()
        if closing.kind == "eof":
            raise ParseError("unbalanced parentheses: missing ')'", closing.offset)
        if closing.kind != ")":
            raise ParseError(f"{prim.name} expects {prim.arity} arguments", closing.offset)
        return App(prim, tuple(children))

    def parse_leaf(self, tok: _Token, expected: SemanticType) -> Program:
        if expected is SemanticType.IMG:
            if tok.kind == "atom" and tok.text == "IMG":
                return IMG_INPUT
            raise ParseError("expected the input variable IMG", tok.offset)
        if expected is SemanticType.INT:
            if tok.kind == "atom":
                try:
                    return IntLiteral(int(tok.text))
                except ValueError:
                    pass
            raise ParseError("expected an integer constant", tok.offset)
        if expected in (SemanticType.OBJECT, SemanticType.PROPERTY, SemanticType.ACTION):
            return SymbolRef(tok.text, expected)
        raise ParseError(f"a {expected} value cannot appear as a bare token", tok.offset)


def parse_program(
    source: str,
    catalog: list[Primitive] | dict[str, Primitive] | None = None,
    expected: SemanticType = SemanticType.BOOL,
) -> Program:
    """Parse a program from text. `catalog` limits the admissible primitive
    names; by default every known primitive (plus digit constants) parses.
    Raises ParseError with the byte offset of the first fault."""
    if catalog is None:
        def resolve(name: str) -> Primitive | None:
            p = primitive_by_name(name)
            if p is not None and p.kind is PrimitiveKind.CONSTANT:
                return None  # digits in head position make no sense
            return p
    else:
        table = catalog if isinstance(catalog, dict) else {p.name: p for p in catalog}

        def resolve(name: str) -> Primitive | None:
            return table.get(name)

    parser = _Parser(_tokenize(source), resolve)
    program = parser.parse_expr(expected)
    trailing = parser.take()
    if trailing.kind != "eof":
        raise ParseError("trailing input after program", trailing.offset)
    return program
