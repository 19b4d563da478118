"""Text form of elements: tokenizer, recursive-descent parser, printer.

Grammar:
    element  := term (("+" | "-") term)*
    term     := [rational "*"] atom
    atom     := "1" | symbol | "o{" integer "}" "(" element "," element ")"
    rational := ["-"] digits ["/" digits]

"0" is accepted for the zero element and is what the printer emits for it.
The printer orders monomials canonically, so print/parse round-trips exactly.
"""

from fractions import Fraction

from .terms import Alphabet, Element, Leaf, Node

Q = Fraction


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def _tokens(text: str):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("num", text[i:j], i)
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word == "o" and j < n and text[j] == "{":
                yield ("prod", "o{", i)
                i = j + 1
                continue
            yield ("ident", word, i)
            i = j
            continue
        if ch in "+-*/(),}":
            yield ("op", ch, i)
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    yield ("end", "", n)


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.toks = list(_tokens(text))
        self.pos = 0
        self.alphabet = alphabet

    def peek(self, ahead: int = 0):
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.pos]
        if tok[0] != "end":
            self.pos += 1
        return tok

    def expect(self, kind: str, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, got {tok[1]!r}", tok[2])
        return tok

    def parse_element(self) -> Element:
        out = self.parse_term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = 1 if self.next()[1] == "+" else -1
            out = out + sign * self.parse_term()
        return out

    def parse_term(self) -> Element:
        kind, value, _ = self.peek()
        negative = False
        if kind == "op" and value == "-" and self.peek(1)[0] == "num":
            self.next()
            negative = True
            kind, value, _ = self.peek()
        if kind == "num":
            # "1"/"0" standing alone are atoms, anything else a coefficient
            nxt = self.peek(1)
            is_coeff = nxt[0] == "op" and nxt[1] in "*/"
            if negative and not is_coeff:
                raise ParseError("expected '*' after coefficient", nxt[2])
            if is_coeff:
                coeff = self.parse_rational(negative)
                self.expect("op", "*")
                return coeff * self.parse_atom()
        atom = self.parse_atom()
        return atom

    def parse_rational(self, negative: bool) -> Fraction:
        num = int(self.expect("num")[1])
        den = 1
        if self.peek()[0] == "op" and self.peek()[1] == "/":
            self.next()
            den = int(self.expect("num")[1])
        val = Q(num, den)
        return -val if negative else val

    def parse_atom(self) -> Element:
        kind, value, pos = self.next()
        if kind == "num":
            if value == "1":
                return Element.unit(self.alphabet)
            if value == "0":
                return Element.zero(self.alphabet)
            raise ParseError(f"bare number {value!r} is not an atom", pos)
        if kind == "ident":
            if not self.alphabet.has(value):
                raise ParseError(f"unknown symbol {value!r}", pos)
            return Element.sym(self.alphabet, value)
        if kind == "prod":
            index = self.parse_index()
            self.expect("op", "}")
            self.expect("op", "(")
            left = self.parse_element()
            self.expect("op", ",")
            right = self.parse_element()
            self.expect("op", ")")
            return left.o(index, right)
        raise ParseError(f"expected an atom, got {value!r}", pos)

    def parse_index(self) -> int:
        kind, value, pos = self.next()
        if kind == "op" and value == "-":
            return -int(self.expect("num")[1])
        if kind == "num":
            return int(value)
        raise ParseError("expected an integer product index", pos)


def parse(text: str, alphabet: Alphabet) -> Element:
    p = _Parser(text, alphabet)
    out = p.parse_element()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return out


def _atom_text(t) -> str:
    if isinstance(t, Leaf):
        return t.symbol.name
    return f"o{{{t.index}}}({_atom_text(t.left)}, {_atom_text(t.right)})"


def to_text(x: Element) -> str:
    items = x.sorted_terms()
    if not items:
        return "0"
    parts = []
    for i, (t, c) in enumerate(items):
        mag = c if i == 0 else abs(c)
        lead = "" if i == 0 else (" + " if c > 0 else " - ")
        piece = _atom_text(t) if mag == 1 else f"{mag}*{_atom_text(t)}"
        parts.append(lead + piece)
    return "".join(parts)
