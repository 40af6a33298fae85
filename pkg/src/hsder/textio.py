"""Text formats for derivations and ideals.

A file starts with a header line of ``key=value`` fields::

    p=2 vars=x,y params=s,t ext=t len=4

``p`` and ``vars`` are required; ``params`` declares the parameters of
F_p(params), ``ext`` declares base-extension variables (fixed by
derivations) and ``len`` is the length of a derivation. Blank lines and
text after ``#`` are ignored.

A derivation file has one line ``<var> -> <expr>`` per ring variable, where
``expr`` may use ``mu``. An ideal file has one generator ``<expr>`` per line.

Expressions::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Division is only by nonzero constants (parameter fractions included).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .coeffs import MPoly, PolyRing, make_field
from .hs import HSDerivation
from .jets import JetSeries
from .logideal import IdealPresentation


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Header:
    p: int
    vars: tuple
    params: tuple = ()
    ext: tuple = ()
    length: int | None = None

    def ring(self) -> PolyRing:
        return PolyRing(make_field(self.p, self.params), self.vars, self.ext)

    def __str__(self):
        parts = [f"p={self.p}", f"vars={','.join(self.vars)}"]
        if self.params:
            parts.append(f"params={','.join(self.params)}")
        if self.ext:
            parts.append(f"ext={','.join(self.ext)}")
        if self.length is not None:
            parts.append(f"len={self.length}")
        return " ".join(parts)


def header_for(ring: PolyRing, length: int | None = None) -> Header:
    return Header(ring.p, ring.ring_vars, tuple(getattr(ring.field, "params", ())), ring.ext_vars, length)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(->|[-+*/^()]))")


def _tokenize(text: str, line: int, offset: int = 0):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = len(text) - len(text[pos:].lstrip()) + 1 + offset
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col)
        col = m.start(m.lastindex) + 1 + offset
        if m.group(1):
            out.append(("int", int(m.group(1)), col))
        elif m.group(2):
            out.append(("name", m.group(2), col))
        else:
            out.append(("op", m.group(3), col))
        pos = m.end()
    return out


class _Series:
    """A polynomial in mu (truncated at ``order``) with MPoly coefficients."""

    __slots__ = ("ring", "order", "c")

    def __init__(self, ring, order, c):
        self.ring = ring
        self.order = order
        self.c = {k: v for k, v in c.items() if not v.is_zero()}

    def add(self, o, sign=1):
        c = dict(self.c)
        for k, v in o.c.items():
            v = v if sign > 0 else -v
            c[k] = c[k] + v if k in c else v
        return _Series(self.ring, self.order, c)

    def mul(self, o):
        c = {}
        for i, a in self.c.items():
            for j, b in o.c.items():
                if self.order is not None and i + j > self.order:
                    continue
                c[i + j] = c[i + j] + a * b if i + j in c else a * b
        return _Series(self.ring, self.order, c)

    def constant_value(self):
        """The coefficient-field value if this is a constant, else None."""
        if set(self.c) - {0}:
            return None
        f = self.c.get(0, self.ring.zero())
        if f.is_zero():
            return self.ring.field.zero
        if not f.is_constant():
            return None
        return f.constant_coeff()


class _Parser:
    def __init__(self, tokens, ring: PolyRing, order, line):
        self.toks = tokens
        self.i = 0
        self.ring = ring
        self.order = order
        self.line = line
        self.params = tuple(getattr(ring.field, "params", ()))

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def err(self, msg, tok=None):
        tok = tok or self.peek()
        col = tok[2] if tok else (self.toks[-1][2] + 1 if self.toks else 1)
        raise ParseError(msg, self.line, col)

    def take(self, value=None):
        tok = self.peek()
        if tok is None:
            self.err("unexpected end of expression")
        if value is not None and tok[1] != value:
            self.err(f"expected {value!r}")
        self.i += 1
        return tok

    def const(self, c):
        return _Series(self.ring, self.order, {0: self.ring.const(c)})

    def parse(self):
        if not self.toks:
            self.err("empty expression")
        v = self.expr()
        if self.peek() is not None:
            self.err(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            v = v.add(self.term(), 1 if op == "+" else -1)
        return v

    def term(self):
        v = self.unary()
        while self.peek() and self.peek()[1] in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op[1] == "*":
                v = v.mul(rhs)
                continue
            c = rhs.constant_value()
            if c is None:
                self.err("division by a non-constant", op)
            if self.ring.field.is_zero(c):
                self.err("division by zero", op)
            v = v.mul(self.const(self.ring.field.inv(c)))
        return v

    def unary(self):
        if self.peek() and self.peek()[1] == "-":
            self.take()
            return _Series(self.ring, self.order, {}).add(self.unary(), -1)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.err("exponent must be a nonnegative integer", tok)
            out = self.const(1)
            for _ in range(tok[1]):
                out = out.mul(base)
            return out
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return self.const(val)
        if kind == "name":
            if val == "mu":
                if self.order is None:
                    self.err("mu is not allowed here", tok)
                return _Series(self.ring, self.order, {1: self.ring.one()} if self.order >= 1 else {})
            if val in self.ring.names:
                return _Series(self.ring, self.order, {0: self.ring.gen(val)})
            if val in self.params:
                return self.const(self.ring.field.param(val))
            self.err(f"unknown name {val!r}", tok)
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        self.err(f"unexpected {val!r}", tok)


def parse_expr(text: str, ring: PolyRing, order=None, line: int = 1, offset: int = 0):
    """Parse into {mu power: MPoly} (order None forbids mu)."""
    series = _Parser(_tokenize(text, line, offset), ring, order, line).parse()
    return series.c


def parse_poly(text: str, ring: PolyRing, line: int = 1) -> MPoly:
    c = parse_expr(text, ring, None, line)
    return c.get(0, ring.zero())


def _content_lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield n, body


def parse_header(text: str, line: int = 1) -> Header:
    fields = {}
    for part in text.split():
        key, sep, val = part.partition("=")
        if not sep:
            raise ParseError(f"malformed header field {part!r}", line, text.find(part) + 1)
        if key in fields:
            raise ParseError(f"duplicate header field {key!r}", line, text.find(part) + 1)
        fields[key] = val
    unknown = set(fields) - {"p", "vars", "params", "ext", "len"}
    if unknown:
        raise ParseError(f"unknown header field(s) {sorted(unknown)}", line, 1)
    if "p" not in fields or "vars" not in fields:
        raise ParseError("header needs p= and vars=", line, 1)
    try:
        p = int(fields["p"])
        length = int(fields["len"]) if "len" in fields else None
    except ValueError as e:
        raise ParseError(f"bad integer in header: {e}", line, 1) from None

    def names(key):
        v = fields.get(key, "")
        return tuple(n for n in v.split(",") if n)

    for key in ("vars", "params", "ext"):
        for n in names(key):
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n) or n == "mu":
                raise ParseError(f"invalid name {n!r} in {key}", line, 1)
    h = Header(p, names("vars"), names("params"), names("ext"), length)
    try:
        h.ring()
    except ValueError as e:
        raise ParseError(str(e), line, 1) from None
    return h


def parse_derivation(text: str) -> HSDerivation:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty derivation file")
    hl, htext = lines[0]
    header = parse_header(htext, hl)
    if header.length is None or header.length < 1:
        raise ParseError("derivation header needs len >= 1", hl, 1)
    ring = header.ring()
    m = header.length
    images = {}
    for n, body in lines[1:]:
        if "->" not in body:
            raise ParseError("expected '<var> -> <expr>'", n, 1)
        lhs, rhs = body.split("->", 1)
        name = lhs.strip()
        if name not in ring.ring_vars:
            raise ParseError(f"{name!r} is not a ring variable", n, body.find(name) + 1)
        if name in images:
            raise ParseError(f"duplicate image for {name!r}", n, 1)
        offset = len(lhs) + 2
        c = parse_expr(rhs, ring, m, n, offset)
        coeffs = [c.get(i, ring.zero()) for i in range(m + 1)]
        if coeffs[0] != ring.gen(name):
            raise ParseError(
                f"constant term of the image of {name} is {coeffs[0]}, expected {name}", n, offset + 1
            )
        images[name] = JetSeries(ring, coeffs)
    missing = [v for v in ring.ring_vars if v not in images]
    if missing:
        raise ParseError(f"missing images for {missing}")
    return HSDerivation(ring, m, [images[v] for v in ring.ring_vars])


def parse_ideal(text: str) -> IdealPresentation:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty ideal file")
    hl, htext = lines[0]
    header = parse_header(htext, hl)
    ring = header.ring()
    gens = [parse_poly(body, ring, n) for n, body in lines[1:]]
    return IdealPresentation(ring, gens)


def _coefficient_text(f: MPoly) -> str:
    s = str(f)
    return f"({s})" if len(f) > 1 else s


def format_image(jet: JetSeries) -> str:
    parts = [str(jet.coeffs[0])]
    for i, c in enumerate(jet.coeffs[1:], start=1):
        if not c.is_zero():
            parts.append(f"{_coefficient_text(c)}*mu^{i}")
    return " + ".join(parts)


def format_derivation(D: HSDerivation) -> str:
    lines = [str(header_for(D.ring, D.length))]
    for v, jet in zip(D.ring.ring_vars, D.images):
        lines.append(f"{v} -> {format_image(jet)}")
    return "\n".join(lines) + "\n"


def format_ideal(I: IdealPresentation) -> str:
    lines = [str(header_for(I.ring))] + [str(g) for g in I.gens]
    return "\n".join(lines) + "\n"


def read_derivation(path) -> HSDerivation:
    with open(path) as fh:
        return parse_derivation(fh.read())


def read_ideal(path) -> IdealPresentation:
    with open(path) as fh:
        return parse_ideal(fh.read())
