"""Abstract syntax, concrete syntax and syntactic transformations.

The language has two layers.  Propositional formulas are built from ``bot``,
atoms and the boolean connectives.  General formulas add the support
connective ``~>`` (whose operands must be propositional), the belief operator
``B(...)`` and the trust abbreviation ``T[cond](goal)``.

Concrete syntax, tightest binding first::

    !      prefix
    &      left associative
    |      left associative
    ~>     non-associative, operands propositional
    ->     right associative
    <->    left associative

``top`` abbreviates ``!bot``.  Identifiers match ``[A-Za-z][A-Za-z0-9_]*``;
``bot``, ``top``, ``B`` and ``T`` are reserved.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple


class ParseError(ValueError):
    """Malformed concrete syntax.  ``line``/``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


class LayerError(ParseError):
    """A non-propositional formula appears where only propositional ones are allowed."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Formula:
    """Base class of all formula nodes.  Nodes are immutable and compare structurally."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return "Bot()"


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Meta(Formula):
    """Schematic letter.  ``kind`` is ``"prop"`` (ranges over propositional
    formulas) or ``"any"`` (ranges over all formulas)."""

    name: str
    kind: str = "prop"

    def __repr__(self):
        return f"Meta({self.name!r}, {self.kind!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Binary(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(Binary):
    pass


class Or(Binary):
    pass


class Imp(Binary):
    pass


class Iff(Binary):
    pass


@dataclass(frozen=True, repr=False)
class Support(Formula):
    lhs: Formula
    rhs: Formula

    def __post_init__(self):
        for side in (self.lhs, self.rhs):
            if not is_prop(side):
                raise LayerError(f"operand of '~>' must be propositional: {render(side)}")

    def __repr__(self):
        return f"Support({self.lhs!r}, {self.rhs!r})"


@dataclass(frozen=True, repr=False)
class Belief(Formula):
    arg: Formula

    def __repr__(self):
        return f"Belief({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Trust(Formula):
    cond: Formula
    goal: Formula

    def __post_init__(self):
        for side in (self.cond, self.goal):
            if not is_prop(side):
                raise LayerError(f"operand of T[..](..) must be propositional: {render(side)}")

    def __repr__(self):
        return f"Trust({self.cond!r}, {self.goal!r})"


BOT = Bot()
TOP = Not(BOT)

BINARY_TOKENS = {And: "&", Or: "|", Imp: "->", Iff: "<->"}


def is_prop(f: Formula) -> bool:
    """True iff ``f`` lies in the propositional layer."""
    while True:
        if isinstance(f, (Bot, Atom)):
            return True
        if isinstance(f, Meta):
            return f.kind == "prop"
        if isinstance(f, Not):
            f = f.arg
            continue
        if isinstance(f, Binary):
            return is_prop(f.left) and is_prop(f.right)
        return False


def conj(parts) -> Formula:
    """Right-nested conjunction of a nonempty sequence."""
    parts = list(parts)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, (Not, Belief)):
        return (f.arg,)
    if isinstance(f, Binary):
        return (f.left, f.right)
    if isinstance(f, Support):
        return (f.lhs, f.rhs)
    if isinstance(f, Trust):
        return (f.cond, f.goal)
    kids = getattr(f, "children", None)
    return tuple(kids()) if kids else ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over all subformula occurrences."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def atoms(f: Formula) -> set:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def metas(f: Formula) -> set:
    return {g for g in subformulas(f) if isinstance(g, Meta)}


def support_subformulas(f: Formula) -> List[Support]:
    """Distinct support subformulas, in order of first occurrence."""
    seen = {}
    for g in subformulas(f):
        if isinstance(g, Support) and g not in seen:
            seen[g] = None
    return list(seen)


def rebuild(f: Formula, kids: Tuple[Formula, ...]) -> Formula:
    if isinstance(f, Binary):
        return type(f)(*kids)
    if isinstance(f, (Not, Belief, Support, Trust)):
        return type(f)(*kids)
    if kids:
        return f.rebuild(kids)
    return f


def transform(f: Formula, fn: Callable[[Formula], Optional[Formula]]) -> Formula:
    """Top-down rewrite: ``fn`` returns a replacement or None to recurse."""
    out = fn(f)
    if out is not None:
        return out
    kids = children(f)
    if not kids:
        return f
    new = tuple(transform(k, fn) for k in kids)
    if all(a is b for a, b in zip(new, kids)):
        return f
    return rebuild(f, new)


def substitute(f: Formula, mapping: Dict[Formula, Formula]) -> Formula:
    """Replace every occurrence of a key of ``mapping`` (atoms, metas, or any node)."""
    return transform(f, lambda g: mapping.get(g))


def desugar(f: Formula) -> Formula:
    """Replace each ``T[c](g)`` by ``B(c) & B(c ~> g)``."""

    def step(g):
        if isinstance(g, Trust):
            return And(Belief(g.cond), Belief(Support(g.cond, g.goal)))
        return None

    return transform(f, step)


def resugar(f: Formula) -> Formula:
    """Inverse of :func:`desugar`: fold ``B(c) & B(c ~> g)`` back into ``T[c](g)``."""

    def step(g):
        if (isinstance(g, And) and isinstance(g.left, Belief) and isinstance(g.right, Belief)
                and isinstance(g.right.arg, Support) and g.right.arg.lhs == g.left.arg):
            return Trust(g.left.arg, g.right.arg.rhs)
        return None

    return transform(f, step)


# ---------------------------------------------------------------------------
# Boolean skeleton
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Skeleton:
    skeleton: Formula
    dictionary: Dict[str, Formula]

    def restore(self) -> Formula:
        return substitute(self.skeleton, {Atom(k): v for k, v in self.dictionary.items()})


def skeletonize(f: Formula, prefix: str = "x") -> Skeleton:
    """Replace maximal support/belief subformulas by fresh atoms.

    Syntactically equal subformulas share one atom.  Schematic letters that
    range over arbitrary formulas are treated the same way.  Fresh names are
    ``x1, x2, ...`` skipping any name already used in ``f``.
    """
    if any(isinstance(g, Trust) for g in subformulas(f)):
        raise ValueError("skeletonize expects a desugared formula")
    taken = atoms(f) | {m.name for m in metas(f)}
    table: Dict[Formula, str] = {}
    counter = [0]

    def fresh() -> str:
        while True:
            counter[0] += 1
            name = f"{prefix}{counter[0]}"
            if name not in taken:
                return name

    def step(g):
        if isinstance(g, (Support, Belief)) or (isinstance(g, Meta) and g.kind != "prop"):
            if g not in table:
                table[g] = fresh()
            return Atom(table[g])
        return None

    skel = transform(f, step)
    return Skeleton(skel, {name: g for g, name in table.items()})


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

PREC = {Iff: 1, Imp: 2, Support: 3, Or: 4, And: 5}
UNARY_PREC = 6
ATOM_PREC = 7


def _prec(f: Formula) -> int:
    if isinstance(f, Binary):
        return PREC[type(f)]
    if isinstance(f, Support):
        return PREC[Support]
    if f == TOP:
        return ATOM_PREC
    if isinstance(f, Not):
        return UNARY_PREC
    return getattr(f, "precedence", ATOM_PREC)


def _wrap(f: Formula, need_parens: bool) -> str:
    text = render(f)
    return f"({text})" if need_parens else text


def render(f: Formula) -> str:
    """Concrete text with the fewest parentheses that still round-trip."""
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, (Atom, Meta)):
        return f.name
    if f == TOP:
        return "top"
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, _prec(f.arg) < UNARY_PREC)
    if isinstance(f, Binary):
        p = PREC[type(f)]
        lp, rp = _prec(f.left), _prec(f.right)
        if isinstance(f, Imp):
            left_paren, right_paren = lp <= p, rp < p
        else:
            left_paren, right_paren = lp < p, rp <= p
        return f"{_wrap(f.left, left_paren)} {BINARY_TOKENS[type(f)]} {_wrap(f.right, right_paren)}"
    if isinstance(f, Support):
        p = PREC[Support]
        return f"{_wrap(f.lhs, _prec(f.lhs) <= p)} ~> {_wrap(f.rhs, _prec(f.rhs) <= p)}"
    if isinstance(f, Belief):
        return f"B({render(f.arg)})"
    if isinstance(f, Trust):
        return f"T[{render(f.cond)}]({render(f.goal)})"
    return f.render_with(render, _wrap)


# ---------------------------------------------------------------------------
# Lexer and parser
# ---------------------------------------------------------------------------

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
RESERVED = {"bot", "top", "B", "T"}

_SYMBOLS = ["<->", "[]", "<>", "~>", "->", "!", "&", "|", "(", ")", "[", "]", "/"]
_UNICODE = {"¬": "!", "∧": "&", "∨": "|", "→": "->", "↔": "<->", "⤳": "~>", "⊥": "bot", "⊤": "top"}


@dataclass(frozen=True)
class Token:
    kind: str  # symbol text, "ident", or "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    out = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch in _UNICODE:
            sub = _UNICODE[ch]
            kind = "ident" if sub.isalpha() else sub
            out.append(Token(kind, sub, line, col))
            col, i = col + 1, i + 1
            continue
        m = IDENT_RE.match(text, i)
        if m:
            out.append(Token("ident", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                out.append(Token(sym, sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(Token("eof", "", line, col))
    return out


class Parser:
    """Precedence-climbing parser for the concrete syntax.

    ``prop_only`` rejects ``B``, ``T`` and ``~>``; ``metavars`` maps
    identifiers to schematic-letter kinds.  Subclasses may extend
    :meth:`parse_prefix` and :meth:`parse_primary`.
    """

    def __init__(self, text: str, prop_only: bool = False, metavars: Optional[Dict[str, str]] = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.prop_only = prop_only
        self.metavars = metavars or {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.tok
        if t.kind != kind:
            found = t.text or "end of input"
            raise ParseError(f"expected '{kind}', found '{found}'", t.line, t.column)
        return self.advance()

    def error(self, message: str, t: Optional[Token] = None) -> ParseError:
        t = t or self.tok
        return ParseError(message, t.line, t.column)

    def layer_error(self, message: str, t: Token) -> LayerError:
        return LayerError(message, t.line, t.column)

    def build(self, ctor, t: Token, *args) -> Formula:
        try:
            return ctor(*args)
        except LayerError as exc:
            raise self.layer_error(exc.message, t) from None

    # grammar
    def parse(self) -> Formula:
        f = self.parse_iff()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected '{self.tok.text}'")
        return f

    def parse_iff(self) -> Formula:
        left = self.parse_imp()
        while self.tok.kind == "<->":
            self.advance()
            left = Iff(left, self.parse_imp())
        return left

    def parse_imp(self) -> Formula:
        left = self.parse_support()
        if self.tok.kind == "->":
            self.advance()
            return Imp(left, self.parse_imp())
        return left

    def parse_support(self) -> Formula:
        left = self.parse_or()
        if self.tok.kind == "~>":
            t = self.advance()
            if self.prop_only:
                raise self.layer_error("'~>' is not allowed in a propositional formula", t)
            right = self.parse_or()
            if self.tok.kind == "~>":
                raise self.error("'~>' is non-associative; add parentheses")
            return self.build(Support, t, left, right)
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.tok.kind == "|":
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        while self.tok.kind == "&":
            self.advance()
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        out = self.parse_prefix()
        if out is not None:
            return out
        return self.parse_primary()

    def parse_prefix(self) -> Optional[Formula]:
        if self.tok.kind == "!":
            self.advance()
            return Not(self.parse_unary())
        return None

    def parse_primary(self) -> Formula:
        t = self.tok
        if t.kind == "(":
            self.advance()
            f = self.parse_iff()
            self.expect(")")
            return f
        if t.kind != "ident":
            found = t.text or "end of input"
            raise self.error(f"expected a formula, found '{found}'")
        self.advance()
        name = t.text
        if name == "bot":
            return BOT
        if name == "top":
            return TOP
        if name == "B":
            if self.prop_only:
                raise self.layer_error("'B' is not allowed in a propositional formula", t)
            self.expect("(")
            inner = self.parse_iff()
            self.expect(")")
            return Belief(inner)
        if name == "T":
            if self.prop_only:
                raise self.layer_error("'T' is not allowed in a propositional formula", t)
            self.expect("[")
            cond = self.parse_iff()
            self.expect("]")
            self.expect("(")
            goal = self.parse_iff()
            self.expect(")")
            return self.build(Trust, t, cond, goal)
        if name in self.metavars:
            return Meta(name, self.metavars[name])
        return Atom(name)


def parse(text: str, metavars: Optional[Dict[str, str]] = None) -> Formula:
    """Parse a general formula."""
    return Parser(text, metavars=metavars).parse()


def parse_prop(text: str) -> Formula:
    """Parse a propositional formula; modal constructs raise :class:`LayerError`."""
    return Parser(text, prop_only=True).parse()
