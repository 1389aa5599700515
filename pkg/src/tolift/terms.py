"""Signatures, terms, and identities in prefix functional notation.

Grammar for terms:

    term  ::=  IDENT  |  IDENT '(' term (',' term)* ')'
    IDENT ::=  ASCII letter followed by letters, digits, or underscores

An IDENT is an operation application exactly when it is declared in the
governing signature; any other IDENT is a variable.  Nullary operations may
be written with or without "()" and always print with "()".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ParseError

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Signature:
    """Ordered operation symbols with arities, e.g. Signature((("m", 2),))."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.ops:
            if _IDENT_RE.fullmatch(name) is None:
                raise ParseError(f"bad operation name {name!r}")
            if arity < 0:
                raise ParseError(f"negative arity for {name!r}")
            if name in seen:
                raise ParseError(f"duplicate operation name {name!r}")
            seen.add(name)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse a spec like "m/2, e/0" (comma or whitespace separated)."""
        ops = []
        for token in text.replace(",", " ").split():
            name, slash, arity = token.partition("/")
            if not slash or not arity.isdigit():
                raise ParseError(f"bad signature token {token!r}, expected NAME/ARITY")
            ops.append((name, int(arity)))
        return cls(tuple(ops))

    @cached_property
    def arities(self) -> dict[str, int]:
        return dict(self.ops)

    def arity(self, name: str) -> int:
        return self.arities[name]

    def index(self, name: str) -> int:
        return self.names.index(name)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.ops)

    def __contains__(self, name: str) -> bool:
        return name in self.arities

    def __str__(self) -> str:
        return ", ".join(f"{name}/{arity}" for name, arity in self.ops)


class Term:
    """Base class; a term is either a Var leaf or an App node."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    op: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Identity:
    """An equation lhs = rhs between terms over a shared signature."""

    lhs: Term
    rhs: Term
    sig: Signature

    @cached_property
    def variables(self) -> tuple[str, ...]:
        """All variable names, in first-occurrence order, lhs first."""
        seen: dict[str, None] = {}
        for term in (self.lhs, self.rhs):
            for name in _variables_in(term):
                seen.setdefault(name)
        return tuple(seen)

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} = {print_term(self.rhs)}"


@dataclass(frozen=True)
class IdentitySet:
    """Identities over one shared signature."""

    sig: Signature
    identities: tuple[Identity, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for ident in self.identities:
            if ident.sig != self.sig:
                raise ParseError(f"identity {ident} is over a different signature")

    def __iter__(self):
        return iter(self.identities)

    def __len__(self) -> int:
        return len(self.identities)


def _variables_in(t: Term):
    if isinstance(t, Var):
        yield t.name
    else:
        assert isinstance(t, App)
        for arg in t.args:
            yield from _variables_in(arg)


def term_variables(t: Term) -> tuple[str, ...]:
    """Variable names of a single term, in first-occurrence order."""
    return tuple(dict.fromkeys(_variables_in(t)))


class _Tokens:
    """Tokenizer over IDENT, '(', ')', ',', '='; whitespace ignored."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        if self.pos >= len(self.text):
            return None
        ch = self.text[self.pos]
        if ch in "(),=":
            return ch
        m = _IDENT_RE.match(self.text, self.pos)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", self.pos)
        return m.group()

    def take(self) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos)
        start = self.pos
        self.pos += len(tok)
        return tok, start

    def expect(self, symbol: str):
        tok = self.peek()
        if tok != symbol:
            raise ParseError(f"expected {symbol!r}, found {tok!r}" if tok is not None
                             else f"expected {symbol!r}, found end of input", self.pos)
        self.take()

    def at_end(self) -> bool:
        return self.peek() is None


def _parse_term(tokens: _Tokens, sig: Signature) -> Term:
    tok, start = tokens.take()
    if tok in "(),=":
        raise ParseError(f"expected a term, found {tok!r}", start)
    if tok in sig:
        arity = sig.arity(tok)
        if tokens.peek() != "(":
            # Nullary ops may omit "()"; anything else must apply arguments.
            if arity == 0:
                return App(tok, ())
            raise ParseError(f"operation {tok!r} expects {arity} argument(s), got 0", start)
        tokens.expect("(")
        args: list[Term] = []
        if tokens.peek() != ")":
            args.append(_parse_term(tokens, sig))
            while tokens.peek() == ",":
                tokens.take()
                args.append(_parse_term(tokens, sig))
        tokens.expect(")")
        if len(args) != arity:
            raise ParseError(
                f"operation {tok!r} expects {arity} argument(s), got {len(args)}", start)
        return App(tok, tuple(args))
    if tokens.peek() == "(":
        raise ParseError(f"{tok!r} is a variable, not an operation; it takes no arguments",
                         start)
    return Var(tok)


def parse_term(text: str, sig: Signature) -> Term:
    """Parse `text` as a single term over `sig`."""
    tokens = _Tokens(text)
    term = _parse_term(tokens, sig)
    if not tokens.at_end():
        raise ParseError(f"trailing input {tokens.peek()!r}", tokens.pos)
    return term


def print_term(t: Term) -> str:
    """Canonical form: no spaces, nullary ops printed with "()"."""
    if isinstance(t, Var):
        return t.name
    assert isinstance(t, App)
    return f"{t.op}({','.join(print_term(a) for a in t.args)})"


def parse_identity(text: str, sig: Signature) -> Identity:
    """Parse "s = t"; exactly one '=' must appear."""
    tokens = _Tokens(text)
    lhs = _parse_term(tokens, sig)
    tokens.expect("=")
    rhs = _parse_term(tokens, sig)
    if not tokens.at_end():
        if tokens.peek() == "=":
            raise ParseError("multiple '=' in identity", tokens.pos)
        raise ParseError(f"trailing input {tokens.peek()!r}", tokens.pos)
    return Identity(lhs, rhs, sig)


def parse_identity_file(text: str, sig: Signature) -> IdentitySet:
    """One identity per line; '#' starts a comment; blank lines ignored."""
    identities = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            identities.append(parse_identity(line, sig))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}", lineno, where="line") from exc
    return IdentitySet(sig, tuple(identities))


def variable_occurrences(t: Term) -> dict[str, int]:
    """Multiset count of variable leaves."""
    counts: dict[str, int] = {}
    for name in _variables_in(t):
        counts[name] = counts.get(name, 0) + 1
    return counts


def is_linear(ident: Identity) -> bool:
    """Every variable occurs at most once in lhs and at most once in rhs."""
    return (all(c <= 1 for c in variable_occurrences(ident.lhs).values())
            and all(c <= 1 for c in variable_occurrences(ident.rhs).values()))


def is_balanced_linear(ident: Identity) -> bool:
    """Every variable of the identity occurs exactly once on each side."""
    lhs = variable_occurrences(ident.lhs)
    rhs = variable_occurrences(ident.rhs)
    return (set(lhs) == set(rhs)
            and all(c == 1 for c in lhs.values())
            and all(c == 1 for c in rhs.values()))
