"""Session scripts: tokenizer, parser and ideal-expression evaluation.

A session declares variables, posets and ideals and lists commands::

    vars a b c d e f;
    poset P { a < d; d < f; c < f; b < e; c < e }
    ideal I = Q[P](d*e*f);
    cmd primary I;
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.errors import (
    PosetError, SessionParseError, UndeclaredNameError
)
from src.monomials import (
    Monomial, MonomialIdeal, MonomialPrime, VariableSet, ideal_sum,
    intersect, minimalize, power, product
)
from src.poset import Poset, antichain_poset, build_poset, chain_poset
from src.qborel import (
    PrimeFactorization, QBorelIdeal, _q_generators_of, q_closure,
    q_intersection
)

logger = logging.getLogger(__name__)

KEYWORDS = ("vars", "poset", "ideal", "cmd")

_TOKEN = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)"
    r"|(?P<sym>[;{}()\[\],<*^=&+∩])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    """Split a session into tokens with 1-based line and column numbers.

    Raises:
        SessionParseError: On a character outside the grammar
    """
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise SessionParseError(f"unexpected character {text[pos]!r}",
                                    line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind in ("ident", "int", "sym"):
            tokens.append(Token(kind, match.group(), line,
                                pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass(frozen=True)
class IdealValue:
    """Evaluated ideal with whatever structure its expression carried."""

    ideal: MonomialIdeal
    poset: Optional[Poset] = None
    poset_name: Optional[str] = None
    q_generators: Optional[Tuple[Monomial, ...]] = None
    factorization: Optional[PrimeFactorization] = None
    intersection: Optional[Dict[MonomialPrime, int]] = None

    def is_principal_q_borel(self) -> bool:
        return self.poset is not None and self.q_generators is not None \
            and len(self.q_generators) == 1


@dataclass(frozen=True)
class Command:
    name: str
    args: Tuple[str, ...]
    line: int


@dataclass
class Session:
    variables: Optional[VariableSet] = None
    posets: Dict[str, Poset] = field(default_factory=dict)
    ideals: Dict[str, IdealValue] = field(default_factory=dict)
    commands: List[Command] = field(default_factory=list)

    @property
    def nvars(self) -> int:
        return len(self.variables) if self.variables else 0


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.session = Session()
        self.last_poset: Optional[str] = None

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def error(self, message: str, token: Optional[Token] = None,
              cls: type = SessionParseError) -> SessionParseError:
        token = token or self.peek()
        return cls(message, token.line, token.column)

    def expect(self, text: str) -> Token:
        token = self.advance()
        if token.text != text:
            shown = token.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}", token)
        return token

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "eof":
            self.advance()
            return True
        return False

    def ident(self) -> Token:
        token = self.advance()
        if token.kind != "ident":
            raise self.error(f"expected a name, found {token.text!r}", token)
        return token

    def integer(self) -> int:
        token = self.advance()
        if token.kind != "int":
            raise self.error(f"expected an integer, found {token.text!r}",
                             token)
        return int(token.text)

    @property
    def variables(self) -> VariableSet:
        if self.session.variables is None:
            raise self.error("variables must be declared first",
                             cls=UndeclaredNameError)
        return self.session.variables

    def check_new_name(self, token: Token) -> None:
        if token.text in self.session.posets or \
                token.text in self.session.ideals:
            raise self.error(f"name {token.text!r} already declared", token)

    def parse(self) -> Session:
        while self.peek().kind != "eof":
            token = self.ident()
            if token.text == "vars":
                self.parse_vars(token)
            elif token.text == "poset":
                self.parse_poset()
            elif token.text == "ideal":
                self.parse_ideal()
            elif token.text == "cmd":
                self.parse_command(token)
            else:
                raise self.error(f"unknown statement {token.text!r}", token)
        return self.session

    def parse_vars(self, start: Token) -> None:
        if self.session.variables is not None:
            raise self.error("variables declared twice", start)
        names = []
        while not self.accept(";"):
            token = self.ident()
            if token.text in KEYWORDS or token.text in ("Q", "inf"):
                raise self.error(f"reserved name {token.text!r}", token)
            names.append(token.text)
        if not names:
            raise self.error("empty variable list", start)
        if len(set(names)) != len(names):
            raise self.error("duplicate variable names", start)
        self.session.variables = VariableSet(names)

    def parse_poset(self) -> None:
        name = self.ident()
        self.check_new_name(name)
        n = len(self.variables)
        if self.accept("="):
            kind = self.ident()
            if kind.text == "chain":
                Q = chain_poset(n)
            elif kind.text == "antichain":
                Q = antichain_poset(n)
            else:
                raise self.error(f"unknown poset shape {kind.text!r}", kind)
            self.expect(";")
        else:
            Q = self.parse_relations(self.expect("{"))
            self.accept(";")
        self.session.posets[name.text] = Q
        self.last_poset = name.text

    def parse_relations(self, start: Token) -> Poset:
        pairs: List[Tuple[int, int]] = []
        while not self.accept("}"):
            previous = self.variable_index(self.ident())
            while self.accept("<"):
                current = self.variable_index(self.ident())
                pairs.append((previous, current))
                previous = current
            if self.peek().text not in ("}",):
                if not (self.accept(";") or self.accept(",")):
                    raise self.error("expected ';' between relations")
        try:
            return build_poset(len(self.variables), pairs)
        except PosetError as e:
            names = self.variables.names
            raise self.error(_named_poset_error(str(e), names), start)

    def variable_index(self, token: Token) -> int:
        if token.text not in self.variables:
            raise self.error(f"undeclared variable {token.text!r}", token,
                             UndeclaredNameError)
        return self.variables.index(token.text)

    def parse_ideal(self) -> None:
        name = self.ident()
        self.check_new_name(name)
        self.expect("=")
        value = self.parse_expression()
        self.expect(";")
        self.session.ideals[name.text] = value

    def parse_command(self, start: Token) -> None:
        name = self.ident()
        args: List[str] = []
        while not self.accept(";"):
            token = self.advance()
            if token.kind == "eof":
                raise self.error("unterminated command", start)
            if self.peek().text == "=" and token.kind == "ident":
                self.advance()
                args.append(f"{token.text}={self.integer()}")
            else:
                args.append(token.text)
        self.session.commands.append(Command(name.text, tuple(args),
                                             start.line))

    # expressions: sum/intersection of products of powers of atoms

    def parse_expression(self) -> IdealValue:
        value = self.parse_term()
        while self.peek().text in ("&", "∩", "+"):
            op = self.advance().text
            other = self.parse_term()
            value = _sum(value, other) if op == "+" \
                else _intersection(value, other)
        return value

    def parse_term(self) -> IdealValue:
        value = self.parse_factor()
        while self.accept("*"):
            value = _product(value, self.parse_factor())
        return value

    def parse_factor(self) -> IdealValue:
        value = self.parse_atom()
        if self.accept("^"):
            token = self.peek()
            k = self.integer()
            if k < 1:
                raise self.error("ideal exponents must be positive", token)
            value = _power(value, k)
        return value

    def parse_atom(self) -> IdealValue:
        token = self.peek()
        if token.text == "Q":
            self.advance()
            poset_name = self.last_poset
            if self.accept("["):
                poset_name = self.ident().text
                if poset_name not in self.session.posets:
                    raise self.error(f"undeclared poset {poset_name!r}",
                                     token, UndeclaredNameError)
                self.expect("]")
            if poset_name is None:
                raise self.error("Q(...) needs a declared poset", token,
                                 UndeclaredNameError)
            Q = self.session.posets[poset_name]
            closure = q_closure(Q, self.parse_monomial_list())
            return IdealValue(closure.expansion, Q, poset_name,
                              closure.q_generators)
        if token.text == "(":
            gens = self.parse_monomial_list()
            ideal = minimalize(gens, len(self.variables))
            if gens and all(g.degree == 1 for g in gens):
                p = MonomialPrime(
                    frozenset(g.support[0] for g in gens), ideal.nvars
                )
                return IdealValue(
                    ideal,
                    factorization=PrimeFactorization.of({p: 1}, ideal.nvars),
                    intersection={p: 1},
                )
            return IdealValue(ideal)
        if token.kind == "ident":
            self.advance()
            if token.text not in self.session.ideals:
                raise self.error(f"undeclared ideal {token.text!r}", token,
                                 UndeclaredNameError)
            return self.session.ideals[token.text]
        raise self.error(f"unexpected {token.text or 'end of input'!r}")

    def parse_monomial_list(self) -> List[Monomial]:
        self.expect("(")
        gens: List[Monomial] = []
        if self.accept(")"):
            return gens
        while True:
            gens.append(self.parse_monomial())
            if self.accept(")"):
                return gens
            self.expect(",")

    def parse_monomial(self) -> Monomial:
        n = len(self.variables)
        result = Monomial.unit(n)
        while True:
            token = self.advance()
            if token.kind == "int" and token.text == "1":
                pass
            elif token.kind == "ident":
                result = result * self.word_monomial(token)
            else:
                raise self.error(f"expected a monomial, found "
                                 f"{token.text!r}", token)
            if self.accept("^"):
                if token.kind != "ident" or token.text not in self.variables:
                    raise self.error("'^' must follow a single variable",
                                     token)
                e = self.integer()
                index = self.variables.index(token.text)
                result = result * Monomial.variable(n, index, e - 1) \
                    if e >= 1 else result / Monomial.variable(n, index)
            if not self.accept("*"):
                return result

    def word_monomial(self, token: Token) -> Monomial:
        """Read a name or juxtaposed names with exponents, like a2bc."""
        variables = self.variables
        if token.text in variables:
            return variables.monomial({token.text: 1})
        powers: Dict[str, int] = {}
        word, pos = token.text, 0
        names = sorted(variables.names, key=len, reverse=True)
        while pos < len(word):
            name = next((v for v in names if word.startswith(v, pos)), None)
            if name is None:
                raise self.error(f"undeclared variable in {word!r}", token,
                                 UndeclaredNameError)
            pos += len(name)
            digits = re.match(r"[0-9]*", word[pos:]).group()
            pos += len(digits)
            powers[name] = powers.get(name, 0) + (int(digits) if digits
                                                  else 1)
        return variables.monomial(powers)


def _named_poset_error(message: str, names: Tuple[str, ...]) -> str:
    def rename(match: "re.Match[str]") -> str:
        index = int(match.group(1)) - 1
        return names[index] if 0 <= index < len(names) else match.group()

    return re.sub(r"x(\d+)", rename, message)


def _combine_posets(a: IdealValue, b: IdealValue
                    ) -> Tuple[Optional[Poset], Optional[str]]:
    if a.poset is not None and a.poset == b.poset:
        return a.poset, a.poset_name
    return None, None


def _with_poset(ideal: MonomialIdeal, Q: Optional[Poset],
                name: Optional[str], **structure) -> IdealValue:
    gens = _q_generators_of(Q, ideal) if Q is not None else None
    return IdealValue(ideal, Q, name, gens, **structure)


def _power(a: IdealValue, k: int) -> IdealValue:
    factorization = None
    if a.factorization is not None:
        factorization = PrimeFactorization.of(
            {p: e * k for p, e in a.factorization.factors},
            a.factorization.nvars,
        )
    intersection = None
    if a.intersection is not None and len(a.intersection) == 1:
        intersection = {p: e * k for p, e in a.intersection.items()}
    return _with_poset(power(a.ideal, k), a.poset, a.poset_name,
                       factorization=factorization,
                       intersection=intersection)


def _product(a: IdealValue, b: IdealValue) -> IdealValue:
    factorization = None
    if a.factorization is not None and b.factorization is not None:
        merged = a.factorization.as_dict()
        for p, e in b.factorization.factors:
            merged[p] = merged.get(p, 0) + e
        factorization = PrimeFactorization.of(merged, a.ideal.nvars)
    Q, name = _combine_posets(a, b)
    return _with_poset(product(a.ideal, b.ideal), Q, name,
                       factorization=factorization)


def _intersection(a: IdealValue, b: IdealValue) -> IdealValue:
    components = None
    if a.intersection is not None and b.intersection is not None:
        components = dict(a.intersection)
        for p, e in b.intersection.items():
            components[p] = max(components.get(p, 0), e)
    Q, name = _combine_posets(a, b)
    if Q is not None and a.q_generators and b.q_generators:
        meet = q_intersection(QBorelIdeal(Q, a.q_generators, a.ideal),
                              QBorelIdeal(Q, b.q_generators, b.ideal))
        return IdealValue(meet.expansion, Q, name, meet.q_generators,
                          intersection=components)
    return _with_poset(intersect(a.ideal, b.ideal), Q, name,
                       intersection=components)


def _sum(a: IdealValue, b: IdealValue) -> IdealValue:
    Q, name = _combine_posets(a, b)
    return _with_poset(ideal_sum(a.ideal, b.ideal), Q, name)


def parse_session(text: str) -> Session:
    """Parse and evaluate a session script.

    Raises:
        SessionParseError: With line and column on malformed input
        UndeclaredNameError: When a name is used before its declaration
    """
    session = _Parser(text).parse()
    logger.debug(
        f"Parsed session with {len(session.posets)} posets, "
        f"{len(session.ideals)} ideals and {len(session.commands)} commands"
    )
    return session


def format_poset(Q: Poset, variables: VariableSet) -> str:
    """Relations of the Hasse diagram as 'a < b; ...'."""
    return "; ".join(
        f"{variables.names[i]} < {variables.names[j]}"
        for i, j in sorted(Q.covers)
    )


def format_session(session: Session) -> str:
    """Session text that parses back to the same posets and ideals."""
    variables = session.variables
    if variables is None:
        return ""
    lines = [f"vars {' '.join(variables.names)};"]
    for name, Q in session.posets.items():
        lines.append(f"poset {name} {{ {format_poset(Q, variables)} }}")
    for name, value in session.ideals.items():
        if value.poset_name is not None and value.q_generators is not None:
            gens = ", ".join(variables.format_monomial(g)
                             for g in value.q_generators)
            lines.append(f"ideal {name} = Q[{value.poset_name}]({gens});")
        elif value.ideal.is_zero():
            lines.append(f"ideal {name} = ();")
        else:
            lines.append(
                f"ideal {name} = {variables.format_ideal(value.ideal)};"
            )
    for command in session.commands:
        lines.append(" ".join(("cmd", command.name) + command.args) + ";")
    return "\n".join(lines) + "\n"


__all__ = [
    "Token", "tokenize", "IdealValue", "Command", "Session", "parse_session",
    "format_poset", "format_session",
]
