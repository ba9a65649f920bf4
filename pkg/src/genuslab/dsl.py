"""Line-oriented session language: declarations of rings, ideals, algebras,
modules and parameter sequences, followed by compute / check / corpus
commands.

One statement per line.  Parsing resolves every name immediately, so an
undefined variable or a mixed-degree polynomial is rejected with its source
position before anything runs.  ``print_session`` regenerates canonical text;
parse -> print -> parse is the identity on the statement list.
"""

from dataclasses import dataclass, field

from .errors import HomogeneityViolation, ParseError, UndefinedName
from .modules import GradedAlgebra, GradedModule, module_from_matrix
from .ring import DEFAULT_PRIME, PolyRing, Polynomial


# ---------------------------------------------------------------- tokens

_SYMBOLS = set("=/,+-*^()[]")

CHECK_KINDS = ("thm34", "prop38", "inequalities", "ulrich")
# family name -> number of integer parameters
CORPUS_FAMILIES = {"example44": 2, "example42": 1, "idealization": 0,
                   "random": 1}


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", or the symbol itself
    text: str
    line: int
    col: int


def _tokenize_line(text: str, line_no: int):
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            break
        col = i + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], line_no, col))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("name", text[i:j], line_no, col))
            i = j
        elif ch in _SYMBOLS:
            out.append(Token(ch, ch, line_no, col))
            i += 1
        else:
            raise ParseError(line_no, col, f"unexpected character {ch!r}")
    return out


# ------------------------------------------------- polynomial expressions
# Stored as syntax so a session can be reprinted verbatim; resolved against
# a concrete ring on demand.

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


def _prec(node) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, Mul):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def expr_text(node, min_prec: int = 1) -> str:
    if isinstance(node, Var):
        body = node.name
    elif isinstance(node, Num):
        body = str(node.value)
    elif isinstance(node, Add):
        body = f"{expr_text(node.left, 1)} + {expr_text(node.right, 2)}"
    elif isinstance(node, Sub):
        body = f"{expr_text(node.left, 1)} - {expr_text(node.right, 2)}"
    elif isinstance(node, Mul):
        body = f"{expr_text(node.left, 2)}*{expr_text(node.right, 3)}"
    elif isinstance(node, Neg):
        body = f"-{expr_text(node.arg, 3)}"
    else:
        body = f"{expr_text(node.base, 5)}^{node.exponent}"
    if _prec(node) < min_prec:
        return f"({body})"
    return body


def resolve_expr(node, ring: PolyRing, line: int) -> Polynomial:
    """Expression tree to a polynomial of the given ring.  Unknown variable
    names and inhomogeneous sums are reported with the statement's line."""
    if isinstance(node, Var):
        if node.name not in ring.variables:
            raise UndefinedName(
                line, 1, f"{node.name} is not a variable of the current ring")
        return ring.variable(ring.variables.index(node.name))
    if isinstance(node, Num):
        return ring.constant(node.value)
    try:
        if isinstance(node, Add):
            return (resolve_expr(node.left, ring, line)
                    + resolve_expr(node.right, ring, line))
        if isinstance(node, Sub):
            return (resolve_expr(node.left, ring, line)
                    - resolve_expr(node.right, ring, line))
        if isinstance(node, Mul):
            return (resolve_expr(node.left, ring, line)
                    * resolve_expr(node.right, ring, line))
        if isinstance(node, Neg):
            return -resolve_expr(node.arg, ring, line)
        return resolve_expr(node.base, ring, line) ** node.exponent
    except HomogeneityViolation as err:
        raise HomogeneityViolation(f"line {line}: {err}") from err


# ------------------------------------------------------------ statements

@dataclass(frozen=True)
class PrimeDecl:
    value: int


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: tuple


@dataclass(frozen=True)
class IdealDecl:
    name: str
    polys: tuple


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    ring_name: str
    ideal_name: str


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    algebra_name: str
    twists: tuple  # empty means all zero
    rows: tuple    # tuple of tuples of expressions


@dataclass(frozen=True)
class SequenceDecl:
    name: str
    polys: tuple


@dataclass(frozen=True)
class ComputeCmd:
    target: str
    sequence: str


@dataclass(frozen=True)
class CheckCmd:
    kind: str
    target: str
    argument: str


@dataclass(frozen=True)
class CorpusCmd:
    family: str
    params: tuple


COMMAND_KINDS = (ComputeCmd, CheckCmd, CorpusCmd)


@dataclass
class Session:
    """A parsed session: the prime, the statement list as written, and the
    fully resolved objects behind every declared name."""

    prime: int = DEFAULT_PRIME
    statements: tuple = ()
    env: dict = field(default_factory=dict)
    _cyclic: dict = field(default_factory=dict)

    @property
    def commands(self) -> tuple:
        return tuple(s for s in self.statements
                     if isinstance(s, COMMAND_KINDS))

    def lookup(self, name: str, kinds, line: int):
        if name not in self.env:
            raise UndefinedName(line, 1, f"{name} was never declared")
        kind, obj = self.env[name]
        if kind not in kinds:
            raise ParseError(
                line, 1,
                f"{name} is a {kind}, expected one of {'/'.join(kinds)}")
        return obj

    def module_for(self, name: str, line: int = 0) -> GradedModule:
        """The named module, or the rank-one free module of the named
        algebra."""
        obj = self.lookup(name, ("module", "algebra"), line)
        if isinstance(obj, GradedAlgebra):
            # one shared copy per algebra, so command results stay memoized
            if name not in self._cyclic:
                self._cyclic[name] = obj.cyclic_module()
            return self._cyclic[name]
        return obj


# -------------------------------------------------------------- parsing

class _LineParser:
    def __init__(self, tokens, line_no):
        self.tokens = tokens
        self.line = line_no
        self.pos = 0

    def peek(self, ahead: int = 0):
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def _fail(self, expected):
        tok = self.peek()
        col = tok.col if tok else (self.tokens[-1].col + len(self.tokens[-1].text)
                                   if self.tokens else 1)
        got = repr(tok.text) if tok else "end of line"
        raise ParseError(self.line, col,
                         f"expected {' or '.join(expected)}, got {got}")

    def take(self, *kinds):
        tok = self.peek()
        if tok is None or (kinds and tok.kind not in kinds):
            self._fail(kinds or ("a token",))
        self.pos += 1
        return tok

    def name(self) -> str:
        return self.take("name").text

    def integer(self) -> int:
        if self.peek() and self.peek().kind == "-":
            self.take("-")
            return -int(self.take("int").text)
        return int(self.take("int").text)

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(self.line, tok.col,
                             f"unexpected trailing {tok.text!r}")

    # expression grammar: sum of products of powers, with unary minus
    def expression(self):
        node = self.product()
        while self.peek() and self.peek().kind in "+-":
            op = self.take().kind
            rhs = self.product()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def product(self):
        node = self.factor()
        while self.peek() and self.peek().kind == "*":
            self.take("*")
            node = Mul(node, self.factor())
        return node

    def factor(self):
        if self.peek() and self.peek().kind == "-":
            self.take("-")
            return Neg(self.factor())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek() and self.peek().kind == "^":
            self.take("^")
            exp = int(self.take("int").text)
            node = Pow(node, exp)
        return node

    def atom(self):
        tok = self.peek()
        if tok is None:
            self._fail(("a name", "a number", "("))
        if tok.kind == "name":
            return Var(self.take().text)
        if tok.kind == "int":
            return Num(int(self.take().text))
        if tok.kind == "(":
            self.take("(")
            node = self.expression()
            self.take(")")
            return node
        self._fail(("a name", "a number", "("))

    def expression_list(self) -> tuple:
        out = [self.expression()]
        while self.peek() and self.peek().kind == ",":
            self.take(",")
            out.append(self.expression())
        return tuple(out)


class _SessionParser:
    def __init__(self):
        self.session = Session()
        self.scope_ring = None  # ring of the most recent ring declaration
        self.statements = []

    def declare(self, name, kind, obj, line):
        if name in self.session.env:
            raise ParseError(line, 1, f"{name} was already declared")
        self.session.env[name] = (kind, obj)

    def current_ring(self, line) -> PolyRing:
        if self.scope_ring is None:
            raise UndefinedName(line, 1, "no ring has been declared yet")
        return self.scope_ring

    def statement(self, p: _LineParser):
        head = p.take("name").text
        line = p.line
        if head == "prime":
            value = p.integer()
            p.done()
            if self.statements:
                raise ParseError(line, 1,
                                 "prime must come before everything else")
            self.session.prime = value
            return PrimeDecl(value)
        if head == "ring":
            name = p.name()
            p.take("=")
            if p.take("name").text != "vars":
                self._kw_fail(p, "vars")
            variables = [p.name()]
            while p.peek() and p.peek().kind == "name":
                variables.append(p.name())
            p.done()
            try:
                ring = PolyRing(tuple(variables), self.session.prime)
            except ValueError as err:
                raise ParseError(line, 1, str(err)) from err
            self.declare(name, "ring", ring, line)
            self.scope_ring = ring
            return RingDecl(name, tuple(variables))
        if head == "ideal":
            name = p.name()
            p.take("=")
            exprs = p.expression_list()
            p.done()
            ring = self.current_ring(line)
            polys = tuple(resolve_expr(e, ring, line) for e in exprs)
            self.declare(name, "ideal", polys, line)
            return IdealDecl(name, exprs)
        if head == "algebra":
            name = p.name()
            p.take("=")
            ring_name = p.name()
            p.take("/")
            ideal_name = p.name()
            p.done()
            ring = self.session.lookup(ring_name, ("ring",), line)
            polys = self.session.lookup(ideal_name, ("ideal",), line)
            self.declare(name, "algebra", GradedAlgebra(ring, polys), line)
            return AlgebraDecl(name, ring_name, ideal_name)
        if head == "module":
            return self.module_statement(p, line)
        if head == "sequence":
            name = p.name()
            p.take("=")
            exprs = p.expression_list()
            p.done()
            ring = self.current_ring(line)
            polys = tuple(resolve_expr(e, ring, line) for e in exprs)
            self.declare(name, "sequence", polys, line)
            return SequenceDecl(name, exprs)
        if head == "compute":
            if p.take("name").text != "invariants":
                self._kw_fail(p, "invariants")
            target = p.name()
            seq = p.name()
            p.done()
            self.session.lookup(target, ("module", "algebra"), line)
            self.session.lookup(seq, ("sequence",), line)
            return ComputeCmd(target, seq)
        if head == "check":
            kind = p.take("name").text
            if kind not in CHECK_KINDS:
                raise ParseError(line, 1,
                                 f"unknown check {kind!r}, expected one of "
                                 f"{', '.join(CHECK_KINDS)}")
            target = p.name()
            argument = p.name()
            p.done()
            self.session.lookup(target, ("module", "algebra"), line)
            wanted = ("ideal",) if kind == "ulrich" else ("sequence",)
            self.session.lookup(argument, wanted, line)
            return CheckCmd(kind, target, argument)
        if head == "corpus":
            family = p.take("name").text
            if family not in CORPUS_FAMILIES:
                raise ParseError(line, 1,
                                 f"unknown corpus family {family!r}")
            params = tuple(p.integer()
                           for _ in range(CORPUS_FAMILIES[family]))
            p.done()
            return CorpusCmd(family, params)
        raise ParseError(line, 1, f"unknown statement {head!r}")

    def _kw_fail(self, p, keyword):
        prev = p.tokens[p.pos - 1]
        raise ParseError(p.line, prev.col,
                         f"expected the keyword {keyword!r}")

    def module_statement(self, p: _LineParser, line: int):
        name = p.name()
        p.take("=")
        if p.take("name").text != "coker":
            self._kw_fail(p, "coker")
        algebra_name = p.name()
        algebra = self.session.lookup(algebra_name, ("algebra",), line)
        twists = ()
        # a single bracket opens the twist list, a double bracket the matrix
        if (p.peek() and p.peek().kind == "["
                and not (p.peek(1) and p.peek(1).kind == "[")):
            p.take("[")
            tw = []
            while p.peek() and p.peek().kind != "]":
                tw.append(p.integer())
            p.take("]")
            twists = tuple(tw)
        p.take("[")
        rows = []
        while True:
            p.take("[")
            rows.append(p.expression_list())
            p.take("]")
            if p.peek() and p.peek().kind == ",":
                p.take(",")
                continue
            break
        p.take("]")
        p.done()
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ParseError(line, 1, "matrix rows have unequal lengths")
        if twists and len(twists) != len(rows):
            raise ParseError(line, 1,
                             f"{len(twists)} twists for {len(rows)} rows")
        ring = algebra.ring
        entries = [[resolve_expr(e, ring, line) for e in row] for row in rows]
        module = module_from_matrix(algebra, entries,
                                    row_twists=twists or None)
        self.declare(name, "module", module, line)
        return ModuleDecl(name, algebra_name, twists,
                          tuple(tuple(r) for r in rows))


def parse_session(text: str) -> Session:
    """Parse and resolve session text.

    Raises ParseError (with line and column) for malformed input,
    UndefinedName for references to missing names, and HomogeneityViolation
    when a declared element mixes degrees.
    """
    sp = _SessionParser()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(raw, line_no)
        if not tokens:
            continue
        stmt = sp.statement(_LineParser(tokens, line_no))
        sp.statements.append(stmt)
    sp.session.statements = tuple(sp.statements)
    return sp.session


# ------------------------------------------------------------- printing

def _statement_text(stmt) -> str:
    if isinstance(stmt, PrimeDecl):
        return f"prime {stmt.value}"
    if isinstance(stmt, RingDecl):
        return f"ring {stmt.name} = vars {' '.join(stmt.variables)}"
    if isinstance(stmt, IdealDecl):
        return (f"ideal {stmt.name} = "
                + ", ".join(expr_text(e) for e in stmt.polys))
    if isinstance(stmt, AlgebraDecl):
        return f"algebra {stmt.name} = {stmt.ring_name} / {stmt.ideal_name}"
    if isinstance(stmt, ModuleDecl):
        parts = [f"module {stmt.name} = coker {stmt.algebra_name}"]
        if stmt.twists:
            parts.append("[" + " ".join(str(t) for t in stmt.twists) + "]")
        rows = ", ".join(
            "[" + ", ".join(expr_text(e) for e in row) + "]"
            for row in stmt.rows)
        parts.append(f"[{rows}]")
        return " ".join(parts)
    if isinstance(stmt, SequenceDecl):
        return (f"sequence {stmt.name} = "
                + ", ".join(expr_text(e) for e in stmt.polys))
    if isinstance(stmt, ComputeCmd):
        return f"compute invariants {stmt.target} {stmt.sequence}"
    if isinstance(stmt, CheckCmd):
        return f"check {stmt.kind} {stmt.target} {stmt.argument}"
    if isinstance(stmt, CorpusCmd):
        return " ".join(["corpus", stmt.family]
                        + [str(v) for v in stmt.params])
    raise TypeError(f"not a statement: {stmt!r}")


def print_session(session: Session) -> str:
    """Canonical text for a session; parsing it back gives the same
    statement list."""
    return "\n".join(_statement_text(s) for s in session.statements) + "\n"
