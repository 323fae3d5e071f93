"""Scale-factor expressions in one variable t.

Grammar (EBNF)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := NUMBER | "t" | IDENT "(" expr ")" | "(" expr ")"

"^" is right-associative and unary minus binds tighter than the base of
"^", so ``-t^2`` parses as ``(-t)^2``.  Numbers are decimal literals with
an optional exponent; there is no "inf" literal.

Evaluation returns the value together with its exact first derivative via
dual-number arithmetic; no second derivatives are ever needed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExprSyntaxError, NonFinite, UnknownFunction

__all__ = [
    "Expr", "Const", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Func",
    "Dual", "FUNCTIONS", "parse", "to_string", "eval_dual", "eval_many",
    "is_constant",
]

FUNCTIONS = ("exp", "ln", "sqrt", "sinh", "cosh", "tanh", "sin", "cos")


class Expr:
    """Base class of AST nodes. Nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


@dataclass(frozen=True)
class Dual:
    """Value/derivative pair: arithmetic on these implements the chain rule."""

    value: float
    deriv: float


# --- tokenizer ---------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _byte_offset(text: str, char_pos: int) -> int:
    # offsets are reported in bytes of the UTF-8 encoding
    return len(text[:char_pos].encode("utf-8"))


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.index = 0

    def _scan(self):
        text = self.text
        i = 0
        n = len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c in "+-*/^()":
                self.tokens.append((c, c, i))
                i += 1
                continue
            m = _NUMBER_RE.match(text, i)
            if m:
                self.tokens.append(("number", m.group(), i))
                i = m.end()
                continue
            m = _IDENT_RE.match(text, i)
            if m:
                self.tokens.append(("ident", m.group(), i))
                i = m.end()
                continue
            raise ExprSyntaxError(
                f"unexpected character {c!r}", _byte_offset(text, i),
                expected=("number", "ident", "operator", "(", ")"))
        self.tokens.append(("end", "", n))

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        if tok[0] != "end":
            self.index += 1
        return tok


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _Tokenizer(text)

    def _fail(self, expected):
        kind, value, pos = self.toks.peek()
        what = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(
            f"unexpected {what}, expected one of {sorted(expected)}",
            _byte_offset(self.text, pos), expected=expected)

    def _expect(self, kind):
        tok = self.toks.peek()
        if tok[0] != kind:
            self._fail({kind})
        return self.toks.advance()

    def parse(self) -> Expr:
        node = self.expr()
        if self.toks.peek()[0] != "end":
            self._fail({"+", "-", "*", "/", "^", "end"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.toks.peek()[0] in ("+", "-"):
            op = self.toks.advance()[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.toks.peek()[0] in ("*", "/"):
            op = self.toks.advance()[0]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expr:
        base = self.unary()
        if self.toks.peek()[0] == "^":
            self.toks.advance()
            exponent = self.factor()  # right-associative
            return Pow(base, exponent)
        return base

    def unary(self) -> Expr:
        if self.toks.peek()[0] == "-":
            self.toks.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        kind, value, pos = self.toks.peek()
        if kind == "number":
            self.toks.advance()
            return Const(float(value))
        if kind == "(":
            self.toks.advance()
            node = self.expr()
            self._expect(")")
            return node
        if kind == "ident":
            self.toks.advance()
            if value == "t" and self.toks.peek()[0] != "(":
                return Var()
            if self.toks.peek()[0] != "(":
                self._fail({"("})
            if value not in FUNCTIONS:
                raise UnknownFunction(value, _byte_offset(self.text, pos))
            self.toks.advance()
            arg = self.expr()
            self._expect(")")
            return Func(value, arg)
        self._fail({"number", "t", "ident", "(", "-"})


def parse(text: str) -> Expr:
    """Parse expression text into an AST.

    Raises ExprSyntaxError (with byte offset and expected-token set) on
    malformed input and UnknownFunction for an identifier outside the
    supported function set.
    """
    return _Parser(text).parse()


# --- printer ------------------------------------------------------------------


def to_string(e: Expr) -> str:
    """Canonical fully-parenthesized rendering; reparsing it reproduces the
    same tree."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return f"(-{to_string(e.arg)})"
    if isinstance(e, Add):
        return f"({to_string(e.left)} + {to_string(e.right)})"
    if isinstance(e, Sub):
        return f"({to_string(e.left)} - {to_string(e.right)})"
    if isinstance(e, Mul):
        return f"({to_string(e.left)} * {to_string(e.right)})"
    if isinstance(e, Div):
        return f"({to_string(e.left)} / {to_string(e.right)})"
    if isinstance(e, Pow):
        return f"({to_string(e.base)} ^ {to_string(e.exponent)})"
    if isinstance(e, Func):
        return f"{e.name}({to_string(e.arg)})"
    raise TypeError(f"not an Expr node: {e!r}")


def is_constant(e: Expr) -> bool:
    """True when no Var occurs in the tree."""
    if isinstance(e, (Const,)):
        return True
    if isinstance(e, Var):
        return False
    if isinstance(e, Neg):
        return is_constant(e.arg)
    if isinstance(e, Func):
        return is_constant(e.arg)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return is_constant(e.left) and is_constant(e.right)
    if isinstance(e, Pow):
        return is_constant(e.base) and is_constant(e.exponent)
    raise TypeError(f"not an Expr node: {e!r}")


# --- evaluation ----------------------------------------------------------------

_LN2_53 = 2.0 ** 53  # exponents beyond this cannot be exact integers


def _eval(e: Expr, t, d):
    """Recursive dual evaluation; t and d are ndarrays of equal shape."""
    if isinstance(e, Const):
        return np.full_like(t, e.value), np.zeros_like(t)
    if isinstance(e, Var):
        return t.copy(), d.copy()
    if isinstance(e, Neg):
        v, dv = _eval(e.arg, t, d)
        return -v, -dv
    if isinstance(e, Add):
        va, da = _eval(e.left, t, d)
        vb, db = _eval(e.right, t, d)
        return va + vb, da + db
    if isinstance(e, Sub):
        va, da = _eval(e.left, t, d)
        vb, db = _eval(e.right, t, d)
        return va - vb, da - db
    if isinstance(e, Mul):
        va, da = _eval(e.left, t, d)
        vb, db = _eval(e.right, t, d)
        return va * vb, da * vb + va * db
    if isinstance(e, Div):
        va, da = _eval(e.left, t, d)
        vb, db = _eval(e.right, t, d)
        if np.any(vb == 0.0):
            raise DomainError("division by zero")
        return va / vb, (da * vb - va * db) / (vb * vb)
    if isinstance(e, Pow):
        return _eval_pow(e, t, d)
    if isinstance(e, Func):
        v, dv = _eval(e.arg, t, d)
        if e.name == "exp":
            w = np.exp(v)
            return w, w * dv
        if e.name == "ln":
            if np.any(v <= 0.0):
                raise DomainError("ln of non-positive value")
            return np.log(v), dv / v
        if e.name == "sqrt":
            if np.any(v < 0.0):
                raise DomainError("sqrt of negative value")
            w = np.sqrt(v)
            return w, dv / (2.0 * w)
        if e.name == "sinh":
            return np.sinh(v), np.cosh(v) * dv
        if e.name == "cosh":
            return np.cosh(v), np.sinh(v) * dv
        if e.name == "tanh":
            w = np.tanh(v)
            return w, (1.0 - w * w) * dv
        if e.name == "sin":
            return np.sin(v), np.cos(v) * dv
        if e.name == "cos":
            return np.cos(v), -np.sin(v) * dv
        raise UnknownFunction(e.name, 0)
    raise TypeError(f"not an Expr node: {e!r}")


def _eval_pow(e: Pow, t, d):
    u, du = _eval(e.base, t, d)
    if is_constant(e.exponent):
        pv, _ = _eval(e.exponent, np.zeros(1), np.zeros(1))
        p = float(pv[0])
        if p == np.floor(p) and abs(p) < _LN2_53:
            # integer exponent: valid for any base sign
            if p < 0 and np.any(u == 0.0):
                raise DomainError("zero base with negative exponent")
            v = u ** p
            if p == 0.0:
                return v, np.zeros_like(u)
            return v, p * u ** (p - 1.0) * du
        if np.any(u < 0.0):
            raise DomainError("fractional power of negative base")
        if np.any(u == 0.0) and p <= 1.0:
            raise DomainError(
                "fractional power at zero base has unbounded derivative")
        v = u ** p
        return v, p * u ** (p - 1.0) * du
    # variable exponent: base must be strictly positive
    if np.any(u <= 0.0):
        raise DomainError("variable exponent requires positive base")
    pv, dp = _eval(e.exponent, t, d)
    v = u ** pv
    return v, v * (dp * np.log(u) + pv * du / u)


def eval_many(e: Expr, ts) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized evaluation: returns (values, derivatives) for an array of
    sample points.  Raises DomainError/NonFinite exactly like eval_dual."""
    t = np.asarray(ts, dtype=float)
    with np.errstate(all="ignore"):
        v, dv = _eval(e, t, np.ones_like(t))
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(dv))):
        raise NonFinite("expression evaluation overflowed or produced NaN")
    return v, dv


def eval_dual(e: Expr, t: float) -> Dual:
    """Evaluate e at scalar t, returning (a(t), a'(t)) as a Dual.

    The derivative agrees with the symbolic derivative of the tree.  Raises
    DomainError when t leaves the domain of a sub-expression and NonFinite
    on overflow/NaN; never silently returns a non-finite number.
    """
    v, dv = eval_many(e, np.asarray([float(t)]))
    return Dual(float(v[0]), float(dv[0]))
