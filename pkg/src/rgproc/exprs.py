"""Tiny arithmetic expression evaluator for command-line flag values.

Flags whose natural values are functions of n (step budgets, window
thresholds) accept strings like "2*n", "ln(n)^2" or "lnlnln(n)"; this
evaluates them once n is known.  Supported: + - * / ^ (power), unary minus,
parentheses, numbers, the variables handed in, and the functions ln, lnln,
lnlnln, lnlnlnln, log2, sqrt, exp, ceil, floor.
"""

import math

_FUNCS = {
    "ln": math.log,
    "lnln": lambda x: math.log(math.log(x)),
    "lnlnln": lambda x: math.log(math.log(math.log(x))),
    "lnlnlnln": lambda x: math.log(math.log(math.log(math.log(x)))),
    "log2": math.log2,
    "sqrt": math.sqrt,
    "exp": math.exp,
    "ceil": math.ceil,
    "floor": math.floor,
}


class ExprError(ValueError):
    pass


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*/^()":
            tokens.append(c)
            i += 1
        elif c.isdigit() or c == ".":
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] in ".eE"
                                     or (text[j] in "+-" and text[j - 1] in "eE")):
                j += 1
            try:
                tokens.append(float(text[i:j]))
            except ValueError:
                raise ExprError(f"bad number {text[i:j]!r}") from None
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ExprError(f"unexpected character {c!r} in {text!r}")
    return tokens


class _Parser:
    def __init__(self, tokens, variables):
        self.toks = tokens
        self.pos = 0
        self.vars = variables

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, tok):
        if self.take() != tok:
            raise ExprError(f"expected {tok!r}")

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                v += self.term()
            else:
                v -= self.term()
        return v

    def term(self):
        v = self.factor()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                v *= self.factor()
            else:
                d = self.factor()
                if d == 0:
                    raise ExprError("division by zero")
                v /= d
        return v

    def factor(self):
        v = self.unary()
        if self.peek() == "^":
            self.take()
            v = v ** self.factor()  # right-associative
        return v

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        return self.primary()

    def primary(self):
        t = self.take()
        if isinstance(t, float):
            return t
        if t == "(":
            v = self.expr()
            self.expect(")")
            return v
        if isinstance(t, str) and t not in "+-*/^()":
            if self.peek() == "(":
                fn = _FUNCS.get(t)
                if fn is None:
                    raise ExprError(f"unknown function {t!r}")
                self.take()
                arg = self.expr()
                self.expect(")")
                try:
                    return float(fn(arg))
                except ValueError as e:
                    raise ExprError(f"{t}({arg}): {e}") from None
            if t in self.vars:
                return float(self.vars[t])
            raise ExprError(f"unknown name {t!r}")
        raise ExprError(f"unexpected token {t!r}")


def evaluate(text: str, **variables) -> float:
    """Evaluate an expression string with the given variable bindings."""
    tokens = _tokenize(text)
    if not tokens:
        raise ExprError("empty expression")
    p = _Parser(tokens, variables)
    v = p.expr()
    if p.peek() is not None:
        raise ExprError(f"trailing input at token {p.peek()!r}")
    return float(v)


def evaluate_int(text: str, **variables) -> int:
    """Evaluate and round up; integer-valued flags use this so formulas like
    ln(n)^2 land on the conservative side."""
    v = evaluate(text, **variables)
    if math.isnan(v) or math.isinf(v):
        raise ExprError(f"{text!r} did not evaluate to a finite number")
    return math.ceil(v - 1e-9)  # tolerate float fuzz on exact integers
