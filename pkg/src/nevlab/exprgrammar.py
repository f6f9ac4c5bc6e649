"""Tiny expression grammar for configs and the command line.

Two contexts share one tokenizer and parser core:

  * function/curve context: ``z``, ``i``, rational literals, ``exp(...)``
    with polynomial argument, ``+ - * / ^``; results are entire
    expressions, meromorphic fractions, or projective component lists
    like ``[1 : exp(z) : exp(2*z)]``.
  * divisor context: ``w0 .. w<n>``, ``i``, rational literals,
    ``+ - * ^`` and division by constants; results are homogeneous
    polynomials with Gaussian-rational coefficients.

Every error carries the character position it was raised at, so a
config file mistake points at the offending column instead of a stack
trace. All literal arithmetic is exact: integers and decimal literals
go through Fraction, never float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .divisor import DivisorError, HomogeneousPoly
from .gaussian import GaussianRational, qi
from .holo import HoloExpr, MeromorphicFn, ProjectiveCurve

__all__ = [
    "ExprParseError",
    "parse_entire",
    "parse_meromorphic",
    "parse_curve",
    "parse_poly",
]


class ExprParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"parse error at position {position}: {message}")
        self.position = position


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | end
    text: str
    pos: int


_OPS = set("+-*/^()[]:,{}")


def _tokenize(text: str) -> List[_Token]:
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            seen_dot = c == "."
            while j < n and (text[j].isdigit() or
                             (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            out.append(_Token("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("name", text[i:j], i))
            i = j
            continue
        if c in _OPS:
            out.append(_Token("op", c, i))
            i += 1
            continue
        raise ExprParseError(f"unexpected character {c!r}", i)
    out.append(_Token("end", "", n))
    return out


# -- rational pairs over the entire-function ring -------------------------------


class _Frac:
    """num/den with HoloExpr entries; den is kept nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: HoloExpr, den: Optional[HoloExpr] = None):
        self.num = num
        self.den = HoloExpr.constant(1) if den is None else den

    def __add__(self, o: "_Frac") -> "_Frac":
        return _Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o: "_Frac") -> "_Frac":
        return _Frac(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o: "_Frac") -> "_Frac":
        return _Frac(self.num * o.num, self.den * o.den)

    def __neg__(self) -> "_Frac":
        return _Frac(-self.num, self.den)

    def divide(self, o: "_Frac", pos: int) -> "_Frac":
        if o.num.is_zero():
            raise ExprParseError("division by zero", pos)
        return _Frac(self.num * o.den, self.den * o.num)

    def power(self, k: int) -> "_Frac":
        return _Frac(self.num ** k, self.den ** k)

    def constant_den(self) -> Optional[object]:
        """The denominator as a scalar, if it is one."""
        if self.den.is_polynomial():
            p = self.den.polynomial_part()
            if p.degree <= 0:
                return p.constant_value()
        return None


class _Parser:
    """Shared recursive descent; mode is 'fn' or 'poly'."""

    def __init__(self, text: str, mode: str, n_vars: int = 0):
        self.text = text
        self.mode = mode
        self.n_vars = n_vars
        self.toks = _tokenize(text)
        self.i = 0

    # token plumbing
    def peek(self) -> _Token:
        return self.toks[self.i]

    def next(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.peek()
        if t.kind == "op" and t.text == text:
            return self.next()
        got = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprParseError(f"expected {text!r}, found {got}", t.pos)

    def done(self):
        t = self.peek()
        if t.kind != "end":
            raise ExprParseError(f"unexpected trailing {t.text!r}", t.pos)

    # grammar
    def expr(self):
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.next()
            v = self.expr_nosign()
            return -v if t.text == "-" else v
        return self.expr_nosign()

    def expr_nosign(self):
        v = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.next()
                rhs = self.term()
                v = v + rhs if t.text == "+" else v - rhs
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.next()
                v = v * self.factor()
            elif t.kind == "op" and t.text == "/":
                self.next()
                v = self._divide(v, self.factor(), t.pos)
            else:
                return v

    def factor(self):
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.next()
            v = self.factor()
            return -v if t.text == "-" else v
        v = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            e = self.next()
            if e.kind != "num" or "." in e.text:
                raise ExprParseError("exponent must be a nonnegative integer",
                                     e.pos)
            v = self._power(v, int(e.text))
        return v

    def atom(self):
        t = self.next()
        if t.kind == "num":
            return self._number(Fraction(t.text))
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "name":
            return self._name(t)
        if t.kind == "end":
            raise ExprParseError("unexpected end of input", t.pos)
        raise ExprParseError(f"unexpected {t.text!r}", t.pos)

    # mode hooks
    def _number(self, q: Fraction):
        if self.mode == "fn":
            return _Frac(HoloExpr.constant(q))
        return _PolyBox({(0,) * self.n_vars: qi(q)})

    def _name(self, t: _Token):
        if t.text == "i":
            if self.mode == "fn":
                return _Frac(HoloExpr.constant(qi(0, 1)))
            return _PolyBox({(0,) * self.n_vars: qi(0, 1)})
        if self.mode == "fn":
            if t.text == "z":
                return _Frac(HoloExpr.var())
            if t.text == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return self._exp(arg, t.pos)
            if t.text.startswith("w"):
                raise ExprParseError(
                    "projective variables do not belong in a function "
                    "expression", t.pos)
            raise ExprParseError(f"unknown name {t.text!r}", t.pos)
        # poly mode
        if t.text.startswith("w") and t.text[1:].isdigit():
            k = int(t.text[1:])
            if k >= self.n_vars:
                raise ExprParseError(
                    f"variable {t.text} out of range (have w0..w{self.n_vars - 1})",
                    t.pos)
            e = [0] * self.n_vars
            e[k] = 1
            return _PolyBox({tuple(e): qi(1)})
        if t.text in ("z", "exp"):
            raise ExprParseError(
                f"{t.text!r} does not belong in a divisor polynomial", t.pos)
        raise ExprParseError(f"unknown name {t.text!r}", t.pos)

    def _exp(self, arg: "_Frac", pos: int) -> "_Frac":
        c = arg.constant_den()
        if c is None:
            raise ExprParseError(
                "exp takes a polynomial argument (no division by "
                "nonconstant expressions)", pos)
        scaled = HoloExpr.constant(_invert(c, pos)) * arg.num
        try:
            return _Frac(HoloExpr.exp_of(scaled))
        except ValueError:
            raise ExprParseError("exp takes a polynomial argument", pos)

    def _divide(self, a, b, pos: int):
        if self.mode == "fn":
            return a.divide(b, pos)
        const = b.constant_or_none()
        if const is None:
            raise ExprParseError(
                "polynomials may only be divided by constants", pos)
        if const.is_zero():
            raise ExprParseError("division by zero", pos)
        inv = qi(1) / const
        return _PolyBox({e: c * inv for e, c in a.items()})

    def _power(self, v, k: int):
        if self.mode == "fn":
            return v.power(k)
        out = _PolyBox({(0,) * self.n_vars: qi(1)})
        for _ in range(k):
            out = out * v
        return out


def _invert(c, pos: int):
    if isinstance(c, GaussianRational):
        if c.is_zero():
            raise ExprParseError("division by zero", pos)
        return qi(1) / c
    if c == 0:
        raise ExprParseError("division by zero", pos)
    return 1.0 / complex(c)


def _poly_mul(a: Dict, b: Dict) -> Dict:
    out: Dict[Tuple[int, ...], GaussianRational] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            prod = ca * cb
            out[e] = out[e] + prod if e in out else prod
    return out


def _poly_add(a: Dict, b: Dict) -> Dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out[e] + c if e in out else c
    return out


# poly-mode values flow through the same parser core as _Frac does, so the
# exponent dicts get wrapped with matching operators
class _PolyBox(dict):
    def __add__(self, o):
        return _PolyBox(_poly_add(self, o))

    def __sub__(self, o):
        return _PolyBox(_poly_add(self, {e: -c for e, c in o.items()}))

    def __mul__(self, o):
        return _PolyBox(_poly_mul(self, o))

    def __neg__(self):
        return _PolyBox({e: -c for e, c in self.items()})

    def constant_or_none(self):
        nz = {e: c for e, c in self.items() if not c.is_zero()}
        if not nz:
            return qi(0)
        if len(nz) == 1:
            (e, c), = nz.items()
            if not any(e):
                return c
        return None


# -- public entry points ---------------------------------------------------------


def parse_entire(text: str) -> HoloExpr:
    """An entire function of z; division only by constants."""
    p = _Parser(text, "fn")
    v = p.expr()
    p.done()
    c = v.constant_den()
    if c is None:
        raise ExprParseError(
            "expression is not entire (nonconstant denominator)", len(text))
    return HoloExpr.constant(_invert(c, len(text))) * v.num


def parse_meromorphic(text: str) -> MeromorphicFn:
    """A ratio of entire functions of z."""
    p = _Parser(text, "fn")
    v = p.expr()
    p.done()
    if v.num.is_zero():
        raise ExprParseError("the zero function is not meromorphic here",
                             len(text))
    return MeromorphicFn(v.num, v.den)


def parse_curve(text: str) -> ProjectiveCurve:
    """A projective component list, ``[f0 : f1 : ...]`` or comma separated.

    Components must be entire; a constant denominator is folded into the
    coefficients, anything else is rejected (clear denominators by hand,
    projective coordinates make that lossless).
    """
    p = _Parser(text, "fn")
    p.expect("[")
    comps = []
    while True:
        start = p.peek().pos
        v = p.expr()
        c = v.constant_den()
        if c is None:
            raise ExprParseError(
                "curve components must be entire; multiply the "
                "denominator through the other components", start)
        comps.append(HoloExpr.constant(_invert(c, start)) * v.num)
        t = p.peek()
        if t.kind == "op" and t.text in (":", ","):
            p.next()
            continue
        p.expect("]")
        break
    p.done()
    if len(comps) < 2:
        raise ExprParseError("a projective curve needs at least 2 components",
                             len(text))
    return ProjectiveCurve(comps)


def parse_poly(text: str, n_vars: int) -> HomogeneousPoly:
    """A homogeneous polynomial in w0..w<n_vars-1>, exact coefficients."""
    if n_vars < 2:
        raise ValueError("need at least 2 projective variables")
    p = _Parser(text, "poly", n_vars)
    v = p.expr()
    p.done()
    try:
        return HomogeneousPoly(dict(v), n_vars)
    except DivisorError as exc:
        raise ExprParseError(str(exc), 0)
