"""Bivariate polynomials in the plane coordinates (x, y).

Coefficients are ParamPoly values over a shared variable tuple, so the
same type serves numeric vector fields (empty variable tuple, plain
rational coefficients) and families with symbolic perturbation
coefficients.  Used by the rotation action on field parameters and by the
differential-form side of the successive-derivatives scheme.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .errors import InputError
from .polycore import ParamPoly, as_fraction

XYKey = tuple  # (i, j): x^i * y^j


class XYPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[XYKey, ParamPoly] | None = None):
        self.vars = tuple(vars)
        clean: dict = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise InputError(f"negative exponent in x^{i} y^{j}")
                if isinstance(c, (int, Fraction)):
                    c = ParamPoly.constant(self.vars, c)
                if c.vars != self.vars:
                    raise InputError("coefficient variables do not match XYPoly")
                if c.is_zero():
                    continue
                k = (i, j)
                if k in clean:
                    s = clean[k] + c
                    if s.is_zero():
                        del clean[k]
                    else:
                        clean[k] = s
                else:
                    clean[k] = c
        self.terms = clean

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "XYPoly":
        return cls(vars)

    @classmethod
    def monomial(cls, vars: Sequence[str], i: int, j: int, c=1) -> "XYPoly":
        vars = tuple(vars)
        coeff = c if isinstance(c, ParamPoly) else ParamPoly.constant(vars, as_fraction(c))
        return cls(vars, {(i, j): coeff})

    @classmethod
    def _raw(cls, vars, terms: dict) -> "XYPoly":
        p = cls.__new__(cls)
        p.vars = tuple(vars)
        p.terms = terms
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree in (x, y); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def _check(self, other: "XYPoly") -> None:
        if self.vars != other.vars:
            raise InputError("mismatched coefficient variables between XYPolys")

    def __add__(self, other):
        if not isinstance(other, XYPoly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k)
            if s is None:
                terms[k] = c
            else:
                s = s + c
                if s.is_zero():
                    del terms[k]
                else:
                    terms[k] = s
        return self._raw(self.vars, terms)

    def __neg__(self):
        return self._raw(self.vars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, XYPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if c == 0:
                return XYPoly.zero(self.vars)
            return self._raw(self.vars, {k: v * c for k, v in self.terms.items()})
        if isinstance(other, ParamPoly):
            out = {}
            for k, v in self.terms.items():
                p = v * other
                if not p.is_zero():
                    out[k] = p
            return self._raw(self.vars, out)
        if not isinstance(other, XYPoly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                add = c1 * c2
                s = out.get(k)
                if s is None:
                    out[k] = add
                else:
                    s = s + add
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
        return self._raw(self.vars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, XYPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    __hash__ = None

    def diff_x(self) -> "XYPoly":
        out = {}
        for (i, j), c in self.terms.items():
            if i:
                out[(i - 1, j)] = c * Fraction(i)
        return self._raw(self.vars, out)

    def diff_y(self) -> "XYPoly":
        out = {}
        for (i, j), c in self.terms.items():
            if j:
                out[(i, j - 1)] = c * Fraction(j)
        return self._raw(self.vars, out)

    def evaluate(self, x, y, point: Mapping[str, object] | None = None):
        """Numeric or exact evaluation at (x, y) and a parameter point."""
        point = point or {}
        total = None
        for (i, j), c in self.terms.items():
            cv = c.evaluate(point) if self.vars else c.constant_term()
            term = cv * x**i * y**j
            total = term if total is None else total + term
        if total is None:
            return 0 * x
        return total

    def compose_rotation(self, c: Fraction, s: Fraction) -> "XYPoly":
        """Substitute x -> c*x - s*y, y -> s*x + c*y (exact rational rotation)."""
        vars = self.vars
        out = XYPoly.zero(vars)
        for (i, j), coeff in self.terms.items():
            acc: dict = {}
            # (c x - s y)^i expanded times (s x + c y)^j expanded
            for p in range(i + 1):
                f1 = comb(i, p) * c**p * (-s) ** (i - p)
                for q in range(j + 1):
                    f2 = comb(j, q) * s**q * c ** (j - q)
                    k = (p + q, (i - p) + (j - q))
                    acc[k] = acc.get(k, Fraction(0)) + f1 * f2
            piece = XYPoly._raw(
                vars,
                {
                    k: coeff * f
                    for k, f in acc.items()
                    if f and not (coeff * f).is_zero()
                },
            )
            out = out + piece
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda k: (k[0] + k[1], k), reverse=True):
            c = self.terms[(i, j)]
            factors = []
            if i == 1:
                factors.append("x")
            elif i > 1:
                factors.append(f"x^{i}")
            if j == 1:
                factors.append("y")
            elif j > 1:
                factors.append(f"y^{j}")
            body = "*".join(factors)
            cs = c.render()
            if len(c) > 1:
                cs = f"({cs})"
            if not body:
                parts.append(cs)
            elif cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append(f"-{body}")
            else:
                parts.append(f"{cs}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"XYPoly({self.render()})"
