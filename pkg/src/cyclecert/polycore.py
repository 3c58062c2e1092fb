"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in the perturbation parameters is stored as a dict mapping
exponent tuples (one entry per variable) to nonzero ``Fraction``
coefficients.  The zero polynomial is the empty dict.  Everything here is
exact: no floats enter unless the caller evaluates at a float point.

Two quantities drive the rest of the package and are defined here once:

* ``norm(p)``: the sum of the absolute values of the coefficients.  It is
  subadditive and submultiplicative, which is what every growth estimate
  downstream relies on.
* the monomial order: total degree first, ties broken lexicographically on
  the exponent tuple read left to right (larger leading exponent wins).
  This is a total order compatible with addition of exponents.  The choice
  of tie-break is a documented convention; standard bases computed by
  ``idealkit`` (and every constant derived from them) depend on it.

All values are immutable after construction and all operations are pure,
so instances can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import DomainError, InputError

Exponent = tuple  # tuple[int, ...]
Scalar = Union[int, Fraction]

#: Degree assigned to the zero polynomial.  An explicit minus-infinity
#: sentinel so that degree bounds like ``degree(p) <= k`` never trip over
#: a fake value such as -1.
NEG_INF = float("-inf")


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and exact strings like '3/4' to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise InputError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


@dataclass(frozen=True)
class OrderSpec:
    """Monomial order: graded, with a deterministic lexicographic tie-break.

    ``key(alpha)`` returns a sort key; comparing keys with Python's tuple
    ordering realises the order.  Both compatibility axioms hold:
    ``alpha <= alpha + beta`` and translation invariance of comparisons.
    """

    kind: str = "graded"
    tie_break: str = "lex"

    def key(self, alpha: Exponent):
        return (sum(alpha), alpha)


#: Default order used throughout the package.
GRADED_LEX = OrderSpec()


def order_compare(alpha: Exponent, beta: Exponent, spec: OrderSpec = GRADED_LEX) -> int:
    """Compare two exponent vectors; returns -1, 0 or 1.

    Raises InputError when the vectors have different lengths.
    """
    if len(alpha) != len(beta):
        raise InputError(f"exponent length mismatch: {len(alpha)} vs {len(beta)}")
    ka, kb = spec.key(alpha), spec.key(beta)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


class ParamPoly:
    """Sparse exact polynomial in a fixed tuple of named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, Scalar] | None = None):
        self.vars = tuple(vars)
        clean: dict = {}
        if terms:
            width = len(self.vars)
            for exp, coeff in terms.items():
                c = as_fraction(coeff)
                if c == 0:
                    continue
                exp = tuple(exp)
                if len(exp) != width:
                    raise InputError(
                        f"exponent {exp} has length {len(exp)}, expected {width}"
                    )
                if any(e < 0 for e in exp):
                    raise InputError(f"negative exponent in {exp}")
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if clean[exp] == 0:
                    del clean[exp]
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "ParamPoly":
        return cls(vars)

    @classmethod
    def constant(cls, vars: Sequence[str], c: Scalar) -> "ParamPoly":
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): as_fraction(c)})

    @classmethod
    def one(cls, vars: Sequence[str]) -> "ParamPoly":
        return cls.constant(vars, 1)

    @classmethod
    def variable(cls, vars: Sequence[str], name: str) -> "ParamPoly":
        vars = tuple(vars)
        if name not in vars:
            raise InputError(f"unknown variable {name!r}; have {vars}")
        exp = [0] * len(vars)
        exp[vars.index(name)] = 1
        return cls(vars, {tuple(exp): Fraction(1)})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def norm(self) -> Fraction:
        """Sum of absolute values of the coefficients (exact)."""
        return sum((abs(c) for c in self.terms.values()), Fraction(0))

    def degree(self):
        """Total degree; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    # -- arithmetic ----------------------------------------------------

    def _check_compatible(self, other: "ParamPoly") -> None:
        if self.vars != other.vars:
            raise InputError(
                f"mismatched variable sets: {self.vars} vs {other.vars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.constant(self.vars, other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return self._raw(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.constant(self.vars, other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if c == 0:
                return ParamPoly.zero(self.vars)
            return self._raw(self.vars, {e: k * c for e, k in self.terms.items()})
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return pp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InputError("negative power of a polynomial")
        result = ParamPoly.one(self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    __hash__ = None  # mutable dict inside; value equality only

    @classmethod
    def _raw(cls, vars, terms: dict) -> "ParamPoly":
        """Internal: wrap an already-canonical term dict without rescanning."""
        p = cls.__new__(cls)
        p.vars = tuple(vars)
        p.terms = terms
        return p

    # -- structure -----------------------------------------------------

    def sorted_terms(self, spec: OrderSpec = GRADED_LEX, reverse: bool = True):
        """Terms as (exponent, coefficient) pairs, order-maximal first."""
        return sorted(self.terms.items(), key=lambda t: spec.key(t[0]), reverse=reverse)

    def content(self) -> Fraction:
        """Positive gcd of the coefficients; 0 for the zero polynomial."""
        if not self.terms:
            return Fraction(0)
        from math import gcd

        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> tuple["ParamPoly", Fraction]:
        """Return (p / content, content).  Zero maps to (0, 0)."""
        c = self.content()
        if c == 0:
            return self, c
        return self * (1 / c), c

    def with_vars(self, new_vars: Sequence[str]) -> "ParamPoly":
        """Re-express over a variable tuple that contains all current vars."""
        new_vars = tuple(new_vars)
        pos = []
        for v in self.vars:
            if v not in new_vars:
                raise InputError(f"variable {v!r} missing from {new_vars}")
            pos.append(new_vars.index(v))
        terms = {}
        width = len(new_vars)
        for exp, c in self.terms.items():
            ne = [0] * width
            for p, e in zip(pos, exp):
                ne[p] = e
            terms[tuple(ne)] = c
        return self._raw(new_vars, terms)

    def drop_vars(self, names: Iterable[str]) -> "ParamPoly":
        """Remove variables that do not occur in any term."""
        names = set(names)
        keep = [i for i, v in enumerate(self.vars) if v not in names]
        for exp in self.terms:
            for i, v in enumerate(self.vars):
                if v in names and exp[i]:
                    raise InputError(f"variable {v!r} still occurs; cannot drop")
        new_vars = tuple(self.vars[i] for i in keep)
        terms = {tuple(exp[i] for i in keep): c for exp, c in self.terms.items()}
        return self._raw(new_vars, terms)

    def split_by_var(self, name: str) -> dict:
        """Group by the power of one variable.

        Returns {power: polynomial in the remaining variables}.
        """
        if name not in self.vars:
            raise InputError(f"unknown variable {name!r}")
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1 :]
        slices: dict = {}
        for exp, c in self.terms.items():
            p = exp[i]
            sub = exp[:i] + exp[i + 1 :]
            slices.setdefault(p, {})[sub] = c
        return {p: ParamPoly._raw(rest, t) for p, t in slices.items()}

    # -- evaluation / substitution --------------------------------------

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at a point; exact when all values are Fractions/ints.

        Values may be floats, in which case the result is a float.
        """
        vals = []
        for v in self.vars:
            if v not in point:
                raise InputError(f"no value supplied for variable {v!r}")
            vals.append(point[v])
        total = None
        for exp, c in self.terms.items():
            term = c if all(isinstance(x, (int, Fraction)) for x in vals) else float(c)
            for x, e in zip(vals, exp):
                if e:
                    term = term * x**e
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if all(isinstance(x, (int, Fraction)) for x in vals) else 0.0
        return total

    def substitute(self, assign: Mapping[str, "ParamPoly"]) -> "ParamPoly":
        """Compose with polynomial expressions for each variable.

        Every variable of self must be assigned; all assigned polynomials
        must share one variable tuple, which becomes the result's.
        """
        if not self.vars:
            raise InputError("substitute on a constant polynomial is ambiguous")
        images = []
        target = None
        for v in self.vars:
            if v not in assign:
                raise InputError(f"no substitution supplied for {v!r}")
            img = assign[v]
            if target is None:
                target = img.vars
            elif img.vars != target:
                raise InputError("substitution images use mismatched variables")
            images.append(img)
        out = ParamPoly.zero(target)
        power_cache: list[dict[int, ParamPoly]] = [
            {0: ParamPoly.one(target), 1: img} for img in images
        ]

        def power(i: int, e: int) -> ParamPoly:
            cache = power_cache[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * cache[1]
            return cache[e]

        for exp, c in self.terms.items():
            term = ParamPoly.constant(target, c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    # -- rendering -------------------------------------------------------

    def render(self, spec: OrderSpec = GRADED_LEX) -> str:
        """Deterministic human-readable form, order-maximal term first."""
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms(spec):
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"ParamPoly({self.render()})"


def mul_terms_into(out: dict, a: dict, b: dict, scale: Fraction | None = None) -> None:
    """Accumulate the term-dict product a*b (optionally scaled) into out.

    Internal fast path shared by the symbolic stack; ``out`` maps exponent
    tuples to Fractions and may end up holding explicit zeros, which the
    caller must prune (see prune_zeros).
    """
    if not a or not b:
        return
    if len(a) > len(b):
        a, b = b, a
    get = out.get
    for ea, ca in a.items():
        if scale is not None:
            ca = ca * scale
        for eb, cb in b.items():
            exp = tuple(map(int.__add__, ea, eb))
            s = get(exp)
            out[exp] = ca * cb if s is None else s + ca * cb


def add_terms_into(out: dict, a: dict, scale: Fraction | None = None) -> None:
    """Accumulate the term dict a (optionally scaled) into out."""
    get = out.get
    for exp, c in a.items():
        if scale is not None:
            c = c * scale
        s = get(exp)
        out[exp] = c if s is None else s + c


def prune_zeros(terms: dict) -> dict:
    """Drop explicit zero coefficients left by in-place accumulation."""
    dead = [e for e, c in terms.items() if not c]
    for e in dead:
        del terms[e]
    return terms


def pp_mul(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    """Exact product.  norm(p*q) <= norm(p)*norm(q); degrees add."""
    p._check_compatible(q)
    if not p.terms or not q.terms:
        return ParamPoly.zero(p.vars)
    out: dict = {}
    mul_terms_into(out, p.terms, q.terms)
    return ParamPoly._raw(p.vars, prune_zeros(out))


def privileged_exponent(
    p: ParamPoly, spec: OrderSpec = GRADED_LEX
) -> tuple[Exponent, Fraction]:
    """Order-maximal exponent with its coefficient (the initial monomial).

    Raises DomainError on the zero polynomial.
    """
    if not p.terms:
        raise DomainError("zero polynomial has no privileged exponent")
    exp = max(p.terms, key=spec.key)
    return exp, p.terms[exp]
