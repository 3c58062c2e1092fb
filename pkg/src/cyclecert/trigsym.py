"""Exact algebra of expressions built from theta-powers, cos and sin.

A ``TrigPoly`` is a finite sum of terms

    coeff * theta^m * cos(l*theta)   or   coeff * theta^m * sin(l*theta)

with ``ParamPoly`` coefficients, m >= 0 and harmonic index l >= 0.  The
pair (l=0, sin) is forbidden; (l=0, cos) is the pure theta-power term.
Canonical form (no duplicate keys, no zero coefficients) is maintained
eagerly by every operation.

Products are re-expressed in canonical harmonics through the
product-to-sum identities, antiderivatives are exact and vanish at 0, and
evaluation at theta = 2*pi keeps pi as a distinguished symbol: the result
is a ParamPoly over the coefficient variables extended by "pi".  Numeric
pi enters only when a caller finally evaluates such a polynomial at a
float point.

The flat parameter norm of a TrigPoly (sum of the coefficient norms over
all stored terms) is submultiplicative for products of pure trigonometric
terms, which is what the growth estimates downstream use.

Everything is immutable and pure, as in polycore.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import InputError, InternalError
from .polycore import NEG_INF, ParamPoly, Scalar, as_fraction

#: term key: (theta power m, harmonic index l, is_sin)
TrigKey = tuple  # tuple[int, int, bool]

PI_VAR = "pi"


class TrigPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[TrigKey, ParamPoly] | None = None):
        self.vars = tuple(vars)
        clean: dict = {}
        if terms:
            for key, coeff in terms.items():
                m, l, is_sin = key
                if m < 0 or l < 0:
                    raise InputError(f"negative index in trig key {key}")
                if l == 0 and is_sin:
                    raise InputError("sin with harmonic index 0 is identically zero")
                if coeff.vars != self.vars:
                    raise InputError("coefficient variables do not match TrigPoly")
                if coeff.is_zero():
                    continue
                k = (m, l, bool(is_sin))
                if k in clean:
                    s = clean[k] + coeff
                    if s.is_zero():
                        del clean[k]
                    else:
                        clean[k] = s
                else:
                    clean[k] = coeff
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "TrigPoly":
        return cls(vars)

    @classmethod
    def const(cls, vars: Sequence[str], c) -> "TrigPoly":
        vars = tuple(vars)
        if isinstance(c, ParamPoly):
            coeff = c
        else:
            coeff = ParamPoly.constant(vars, c)
        return cls(vars, {(0, 0, False): coeff})

    @classmethod
    def one(cls, vars: Sequence[str]) -> "TrigPoly":
        return cls.const(vars, 1)

    @classmethod
    def theta(cls, vars: Sequence[str], power: int = 1) -> "TrigPoly":
        return cls(vars, {(power, 0, False): ParamPoly.one(vars)})

    @classmethod
    def cosine(cls, vars: Sequence[str], l: int = 1) -> "TrigPoly":
        return cls(vars, {(0, l, False): ParamPoly.one(vars)})

    @classmethod
    def sine(cls, vars: Sequence[str], l: int = 1) -> "TrigPoly":
        return cls(vars, {(0, l, True): ParamPoly.one(vars)})

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def param_norm(self) -> Fraction:
        """Sum of coefficient norms over all stored terms (flat norm)."""
        return sum((c.norm() for c in self.terms.values()), Fraction(0))

    def param_degree(self):
        """Maximal total degree of the coefficients; NEG_INF when zero."""
        if not self.terms:
            return NEG_INF
        return max(c.degree() for c in self.terms.values())

    def max_theta_power(self) -> int:
        return max((k[0] for k in self.terms), default=0)

    def max_harmonic(self) -> int:
        return max((k[1] for k in self.terms), default=0)

    def is_pure_trig(self) -> bool:
        """True when no term carries a theta power."""
        return all(k[0] == 0 for k in self.terms)

    def mean_value(self) -> ParamPoly:
        """Average over one period, defined for pure trigonometric sums."""
        if not self.is_pure_trig():
            raise InputError("mean over a period requires a pure trigonometric sum")
        return self.terms.get((0, 0, False), ParamPoly.zero(self.vars))

    def coefficient(self, m: int, l: int, is_sin: bool) -> ParamPoly:
        return self.terms.get((m, l, bool(is_sin)), ParamPoly.zero(self.vars))

    def theta_power_coefficients(self) -> dict:
        """{m: coefficient of the pure theta^m term} for the l = 0 entries."""
        return {k[0]: c for k, c in self.terms.items() if k[1] == 0}

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "TrigPoly") -> None:
        if self.vars != other.vars:
            raise InputError("mismatched variable sets between TrigPolys")

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
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
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "TrigPoly":
        """Multiply by a scalar or a ParamPoly coefficient."""
        if isinstance(c, (int, Fraction)):
            c = as_fraction(c)
            if c == 0:
                return TrigPoly.zero(self.vars)
            return self._raw(self.vars, {k: coeff * c for k, coeff in self.terms.items()})
        if isinstance(c, ParamPoly):
            out: dict = {}
            for k, coeff in self.terms.items():
                p = coeff * c
                if not p.is_zero():
                    out[k] = p
            return self._raw(self.vars, out)
        raise InputError(f"cannot scale TrigPoly by {type(c).__name__}")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return tp_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    __hash__ = None

    @classmethod
    def _raw(cls, vars, terms: dict) -> "TrigPoly":
        t = cls.__new__(cls)
        t.vars = tuple(vars)
        t.terms = terms
        return t

    # -- calculus ---------------------------------------------------------

    def derivative(self) -> "TrigPoly":
        """Exact d/dtheta."""
        out: dict = {}

        def add(m, l, is_sin, coeff):
            if coeff.is_zero() or (l == 0 and is_sin):
                return
            k = (m, l, is_sin)
            s = out.get(k)
            if s is None:
                out[k] = coeff
            else:
                s = s + coeff
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s

        for (m, l, is_sin), c in self.terms.items():
            if m:
                add(m - 1, l, is_sin, c * Fraction(m))
            if l:
                if is_sin:
                    add(m, l, False, c * Fraction(l))
                else:
                    add(m, l, True, c * Fraction(-l))
        return self._raw(self.vars, out)

    def antiderivative(self, no_constant: bool = False) -> "TrigPoly":
        """An exact antiderivative F with F' = self.

        By default the integration constant is fixed so that F(0) = 0,
        matching integration from 0.  With ``no_constant=True`` the
        constant (theta-free, harmonic-free) term is dropped instead;
        this is the normalisation under which antiderivatives of
        rotation-covariant integrands stay covariant.
        """
        out: dict = {}

        def add(m, l, is_sin, coeff):
            if coeff.is_zero() or (l == 0 and is_sin):
                return
            k = (m, l, is_sin)
            s = out.get(k)
            if s is None:
                out[k] = coeff
            else:
                s = s + coeff
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s

        for (m, l, is_sin), c in self.terms.items():
            for (mm, ll, ss, factor) in _antideriv_term(m, l, is_sin):
                add(mm, ll, ss, c * factor)
        if no_constant:
            out.pop((0, 0, False), None)
            return self._raw(self.vars, out)
        # fix the constant so F(0) = 0: only (m=0, cos) terms survive at 0
        at_zero = ParamPoly.zero(self.vars)
        for (m, l, is_sin), coeff in out.items():
            if m == 0 and not is_sin:
                at_zero = at_zero + coeff
        if not at_zero.is_zero():
            k = (0, 0, False)
            s = out.get(k, ParamPoly.zero(self.vars)) - at_zero
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return self._raw(self.vars, out)

    # -- evaluation ---------------------------------------------------------

    def eval_two_pi(self) -> ParamPoly:
        """Exact value at theta = 2*pi as a ParamPoly over vars + ("pi",).

        sin(2*pi*l) = 0 and cos(2*pi*l) = 1 are applied exactly;
        theta^m contributes 2^m * pi^m with pi kept symbolic.
        """
        if PI_VAR in self.vars:
            raise InternalError("coefficient variables already contain 'pi'")
        ext = self.vars + (PI_VAR,)
        total = ParamPoly.zero(ext)
        for (m, l, is_sin), c in self.terms.items():
            if is_sin:
                continue
            terms = {exp + (m,): coeff * (2**m) for exp, coeff in c.terms.items()}
            total = total + ParamPoly(ext, terms)
        return total

    def eval_numeric(self, theta: float, point: Mapping[str, object] | None = None) -> float:
        """Float evaluation at a concrete angle and parameter point."""
        import math

        point = point or {}
        total = 0.0
        for (m, l, is_sin), c in self.terms.items():
            cv = float(c.evaluate(point)) if self.vars else float(c.constant_term())
            trig = math.sin(l * theta) if is_sin else math.cos(l * theta)
            total += cv * theta**m * trig
        return total

    # -- structure ------------------------------------------------------------

    def split(self):
        """Decompose as z*theta + sum_j r_j*theta^j (j >= 2) + s(theta).

        s collects the pure trigonometric part, shifted by a constant so
        that s(0) = 0.  Mixed theta^m * cos/sin terms (m >= 1, l >= 1)
        cannot be assigned and raise InternalError: their presence means
        the caller fed something outside the intended recursion images.
        """
        z = ParamPoly.zero(self.vars)
        r: dict = {}
        s_terms: dict = {}
        const = ParamPoly.zero(self.vars)
        for (m, l, is_sin), c in self.terms.items():
            if l == 0:
                if m == 0:
                    const = const + c
                elif m == 1:
                    z = z + c
                else:
                    r[m] = r.get(m, ParamPoly.zero(self.vars)) + c
            elif m == 0:
                s_terms[(0, l, is_sin)] = c
            else:
                raise InternalError(
                    f"mixed term theta^{m}*{'sin' if is_sin else 'cos'}({l}theta) "
                    "cannot be split"
                )
        # the constant belongs to s: for any v with v(0) = 0 (every
        # antiderivative image) this makes s(0) = 0 automatically, and the
        # reconstruction z*theta + sum r_j theta^j + s equals v exactly
        if not const.is_zero():
            s_terms[(0, 0, False)] = const
        s = TrigPoly._raw(self.vars, s_terms)
        return z, r, s

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (m, l, is_sin) in sorted(self.terms, key=lambda k: (k[0], k[1], k[2])):
            c = self.terms[(m, l, is_sin)]
            factors = []
            if m == 1:
                factors.append("theta")
            elif m > 1:
                factors.append(f"theta^{m}")
            if l:
                factors.append(f"{'sin' if is_sin else 'cos'}({l}theta)" if l > 1 else f"{'sin' if is_sin else 'cos'}(theta)")
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
        return f"TrigPoly({self.render()})"


def _combine(l1: int, s1: bool, l2: int, s2: bool):
    """Product-to-sum for trig(l1*theta) * trig(l2*theta).

    Returns a list of (l, is_sin, Fraction factor) with l >= 0 canonical.
    """
    half = Fraction(1, 2)
    if not s1 and not s2:  # cos*cos
        raw = [(l1 - l2, False, half), (l1 + l2, False, half)]
    elif s1 and s2:  # sin*sin
        raw = [(l1 - l2, False, half), (l1 + l2, False, -half)]
    elif s1 and not s2:  # sin(a)cos(b) = (sin(a+b)+sin(a-b))/2
        raw = [(l1 + l2, True, half), (l1 - l2, True, half)]
    else:  # cos(a)sin(b) = (sin(a+b)-sin(a-b))/2
        raw = [(l1 + l2, True, half), (l1 - l2, True, -half)]
    out = []
    for l, is_sin, f in raw:
        if l < 0:
            l = -l
            if is_sin:
                f = -f
        if l == 0 and is_sin:
            continue  # sin(0) = 0
        out.append((l, is_sin, f))
    return out


def tp_mul_into(acc: dict, S: TrigPoly, T: TrigPoly) -> None:
    """Accumulate S*T into ``acc``, a dict mapping trig keys to raw
    exponent->Fraction term dicts.  Zeros are pruned on materialisation."""
    from .polycore import add_terms_into, mul_terms_into

    for (m1, l1, s1), c1 in S.terms.items():
        for (m2, l2, s2), c2 in T.terms.items():
            prod: dict = {}
            mul_terms_into(prod, c1.terms, c2.terms)
            if not prod:
                continue
            m = m1 + m2
            for l, is_sin, f in _combine(l1, s1, l2, s2):
                tgt = acc.setdefault((m, l, is_sin), {})
                add_terms_into(tgt, prod, f)


def materialize_trig(vars, acc: dict) -> TrigPoly:
    """Turn an accumulator from tp_mul_into into a canonical TrigPoly."""
    from .polycore import prune_zeros

    terms = {}
    for key, raw in acc.items():
        prune_zeros(raw)
        if raw:
            terms[key] = ParamPoly._raw(vars, raw)
    return TrigPoly._raw(vars, terms)


def tp_mul(S: TrigPoly, T: TrigPoly) -> TrigPoly:
    """Exact product in canonical harmonics."""
    S._check(T)
    if not S.terms or not T.terms:
        return TrigPoly.zero(S.vars)
    acc: dict = {}
    tp_mul_into(acc, S, T)
    return materialize_trig(S.vars, acc)


def tp_antiderivative(T: TrigPoly) -> TrigPoly:
    return T.antiderivative()


def tp_eval_2pi(T: TrigPoly) -> ParamPoly:
    return T.eval_two_pi()


def tp_split_invariant(v: TrigPoly):
    return v.split()


def _antideriv_term(m: int, l: int, is_sin: bool):
    """Antiderivative of theta^m * trig(l*theta) as term list (no constant).

    Uses integration by parts for m >= 1.  For l = 0 the result is the
    pure power theta^(m+1)/(m+1).
    """
    if l == 0:
        return [(m + 1, 0, False, Fraction(1, m + 1))]
    if m == 0:
        if is_sin:
            return [(0, l, False, Fraction(-1, l))]
        return [(0, l, True, Fraction(1, l))]
    if is_sin:
        # int theta^m sin = -theta^m cos/l + (m/l) int theta^(m-1) cos
        out = [(m, l, False, Fraction(-1, l))]
        rest = _antideriv_term(m - 1, l, False)
        out.extend((mm, ll, ss, f * Fraction(m, l)) for mm, ll, ss, f in rest)
        return out
    # int theta^m cos = theta^m sin/l - (m/l) int theta^(m-1) sin
    out = [(m, l, True, Fraction(1, l))]
    rest = _antideriv_term(m - 1, l, True)
    out.extend((mm, ll, ss, f * Fraction(-m, l)) for mm, ll, ss, f in rest)
    return out
