"""Return-map coefficients for homogeneous polynomial perturbations of a
planar linear center.

Given the family

    xdot = -y + sum_{i+j=d} a_ij x^i y^j
    ydot =  x + sum_{i+j=d} b_ij x^i y^j

the polar radius satisfies dr/dtheta = r^d A(theta) / (1 + r^{d-1} B(theta))
with A, B trigonometric polynomials linear in the parameters.  Expanding
the solution r(theta) = r0 + sum_k v_k(theta) r0^k and matching powers of
r0 determines the v_k inductively; the return-map coefficients are
L_k = v_k(2*pi), exact polynomials in the parameters and pi.

Alongside the raw recursion this module runs the parallel recursion that
keeps only the purely trigonometric parts s_k; its period averages z_k
are rotation-invariant polynomials in the parameters and generate the
same ideal chain as the L_k.

Degree and norm growth of everything here is certified against the
explicit geometric/majorant constants; violations are reported as data,
never patched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ComputationError, InputError, InternalError
from .polycore import NEG_INF, ParamPoly, as_fraction
from .ratutil import PI_HI, PI_LO, TWO_PI_HI, pow_down, pow_up, sqrt_down, sqrt_up
from .trigsym import PI_VAR, TrigPoly
from .xypoly import XYPoly


def param_names(d: int) -> tuple:
    """Parameter labels a_ij, b_ij for i + j = d, a's first."""
    if d >= 10:
        raise InputError("two-digit exponents would make labels ambiguous; d <= 9")
    names = [f"a{i}{d - i}" for i in range(d, -1, -1)]
    names += [f"b{i}{d - i}" for i in range(d, -1, -1)]
    return tuple(names)


@dataclass(frozen=True)
class FieldSpec:
    """A homogeneous perturbation of degree d.

    ``coeffs`` maps (kind, i, j) with kind in {"a", "b"} and i + j = d to a
    ParamPoly over ``vars``.  A fully symbolic family uses one variable per
    coefficient; a numeric field uses an empty variable tuple and constant
    coefficients.  Rotated families carry linear combinations.
    """

    degree: int
    vars: tuple
    coeffs: Mapping

    def __post_init__(self):
        if self.degree < 2:
            raise InputError("perturbation degree must be at least 2")
        expected = {(k, i, self.degree - i) for k in "ab" for i in range(self.degree + 1)}
        if set(self.coeffs) != expected:
            raise InputError("coefficient map must cover exactly i + j = d")
        for c in self.coeffs.values():
            if c.vars != self.vars:
                raise InputError("coefficient variables do not match FieldSpec vars")

    @classmethod
    def symbolic(cls, d: int) -> "FieldSpec":
        vars = param_names(d)
        coeffs = {}
        for i in range(d + 1):
            j = d - i
            coeffs[("a", i, j)] = ParamPoly.variable(vars, f"a{i}{j}")
            coeffs[("b", i, j)] = ParamPoly.variable(vars, f"b{i}{j}")
        return cls(d, vars, coeffs)

    @classmethod
    def from_values(cls, d: int, values: Mapping) -> "FieldSpec":
        """Numeric field: ``values`` maps (kind, i, j) to exact rationals.

        Missing coefficients are zero.
        """
        coeffs = {}
        for i in range(d + 1):
            j = d - i
            for kind in "ab":
                val = as_fraction(values.get((kind, i, j), 0))
                coeffs[(kind, i, j)] = ParamPoly.constant((), val)
        return cls(d, (), coeffs)

    def is_numeric(self) -> bool:
        return not self.vars

    def to_xy(self):
        """The perturbation as a pair (P, Q) of plane polynomials."""
        P = XYPoly.zero(self.vars)
        Q = XYPoly.zero(self.vars)
        for (kind, i, j), c in self.coeffs.items():
            mono = XYPoly.monomial(self.vars, i, j, c)
            if kind == "a":
                P = P + mono
            else:
                Q = Q + mono
        return P, Q

    def evaluate(self, point: Mapping[str, Fraction]) -> "FieldSpec":
        """Substitute numeric parameter values, producing a numeric field."""
        values = {}
        for key, c in self.coeffs.items():
            values[key] = c.evaluate(point) if self.vars else c.constant_term()
        return FieldSpec.from_values(self.degree, values)


# -- the angular coefficients A, B -------------------------------------------


def _trig_power(vars, p: int, q: int, cache: dict) -> TrigPoly:
    """cos^p * sin^q rewritten in canonical harmonics."""
    key = (p, q)
    if key in cache:
        return cache[key]
    if p == 0 and q == 0:
        out = TrigPoly.one(vars)
    elif p > 0:
        out = _trig_power(vars, p - 1, q, cache) * TrigPoly.cosine(vars)
    else:
        out = _trig_power(vars, p, q - 1, cache) * TrigPoly.sine(vars)
    cache[key] = out
    return out


def build_AB(spec: FieldSpec):
    """The radial and angular perturbation coefficients.

    A = (x P + y Q) on the unit circle, B = (x Q - y P) on the unit circle,
    both trigonometric polynomials of harmonic degree at most d + 1 and
    linear in the field coefficients.  Their flat parameter norms are
    bounded by 2(d + 1), one unit per coefficient.
    """
    vars = spec.vars
    cache: dict = {}
    A = TrigPoly.zero(vars)
    B = TrigPoly.zero(vars)
    for (kind, i, j), c in spec.coeffs.items():
        if c.is_zero():
            continue
        if kind == "a":
            A = A + _trig_power(vars, i + 1, j, cache).scale(c)
            B = B + (-_trig_power(vars, i, j + 1, cache)).scale(c)
        else:
            A = A + _trig_power(vars, i, j + 1, cache).scale(c)
            B = B + _trig_power(vars, i + 1, j, cache).scale(c)
    return A, B


def series_R(spec: FieldSpec, K: int) -> dict:
    """Coefficients R_k of dr/dtheta = sum_k r^k R_k(theta), k = d..K.

    R_k = (-1)^j A B^j when k = d + j(d-1), zero otherwise.
    """
    d = spec.degree
    if K < d:
        raise InputError(f"truncation order {K} below perturbation degree {d}")
    A, B = build_AB(spec)
    out: dict = {}
    power = A
    j = 0
    k = d
    while k <= K:
        out[k] = power if j % 2 == 0 else -power
        j += 1
        k = d + j * (d - 1)
        if k <= K:
            power = power * B
    return out


# -- power-series composition coefficients ------------------------------------


def _conv_truncated(a: dict, b: dict, kmax: int) -> dict:
    """Sparse product of two series coefficient dicts, truncated at kmax."""
    out: dict = {}
    for p, cp in a.items():
        for q, cq in b.items():
            n = p + q
            if n > kmax:
                continue
            add = cp * cq
            s = out.get(n)
            out[n] = add if s is None else s + add
    return out


def composition_coeff(i: int, k: int, v: Mapping[int, object], one):
    """Coefficient of r0^k in (r0 + sum_p v[p] r0^p)^i.

    ``v`` maps powers p >= 2 to coefficients in any commutative ring
    (TrigPoly, ParamPoly or Fraction); ``one`` is the ring unit.
    The coefficient of r0^i is always 1 and orders below i are empty.
    """
    if i < 1 or k < i:
        raise InputError("need i >= 1 and k >= i")
    series = {1: one}
    series.update({p: c for p, c in v.items() if p <= k})
    cur = dict(series)
    for _ in range(i - 1):
        cur = _conv_truncated(cur, series, k)
    zero = one - one if not isinstance(one, Fraction) else Fraction(0)
    return cur.get(k, zero)


class _PowerTable:
    """Truncated powers of a growing series r0 + sum_p x_p r0^p.

    table[i][n] is the r0^n coefficient of the i-th power, kept for
    n <= K.  Adding the next series term x at order k only creates
    contributions at orders >= k + i - 1, which is what makes the
    order-by-order recursion incremental: coefficients already consumed
    never change.
    """

    def __init__(self, vars, K: int):
        from math import comb

        self._comb = comb
        self.vars = vars
        self.K = K
        self.one = TrigPoly.one(vars)
        self.table = [None] + [{i: self.one} for i in range(1, K + 1)]

    def coeff(self, i: int, n: int) -> TrigPoly | None:
        return self.table[i].get(n)

    def add_term(self, x: TrigPoly, k: int) -> None:
        """Extend the series by x * r0^k and refresh all powers."""
        if not x:
            return
        K = self.K
        xpow = {1: x}
        t = 2
        while t * k <= K:
            xpow[t] = xpow[t - 1] * x
            t += 1
        old = [None] + [dict(self.table[i]) for i in range(1, K + 1)]
        for i in range(1, K + 1):
            tgt = self.table[i]
            for t, xt in xpow.items():
                if t > i:
                    break
                base = old[i - t] if i - t >= 1 else {0: self.one}
                c = self._comb(i, t)
                factor = xt if c == 1 else xt.scale(Fraction(c))
                for n, cn in base.items():
                    order = n + t * k
                    if order > K:
                        continue
                    piece = factor if n == 0 else cn * factor
                    cur = tgt.get(order)
                    tgt[order] = piece if cur is None else cur + piece


# -- the recursion -------------------------------------------------------------


@dataclass
class ReturnSeries:
    """Everything the recursion produces up to the truncation order."""

    spec: FieldSpec
    d: int
    K: int
    R: dict  # k -> TrigPoly, zero entries omitted
    v: dict  # k -> TrigPoly for 2 <= k <= K
    L: dict  # k -> ParamPoly over vars + ("pi",)
    z: dict  # k -> ParamPoly over vars (rotation-invariant averages)
    s: dict  # k -> TrigPoly, purely trigonometric parts
    r_extra: dict  # k -> {j >= 2: ParamPoly} pure theta^j coefficients of v_k

    def vars(self):
        return self.spec.vars


def run_recursion(spec: FieldSpec, K: int | None = None, max_terms: int | None = None) -> ReturnSeries:
    """Compute v_k, L_k, z_k, s_k for k up to K.

    K defaults to 9 for d = 2 and 13 for d = 3; the sequential dependence
    k -> k+1 makes each instance single-threaded, but distinct FieldSpecs
    can run in parallel.

    ``max_terms`` aborts with ComputationError (carrying partial results)
    when an intermediate trigonometric polynomial exceeds the budget.
    """
    d = spec.degree
    if K is None:
        K = {2: 9, 3: 13}.get(d, d + 7)
    if K < d:
        raise InputError(f"truncation order {K} below perturbation degree {d}")
    vars = spec.vars
    R = series_R(spec, K)
    zero_t = TrigPoly.zero(vars)
    one_t = TrigPoly.one(vars)

    v: dict = {k: zero_t for k in range(2, d)}
    s: dict = {k: zero_t for k in range(2, d)}
    z: dict = {k: ParamPoly.zero(vars) for k in range(2, d)}
    L: dict = {k: ParamPoly.zero(vars + (PI_VAR,)) for k in range(2, d)}
    r_extra: dict = {k: {} for k in range(2, d)}

    from .trigsym import materialize_trig, tp_mul_into

    pw_v = _PowerTable(vars, K)
    pw_s = _PowerTable(vars, K)

    for k in range(d, K + 1):
        acc_v: dict = {}
        acc_s: dict = {}
        for i, Ri in R.items():
            if i > k or not Ri:
                continue
            bv = pw_v.coeff(i, k)
            if bv:
                tp_mul_into(acc_v, bv, Ri)
            bs = pw_s.coeff(i, k)
            if bs:
                tp_mul_into(acc_s, bs, Ri)
        integrand_v = materialize_trig(vars, acc_v)
        integrand_s = materialize_trig(vars, acc_s)

        vk = integrand_v.antiderivative()
        zk = integrand_s.mean_value()
        # no-constant normalisation keeps the s_k covariant under the
        # simultaneous rotation of parameters and angle, which is what
        # makes the period averages z_k exactly rotation-invariant
        sk = (integrand_s - TrigPoly.const(vars, zk)).antiderivative(no_constant=True)
        if not sk.is_pure_trig():
            raise InternalError("pure-trig recursion produced a theta power")

        v[k] = vk
        s[k] = sk
        z[k] = zk
        L[k] = vk.eval_two_pi()
        r_extra[k] = {m: c for m, c in vk.theta_power_coefficients().items() if m >= 2}

        if max_terms is not None and len(vk.terms) > max_terms:
            raise ComputationError(
                f"term budget exceeded at order {k}",
                partial=ReturnSeries(spec, d, k, R, v, L, z, s, r_extra),
            )
        if k < K:
            pw_v.add_term(vk, k)
            pw_s.add_term(sk, k)

    return ReturnSeries(spec, d, K, R, v, L, z, s, r_extra)


# -- rotations -----------------------------------------------------------------


def rotate_params(spec: FieldSpec, c, s) -> FieldSpec:
    """The field expressed in coordinates rotated by an exact rational
    rotation (cos, sin) = (c, s) with c^2 + s^2 = 1.

    The new coefficients are linear in the old ones and the map obeys the
    rotation group law.
    """
    c = as_fraction(c)
    s = as_fraction(s)
    if c * c + s * s != 1:
        raise InputError("need an exact point on the unit circle: c^2 + s^2 = 1")
    P, Q = spec.to_xy()
    Pr = P.compose_rotation(c, s)
    Qr = Q.compose_rotation(c, s)
    newP = Pr * c + Qr * s
    newQ = Pr * (-s) + Qr * c
    d = spec.degree
    coeffs = {}
    for i in range(d + 1):
        j = d - i
        coeffs[("a", i, j)] = newP.terms.get((i, j), ParamPoly.zero(spec.vars))
        coeffs[("b", i, j)] = newQ.terms.get((i, j), ParamPoly.zero(spec.vars))
    return FieldSpec(d, spec.vars, coeffs)


def rotation_matrix_on_params(d: int, c, s) -> dict:
    """The induced linear map on the 2(d+1) parameters, as a dict
    {(new_label, old_label): Fraction}."""
    spec = FieldSpec.symbolic(d)
    rotated = rotate_params(spec, c, s)
    out = {}
    for (kind, i, j), poly in rotated.coeffs.items():
        new_label = f"{kind}{i}{j}"
        for exp, coeff in poly.terms.items():
            if sum(exp) != 1:
                raise InternalError("rotation action is not linear")
            old_label = spec.vars[exp.index(1)]
            out[(new_label, old_label)] = coeff
    return out


# -- geometric growth certificates ----------------------------------------------


@dataclass
class A0Cert:
    """Linear degree growth and geometric norm growth certificate.

    K1..K4 certify the displacement series: deg of the k-th coefficient is
    at most K1*k + K2 and its norm at most K3*K4^k.  K3 and K4 are safe
    rational upper bounds derived from the quadratic majorant equation (a
    branch-point radius computation), not transcribed printed constants.
    Violations are reported data; an empty list means every computed order
    passed.
    """

    K1: Fraction
    K2: Fraction
    K3: Fraction
    K4: Fraction
    verified_upto: int
    violations: list
    details: dict = field(default_factory=dict)

    def ok(self) -> bool:
        return not self.violations


def _norm_power_check(norm: Fraction, base: int, num: int, den: int) -> bool:
    """Exact check norm <= base**(num/den) for nonnegative rationals."""
    if num < 0:
        return norm <= 0
    return norm**den <= Fraction(base) ** num


def a0_certify(rs: ReturnSeries, theta_samples: int = 96) -> A0Cert:
    """Check the geometric growth contracts of the computed series.

    Exact checks: deg R_k <= (k-1)/(d-1), norm R_k <= (2(d+1))^((k-1)/(d-1)),
    deg v_k <= k/(d-1).  Norm checks for v_k compare a sampled sup-estimate
    (floats, reported with its grid) against the exact majorant recursion
    psi_k and against the derived closed-form constants.
    """
    d = rs.d
    base = 2 * (d + 1)
    violations = []

    for k in range(d, rs.K + 1):
        Rk = rs.R.get(k)
        if Rk is None:
            continue
        deg = Rk.param_degree()
        if deg is not NEG_INF and deg * (d - 1) > k - 1:
            violations.append({"kind": "R_degree", "k": k, "deg": deg})
        if not _norm_power_check(Rk.param_norm(), base, k - 1, d - 1):
            violations.append({"kind": "R_norm", "k": k, "norm": str(Rk.param_norm())})

    for k in range(2, rs.K + 1):
        vk = rs.v.get(k)
        if vk is None or not vk:
            continue
        deg = vk.param_degree()
        if deg is not NEG_INF and deg * (d - 1) > k:
            violations.append({"kind": "v_degree", "k": k, "deg": deg})

    # exact majorant recursion: psi_k = 2 pi sum_i B_ik(psi) |R_i|_bound,
    # |R_i| bounded by base^((i-1)/(d-1)) rounded up
    r_bound = {}
    for i in rs.R:
        r_bound[i] = pow_up(Fraction(base) ** (i - 1), 1, d - 1)
    psi: dict = {}
    for k in range(d, rs.K + 1):
        total = Fraction(0)
        for i, rb in r_bound.items():
            if i > k:
                continue
            b = Fraction(1) if i == k else composition_coeff(i, k, psi, Fraction(1))
            total += b * rb
        psi[k] = TWO_PI_HI * total

    # Derived closed-form constants from the quadratic majorant.  With
    # K4 = base^(1/(d-1)) and K3 = 1/K4 the quadratic's constant is
    # C = K4 (1 + 2 pi); the branch point sits at
    # rho = [x - sqrt(x^2 - K4^2)] / K4^2 with x = 2C - K4, and the
    # majorant value there is (1 + K4 rho) / (2C).  All roundings are
    # directed so the reported pair (K3', K4') is a true upper certificate.
    K4_up = pow_up(Fraction(base), 1, d - 1)
    K4_lo = pow_down(Fraction(base), 1, d - 1)
    C_up = K4_up * (1 + 2 * PI_HI)
    C_lo = K4_lo * (1 + 2 * PI_LO)
    x_up = 2 * C_up - K4_lo
    x_lo = 2 * C_lo - K4_up
    rho_lo = (x_up - sqrt_up(x_up * x_up - K4_lo * K4_lo)) / (K4_up * K4_up)
    rho_up = (x_lo - sqrt_down(x_lo * x_lo - K4_up * K4_up)) / (K4_lo * K4_lo)
    if rho_lo <= 0:
        raise InternalError("majorant radius lower bound is not positive")
    K4_prime = 2 / rho_lo
    psi_at_rho_up = (1 + K4_up * rho_up) / (2 * C_lo)
    K3_prime = psi_at_rho_up / 2

    # sampled sup-norm of v_k over a theta grid (float, reported only)
    import math

    sup_est = {}
    for k in range(d, rs.K + 1):
        vk = rs.v[k]
        if not vk:
            sup_est[k] = 0.0
            continue
        best = 0.0
        for t in range(theta_samples + 1):
            theta = 2 * math.pi * t / theta_samples
            acc: dict = {}
            for (m, l, is_sin), c in vk.terms.items():
                w = theta**m * (math.sin(l * theta) if is_sin else math.cos(l * theta))
                for exp, coeff in c.terms.items():
                    acc[exp] = acc.get(exp, 0.0) + float(coeff) * w
            best = max(best, sum(abs(x) for x in acc.values()))
        sup_est[k] = best
        if best > float(psi[k]) * (1 + 1e-9):
            violations.append({"kind": "v_norm_vs_psi", "k": k, "sup": best, "psi": float(psi[k])})
        if best > float(K3_prime) * float(K4_prime) ** k * (1 + 1e-9):
            violations.append({"kind": "v_norm_vs_closed_form", "k": k, "sup": best})

    return A0Cert(
        K1=Fraction(1, d - 1),
        K2=Fraction(0),
        K3=K3_prime,
        K4=K4_prime,
        verified_upto=rs.K,
        violations=violations,
        details={
            "psi": {k: str(p) for k, p in psi.items()},
            "sup_estimate": sup_est,
            "theta_samples": theta_samples,
            "R_series": {
                "K1": str(Fraction(1, d - 1)),
                "K2": str(Fraction(-1, d - 1)),
                "norm_base": base,
            },
            "majorant_radius_bounds": (str(rho_lo), str(rho_up)),
        },
    )
