"""Explicit real deformation families with certified node counts.

Each construction returns a FamilySpec: an exact symbolic polynomial
F(x, y, t) whose zero set, for small t > 0, is the divide of a real
morsification of the singularity the family deforms, together with the
expected number of hyperbolic nodes and viewport metadata for the tracer.

Conjugate-tangent families are built in the real coordinates
u = x + alpha*y, v = beta*y, in which the conjugate tangent pair is
u = +-iv; the complex line coordinates are w = u + iv and its conjugate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

import sympy

from .singularity import BranchType, SingularityType

X, Y, T = sympy.symbols("x y t", real=True)
_U, _V = sympy.symbols("u v", real=True)


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class PartInfo:
    """Metadata for one tangent-direction part of a composed family."""

    tag: str
    quad: tuple[float, float, float]  # coefficients of u^2+v^2 in x, y: A, B, C
    gamma: float  # t -> t*sqrt(gamma) substitution parameter
    multiplicity: int
    expected_nodes: int
    n_branches: int  # closed curves this part contributes


@dataclass(frozen=True)
class FamilySpec:
    expr: sympy.Expr
    expected_nodes: int | None
    multiplicity: int
    tag: str
    t_default: float
    window_fn: Callable[[float], float]
    singularity: SingularityType | None = None
    parts: tuple[PartInfo, ...] = ()
    # families whose coefficients depend on t (the radial-profile levels of
    # the one-Puiseux-pair construction) solve them here per parameter value
    param_solver: Callable[[float], dict] | None = None

    def window(self, t: float) -> float:
        return self.window_fn(t)

    def expr_at(self, t: float | None) -> sympy.Expr:
        if self.param_solver is None or t is None:
            return self.expr
        return self.expr.subs(self.param_solver(t))

    def evaluators(self, t: float | None = None):
        """Vectorized F, dF/dx, dF/dy, plus second partials for saddles."""
        expr = self.expr_at(t)
        fx = sympy.diff(expr, X)
        fy = sympy.diff(expr, Y)
        mods = ["numpy"]
        return (
            sympy.lambdify((X, Y, T), expr, mods),
            sympy.lambdify((X, Y, T), fx, mods),
            sympy.lambdify((X, Y, T), fy, mods),
            sympy.lambdify((X, Y, T), sympy.diff(fx, X), mods),
            sympy.lambdify((X, Y, T), sympy.diff(fx, Y), mods),
            sympy.lambdify((X, Y, T), sympy.diff(fy, Y), mods),
        )


def _num(value):
    """Exact sympy number where the input allows, Float otherwise."""
    if isinstance(value, (int, sympy.Integer)):
        return sympy.Integer(value)
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        return sympy.nsimplify(value, rational=True)
    if isinstance(value, sympy.Expr):
        return value
    if isinstance(value, float):
        return sympy.Float(value)
    raise FamilyError(f"unsupported coefficient {value!r}")


def _intify(x):
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def _complex_parts(value) -> tuple[sympy.Expr, sympy.Expr]:
    if isinstance(value, complex):
        return _num(_intify(value.real)), _num(_intify(value.imag))
    if isinstance(value, tuple) and len(value) == 2:
        return _num(_intify(value[0])), _num(_intify(value[1]))
    return _num(_intify(value)), sympy.Integer(0)


def _w_power_parts(N: int) -> tuple[sympy.Expr, sympy.Expr]:
    """Re and Im of (u + iv)^N as exact polynomials."""
    re, im = sympy.expand((_U + sympy.I * _V) ** N).as_real_imag()
    return re, im


def _tangent_subs(alpha, beta):
    a, b = _num(alpha), _num(beta)
    return {_U: X + a * Y, _V: b * Y}


def _ellipse_extent(alpha, beta) -> float:
    """Extent in x and y of the unit ellipse u^2 + v^2 = 1."""
    a, b = float(alpha), float(beta)
    return max(1.0 + abs(a) / abs(b), 1.0 / abs(b))


def _quad_coeffs(alpha, beta) -> tuple[float, float, float]:
    # u^2 + v^2 = x^2 + 2 alpha x y + (alpha^2 + beta^2) y^2
    a, b = float(alpha), float(beta)
    return (1.0, 2.0 * a, a * a + b * b)


def family_smooth_conjugate(branches: Sequence[dict], tangent=(0, 1)) -> FamilySpec:
    """Pairs of smooth conjugate branches sharing one conjugate tangent pair.

    ``branches[i]`` maps exponents n > 1 to the complex coefficient of w^n
    in the defining series of the i-th branch.  The deformed curve splits
    into one embedded circle per branch pair; circles i and j cross in
    2 n_ij + 2 points, n_ij being the first exponent where the series
    differ.
    """
    alpha, beta = tangent
    if float(beta) == 0:
        raise FamilyError("beta must be nonzero: tangents must be non-real")
    data = []
    for spec in branches:
        coeffs = {}
        for nexp, a in spec.items():
            nexp = int(nexp)
            if nexp <= 1:
                raise FamilyError("series exponents must exceed 1")
            coeffs[nexp] = _complex_parts(a)
        data.append(coeffs)
    s = len(data)
    if s == 0:
        raise FamilyError("need at least one branch pair")

    def series_re_im(coeffs):
        re = sympy.Integer(0)
        im = sympy.Integer(0)
        for nexp, (ar, ai) in coeffs.items():
            wr, wi = _w_power_parts(nexp)
            re += ar * wr - ai * wi
            im += ar * wi + ai * wr
        return re, im

    n_pairwise = {}
    for i in range(s):
        for j in range(i + 1, s):
            exps = sorted(set(data[i]) | set(data[j]))
            n_ij = None
            for nexp in exps:
                if data[i].get(nexp, (0, 0)) != data[j].get(nexp, (0, 0)):
                    n_ij = nexp
                    break
            if n_ij is None:
                raise FamilyError(f"branches {i} and {j} coincide; the curve would be non-reduced")
            n_pairwise[(i, j)] = n_ij

    F = sympy.Integer(1)
    for coeffs in data:
        p_re, p_im = series_re_im(coeffs)
        # w conj - g(w) = (u - Re g) - i (v + Im g)
        phi = (_U - p_re) ** 2 + (_V + p_im) ** 2
        F *= phi - T**2
    F = sympy.expand(F.subs(_tangent_subs(alpha, beta)))

    expected = 2 * sum(nij + 1 for nij in n_pairwise.values())
    smooth = BranchType((1,))
    table = [[0] * (2 * s) for _ in range(2 * s)]
    for i in range(s):
        qi, qbi = 2 * i, 2 * i + 1
        table[qi][qbi] = table[qbi][qi] = 1
        for j in range(i + 1, s):
            qj, qbj = 2 * j, 2 * j + 1
            nij = n_pairwise[(i, j)]
            table[qi][qj] = table[qj][qi] = nij
            table[qbi][qbj] = table[qbj][qbi] = nij
            table[qi][qbj] = table[qbj][qi] = 1
            table[qbi][qj] = table[qj][qbi] = 1
    sing = SingularityType((), (smooth,) * s, tuple(tuple(r) for r in table))

    ext = _ellipse_extent(alpha, beta)
    max_exp = max((max(c) for c in data if c), default=2)

    def window(t):
        return ext * t * (1.0 + 4.0 * t ** (max_exp - 1) + 0.35)

    # circles for a pair with contact n_ij separate only at order t^(n_ij-1),
    # so the default parameter grows with the maximal contact
    if n_pairwise:
        n_max = max(n_pairwise.values())
        t_def = min(0.33, max(0.12, 1.3 * 0.024 ** (1.0 / (n_max - 1))))
    else:
        t_def = 0.2

    return FamilySpec(
        expr=F,
        expected_nodes=expected,
        multiplicity=2 * s,
        tag="smooth-conjugate",
        t_default=t_def,
        window_fn=window,
        singularity=sing,
        parts=(PartInfo("smooth-conjugate", _quad_coeffs(alpha, beta), 1.0, 2 * s, expected, s),),
    )


def chebyshev_like(p: int, c: float) -> list[float]:
    """Monic degree-p polynomial with critical values alternating between
    -2c and +2c and roots summing to zero.

    Built by rescaling the monic Chebyshev polynomial on [-2, 2]:
    P(x) = c * C_p(x / c^(1/p)).  Coefficients are returned lowest degree
    first; the construction is verified to residual 1e-12 on the critical
    values and the root sum.
    """
    if p < 2:
        raise FamilyError("degree must be at least 2")
    if not c > 0:
        raise FamilyError("critical level c must be positive")
    # monic Chebyshev on [-2, 2]: C_0 = 2, C_1 = x, C_{k+1} = x C_k - C_{k-1}
    prev = [2.0]
    cur = [0.0, 1.0]
    for _ in range(p - 1):
        nxt = [0.0] + cur
        for k, vk in enumerate(prev):
            nxt[k] -= vk
        prev, cur = cur, nxt
    scale = c ** (1.0 / p)
    coeffs = [cur[j] * c * scale ** (-j) for j in range(p)] + [1.0]

    import numpy as np

    poly = np.polynomial.Polynomial(coeffs)
    crit = sorted(r.real for r in poly.deriv().roots() if abs(r.imag) < 1e-9)
    if len(crit) != p - 1:
        raise FamilyError("critical-point solve failed")
    vals = [poly(lam) for lam in crit]
    for k, val in enumerate(vals):
        # ascending critical points carry values 2c*(-1)^(p-1-k)
        want = -2 * c if (p - 1 - k) % 2 == 1 else 2 * c
        if abs(val - want) > 1e-12 * max(1.0, 2 * c):
            raise FamilyError(f"critical value {val} != {want} beyond tolerance")
    if abs(sum(np.roots(coeffs[::-1]))) > 1e-10 * max(1.0, c):
        raise FamilyError("roots do not sum to zero")
    return coeffs


def radial_profile_levels(p: int, q: int, abs_a: float, t: float) -> list[float]:
    """Coefficients b_0..b_{p-2}(t) of the one-pair construction at a given t.

    They are pinned by requiring the profile
    P_t(s) = (1 + t^((q-p)/p) s)^(-(p+q)/2) (s^p + sum b_i s^i)
    to take the alternating critical values +-2|a| at its p-1 critical
    points.  The t -> 0 limit is the rescaled Chebyshev polynomial, which
    seeds the Newton solve.  Exact critical values put the curve's saddles
    exactly on the zero level.
    """
    import numpy as np

    tau = t ** ((q - p) / p)
    cheb = chebyshev_like(p, abs_a)
    poly0 = np.polynomial.Polynomial(cheb)
    mu0 = sorted(r.real for r in poly0.deriv().roots() if abs(r.imag) < 1e-9)
    targets = [(-2 * abs_a if (p - 1 - k) % 2 == 1 else 2 * abs_a) for k in range(p - 1)]
    m = p - 1
    vars0 = np.array(list(cheb[:m]) + mu0, dtype=float)

    def profile(bvec, s):
        Q = s**p + sum(bvec[i] * s**i for i in range(m))
        return (1 + tau * s) ** (-(p + q) / 2) * Q

    def dprofile(bvec, s):
        Q = s**p + sum(bvec[i] * s**i for i in range(m))
        dQ = p * s ** (p - 1) + sum(i * bvec[i] * s ** (i - 1) for i in range(1, m))
        base = (1 + tau * s) ** (-(p + q) / 2)
        return base * (dQ - 0.5 * (p + q) * tau / (1 + tau * s) * Q)

    def residuals(v):
        b, mu = v[:m], v[m:]
        out = np.empty(2 * m)
        for k in range(m):
            if 1 + tau * mu[k] <= 0:
                out[:] = 1e6
                return out
            out[k] = dprofile(b, mu[k])
            out[m + k] = profile(b, mu[k]) - targets[k]
        return out

    v = vars0.copy()
    scale = max(1.0, 2 * abs_a)
    for _ in range(80):
        r = residuals(v)
        if np.max(np.abs(r)) < 1e-13 * scale:
            break
        J = np.empty((2 * m, 2 * m))
        for col in range(2 * m):
            h = 1e-7 * max(1.0, abs(v[col]))
            vp = v.copy()
            vp[col] += h
            J[:, col] = (residuals(vp) - r) / h
        try:
            step = np.linalg.solve(J, r)
        except np.linalg.LinAlgError as exc:
            raise FamilyError(f"radial profile solve is singular at t={t}") from exc
        v = v - step
    else:
        raise FamilyError(f"radial profile solve did not converge at t={t}")
    mu = sorted(v[m:])
    if any(mu[k + 1] - mu[k] < 1e-9 for k in range(m - 1)):
        raise FamilyError(f"critical points collide at t={t}; decrease t")
    return [float(x) for x in v[:m]]


def family_one_puiseux_pair(p: int, q: int, a, tangent=(0, 1)) -> FamilySpec:
    """Pair of conjugate branches of type x^p + y^q (p < q coprime), tangent
    to the two conjugate lines.

    The deformation carries the p-fold conjugate-tangent circle structure
    with (p-1)(p+q) hyperbolic nodes near the ellipse u^2 + v^2 = t^2.
    The profile coefficients b_i(t) are solved per parameter value so the
    nodes land exactly on the zero level.
    """
    p, q = int(p), int(q)
    if not (2 <= p < q):
        raise FamilyError("need 2 <= p < q")
    if gcd(p, q) != 1:
        raise FamilyError("p and q must be coprime")
    alpha, beta = tangent
    if float(beta) == 0:
        raise FamilyError("beta must be nonzero")
    ar, ai = _complex_parts(a)
    mod_a = math.hypot(float(ar), float(ai))
    if mod_a == 0:
        raise FamilyError("a must be nonzero")

    b_syms = [sympy.Dummy(f"b{i}") for i in range(p - 1)]
    rho2 = _U**2 + _V**2
    F = (rho2 - T**2) ** p
    for i in range(p - 2, -1, -1):
        F += T ** sympy.Rational((p - i) * (p + q), p) * b_syms[i] * (rho2 - T**2) ** i
    wr, wi = _w_power_parts(p + q)
    # a * conj(w)^N + conj(a) * w^N = 2(Re a * Re w^N + Im a * Im w^N)
    F -= 2 * (ar * wr + ai * wi)
    F = sympy.expand(F.subs(_tangent_subs(alpha, beta)))

    def solver(t):
        levels = radial_profile_levels(p, q, mod_a, t)
        return {sym: sympy.Float(lev) for sym, lev in zip(b_syms, levels)}

    expected = (p - 1) * (p + q)
    branch = BranchType((p, q))
    inter = p * p
    sing = SingularityType((), (branch,), ((0, inter), (inter, 0)))

    import numpy as np

    poly = np.polynomial.Polynomial(chebyshev_like(p, mod_a))
    lam0 = 1.0
    for level in (3 * mod_a, -3 * mod_a):
        for r in (poly - level).roots():
            if abs(r.imag) < 1e-9:
                lam0 = max(lam0, abs(r.real))
    lam0 *= 1.15
    ext = _ellipse_extent(alpha, beta)

    def window(t):
        return ext * t * (1.0 + lam0 * t ** ((q - p) / p) + 0.3)

    t_def = min(0.25, (0.3 / lam0) ** (p / (q - p)))

    return FamilySpec(
        expr=F,
        expected_nodes=expected,
        multiplicity=2 * p,
        tag=f"one-pair-{p}-{q}",
        t_default=t_def,
        window_fn=window,
        singularity=sing,
        parts=(PartInfo(f"one-pair-{p}-{q}", _quad_coeffs(alpha, beta), 1.0, 2 * p, expected, 1),),
        param_solver=solver,
    )


def family_semiquasi_pp(
    real_lines: Sequence[tuple], quadrics: Sequence[tuple], b: Sequence[float], line_shifts=None
) -> FamilySpec:
    """Union of real lines and positive-definite conic pencils: the
    deformation of a transversal-smooth-branch singularity of type (d, d).

    Each quadric q_i contributes the conic q_i = b_i t; every pair of
    conics must meet in four distinct real points.  Line factors are
    shifted off the origin proportionally to t to realize their nodes.
    """
    lines = [tuple(map(float, ln)) for ln in real_lines]
    quads = [tuple(map(float, qd)) for qd in quadrics]
    bs = [float(x) for x in b]
    if len(bs) != len(quads):
        raise FamilyError("need one level b_i per quadric")
    if not quads and not lines:
        raise FamilyError("empty construction")
    for idx, (A, B, C) in enumerate(quads):
        if not (A > 0 and 4 * A * C - B * B > 0):
            raise FamilyError(f"quadric {idx} is not positive definite")
    for idx in range(len(quads)):
        for jdx in range(idx + 1, len(quads)):
            if _proportional(quads[idx], quads[jdx]):
                raise FamilyError(f"quadrics {idx} and {jdx} are proportional")
    for idx in range(len(lines)):
        for jdx in range(idx + 1, len(lines)):
            if _proportional(lines[idx], lines[jdx]):
                raise FamilyError(f"lines {idx} and {jdx} are proportional")
    if any(bi <= 0 for bi in bs):
        raise FamilyError("levels b_i must be positive")

    pts = _conic_pair_points(quads, bs)

    ell = len(lines)
    k = len(quads)
    if line_shifts is None:
        base = 0.35 * math.sqrt(min(bs)) if bs else 1.0
        line_shifts = [base * (1 + 0.41 * idx) for idx in range(ell)]
    shifts = [float(cshift) for cshift in line_shifts]

    F = sympy.Integer(1)
    for (la, lb), cshift in zip(lines, shifts):
        F *= _num(la) * X + _num(lb) * Y - _num(cshift) * T
    for (A, B, C), bi in zip(quads, bs):
        F *= _num(A) * X**2 + _num(B) * X * Y + _num(C) * Y**2 - _num(bi) * T
    F = sympy.expand(F)

    d = ell + 2 * k
    expected = d * (d - 1) // 2 - k
    smooth = BranchType((1,))
    nslots = d
    table = [[0] * nslots for _ in range(nslots)]
    for i in range(nslots):
        for j in range(nslots):
            if i != j:
                table[i][j] = 1
    sing = SingularityType(
        (smooth,) * ell, (smooth,) * k, tuple(tuple(r) for r in table)
    )

    def window(t):
        ext = 1.0
        for (A, B, C), bi in zip(quads, bs):
            lam_min = 0.5 * ((A + C) - math.hypot(A - C, B))
            ext = max(ext, math.sqrt(bi * t / lam_min))
        return 1.45 * ext

    parts = tuple(
        PartInfo("conic", qd, bi, 2, 0, 1) for qd, bi in zip(quads, bs)
    )
    return FamilySpec(
        expr=F,
        expected_nodes=expected,
        multiplicity=d,
        tag="semiquasi-transversal",
        t_default=0.2,
        window_fn=window,
        singularity=sing,
        parts=parts,
    )


def _proportional(v1, v2) -> bool:
    return abs(v1[0] * v2[1] - v1[1] * v2[0]) < 1e-12 and all(
        abs(v1[i] * v2[j] - v1[j] * v2[i]) < 1e-12 for i in range(len(v1)) for j in range(len(v1))
    )


def _conic_pair_points(quads, levels, label="quadrics"):
    """Intersection points of each conic pair; errors unless every pair
    meets in four distinct real points and all points are distinct."""
    import numpy as np

    all_pts = []
    for i in range(len(quads)):
        for j in range(i + 1, len(quads)):
            A1, B1, C1 = quads[i]
            A2, B2, C2 = quads[j]
            b1, b2 = levels[i], levels[j]
            # pencil b2*q_i - b1*q_j vanishes on the intersection: a pair
            # of lines through the origin; indefinite <=> 4 real points
            qa, qb, qc = b2 * A1 - b1 * A2, b2 * B1 - b1 * B2, b2 * C1 - b1 * C2
            disc = qb * qb - 4 * qa * qc
            if disc <= 1e-12 * max(abs(qa), abs(qb), abs(qc)) ** 2:
                raise FamilyError(
                    f"{label} {i} and {j} do not meet in four real points (discriminant {disc})"
                )
            pts = []
            # lines qa x^2 + qb x y + qc y^2 = 0
            if abs(qa) > 1e-14:
                for root in np.roots([qa, qb, qc]):
                    # x = root * y
                    denom = A1 * root**2 + B1 * root + C1
                    yv = math.sqrt(b1 / denom.real)
                    pts += [(root.real * yv, yv), (-root.real * yv, -yv)]
            else:
                # one line is y = 0, the other is qb*x + qc*y = 0
                pts += [(math.sqrt(b1 / A1), 0.0), (-math.sqrt(b1 / A1), 0.0)]
                root = -qc / qb if abs(qb) > 1e-14 else 0.0
                denom = A1 * root**2 + B1 * root + C1
                yv = math.sqrt(b1 / denom)
                pts += [(root * yv, yv), (-root * yv, -yv)]
            all_pts.extend(pts)
    for i in range(len(all_pts)):
        for j in range(i + 1, len(all_pts)):
            dx = all_pts[i][0] - all_pts[j][0]
            dy = all_pts[i][1] - all_pts[j][1]
            if math.hypot(dx, dy) < 1e-9:
                raise FamilyError(f"{label} intersection points are not pairwise distinct")
    return all_pts


def family_ellipse_composition(parts: Sequence[FamilySpec], gammas: Sequence[float]) -> FamilySpec:
    """Product of conjugate-tangent families on distinct tangent pairs,
    with the parameter rescaled to t*sqrt(gamma_i) in part i.

    Divides of distinct parts cross in mt_i * mt_j points near the
    intersections of their ellipses.
    """
    if len(parts) != len(gammas):
        raise FamilyError("need one gamma per part")
    if not parts:
        raise FamilyError("empty composition")
    gam = [float(g) for g in gammas]
    if any(g <= 0 for g in gam):
        raise FamilyError("gamma values must be positive")
    infos = []
    for spec in parts:
        if len(spec.parts) != 1:
            raise FamilyError("composition parts must be single-tangent families")
        infos.append(spec.parts[0])
    for i in range(len(infos)):
        for j in range(i + 1, len(infos)):
            if _proportional(infos[i].quad, infos[j].quad):
                raise FamilyError(f"parts {i} and {j} share their tangent pair")
    if len(parts) > 1:
        _conic_pair_points([info.quad for info in infos], gam, label="part ellipses")

    F = sympy.Integer(1)
    for spec, g in zip(parts, gam):
        F *= spec.expr.subs(T, T * sympy.sqrt(_num(g)))
    F = sympy.expand(F)

    part_solvers = [
        (spec.param_solver, math.sqrt(g)) for spec, g in zip(parts, gam) if spec.param_solver
    ]

    def solver(t):
        subs = {}
        for sv, fac in part_solvers:
            subs.update(sv(t * fac))
        return subs

    expected = 0
    mt = 0
    for i, spec in enumerate(parts):
        expected += spec.expected_nodes
        mt += spec.multiplicity
        for j in range(i + 1, len(parts)):
            expected += spec.multiplicity * parts[j].multiplicity

    sing = _merge_part_singularities(parts)

    def window(t):
        return max(spec.window(t * math.sqrt(g)) for spec, g in zip(parts, gam))

    new_infos = tuple(
        PartInfo(info.tag, info.quad, g * info.gamma, info.multiplicity, info.expected_nodes, info.n_branches)
        for info, g in zip(infos, gam)
    )
    return FamilySpec(
        expr=F,
        expected_nodes=expected,
        multiplicity=mt,
        tag="ellipse-composition",
        t_default=min(spec.t_default for spec in parts) * 0.9,
        window_fn=window,
        singularity=sing,
        parts=new_infos,
        param_solver=solver if part_solvers else None,
    )


def _merge_part_singularities(parts) -> SingularityType | None:
    pair_branches = []
    blocks = []
    for spec in parts:
        s = spec.singularity
        if s is None or s.re_br != 0:
            return None
        blocks.append((len(pair_branches), s))
        pair_branches.extend(s.conj_pairs)
    n = 2 * len(pair_branches)
    table = [[0] * n for _ in range(n)]
    for base, s in blocks:
        for a in range(2 * s.im_br):
            for bcol in range(2 * s.im_br):
                if a != bcol:
                    table[2 * base + a][2 * base + bcol] = s.intersections[a][bcol]
    offsets = []
    for base, s in blocks:
        offsets.append((base, s.im_br, s))
    for bi in range(len(blocks)):
        for bj in range(bi + 1, len(blocks)):
            base_i, ni, si = offsets[bi]
            base_j, nj, sj = offsets[bj]
            for a in range(ni):
                for bcol in range(nj):
                    mt_prod = si.conj_pairs[a].multiplicity * sj.conj_pairs[bcol].multiplicity
                    for sa in (0, 1):
                        for sb in (0, 1):
                            r = 2 * (base_i + a) + sa
                            cc = 2 * (base_j + bcol) + sb
                            table[r][cc] = table[cc][r] = mt_prod
    return SingularityType((), tuple(pair_branches), tuple(tuple(r) for r in table))


def family_from_expression(expr, window: float, expected_nodes: int | None = None,
                           tag: str = "custom", singularity=None) -> FamilySpec:
    """Wrap an arbitrary real polynomial in x, y (and optionally t) for the
    tracer.  No node count is asserted unless one is supplied."""
    expr = sympy.sympify(expr, locals={"x": X, "y": Y, "t": T})
    extra = expr.free_symbols - {X, Y, T}
    if extra:
        raise FamilyError(f"expression may only involve x, y, t; found {extra}")
    return FamilySpec(
        expr=sympy.expand(expr),
        expected_nodes=expected_nodes,
        multiplicity=0,
        tag=tag,
        t_default=0.1,
        window_fn=lambda t: float(window),
        singularity=singularity,
    )


def family_parabola_pair(n: int) -> FamilySpec:
    """Two graph branches splitting y^2 = x^(2n): (y - t x^2)^2 equals the
    squared product of (x - k t), crossing transversally in n points.

    Stated in the unit-aspect coordinates (x, y) -> (t x, t^2 y), which is
    a real coordinate change preserving the divide: the crossings sit at
    x = 1..n instead of collapsing toward the origin with t.
    """
    n = int(n)
    if n < 2:
        raise FamilyError("need n >= 2")
    prod = sympy.Integer(1)
    for k in range(1, n + 1):
        prod *= X - k
    # (y - t x^2)^2 - t^(2n-4) prod(x - k)^2 after scaling and division by t^4
    F = sympy.expand((Y - T * X**2) ** 2 - T ** (2 * n - 4) * prod**2)
    smooth = BranchType((1,))
    sing = SingularityType((smooth, smooth), (), ((0, n), (n, 0)))

    def window(t):
        # crossings sit at (k, t k^2), k = 1..n
        return max(n + 1.6, 1.3 * t * n * n)

    return FamilySpec(
        expr=F,
        expected_nodes=n,
        multiplicity=2,
        tag=f"parabola-pair-{n}",
        t_default=0.3 if n <= 3 else 0.45,
        window_fn=window,
        singularity=sing,
    )
