"""Generic steepest-descent machinery.

Phase functions g(t) appearing in the integral representations, saddle
angles, level-set path tracing, the second-order saddle approximation and
a composite Gauss quadrature along traced paths. The traced-path integral
serves as an expansion-independent oracle: it evaluates the same contour
integral the closed-form expansions approximate, without using any
expansion.

Conventions: paths of steepest descent satisfy Im(lam*g(t)) = const with
Re(lam*g) strictly decreasing away from the saddle. All logs are
principal; the phase functions therefore carry horizontal branch cuts
(and, for the kinds that involve (1 - z t), the ray where z*t >= 1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mp

from .errors import (
    AtSingularity,
    DomainViolation,
    HigherOrderSaddle,
    OnBranchCut,
    ParameterDomain,
    PathSingularity,
    StallNearSingularity,
)
from .numerics import (
    GUARD,
    BigComplex,
    Precision,
    _ensure_prec,
    as_mpc,
    plog,
    ppow,
)


class PhaseKind(enum.Enum):
    # ln[t^eps (1-t)^(1-eps)] — real-interval representation, cuts
    # (-inf, 0] and [1, inf)
    AC_SMALL = "g_ac_small"
    # ln[t^eps (t-1)^(1-eps)] — loop representation, cut (-inf, 1]
    AC_LARGE = "g_ac_large"
    # ln[t^eps / ((t-1)^eps (1-zt))]
    AB = "g_ab"
    # eps*ln((1-t)/t) + ln(1-zt)  (= eps*pi*i - g_ab up to branch bookkeeping)
    AB_NEG = "g_ab_neg"
    # test phases
    GAUSS = "minus_t_squared"
    STIRLING = "log_t_minus_t"


_NEEDS_Z = {PhaseKind.AB, PhaseKind.AB_NEG}


@dataclass(frozen=True)
class PhaseFunction:
    kind: PhaseKind
    eps: object = 1.0
    z: object = None

    def __post_init__(self):
        with mp.workprec(128):
            e = mp.mpf(self.eps)
        if self.kind in (PhaseKind.AC_SMALL, PhaseKind.AC_LARGE, PhaseKind.AB,
                         PhaseKind.AB_NEG):
            if not e > 0:
                raise ParameterDomain("eps must be positive")
            if self.kind in (PhaseKind.AC_SMALL, PhaseKind.AC_LARGE) and e == 1:
                raise ParameterDomain("eps = 1 excluded for this phase kind")
        if self.kind in _NEEDS_Z:
            if self.z is None:
                raise ParameterDomain(f"{self.kind} requires z")
            object.__setattr__(self, "z", BigComplex(self.z)
                               if not isinstance(self.z, BigComplex) else self.z)
        object.__setattr__(self, "eps", e)


@dataclass(frozen=True)
class SaddleData:
    """Location, order, curvature and descent angles of one saddle point."""

    t0: BigComplex
    order: int
    g2: BigComplex
    angles: tuple
    dominant: bool = True

    def __post_init__(self):
        if len(self.angles) != self.order + 1:
            raise ParameterDomain("need order + 1 descent angles")


class IntegrandKind(enum.Enum):
    ONE = "one"
    # t^(a-1) (1-t)^(c-a-1) (1-zt)^(-b) — real-interval kernel
    BETA_KERNEL = "beta_kernel"
    # t^(a-1) (t-1)^(c-a-1) (1-zt)^(-b) — loop kernel
    LOOP_KERNEL = "loop_kernel"


@dataclass(frozen=True)
class Integrand:
    """Serializable integrand tag plus the parameters it needs."""

    kind: IntegrandKind
    a: object = 1
    b: object = 0
    c: object = 2
    z: object = 0

    def raw(self):
        """Return f(t) as an mpc callable at the current precision."""
        if self.kind == IntegrandKind.ONE:
            return lambda t: mp.mpc(1)
        a = as_mpc(self.a)
        b = as_mpc(self.b)
        c = as_mpc(self.c)
        z = as_mpc(self.z)
        if self.kind == IntegrandKind.BETA_KERNEL:
            return lambda t: (ppow(t, a - 1) * ppow(1 - t, c - a - 1)
                              * ppow(1 - z * t, -b))
        return lambda t: (ppow(t, a - 1) * ppow(t - 1, c - a - 1)
                          * ppow(1 - z * t, -b))


def _cut_rays(pf: PhaseFunction):
    """Horizontal cut rays as (y, x_lo, x_hi) triples at current precision."""
    inf = mp.inf
    if pf.kind == PhaseKind.AC_SMALL:
        return [(mp.mpf(0), -inf, mp.mpf(0)), (mp.mpf(0), mp.mpf(1), inf)]
    if pf.kind == PhaseKind.AC_LARGE:
        return [(mp.mpf(0), -inf, mp.mpf(1))]
    if pf.kind == PhaseKind.STIRLING:
        return [(mp.mpf(0), -inf, mp.mpf(0))]
    if pf.kind == PhaseKind.GAUSS:
        return []
    rays = [(mp.mpf(0), -inf, mp.mpf(1))] if pf.kind == PhaseKind.AB else [
        (mp.mpf(0), -inf, mp.mpf(0)), (mp.mpf(0), mp.mpf(1), inf)]
    tc = 1 / pf.z.to_mpc()
    # principal-log cut of log(1 - z t): the ray t = u/z, u >= 1
    if tc.imag == 0:
        rays.append((mp.mpf(0), tc.real if tc.real > 0 else -inf,
                     inf if tc.real > 0 else tc.real))
    else:
        rays.append(("ray_from", tc, tc))  # generic direction, handled separately
    return rays


def _singular_points(pf: PhaseFunction):
    pts = []
    if pf.kind in (PhaseKind.AC_SMALL, PhaseKind.AC_LARGE, PhaseKind.AB,
                   PhaseKind.AB_NEG):
        pts = [mp.mpc(0), mp.mpc(1)]
        if pf.kind in _NEEDS_Z:
            pts.append(1 / pf.z.to_mpc())
    elif pf.kind == PhaseKind.STIRLING:
        pts = [mp.mpc(0)]
    return pts


def _on_cut(pf, t):
    t = as_mpc(t)
    if t.imag != 0:
        if pf.kind in _NEEDS_Z:
            tc = 1 / pf.z.to_mpc()
            if tc.imag != 0:
                # on the ray t = u * tc, u >= 1
                ratio = t / tc
                if ratio.imag == 0 and ratio.real >= 1:
                    return True
        return False
    x = t.real
    for ray in _cut_rays(pf):
        if ray[0] == "ray_from":
            continue
        y, lo, hi = ray
        if y == 0 and lo <= x <= hi:
            return True
    return False


def _phase_raw(pf: PhaseFunction, t, order=0):
    """g (order 0) or its first/second derivative at current precision."""
    t = as_mpc(t)
    e = mp.mpf(pf.eps)
    k = pf.kind
    if k == PhaseKind.GAUSS:
        return (-t * t, -2 * t, mp.mpc(-2))[order]
    if k == PhaseKind.STIRLING:
        if t == 0:
            raise AtSingularity("t = 0")
        return (plog(t) - t, 1 / t - 1, -1 / (t * t))[order]
    if t == 0 or t == 1:
        raise AtSingularity(f"t = {t}")
    if k == PhaseKind.AC_SMALL:
        if order == 0:
            return e * plog(t) + (1 - e) * plog(1 - t)
        if order == 1:
            return e / t - (1 - e) / (1 - t)
        return -e / (t * t) - (1 - e) / ((1 - t) * (1 - t))
    if k == PhaseKind.AC_LARGE:
        if order == 0:
            return e * plog(t) + (1 - e) * plog(t - 1)
        if order == 1:
            return e / t + (1 - e) / (t - 1)
        return -e / (t * t) - (1 - e) / ((t - 1) * (t - 1))
    z = pf.z.to_mpc()
    if z * t == 1:
        raise AtSingularity("t = 1/z")
    if k == PhaseKind.AB:
        if order == 0:
            return e * plog(t) - e * plog(t - 1) - plog(1 - z * t)
        if order == 1:
            return e / t - e / (t - 1) + z / (1 - z * t)
        return -e / (t * t) + e / ((t - 1) * (t - 1)) + z * z / ((1 - z * t) ** 2)
    # AB_NEG
    if order == 0:
        return e * (plog(1 - t) - plog(t)) + plog(1 - z * t)
    if order == 1:
        return -e / (1 - t) - e / t - z / (1 - z * t)
    return -e / ((1 - t) * (1 - t)) + e / (t * t) - z * z / ((1 - z * t) ** 2)


def phase_eval(pf: PhaseFunction, t, prec=None) -> BigComplex:
    """Closed-form g(t); rejects points on the kind's branch cuts."""
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        tt = as_mpc(t)
        if _on_cut(pf, tt):
            raise OnBranchCut(f"t = {tt} on a branch cut of {pf.kind}")
        v = _phase_raw(pf, tt, 0)
    return BigComplex.from_mpc(v, prec.bits)


def phase_deriv(pf: PhaseFunction, t, order=1, prec=None) -> BigComplex:
    if order not in (1, 2):
        raise ParameterDomain("derivative order must be 1 or 2")
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        tt = as_mpc(t)
        if _on_cut(pf, tt):
            raise OnBranchCut(f"t = {tt} on a branch cut of {pf.kind}")
        v = _phase_raw(pf, tt, order)
    return BigComplex.from_mpc(v, prec.bits)


def steepest_angles(order: int, alpha, prec=None):
    """Descent angles theta_k = ((2k+1) pi - alpha) / (order + 1), k=0..order,
    reduced mod 2 pi."""
    if order < 1:
        raise ParameterDomain("saddle order must be >= 1")
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits):
        alpha = mp.mpf(alpha)
        two_pi = 2 * mp.pi
        out = []
        for k in range(order + 1):
            th = ((2 * k + 1) * mp.pi - alpha) / (order + 1)
            th = th % two_pi
            out.append(+th)
    return out


def make_saddle(pf: PhaseFunction, t0, lam, dominant=True,
                prec=None) -> SaddleData:
    """Build SaddleData for a simple saddle at t0: curvature, descent angles
    for the given lambda, and a residual check on g'(t0)."""
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        t0m = as_mpc(t0)
        lamm = as_mpc(lam)
        g1 = _phase_raw(pf, t0m, 1)
        g2 = _phase_raw(pf, t0m, 2)
        scale = max(abs(g2), mp.mpf(1))
        if abs(g1) > scale * mp.mpf(2) ** (-prec.bits // 2):
            raise ParameterDomain(f"g'({t0m}) = {g1} is not zero")
        if abs(g2) < mp.mpf(2) ** (-prec.bits // 2):
            raise HigherOrderSaddle("g''(t0) vanishes: saddle order >= 2")
        alpha = mpmath.arg(lamm * g2)
        angles = tuple(steepest_angles(1, alpha, prec))
    return SaddleData(t0=BigComplex.from_mpc(t0m, prec.bits), order=1,
                      g2=BigComplex.from_mpc(g2, prec.bits), angles=angles,
                      dominant=dominant)


def _pick_angle(angles, direction):
    """Choose the descent angle closest to the desired forward direction
    (default: the one most aligned with the +Re axis, preferring the
    smaller angle on ties)."""
    def wrap(x):
        return (x + mp.pi) % (2 * mp.pi) - mp.pi

    if direction is None:
        return min(angles, key=lambda th: (abs(wrap(th)), th))
    d = mp.mpf(direction)
    return min(angles, key=lambda th: (abs(wrap(th - d)), th))


def saddle_approx(pf: PhaseFunction, f: Integrand, saddle: SaddleData, lam,
                  direction=None, prec=None) -> BigComplex:
    """Second-order saddle-point approximation of int f e^(lam g) dt:

        f(t0) sqrt(2 pi / |lam g''(t0)|) exp(lam g(t0) + i theta)

    theta is the descent angle pointing along the contour's forward
    direction (`direction` hints the desired angle)."""
    if saddle.order != 1:
        raise HigherOrderSaddle("only simple saddles are supported")
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        lamm = as_mpc(lam)
        t0 = saddle.t0.to_mpc()
        g2 = saddle.g2.to_mpc()
        fv = f.raw()(t0)
        g0 = _phase_raw(pf, t0, 0)
        th = _pick_angle(saddle.angles, direction)
        v = fv * mp.sqrt(2 * mp.pi / (abs(lamm) * abs(g2))) \
            * mp.exp(lamm * g0 + 1j * th)
    return BigComplex.from_mpc(v, prec.bits)


@dataclass(frozen=True)
class Polyline:
    """Traced descent path: vertices through the saddle, with the level
    value Im(lam g(t0)) and stop reasons for the two branches."""

    vertices: tuple
    level_im: object
    stops: tuple

    def __len__(self):
        return len(self.vertices)


def _near_any(t, pts, radius):
    return any(abs(t - p) < radius for p in pts)


def _crosses_cut(pf, t_prev, t_next):
    """Does the segment cross one of the horizontal cut rays?"""
    for ray in _cut_rays(pf):
        if ray[0] == "ray_from":
            tc = ray[1]
            # parametrize ray t = u * tc, u >= 1; detect sign change of
            # Im(t / tc) with Re(t / tc) >= 1
            r1 = t_prev / tc
            r2 = t_next / tc
            if r1.imag * r2.imag < 0:
                u = r1.real + (r2.real - r1.real) * abs(r1.imag) / (
                    abs(r1.imag) + abs(r2.imag))
                if u >= 1:
                    return True
            continue
        y, lo, hi = ray
        y1 = t_prev.imag - y
        y2 = t_next.imag - y
        if y1 * y2 < 0:
            x = t_prev.real + (t_next.real - t_prev.real) * abs(y1) / (
                abs(y1) + abs(y2))
            if lo <= x <= hi:
                return True
    return False


def sd_path_trace(pf: PhaseFunction, saddle: SaddleData, lam, arclen,
                  step, prec=None, trace_tol=None) -> Polyline:
    """Predictor-corrector trace of the level set Im(lam g) = Im(lam g(t0))
    through the saddle, in both descent directions, until the arclength
    budget, a branch cut, or an endpoint/singularity is met.

    Re(lam g) decreases strictly along each branch; the step halves near
    singularities with a floor of 1e-12 times the arclength budget.
    """
    prec = _ensure_prec(prec)
    if saddle.order != 1:
        raise HigherOrderSaddle("only simple saddles are traced")
    with mp.workprec(prec.bits + GUARD):
        lamm = as_mpc(lam)
        t0 = saddle.t0.to_mpc()
        arclen = mp.mpf(arclen)
        step0 = mp.mpf(step)
        if step0 <= 0 or arclen <= 0:
            raise ParameterDomain("step and arclen must be positive")
        level = (lamm * _phase_raw(pf, t0, 0)).imag
        if trace_tol is None:
            trace_tol = mp.mpf(2) ** (-prec.bits // 3)
        sing = _singular_points(pf)
        floor = arclen * mp.mpf("1e-12")

        def correct(t):
            # Newton steps back onto Im(lam g) = level, normal to the tangent
            for _ in range(40):
                g1 = lamm * _phase_raw(pf, t, 1)
                mag = abs(g1)
                if mag == 0:
                    return t
                err = (lamm * _phase_raw(pf, t, 0)).imag - level
                if abs(err) <= trace_tol / 4:
                    return t
                tau = -mp.conj(g1) / mag
                t = t + 1j * tau * (err / mag)
            return t

        # the two branch directions from the saddle
        th_a = _pick_angle(saddle.angles, None)
        others = [x for x in saddle.angles if x != th_a]
        th_b = others[0] if others else th_a + mp.pi

        def trace_branch(theta):
            # The descent tangent away from the saddle is unique:
            # tau = -conj(lam g') / |lam g'| makes d Re(lam g)/ds = -|lam g'|.
            pts = []
            stop = "arclen"
            h = step0
            t_prev = t0
            re_prev = (lamm * _phase_raw(pf, t0, 0)).real
            direction = mp.exp(1j * theta)
            total = mp.mpf(0)
            while total < arclen:
                try:
                    cand = correct(t_prev + h * direction)
                    re_cand = (lamm * _phase_raw(pf, cand, 0)).real
                except AtSingularity:
                    stop = "endpoint"
                    break
                if re_cand >= re_prev and pts:
                    h = h / 2
                    if h < floor:
                        stop = (
                            "endpoint"
                            if _near_any(t_prev, sing, 64 * floor)
                            else "stall"
                        )
                        break
                    continue
                if _crosses_cut(pf, t_prev, cand):
                    stop = "cut"
                    break
                pts.append(cand)
                total += abs(cand - t_prev)
                t_prev = cand
                re_prev = re_cand
                if _near_any(cand, sing, 2 * h):
                    stop = "endpoint"
                    break
                g1 = lamm * _phase_raw(pf, cand, 1)
                if abs(g1) == 0:
                    stop = "stall"
                    break
                direction = -mp.conj(g1) / abs(g1)
                if h < step0:
                    h = min(step0, 2 * h)
            if stop == "stall" and not _near_any(t_prev, sing, 16 * step0):
                raise StallNearSingularity(
                    f"step underflow at t = {t_prev} away from endpoints"
                )
            return pts, stop

        fwd, stop_f = trace_branch(th_a)
        bwd, stop_b = trace_branch(th_b)
        verts = tuple(reversed(bwd)) + (t0,) + tuple(fwd)
    return Polyline(
        vertices=tuple(BigComplex.from_mpc(v, prec.bits) for v in verts),
        level_im=+level,
        stops=(stop_b, stop_f),
    )


@lru_cache(maxsize=32)
def _gl_nodes(n, bits):
    """Gauss-Legendre nodes and weights on [-1, 1] at `bits` precision."""
    with mp.workprec(bits + 16):
        nodes = []
        for k in range(1, n // 2 + 1):
            x = mp.cos(mp.pi * (k - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mp.mpf(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mp.mpf(2) ** (-bits - 8):
                    break
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append((+x, +w))
        out = []
        for x, w in nodes:
            out.append((-x, w))
        if n % 2:
            x = mp.mpf(0)
            p0, p1 = mp.mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            out.append((mp.mpf(0), 2 / (dp * dp)))
        for x, w in reversed(nodes):
            out.append((x, w))
        return tuple(out)


def _coarsen(vertices, target, keep_near, keep_radius):
    """Drop vertices down to ~target segments, keeping everything within
    keep_radius of the protected points (curvature concentrates there)."""
    if len(vertices) <= target + 1:
        return list(vertices)
    total = sum(abs(b - a) for a, b in zip(vertices, vertices[1:]))
    spacing = total / target
    out = [vertices[0]]
    acc = mp.mpf(0)
    for prev, cur in zip(vertices, vertices[1:]):
        acc += abs(cur - prev)
        if acc >= spacing or _near_any(cur, keep_near, keep_radius):
            out.append(cur)
            acc = mp.mpf(0)
    if out[-1] != vertices[-1]:
        out.append(vertices[-1])
    return out


def sd_integrate(pf: PhaseFunction, f: Integrand, path, lam, prec=None,
                 extra_points=None) -> BigComplex:
    """Composite Gauss-Legendre quadrature of f(t) e^(lam g(t)) along the
    polyline. `extra_points` prepends/appends straight closing segments
    (e.g. the exact interval endpoints the trace stopped short of)."""
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        lamm = as_mpc(lam)
        if isinstance(path, Polyline):
            verts = [v.to_mpc() for v in path.vertices]
        else:
            verts = [as_mpc(v) for v in path]
        if extra_points is not None:
            pre, post = extra_points
            if pre is not None:
                verts = [as_mpc(pre)] + verts
            if post is not None:
                verts = verts + [as_mpc(post)]
        if len(verts) < 2:
            raise ParameterDomain("path needs at least two vertices")
        sing = _singular_points(pf)
        keep = [p for p in sing]
        verts = _coarsen(verts, 160, keep, mp.mpf("0.1"))
        fr = f.raw()

        def seg_quad(p, q, nodes):
            mid = (p + q) / 2
            half = (q - p) / 2
            s = mp.mpc(0)
            for x, w in nodes:
                t = mid + half * x
                if t == 0 or t == 1 or _near_any(t, sing, mp.mpf(0)):
                    raise PathSingularity(f"node at singular point t = {t}")
                s += w * fr(t) * mp.exp(lamm * _phase_raw(pf, t, 0))
            return s * half

        n_lo = _gl_nodes(12, prec.bits + GUARD)
        n_hi = _gl_nodes(20, prec.bits + GUARD)

        def adaptive(p, q, depth):
            v1 = seg_quad(p, q, n_lo)
            v2 = seg_quad(p, q, n_hi)
            if abs(v1 - v2) <= tol_abs or depth >= 8:
                return v2
            m = (p + q) / 2
            return adaptive(p, m, depth + 1) + adaptive(m, q, depth + 1)

        # first pass for the scale, then refinement against it
        rough = mp.mpc(0)
        for p, q in zip(verts, verts[1:]):
            rough += seg_quad(p, q, n_lo)
        with mp.workprec(prec.bits):
            qtol = +prec.quadrature_tolerance
        tol_abs = max(abs(rough), mp.mpf(2) ** (-prec.bits)) * qtol
        total = mp.mpc(0)
        for p, q in zip(verts, verts[1:]):
            total += adaptive(p, q, 0)
    return BigComplex.from_mpc(total, prec.bits)


class Dominance(enum.Enum):
    SADDLE_DOMINATES = "SaddleDominates"
    INCONCLUSIVE = "Inconclusive"
    CRITICAL_DOMINATES = "CriticalDominates"


def f_eps_imag(eps, r, theta, prec=None):
    """Im g(t_c) for the real-interval phase, with z = r e^(i theta):

        (1 - eps) arg(z - 1) - theta

    (the arctan form of the same quantity, continued through
    Re(z) < 1 by the principal argument).
    """
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits):
        e = mp.mpf(eps)
        r = mp.mpf(r)
        th = mp.mpf(theta)
        zm1 = mp.mpc(r * mp.cos(th) - 1, r * mp.sin(th))
        return +((1 - e) * mpmath.arg(zm1) - th)


def h_eps_real(eps, x, prec=None):
    """Dominance function h_eps(x) = exp(Re g(t_c) - Re g(t_0)) for real x."""
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        e = mp.mpf(eps)
        x = mp.mpf(x)
        if x == 0 or x == 1:
            raise AtSingularity("h_eps undefined at x in {0, 1}")
        if e == 0 or e == 1:
            raise ParameterDomain("eps in {0, 1} excluded")
        v = (1 / (e ** e * abs(x))) * abs((x - 1) / (1 - e)) ** (1 - e)
    return +v


def critical_point_dominance(eps, z, arg_lambda, prec=None) -> Dominance:
    """Compare the contributions of the critical point t_c = 1/z and the
    saddle t0 = eps for the real-interval phase.

    For arg(lambda) != 0 the sign of Im g(t_c) against tan(arg lambda)
    decides; on the real-lambda axis the comparison is ln h_eps(Re z).
    Near the coalescence |z| = 1/eps the answer is Inconclusive.
    """
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        e = mp.mpf(eps)
        if not 0 < e < 1:
            raise DomainViolation("requires 0 < eps < 1")
        zz = as_mpc(z)
        r = abs(zz)
        th = mpmath.arg(zz)
        if abs(th) >= mp.pi / 2:
            raise DomainViolation("requires |arg z| < pi/2")
        if not r > 1 / e:
            raise DomainViolation("requires |z| > 1/eps")
        al = mp.mpf(arg_lambda)
        if abs(al) >= mp.pi / 2:
            raise DomainViolation("requires |arg lambda| < pi/2")
        tol = mp.mpf(2) ** (-prec.bits // 4)
        if abs(r - 1 / e) < tol * (1 / e):
            return Dominance.INCONCLUSIVE
        if al == 0:
            # real-axis criterion with x = Re z, used as-is for z slightly
            # off-axis (documented approximation)
            h = h_eps_real(e, zz.real, prec)
            if h < 1 - tol:
                return Dominance.SADDLE_DOMINATES
            if h > 1 + tol:
                return Dominance.CRITICAL_DOMINATES
            return Dominance.INCONCLUSIVE
        fe = f_eps_imag(e, r, th, prec)
        # Re g(t_c) - Re g(t_0) = -Im g(t_c) / tan(arg lambda)
        diff = -fe / mp.tan(al)
        if diff < -tol:
            return Dominance.SADDLE_DOMINATES
        if diff > tol:
            return Dominance.CRITICAL_DOMINATES
        return Dominance.INCONCLUSIVE


def polyline_csv(path: Polyline, pf: PhaseFunction, lam, prec=None) -> str:
    """CSV export of a traced path: idx, t_re, t_im, re_lg, im_lg."""
    prec = _ensure_prec(prec)
    digits = int(prec.bits * 0.30103) + 8
    lines = ["idx,t_re,t_im,re_lg,im_lg"]
    with mp.workprec(prec.bits + GUARD):
        lamm = as_mpc(lam)
        for i, v in enumerate(path.vertices):
            t = v.to_mpc()
            lg = lamm * _phase_raw(pf, t, 0)
            lines.append(
                f"{i},{mpmath.nstr(t.real, digits)},{mpmath.nstr(t.imag, digits)},"
                f"{mpmath.nstr(lg.real, digits)},{mpmath.nstr(lg.imag, digits)}"
            )
    return "\n".join(lines) + "\n"
