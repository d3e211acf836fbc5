"""Arbitrary-precision complex arithmetic and the gamma-function family.

``BigComplex`` is the value type that crosses module boundaries: an
immutable complex number carrying its binary precision. Arithmetic between
operands of different precision promotes to the larger one. The argument
convention is arg in (-pi, pi] globally; every non-integer power in this
package is exp(s * log w) with the principal logarithm.

Internally, modules unwrap to ``mpmath.mpc`` under an ``mp.workprec``
block and wrap results back at the caller's precision. The raw helpers
(``lgamma_raw`` and friends) assume the working precision is already set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import (
    AtSingularity,
    BelowThreshold,
    NonConvergent,
    ParameterDomain,
    PoleAtNonPositiveInteger,
)

DEFAULT_BITS = 256
MIN_BITS = 64

# Guard bits added to working precision inside operations.
GUARD = 24


def _to_raw(x):
    """Coerce x to an mpmath number at the current working precision.

    Accepts BigComplex, mpmath types, Python numbers, exact Fractions and
    decimal strings.
    """
    if isinstance(x, BigComplex):
        return x.to_mpc()
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    if isinstance(x, complex):
        return mp.mpc(x.real, x.imag)
    return mp.mpc(x) if isinstance(x, mpmath.mpc) else mp.convert(x)


def clean_zero_im(w):
    """Normalize a signed-zero imaginary part to +0 so that principal-branch
    functions evaluate on the arg in (-pi, pi] convention."""
    w = mp.mpc(w)
    if w.imag == 0:
        return mp.mpc(w.real, 0)
    return w


def plog(w, on_cut_sign=1):
    """Principal log with an explicit side choice on the negative real axis.

    on_cut_sign=+1 gives arg = +pi there (the plain principal value,
    i.e. continuity from Im w -> 0+); -1 gives arg = -pi.
    """
    w = mp.mpc(w)
    if w.imag == 0:
        if w.real == 0:
            raise AtSingularity("log of zero")
        if w.real < 0:
            return mp.mpc(mp.log(-w.real), on_cut_sign * mp.pi)
        return mp.mpc(mp.log(w.real), 0)
    return mp.log(w)


def ppow(w, s, on_cut_sign=1):
    """w**s as exp(s * plog(w)); integer s uses the exact branch-free power.

    0**s is 0 for Re(s) > 0, 1 for s = 0, and raises otherwise.
    """
    w = mp.mpc(w)
    s = mp.mpc(s)
    if s.imag == 0 and s.real == int(s.real) and abs(s.real) < 1e6:
        n = int(s.real)
        if w == 0:
            if n > 0:
                return mp.mpc(0)
            if n == 0:
                return mp.mpc(1)
            raise AtSingularity("0 raised to a negative power")
        return w ** n
    if w == 0:
        if s.real > 0:
            return mp.mpc(0)
        if s == 0:
            return mp.mpc(1)
        raise AtSingularity("0 raised to a non-positive power")
    return mp.exp(s * plog(w, on_cut_sign))


def nearest_int(x) -> int:
    return int(mp.nint(mp.mpf(x)))


def is_nonpos_int(w, tol=None) -> bool:
    """True when w is a non-positive integer to within tol (exact if tol None)."""
    w = mp.mpc(w)
    if tol is None:
        return w.imag == 0 and w.real <= 0 and w.real == mp.nint(w.real)
    n = mp.nint(w.real)
    return n <= 0 and abs(w.imag) <= tol and abs(w.real - n) <= tol


class BigComplex:
    """Immutable arbitrary-precision complex value with explicit precision.

    Fields: ``re``, ``im`` (mpf) and ``precision_bits`` (>= 64). Arithmetic
    between operands of different precision promotes to the max precision.
    A signed-zero imaginary part is normalized to +0 at construction so
    that the argument lies in (-pi, pi].
    """

    __slots__ = ("_re", "_im", "precision_bits")

    def __init__(self, re=0, im=0, precision_bits=None):
        if precision_bits is None:
            precision_bits = DEFAULT_BITS
        precision_bits = int(precision_bits)
        if precision_bits < MIN_BITS:
            raise ParameterDomain(
                f"precision_bits must be >= {MIN_BITS}, got {precision_bits}"
            )
        object.__setattr__(self, "precision_bits", precision_bits)
        with mp.workprec(precision_bits):
            if isinstance(re, BigComplex):
                v = re.to_mpc() + mp.mpc(_to_raw(im))
            else:
                v = mp.mpc(_to_raw(re)) + mp.mpc(0, 1) * mp.mpc(_to_raw(im)) \
                    if im else mp.mpc(_to_raw(re))
            v = clean_zero_im(v)
        object.__setattr__(self, "_re", v.real)
        object.__setattr__(self, "_im", v.imag)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("BigComplex is immutable")

    @classmethod
    def from_mpc(cls, v, precision_bits=None):
        out = cls.__new__(cls)
        bits = int(precision_bits or DEFAULT_BITS)
        if bits < MIN_BITS:
            raise ParameterDomain(f"precision_bits must be >= {MIN_BITS}")
        with mp.workprec(bits):
            v = clean_zero_im(+mp.mpc(v))
        object.__setattr__(out, "precision_bits", bits)
        object.__setattr__(out, "_re", v.real)
        object.__setattr__(out, "_im", v.imag)
        return out

    @classmethod
    def from_rational(cls, num, den=1, precision_bits=None):
        bits = int(precision_bits or DEFAULT_BITS)
        with mp.workprec(bits):
            v = mp.mpf(num) / mp.mpf(den)
        return cls.from_mpc(v, bits)

    @property
    def re(self):
        return self._re

    @property
    def im(self):
        return self._im

    def to_mpc(self):
        # make_mpc keeps the stored mantissas exactly, independent of the
        # ambient working precision
        return mp.make_mpc((self._re._mpf_, self._im._mpf_))

    @property
    def modulus(self):
        with mp.workprec(self.precision_bits):
            return abs(self.to_mpc())

    @property
    def argument(self):
        """Argument in (-pi, pi]; negative reals map to +pi."""
        with mp.workprec(self.precision_bits):
            return mpmath.arg(self.to_mpc())

    # -- arithmetic ------------------------------------------------------

    def _bits_with(self, other):
        if isinstance(other, BigComplex):
            return max(self.precision_bits, other.precision_bits)
        return self.precision_bits

    def _binop(self, other, op):
        bits = self._bits_with(other)
        with mp.workprec(bits):
            a = self.to_mpc()
            b = _to_raw(other)
            return BigComplex.from_mpc(op(a, b), bits)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __pow__(self, other):
        bits = self._bits_with(other)
        with mp.workprec(bits + GUARD):
            v = ppow(self.to_mpc(), _to_raw(other))
        return BigComplex.from_mpc(v, bits)

    def __neg__(self):
        with mp.workprec(self.precision_bits):
            return BigComplex.from_mpc(-self.to_mpc(), self.precision_bits)

    def __abs__(self):
        return self.modulus

    def conjugate(self):
        return BigComplex.from_mpc(mp.mpc(self._re, -self._im), self.precision_bits)

    def __eq__(self, other):
        if isinstance(other, BigComplex):
            return self._re == other._re and self._im == other._im
        try:
            o = _to_raw(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.to_mpc() == o

    def __hash__(self):
        return hash((self._re, self._im))

    def __complex__(self):
        return complex(float(self._re), float(self._im))

    def __repr__(self):
        return (
            f"BigComplex({mpmath.nstr(self._re, 17)!r}, "
            f"{mpmath.nstr(self._im, 17)!r}, bits={self.precision_bits})"
        )


def as_mpc(x):
    """Unwrap any supported numeric input to mpc at the current precision."""
    return clean_zero_im(mp.mpc(_to_raw(x)))


@dataclass(frozen=True)
class Precision:
    """Evaluation precision: binary precision plus series/quadrature targets.

    ``series_tail_tolerance`` is the relative stopping/escape target for
    series evaluation; ``quadrature_tolerance`` the relative target for
    numerical integration. Both must be positive and no smaller than one
    ulp at ``bits``.
    """

    bits: int = DEFAULT_BITS
    series_tail_tolerance: object = None
    quadrature_tolerance: object = None

    def __post_init__(self):
        if self.bits < MIN_BITS:
            raise ParameterDomain(f"bits must be >= {MIN_BITS}")
        with mp.workprec(self.bits):
            st = self.series_tail_tolerance
            qt = self.quadrature_tolerance
            if st is None:
                st = mp.mpf(2) ** (-(self.bits - 16))
            else:
                st = mp.mpf(st)
            if qt is None:
                qt = mp.mpf(2) ** (-min(self.bits - 16, 100))
            else:
                qt = mp.mpf(qt)
            for name, tol in (("series_tail_tolerance", st),
                              ("quadrature_tolerance", qt)):
                if not tol > 0:
                    raise ParameterDomain(f"{name} must be positive")
                if tol < mp.mpf(2) ** (1 - self.bits):
                    raise ParameterDomain(
                        f"{name} below one ulp at {self.bits} bits"
                    )
        object.__setattr__(self, "series_tail_tolerance", st)
        object.__setattr__(self, "quadrature_tolerance", qt)

    @classmethod
    def default(cls, bits: int = DEFAULT_BITS) -> "Precision":
        return cls(bits=bits)


def _ensure_prec(prec) -> Precision:
    if prec is None:
        return Precision.default()
    if isinstance(prec, Precision):
        return prec
    return Precision(bits=int(prec))


# ---------------------------------------------------------------------------
# Gamma family (raw mpc level; working precision must be set by the caller)
# ---------------------------------------------------------------------------

def _pole_check(w, prec_bits):
    tol = mp.mpf(2) ** (-(3 * prec_bits) // 4)
    if is_nonpos_int(w, tol):
        raise PoleAtNonPositiveInteger(f"Gamma pole at {w}")


def lgamma_raw(w):
    """Principal branch of ln Gamma at the current working precision.

    Stirling's series after shifting the argument right until Re(w) clears
    a precision-dependent threshold; the recurrence subtracts principal
    logs, which reproduces the principal lnGamma branch on the cut plane.
    """
    prec = mp.prec
    w = clean_zero_im(mp.mpc(w))
    _pole_check(w, prec)
    # Threshold so that the optimally-truncated Stirling tail is below 2^-prec.
    target = max(32, int(0.14 * prec) + 6)
    for _ in range(3):
        acc = mp.mpc(0)
        ww = w
        guard = 0
        while ww.real < target:
            acc += plog(ww)
            ww += 1
            guard += 1
            if guard > 100000:
                raise ParameterDomain("argument too far left of the axis")
        s = (ww - mp.mpf(1) / 2) * plog(ww) - ww + mp.log(2 * mp.pi) / 2
        w2 = 1 / (ww * ww)
        t = 1 / ww
        eps = mp.mpf(2) ** (-prec - 8)
        k = 1
        prev = mp.inf
        ok = False
        while True:
            c = mp.bernoulli(2 * k) / (2 * k * (2 * k - 1))
            term = c * t
            mag = abs(term)
            if mag >= prev:
                break  # asymptotic tail bottomed out
            s += term
            if mag <= eps * max(abs(s), mp.mpf(1)):
                ok = True
                break
            prev = mag
            t *= w2
            k += 1
        if ok:
            return s - acc
        target = int(target * 3 / 2) + 4
    raise NonConvergent("Stirling series did not reach working precision")


def rgamma_raw(w):
    """1 / Gamma(w), entire; exactly 0 at non-positive integers."""
    w = clean_zero_im(mp.mpc(w))
    if is_nonpos_int(w):
        return mp.mpc(0)
    if w.real >= 0.5:
        return mp.exp(-lgamma_raw(w))
    return mp.sinpi(w) / mp.pi * mp.exp(lgamma_raw(1 - w))


def gammaprod_raw(num, den):
    """exp(sum lgamma(num)) * prod rgamma(den); den entries may sit at poles
    (the factor is then exactly 0)."""
    s = mp.mpc(0)
    for x in num:
        s += lgamma_raw(x)
    out = mp.exp(s)
    for x in den:
        out *= rgamma_raw(x)
    return out


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def log_gamma(z, prec=None) -> BigComplex:
    """Principal branch of ln Gamma(z); exp(log_gamma(z)) = Gamma(z).

    Raises PoleAtNonPositiveInteger at (or within tolerance of) the poles.
    """
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        v = lgamma_raw(_to_raw(z))
    return BigComplex.from_mpc(v, prec.bits)


def reciprocal_gamma(z, prec=None) -> BigComplex:
    """1/Gamma(z) everywhere, including exact 0 at non-positive integers."""
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        v = rgamma_raw(_to_raw(z))
    return BigComplex.from_mpc(v, prec.bits)


def pochhammer(x, n: int, prec=None) -> BigComplex:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1), computed as a finite
    product; (x)_0 = 1."""
    if n < 0 or n != int(n):
        raise ParameterDomain("pochhammer order must be a natural number")
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        xx = _to_raw(x)
        out = mp.mpc(1)
        for k in range(int(n)):
            out *= xx + k
    return BigComplex.from_mpc(out, prec.bits)


def stirling_lgamma(z, prec=None, threshold=10.0) -> BigComplex:
    """Leading Stirling approximation (z - 1/2) ln z - z + ln(2 pi)/2.

    Requires Re(z) > 0 and |z| >= threshold; the relative error of
    exp(result) against Gamma(z) decays like 1/(12 |z|).
    """
    prec = _ensure_prec(prec)
    with mp.workprec(prec.bits + GUARD):
        w = as_mpc(z)
        if not w.real > 0:
            raise ParameterDomain("stirling_lgamma requires Re(z) > 0")
        if abs(w) < threshold:
            raise BelowThreshold(
                f"|z| = {abs(w)} below Stirling threshold {threshold}"
            )
        v = (w - mp.mpf(1) / 2) * plog(w) - w + mp.log(2 * mp.pi) / 2
    return BigComplex.from_mpc(v, prec.bits)


def refine(eval_fn, bits=DEFAULT_BITS, rel_tol=None, max_doublings=6):
    """Escalation loop: call eval_fn(bits) at doubling precision until two
    consecutive evaluations agree to rel_tol (default: 2^-(bits-8)).

    Returns (value: BigComplex, est_rel_error: mpf). This is the caller-side
    loop referred to throughout: operations that track their own error
    internally do not need it.
    """
    with mp.workprec(bits + GUARD):
        if rel_tol is None:
            rel_tol = mp.mpf(2) ** (-(bits - 8))
        else:
            rel_tol = mp.mpf(rel_tol)
    prev = as_mpc_at(eval_fn(bits), bits)
    cur_bits = bits
    for _ in range(max_doublings):
        cur_bits *= 2
        cur = as_mpc_at(eval_fn(cur_bits), cur_bits)
        with mp.workprec(cur_bits):
            denom = max(abs(cur), abs(prev))
            err = abs(cur - prev) / denom if denom > 0 else mp.mpf(0)
            if err <= rel_tol:
                return BigComplex.from_mpc(cur, bits), err
        prev = cur
    raise NonConvergent(
        f"no agreement to {rel_tol} within {max_doublings} doublings"
    )


def as_mpc_at(x, bits):
    with mp.workprec(bits):
        return as_mpc(x)
