from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from hgfae.errors import (
    ContourEnclosesCriticalPoint,
    DivergesAtOne,
    NonConvergent,
    ParameterDomain,
    SingularityOnPath,
    UndefinedC,
)
from hgfae.hgf import (
    EvalMethod,
    HgfInput,
    hgf_eval,
    hgf_ode_residual,
    hgf_quadrature_a,
    hgf_quadrature_loop,
    hgf_series,
)
from hgfae.numerics import BigComplex, Precision

from conftest import rel_err

PREC = Precision.default()
TOL = mp.mpf(10) ** -65


def finite_sum_oracle(a, b, c, z):
    """Independent exact evaluation of a terminating series in rationals."""
    a, b, c, z = Fraction(a), Fraction(b), Fraction(c), Fraction(z)
    total = Fraction(1)
    term = Fraction(1)
    n = 0
    while True:
        fac_a = a + n
        fac_b = b + n
        if fac_a == 0 or fac_b == 0:
            return total
        term = term * fac_a * fac_b / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        if n > 10000:
            raise RuntimeError("not terminating")


class TestSeries:
    def test_at_zero_is_one(self, rng):
        for _ in range(5):
            inp = HgfInput(rng.uniform(-3, 3), rng.uniform(-3, 3),
                           rng.uniform(0.5, 4), 0)
            out = hgf_series(inp, PREC)
            assert out.value.re == 1 and out.value.im == 0

    def test_terminating_example(self):
        # F(-2,1;1;z) = 1 - 2z + z^2; at z=2: 1 - 4 + 4 = 1
        out = hgf_series(HgfInput(-2, 1, 1, 2), PREC)
        assert out.method == EvalMethod.TERMINATING_POLYNOMIAL
        assert rel_err(out.value, finite_sum_oracle(-2, 1, 1, 2)) < TOL
        assert out.value.re == 1

    def test_log_identity(self):
        # F(1,1;2;z) = -ln(1-z)/z
        out = hgf_series(HgfInput(1, 1, 2, "0.5"), PREC)
        with mp.workprec(320):
            want = 2 * mp.log(2)
        assert rel_err(out.value, want) < TOL

    def test_nonconvergent_outside_disk(self):
        with pytest.raises(NonConvergent):
            hgf_series(HgfInput("0.5", "0.5", 2, "1.2"), PREC)

    def test_undefined_c(self):
        with pytest.raises(UndefinedC):
            HgfInput("0.5", "0.5", -2, "0.3")
        # terminating before the offending term is fine
        out = hgf_series(HgfInput(-2, 1, -3, "0.5"), PREC)
        assert rel_err(out.value, finite_sum_oracle(-2, 1, -3, Fraction(1, 2))) < TOL


class TestEval:
    def test_terminating_any_z(self):
        # independent oracle: exact finite sum in rationals gives 16 at z=5
        want = finite_sum_oracle(-2, 1, 1, 5)
        assert want == 16
        out = hgf_eval(HgfInput(-2, 1, 1, 5), PREC)
        assert out.method == EvalMethod.TERMINATING_POLYNOMIAL
        assert rel_err(out.value, want) < TOL

    def test_pfaff_route_log_identity(self):
        # F(1,1;2;-3) = -ln(4)/(-3)
        out = hgf_eval(HgfInput(1, 1, 2, -3), PREC)
        assert out.method == EvalMethod.PFAFF_CONTINUATION
        with mp.workprec(320):
            want = mp.log(4) / 3
        assert rel_err(out.value, want) < TOL

    def test_pfaff_equals_series_inside_disk(self, rng):
        # route cross-check at z = 0.4: direct series vs forced Pfaff map
        from hgfae.hgf import _series_raw
        for _ in range(8):
            a = mp.mpc(rng.uniform(0.2, 2.5), rng.uniform(-1, 1))
            b = mp.mpc(rng.uniform(0.2, 2.5), 0)
            c = mp.mpc(rng.uniform(2.6, 5), rng.uniform(-1, 1))
            z = mp.mpf("0.4")
            with mp.workprec(340):
                direct, _, _ = _series_raw(a, b, c, z, mp.mpf(2) ** -300)
                zp = z / (z - 1)
                pf, _, _ = _series_raw(c - a, b, c, zp, mp.mpf(2) ** -300)
                pfaff = (1 - z) ** (-b) * pf
            assert rel_err(direct, pfaff) < TOL

    def test_symmetry_in_a_b(self, rng):
        for _ in range(100):
            a = BigComplex(rng.uniform(-3, 3), rng.uniform(-1, 1))
            b = BigComplex(rng.uniform(-3, 3), rng.uniform(-1, 1))
            c = BigComplex(rng.uniform(0.5, 4), 0)
            z = BigComplex(rng.uniform(-0.7, 0.7), rng.uniform(-0.2, 0.2))
            v1 = hgf_eval(HgfInput(a, b, c, z), PREC).value
            v2 = hgf_eval(HgfInput(b, a, c, z), PREC).value
            assert rel_err(v1, v2) < TOL

    def test_pfaff_involution(self, rng):
        # applying the Pfaff map twice returns the original value
        for _ in range(20):
            a = mp.mpf(rng.uniform(0.2, 2))
            b = mp.mpf(rng.uniform(0.2, 2))
            c = mp.mpf(rng.uniform(2.2, 5))
            z = mp.mpc(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3))
            with mp.workprec(320):
                zp = z / (z - 1)
                inner = hgf_eval(
                    HgfInput(BigComplex.from_mpc(c - a), BigComplex.from_mpc(b),
                             BigComplex.from_mpc(c), BigComplex.from_mpc(zp)),
                    PREC,
                ).value.to_mpc()
                once = (1 - z) ** (-b) * inner
                direct = hgf_eval(
                    HgfInput(BigComplex.from_mpc(a), BigComplex.from_mpc(b),
                             BigComplex.from_mpc(c), BigComplex.from_mpc(z)),
                    PREC,
                ).value.to_mpc()
            assert rel_err(once, direct) < TOL

    def test_euler_transformation(self, rng):
        # (1-z)^(c-a-b) F(c-a, c-b; c; z) = F(a, b; c; z) for |z| < 1
        for _ in range(15):
            a = mp.mpf(rng.uniform(0.1, 2))
            b = mp.mpf(rng.uniform(0.1, 2))
            c = mp.mpf(rng.uniform(2.2, 5))
            z = mp.mpc(rng.uniform(-0.7, 0.7), rng.uniform(-0.2, 0.2))
            with mp.workprec(320):
                lhs = (1 - z) ** (c - a - b) * hgf_eval(
                    HgfInput(BigComplex.from_mpc(c - a), BigComplex.from_mpc(c - b),
                             BigComplex.from_mpc(c), BigComplex.from_mpc(z)),
                    PREC,
                ).value.to_mpc()
                rhs = hgf_eval(
                    HgfInput(BigComplex.from_mpc(a), BigComplex.from_mpc(b),
                             BigComplex.from_mpc(c), BigComplex.from_mpc(z)),
                    PREC,
                ).value.to_mpc()
            assert rel_err(lhs, rhs) < TOL

    def test_diverges_at_one(self):
        with pytest.raises(DivergesAtOne):
            hgf_eval(HgfInput(1, 1, 2, 1), PREC)

    def test_gauss_value_at_one(self):
        out = hgf_eval(HgfInput("0.3", "0.4", 2, 1), PREC)
        with mp.workprec(320):
            a, b, c = mp.mpf("0.3"), mp.mpf("0.4"), mp.mpf(2)
            want = (mp.gamma(c) * mp.gamma(c - a - b)
                    / (mp.gamma(c - a) * mp.gamma(c - b)))
        assert rel_err(out.value, want) < TOL

    def test_on_cut_both_sides(self):
        # F(1,1;2;4) = -ln(1-4)/4 with ln(-3) = ln 3 +/- i pi by side
        for side, sgn in ((1, 1), (-1, -1)):
            out = hgf_eval(HgfInput(1, 1, 2, 4, cut_side=side), PREC)
            with mp.workprec(320):
                want = -(mp.log(3) + sgn * 1j * mp.pi) / 4
            assert rel_err(out.value, want) < TOL

    def test_cut_flag_required(self):
        with pytest.raises(ParameterDomain):
            HgfInput(1, 1, 2, 4, on_cut_arg_zero=False)

    def test_matches_mpmath_across_plane(self, rng):
        # broad consistency net against an external implementation
        pts = [
            mp.mpc("0.3", "0.2"), mp.mpc("-2.5", "0.0"), mp.mpc("0.9", "0.05"),
            mp.mpc("1.7", "0.3"), mp.mpc("3.5", "-0.4"), mp.mpc("0.95"),
            mp.mpc("-0.99"), mp.mpc("2.2", "1.1"),
        ]
        for z in pts:
            a = mp.mpf("0.37")
            b = mp.mpf("1.41")
            c = mp.mpf("2.93")
            out = hgf_eval(
                HgfInput(BigComplex.from_mpc(a), BigComplex.from_mpc(b),
                         BigComplex.from_mpc(c), BigComplex.from_mpc(z)),
                PREC,
            )
            with mp.workprec(340):
                want = mpmath.hyp2f1(a, b, c, z)
            assert rel_err(out.value, want) < mp.mpf(10) ** -40, f"z={z}"


class TestOdeResidual:
    def test_small_residual(self):
        r = hgf_ode_residual(HgfInput(1, 1, 2, "0.3"), "1e-6", PREC)
        assert r < mp.mpf(10) ** -9

    def test_constant_solution(self):
        r = hgf_ode_residual(HgfInput(0, "1.5", "2.2", "0.4"), "1e-6", PREC)
        assert r == 0

    def test_quadratic_convergence(self):
        rs = [
            hgf_ode_residual(HgfInput("0.8", "1.3", "2.5", "0.35"), h, PREC)
            for h in ("1e-4", "5e-5", "2.5e-5")
        ]
        for r_big, r_small in zip(rs, rs[1:]):
            ratio = r_big / r_small
            assert 3.0 < ratio < 5.0

    def test_truncation_bound(self, rng):
        # residual stays within a small multiple of the h^2 truncation scale
        for _ in range(5):
            a = mp.mpf(rng.uniform(0.2, 1.5))
            b = mp.mpf(rng.uniform(0.2, 1.5))
            c = mp.mpf(rng.uniform(1.8, 3.5))
            z = mp.mpf(rng.uniform(0.1, 0.6))
            h = mp.mpf("1e-5")
            r = hgf_ode_residual(
                HgfInput(BigComplex.from_mpc(a), BigComplex.from_mpc(b),
                         BigComplex.from_mpc(c), BigComplex.from_mpc(z)),
                h, PREC)
            assert r < 10 * h ** 2


class TestQuadratureA:
    def test_b_zero_normalization(self):
        out = hgf_quadrature_a(HgfInput("0.7", 0, "1.9", "0.3"), PREC)
        assert rel_err(out.value, 1) < PREC.quadrature_tolerance * 100

    def test_log_identity(self):
        out = hgf_quadrature_a(HgfInput(1, 1, 2, "0.5"), PREC)
        with mp.workprec(320):
            want = 2 * mp.log(2)
        assert rel_err(out.value, want) < mp.mpf(10) ** -25

    def test_matches_eval(self, rng):
        for _ in range(6):
            a = mp.mpf(rng.uniform(0.3, 1.8))
            c = a + mp.mpf(rng.uniform(0.5, 2))
            b = mp.mpf(rng.uniform(-1.2, 2.2))
            z = mp.mpc(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3))
            inp = HgfInput(BigComplex.from_mpc(a), BigComplex.from_mpc(b),
                           BigComplex.from_mpc(c), BigComplex.from_mpc(z))
            v_quad = hgf_quadrature_a(inp, PREC).value
            v_ref = hgf_eval(inp, PREC).value
            assert rel_err(v_quad, v_ref) < mp.mpf(10) ** -20

    def test_parameter_domain(self):
        with pytest.raises(ParameterDomain):
            hgf_quadrature_a(HgfInput(-1.5, 1, 2, "0.3"), PREC)

    def test_singularity_on_path(self):
        with pytest.raises(SingularityOnPath):
            hgf_quadrature_a(HgfInput("0.5", "0.5", 2, 3), PREC)
        # but a polynomial (1-zt) factor is fine for z > 1
        out = hgf_quadrature_a(HgfInput("0.5", -2, 2, 3), PREC)
        ref = hgf_eval(HgfInput("0.5", -2, 2, 3), PREC).value
        assert rel_err(out.value, ref) < mp.mpf(10) ** -20


class TestQuadratureLoop:
    def test_b_zero_any_z(self, rng):
        # z-independent normalization check, degenerate c - a handled
        for z in ("2.7", "-4.0", "0.3"):
            out = hgf_quadrature_loop(HgfInput(1, 0, 3, z), "B", PREC)
            assert rel_err(out.value, 1) < mp.mpf(10) ** -25

    def test_variant_b_vs_series(self):
        inp = HgfInput(1, 2, 3, "0.25")
        v_loop = hgf_quadrature_loop(inp, "B", PREC).value
        v_ser = hgf_series(inp, PREC).value
        assert rel_err(v_loop, v_ser) < mp.mpf(10) ** -25

    def test_variant_c_vs_eval(self):
        inp = HgfInput("0.5", 1, 2, BigComplex.from_rational(1, 3))
        v_loop = hgf_quadrature_loop(inp, "C", PREC).value
        v_ref = hgf_eval(inp, PREC).value
        assert rel_err(v_loop, v_ref) < mp.mpf(10) ** -25

    def test_contour_exclusion(self):
        # 1/z inside the circle around 1 for z ~ 1
        with pytest.raises(ContourEnclosesCriticalPoint):
            hgf_quadrature_loop(HgfInput("0.6", "0.7", "2.5", "0.95"), "B", PREC)

    def test_parameter_domain(self):
        with pytest.raises(ParameterDomain):
            hgf_quadrature_loop(HgfInput(-0.5, 1, 2, "0.3"), "B", PREC)
        with pytest.raises(ParameterDomain):
            hgf_quadrature_loop(HgfInput(3, 1, 2, "0.3"), "C", PREC)


def test_all_routes_pairwise_agreement(rng):
    # series, quadrature A, loops B and C agree on the common domain
    for _ in range(4):
        a = mp.mpf(rng.uniform(0.3, 1.4))
        c = a + mp.mpf(rng.uniform(0.6, 1.8))
        b = mp.mpf(rng.uniform(-0.8, 1.8))
        z = mp.mpc(rng.uniform(0.05, 0.6), rng.uniform(-0.2, 0.2))
        inp = HgfInput(BigComplex.from_mpc(a), BigComplex.from_mpc(b),
                       BigComplex.from_mpc(c), BigComplex.from_mpc(z))
        vals = [
            hgf_series(inp, PREC).value,
            hgf_quadrature_a(inp, PREC).value,
            hgf_quadrature_loop(inp, "B", PREC).value,
            hgf_quadrature_loop(inp, "C", PREC).value,
        ]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                assert rel_err(vals[i], vals[j]) < mp.mpf(10) ** -15
