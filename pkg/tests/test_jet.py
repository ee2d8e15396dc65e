from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from synthdiff.algebra import Polynomial, parse_poly
from synthdiff.expr import Mul, as_expr, evaluate as eval_tree, parse
from synthdiff.jet import (JetError, JetPoint, cancel_d, derivative, evaluate, gradient,
                           kl_coefficients, laplacian, lift, neighbour_order, taylor_lift,
                           taylor_poly)
from synthdiff.verify import central_difference, hessian_trace, random_polynomial_expr
from synthdiff.weil import dual_numbers, first_order, kth_order, laplace_algebra, weil_tensor

F = Fraction


def close(a, b, digits=35):
    with mpmath.workprec(256):
        return abs(mpmath.mpf(a) - mpmath.mpf(b)) <= mpmath.mpf(10) ** -digits * max(1, abs(mpmath.mpf(b)))


class TestTaylorLift:
    def test_square_on_dual_numbers(self):
        D = dual_numbers()
        u = taylor_lift(parse("x^2"), JetPoint((1,), (D.generator(0),)))
        assert list(u.coeffs) == [1, 2]

    def test_exp_on_second_order(self):
        W = kth_order(2)
        u = taylor_lift(parse("exp(x)"), JetPoint.generic((0,), W))
        assert list(u.coeffs) == [1, 1, F(1, 2)]

    def test_cube_of_square_zero(self):
        u = taylor_lift(parse("x^3"), JetPoint.generic((0,), dual_numbers()))
        assert u.is_zero()

    def test_log_at_one_is_exact(self):
        u = taylor_lift(parse("log(x)"), JetPoint.generic((1,), kth_order(3)))
        assert list(u.coeffs) == [0, 1, F(-1, 2), F(1, 3)]

    def test_rational_function(self):
        # 1/(1 - x) at 0 on D_3
        u = taylor_lift(parse("1/(1 - x)"), JetPoint.generic((0,), kth_order(3)))
        assert list(u.coeffs) == [1, 1, 1, 1]

    def test_exact_mode_refuses_irrational(self):
        with pytest.raises(JetError, match="irrational"):
            taylor_lift(parse("exp(x)"), JetPoint.generic((1,), dual_numbers()))

    def test_exact_mode_refuses_floats(self):
        with pytest.raises(JetError):
            taylor_lift(parse("x"), JetPoint.generic((0.5,), dual_numbers()))

    def test_non_invertible_denominator(self):
        with pytest.raises(JetError, match="non-invertible denominator"):
            taylor_lift(parse("1/x"), JetPoint.generic((0,), dual_numbers()))

    def test_log_domain(self):
        with pytest.raises(JetError):
            taylor_lift(parse("log(x)"), JetPoint.generic((-1,), dual_numbers()), numeric=True)

    def test_numeric_second_order_frozen(self):
        # exp(x)*cos(y) at (1/3, 2): Taylor coefficients from sympy
        W = kth_order(2, 2)
        u = taylor_lift(parse("exp(x)*cos(y)"), JetPoint.generic((F(1, 3), 2), W), numeric=True)
        want = {(0, 0): "-0.580779695745461898536393668430",
                (1, 0): "-0.580779695745461898536393668430",
                (0, 1): "-1.26902678697673067004794083269",
                (2, 0): "-0.290389847872730949268196834215",
                (1, 1): "-1.26902678697673067004794083269",
                (0, 2): "0.290389847872730949268196834215"}
        for m, v in want.items():
            assert close(u.coefficient(m), v, 28)

    def test_jet_point_validation(self):
        D = dual_numbers()
        with pytest.raises(JetError):
            JetPoint((0,), (D.one(),))
        with pytest.raises(JetError):
            JetPoint((0, 0), (D.generator(0), first_order(2).generator(0)))
        with pytest.raises(JetError):
            JetPoint((0, 1), (D.generator(0),))

    def test_arity_check(self):
        with pytest.raises(JetError):
            taylor_lift(parse("x*y"), JetPoint.generic((0,), dual_numbers()))

    def test_symbolic_base(self):
        D = dual_numbers()
        x = D.scalar(Polynomial.variable(0, 1))
        u = lift(parse("x^3 - 2*x"), [x + D.generator(0)])
        assert u.coeffs[1] == parse_poly("3*x^2 - 2", 1)


class TestDerivative:
    def test_power_rule(self):
        assert derivative(parse("x^3"), 0, (2,)) == 12

    def test_exp_at_zero(self):
        assert derivative(parse("exp(x)"), 0, (0,)) == 1

    def test_sin_exp_numeric_frozen(self):
        d = derivative(parse("sin(x)*exp(x)"), 0, (1,), numeric=True)
        assert close(d, "3.756049227094727548347139504027106070283", 38)

    def test_quotient_numeric_frozen(self):
        d = derivative(parse("log(1 + x^2)/(1 + x)"), 0, (F(3, 2),), numeric=True)
        assert close(d, "0.180645969816105852014187057446934755784547941", 40)

    def test_gradient_frozen(self):
        assert gradient(parse("(x^2 + 3*y)^2*(x - y)"), (2, F(-1, 3))) == [65, 33]

    def test_against_central_difference(self):
        f = parse("cos(x*y)/(2 + sin(x))")
        with mpmath.workprec(256):
            base = [mpmath.mpf("0.7"), mpmath.mpf("-1.3")]
            d = derivative(f, 1, base, numeric=True)
            fd = central_difference(f, base, 1, mpmath.mpf("1e-30"))
            assert abs(d - fd) <= mpmath.mpf("1e-20") * abs(d)

    def test_bad_variable(self):
        with pytest.raises(JetError):
            derivative(parse("x"), 3, (0,))

    def test_derivative_node(self):
        from synthdiff.expr import Diff
        e = Diff(parse("x^3*y"), 0)
        assert evaluate(e, (2, 5)) == 60


class TestTaylorPoly:
    def test_exp(self):
        assert taylor_poly(parse("exp(x)"), (0,), 2) == parse_poly("1 + x + 1/2*x^2", 1)

    def test_product(self):
        assert taylor_poly(parse("x*y"), (0, 0), 2) == parse_poly("x*y", 2)

    def test_sin(self):
        assert taylor_poly(parse("sin(x)"), (0,), 3) == parse_poly("x - 1/6*x^3", 1)

    def test_at_shifted_base_uses_increments(self):
        # x^3*y + 2*x*y^2 around (1, 2), degree 2, in increments h1, h2
        p = taylor_poly(parse("x^3*y + 2*x*y^2"), (1, 2), 2)
        h = p.evaluate([F(1, 10), F(-1, 5)])
        exact = F(11, 10) ** 3 * F(9, 5) + 2 * F(11, 10) * F(9, 5) ** 2
        assert abs(h - exact) < F(1, 50)
        assert p.constant_term() == 10


class TestLaplacian:
    def test_sum_of_squares(self):
        assert laplacian(parse("x^2 + y^2"), (0, 0)) == 4

    def test_harmonic_polynomial(self):
        assert laplacian(parse("x^2 - y^2"), (0, 0)) == 0

    def test_harmonic_transcendental(self):
        assert laplacian(parse("exp(x)*cos(y)"), (0, 0)) == 0
        v = laplacian(parse("exp(x)*cos(y)"), (F(1, 2), 3), numeric=True)
        assert abs(v) < mpmath.mpf("1e-70")

    def test_rational_frozen(self):
        assert laplacian(parse("1/(1 + x^2 + y)"), (1, 2)) == F(1, 32)
        assert laplacian(parse("x^3*y^2 - x*y/(2 + y^2)"), (F(1, 2), -1)) == F(331, 108)

    def test_matches_hessian_trace(self):
        f = parse("x^3*y^2 - x*y/(2 + y^2)")
        assert laplacian(f, (F(1, 2), -1)) == hessian_trace(f, (F(1, 2), -1))

    def test_needs_plane(self):
        with pytest.raises(JetError):
            laplacian(parse("x"), (0,))


class TestKL:
    def test_constant(self):
        assert kl_coefficients(parse("7"), 2)[0] == [7, 0, 0]

    def test_affine(self):
        coeffs, ok = kl_coefficients(parse("x + 3*y"))
        assert coeffs == [0, 1, 3] and ok

    def test_product_vanishes(self):
        assert kl_coefficients(parse("x*y"))[0] == [0, 0, 0]

    def test_with_parameters(self):
        # f(i, d) = sin(i + d) * ... ; coefficients a(i), b(i) match per-point extraction
        D = dual_numbers()
        i = D.scalar(Polynomial.variable(0, 1))
        f = parse("x^3 + 2*x")
        u = lift(f, [i + D.generator(0)])
        for point in (F(0), F(1, 2), F(-3)):
            assert u.coeffs[0].evaluate([point]) == evaluate(f, (point,))
            assert u.coeffs[1].evaluate([point]) == derivative(f, 0, (point,))


class TestCancellation:
    def test_equal(self):
        assert cancel_d(parse("x + y"), parse("y + x"))

    def test_two_lines_slopes(self):
        # b1*d = b2*d for all d decides b1 = b2 (parameters b1, b2)
        assert not cancel_d(parse("x"), parse("y"))
        assert cancel_d(parse("x"), parse("x"))

    def test_distinct_constants(self):
        assert not cancel_d(parse("1"), parse("2"))

    def test_polynomial_identity(self):
        assert cancel_d(parse("(x + 1)^2"), parse("x^2 + 2*x + 1"))

    def test_non_polynomial_rejected(self):
        with pytest.raises(JetError):
            cancel_d(parse("exp(x)"), parse("x"))


class TestNeighbourOrder:
    def test_orders(self):
        assert neighbour_order(dual_numbers().generator(0), 0) == 1
        assert neighbour_order(kth_order(2).generator(0), 0) == 2
        u = dual_numbers().element([3, 1])
        assert neighbour_order(u, u) == 0

    def test_not_neighbours(self):
        assert neighbour_order(dual_numbers().one(), 0) is None
        assert neighbour_order(F(1), F(2)) is None


# ---------------------------------------------------------------- properties

rat = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
seeds = st.integers(0, 2**32 - 1)


@given(seeds, rat)
def test_chain_rule_exact(seed, x0):
    import random
    rng = random.Random(seed)
    g = random_polynomial_expr(rng, 1, 3)
    f = random_polynomial_expr(rng, 1, 3)
    fg = eval_tree(f, [g], lift_const=as_expr)
    gx = evaluate(g, (x0,))
    assert derivative(fg, 0, (x0,)) == derivative(f, 0, (gx,)) * derivative(g, 0, (x0,))


@given(seeds, rat, rat)
def test_lift_is_multiplicative_and_linear(seed, a, b):
    import random
    rng = random.Random(seed)
    f, g = random_polynomial_expr(rng, 2, 3), random_polynomial_expr(rng, 2, 3)
    point = JetPoint.generic((a, b), kth_order(2, 2))
    lf, lg = taylor_lift(f, point), taylor_lift(g, point)
    assert taylor_lift(Mul(f, g), point) == lf * lg
    assert taylor_lift(f + g, point) == lf + lg


@given(seeds, rat, rat)
def test_taylor_truncation(seed, a, b):
    import random
    rng = random.Random(seed)
    f = random_polynomial_expr(rng, 2, 3)
    for k in (1, 2):
        lo = taylor_poly(f, (a, b), k)
        hi = taylor_poly(f, (a, b), k + 1)
        trunc = Polynomial({m: c for m, c in hi.terms.items() if sum(m) <= k}, 2)
        assert lo == trunc


@given(seeds, rat, rat)
def test_laplacian_is_hessian_trace(seed, a, b):
    import random
    rng = random.Random(seed)
    f = random_polynomial_expr(rng, 2, 4)
    assert laplacian(f, (a, b)) == hessian_trace(f, (a, b))
