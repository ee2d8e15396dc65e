"""
Derivatives by evaluating on infinitesimals
===========================================

Plug x + d into f with d^2 = 0 and read off f(x) + f'(x) d.  Higher
order algebras give Taylor coefficients, and the Laplace algebra gives
the Laplacian in a single evaluation.
"""

from fractions import Fraction

import mpmath

from synthdiff import expr, jet

# exact rational arithmetic for rational functions
f = expr.parse("x^3 - 2*x/(1 + x^2)", ["x"])
print("f'(1/2)      =", jet.derivative(f, 0, [Fraction(1, 2)]))

# transcendental functions at arbitrary points need numeric mode
g = expr.parse("sin(x)*exp(x)", ["x"])
with mpmath.workdps(40):
    print("(sin e^x)'(1) =", mpmath.nstr(jet.derivative(g, 0, [1], numeric=True), 35))

# a whole gradient and the degree-two Taylor polynomial, in increments h1, h2
h = expr.parse("x^2*y + y^3", ["x", "y"])
print("grad h(2,1)  =", jet.gradient(h, [2, 1]))
print("taylor_2     =", jet.taylor_poly(h, [2, 1], 2).to_string(["h1", "h2"]))

# the Laplacian, computed from one lift into the Laplace algebra
print("Δh(2,1)      =", jet.laplacian(h, [2, 1]))

# cancellation: d*u = d*v for every square-zero d decides u = v
u = expr.parse("(x + 1)^2", ["x"])
v = expr.parse("x^2 + 2*x + 1", ["x"])
print("cancel_d     =", jet.cancel_d(u, v))
