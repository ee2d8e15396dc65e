"""One test per acceptance criterion; each prints a PASS/FAIL line.

Oracles here are independent of the code under test where possible:
sympy for symbolic derivatives and polynomial identities, mpmath central
differences, closed-form curvature radii.
"""

import itertools
import random
import time
from fractions import Fraction
from math import comb

import mpmath
import numpy as np
import sympy

from synthdiff import combinat as cb
from synthdiff import envelope as env
from synthdiff import expr as ex
from synthdiff import jet
from synthdiff import verify as vf
from synthdiff import wavefront as wf
from synthdiff.groups import named_group
from synthdiff.weil import (dual_numbers, first_order, kth_order, laplace_algebra, monad_check,
                            weil_tensor)

SEED = 20240601


def to_sympy(e: ex.Expr, names):
    syms = {n: sympy.Symbol(n) for n in names}
    return sympy.sympify(e.to_string(names).replace("^", "**"), locals=syms), [syms[n] for n in names]


def test_weil_dimensions(acceptance):
    t0 = time.perf_counter()
    D = dual_numbers()
    got = {"D": D.dimension, "D⊗D": weil_tensor(D, D).dimension, "D_L": laplace_algebra().dimension}
    want = {"D": 2, "D⊗D": 4, "D_L": 4}
    for n in range(1, 5):
        got[f"D({n})"], want[f"D({n})"] = first_order(n).dimension, n + 1
    for n, k in itertools.product(range(1, 5), repeat=2):
        got[f"D_{k}({n})"], want[f"D_{k}({n})"] = kth_order(k, n).dimension, comb(n + k, k)
    seconds = time.perf_counter() - t0
    bad = {k: (got[k], want[k]) for k in want if got[k] != want[k]}
    ok = not bad and seconds < 1
    acceptance(1, "Weil dimensions", ok, f"{len(want)} algebras, {seconds:.2f} s" + (f", wrong {bad}" if bad else ""))
    assert ok


def test_derivative_oracle(acceptance):
    rng = random.Random(SEED)
    prec = 256
    worst = mpmath.mpf(0)
    failures = []
    with mpmath.workprec(prec):
        h = mpmath.mpf("1e-30")
        for k in range(100):
            nvars = rng.randint(1, 3)
            names = vf.syms_names(nvars)
            f = vf.random_smooth_expr(rng, nvars, 5)
            base = [vf.random_rational(rng, 4, 4) for _ in range(nvars)]
            var = rng.randrange(nvars)
            mbase = [mpmath.mpf(b.numerator) / b.denominator for b in base]
            dual = jet.derivative(f, var, mbase, numeric=True, prec=prec)
            # central difference of an independently built sympy/mpmath function
            sf, syms = to_sympy(f, names)
            fn = sympy.lambdify(syms, sf, modules="mpmath")
            up, dn = list(mbase), list(mbase)
            up[var] += h
            dn[var] -= h
            fd = (fn(*up) - fn(*dn)) / (2 * h)
            scale = max(abs(dual), abs(fd))
            err = abs(dual - fd) / scale if scale else mpmath.mpf(0)
            worst = max(worst, err)
            if err > mpmath.mpf("1e-20"):
                failures.append((f.to_string(names), base, var, float(err)))

    rng = random.Random(SEED + 1)
    lap_bad = []
    x, y = sympy.symbols("x y")
    for k in range(100):
        f = vf.random_polynomial_expr(rng, 2, 4)
        if k % 2:
            f = ex.Div(f, ex.Add(ex.Const(Fraction(1)), ex.Pow(vf.random_polynomial_expr(rng, 2, 2), 2)))
        base = [vf.random_rational(rng), vf.random_rational(rng)]
        lap = jet.laplacian(f, base)
        trace = vf.hessian_trace(f, base)
        sf, _ = to_sympy(f, ["x", "y"])
        exact = sympy.Rational(sympy.simplify((sf.diff(x, 2) + sf.diff(y, 2)).subs({x: base[0], y: base[1]})))
        if not (lap == trace == Fraction(int(exact.p), int(exact.q))):
            lap_bad.append((f.to_string(["x", "y"]), base, lap, trace, exact))
    ok = not failures and not lap_bad
    acceptance(2, "derivative oracle", ok,
               f"worst relative error {mpmath.nstr(worst, 3)}, {len(failures)} derivative and "
               f"{len(lap_bad)} Laplacian mismatches")
    assert not failures, failures[:3]
    assert not lap_bad, lap_bad[:3]


def test_courant(acceptance):
    t0 = time.perf_counter()
    fam = env.Family.parse("y-(x-t)^3")
    locus = env.envelope_eliminate(fam)
    E = locus.eliminant
    x_only = all(m[0] == 0 for m in E.terms)
    y_squared = set(E.terms) == {(0, 2)} and E.terms[(0, 2)] != 0

    rng = random.Random(SEED)
    ts = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(20)]
    accepted = sum(env.synthetic_characteristic_check(fam, t, (t, 0)) for t in ts)
    off = []
    while len(off) < 20:
        t = Fraction(rng.randint(-30, 30), rng.randint(1, 7))
        p = (Fraction(rng.randint(-40, 40), rng.randint(1, 5)), Fraction(rng.randint(-40, 40), rng.randint(1, 5)))
        if p != (t, 0):
            off.append((t, p))
    rejected = sum(not env.synthetic_characteristic_check(fam, t, p) for t, p in off)

    pairs = [(Fraction(a), Fraction(b)) for a, b in
             [(0, 1), (-1, 1), (2, 5), (-3, 7), ("1/2", "3/4"), (-9, -8), (0, 10), (-10, 10), (3, 4), (5, -6)]]
    meets = [(a, b) for a, b in pairs if env.grid_intersections(fam, a, b, bound=10)]
    seconds = time.perf_counter() - t0
    ok = x_only and y_squared and accepted == 20 and rejected == 20 and not meets and seconds < 5
    acceptance(3, "Courant envelope", ok,
               f"eliminant {locus.eliminant_text()}, {accepted}/20 accepted, {rejected}/20 rejected, "
               f"{len(pairs) - len(meets)}/10 pairs disjoint, {seconds:.2f} s")
    assert ok


def test_parabola_tangents(acceptance):
    fam = env.Family.parse("y-2*t*x+t^2")
    locus = env.envelope_eliminate(fam)
    x, y = sympy.symbols("x y")
    sym = sum(sympy.Rational(c.numerator, c.denominator) * x**m[0] * y**m[1] for m, c in locus.eliminant.terms.items())
    ratio = sympy.cancel(sym / (y - x**2))
    proportional = ratio.is_number and ratio != 0
    rng = random.Random(SEED)
    ts = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(10)]
    touches = [env.touching_check(fam, t, (t, t * t), locus, tol=1e-9) for t in ts]
    ok = proportional and all(touches)
    acceptance(4, "parabola tangents", ok,
               f"eliminant {locus.eliminant_text()} = {ratio}*(y - x^2), {sum(touches)}/10 touching")
    assert ok


def test_bianchi_suite(acceptance):
    t0 = time.perf_counter()
    K4 = cb.NeighbourSpace.complete(4)
    Z2 = named_group("Z2")
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    checked, failures = 0, 0
    for bits in itertools.product(range(2), repeat=6):
        conn = cb.GroupoidConnection.from_values(K4, Z2, dict(zip(pairs, bits)))
        for s in cb.simplices(K4, 3):
            checked += 1
            failures += not cb.bianchi_check(conn, s)
    exhaustive = checked
    rng = random.Random(SEED)
    for k in range(200):
        G = named_group("S3" if k % 2 else "S4")
        space = vf.random_space(rng, rng.randint(3, 6), density=rng.uniform(0.4, 1.0))
        conn = vf.random_connection(rng, space, G)
        for s in cb.simplices(space, 3):
            checked += 1
            failures += not cb.bianchi_check(conn, s)
    seconds = time.perf_counter() - t0
    ok = exhaustive == 64 * 256 and failures == 0 and seconds < 30
    acceptance(5, "Bianchi identity", ok,
               f"{checked} simplex checks ({exhaustive} exhaustive over Z2), {failures} failures, {seconds:.2f} s")
    assert ok


def test_closed_implies_involutive(acceptance):
    counted, closed, failures = 0, 0, 0
    for name in ("Z2", "Z3"):
        G = named_group(name)
        for n in range(1, 5):
            for space in vf.all_spaces(n):
                for w in vf.all_one_forms(space, G):
                    counted += 1
                    if cb.is_closed(w):
                        closed += 1
                        failures += not cb.is_involutive(cb.distribution_from_form(w))
    S3 = named_group("S3")
    rng = random.Random(SEED)
    dd_bad = 0
    for _ in range(500):
        space = vf.random_space(rng, rng.randint(1, 6), density=rng.uniform(0.3, 1.0))
        f = [rng.randrange(6) for _ in range(space.size)]
        w = cb.coboundary0(cb.zero_form(space, S3, f))
        # brute-force oracle: the product f(x)^-1 f(y) f(y)^-1 f(z) f(z)^-1 f(x) is e
        for x, y, z in cb.simplices(space, 2):
            if S3.product(w(x, y), w(y, z), w(z, x)) != S3.identity:
                dd_bad += 1
        dd_bad += not cb.is_closed(w)
    ok = failures == 0 and dd_bad == 0 and closed > 0
    acceptance(6, "closed forms are involutive", ok,
               f"{counted} forms, {closed} closed, {failures} failures; d(df)=e failures {dd_bad}/500")
    assert ok


def _cusp_onset(front, lo, hi, iters=40):
    """Smallest inner offset (to bisection accuracy) that produces a cusp."""
    assert not wf.offset_front(front, lo, "inner").has_cusps
    assert wf.offset_front(front, hi, "inner").has_cusps
    for _ in range(iters):
        mid = (lo + hi) / 2
        if wf.offset_front(front, mid, "inner").has_cusps:
            hi = mid
        else:
            lo = mid
    return hi


def test_huygens(acceptance):
    B = wf.OrientedFront.circle((0, 0), 2, 256)
    out = np.hypot(*wf.offset_front(B, 0.5, "outer").front.vertices.T)
    inn = np.hypot(*wf.offset_front(B, 0.5, "inner").front.vertices.T)
    err_out, err_in = float(np.abs(out - 2.5).max()), float(np.abs(inn - 1.5).max())

    E = wf.OrientedFront.ellipse(2, 1, 512)
    rmin = 1 ** 2 / 2  # b^2 / a, the radius of curvature at the ends of the major axis
    semigroup = 0.0
    for s, t in [(0.1, 0.2), (0.2, 0.25), (0.05, 0.4), (0.3, 0.15)]:
        for side in ("outer", "inner"):
            two = wf.offset_front(wf.offset_front(E, s, side).front, t, side).front.vertices
            one = wf.offset_front(E, s + t, side).front.vertices
            semigroup = max(semigroup, float(np.abs(two - one).max()))

    spacing = float(np.hypot(*np.diff(E.vertices, axis=0).T).max())
    onset = _cusp_onset(E, 0.1, 1.0)
    ok = err_out <= 1e-9 and err_in <= 1e-9 and semigroup <= 1e-9 and abs(onset - rmin) <= spacing
    acceptance(7, "Huygens circle law", ok,
               f"radius errors {err_out:.1e}/{err_in:.1e}, semigroup {semigroup:.1e}, "
               f"cusp onset {onset:.4f} vs b^2/a = {rmin} (spacing {spacing:.4f})")
    assert ok


def test_cancellation_and_monad(acceptance):
    rng = random.Random(SEED)
    wrong, equal = [], 0
    for k in range(100):
        nvars = rng.randint(1, 3)
        names = vf.syms_names(nvars)
        u = vf.random_polynomial_expr(rng, nvars, 3)
        if k % 2 == 0:
            su, _ = to_sympy(u, names)
            v = ex.parse(str(sympy.expand(su)).replace("**", "^"), names)
        elif k % 4 == 1:
            v = ex.Add(u, ex.Const(Fraction(rng.randint(1, 9), rng.randint(1, 4))))
        else:
            v = vf.random_polynomial_expr(rng, nvars, 3)
        su, _ = to_sympy(u, names)
        sv, _ = to_sympy(v, names)
        truth = sympy.expand(su - sv) == 0
        equal += truth
        if jet.cancel_d(u, v) != truth:
            wrong.append((u.to_string(names), v.to_string(names), truth))

    monad_bad = 0
    for k in range(100):
        n = 2 + k % 2
        maps = [vf.random_polynomial_expr(rng, n, 3) for _ in range(rng.randint(1, 3))]
        monad_bad += not monad_check(maps, first_order(n))
    ok = not wrong and equal >= 50 and monad_bad == 0
    acceptance(8, "cancellation and monad check", ok,
               f"{100 - len(wrong)}/100 pairs decided ({equal} equal), {100 - monad_bad}/100 maps in the monad")
    assert ok
