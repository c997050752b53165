from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from meixner_pv import Jet2, PrecisionConfig, central_diff, double_precision, integrate_ode
from meixner_pv.errors import DenominatorZero, DomainError, StepSizeUnderflow
from meixner_pv.numeric import TABLEAUS, jet_arith

small = st.fractions(min_value=-5, max_value=5, max_denominator=50)
jets = st.builds(Jet2, small, small, small)


def test_precision_defaults():
    cfg = PrecisionConfig(256)
    assert cfg.rel_tol == mpmath.ldexp(1, -128)
    assert cfg.abs_tol == mpmath.ldexp(1, -256)
    assert cfg.ctx.prec == 256
    assert double_precision().mantissa_bits == 53


def test_precision_rejects_short_mantissa():
    with pytest.raises(DomainError):
        PrecisionConfig(40)
    with pytest.raises(DomainError):
        PrecisionConfig(64, rel_tol=0)


def test_contexts_are_independent():
    lo, hi = PrecisionConfig(53), PrecisionConfig(200)
    third_hi = hi.mpf(1) / 3
    third_lo = lo.mpf(1) / 3
    assert abs(third_hi * 3 - 1) < hi.mpf(2) ** -190
    assert abs(third_lo * 3 - 1) < 1e-15
    assert mpmath.mp.prec == 53


def test_mpf_from_fraction_is_exact_to_working_precision(cfg):
    x = cfg.mpf(Fraction(1, 3))
    assert abs(3 * x - 1) < cfg.eps


@given(jets, jets)
def test_product_rule_exact(f, g):
    h = f * g
    assert h.f == f.f * g.f
    assert h.d1 == f.d1 * g.f + f.f * g.d1
    assert h.d2 == f.d2 * g.f + 2 * f.d1 * g.d1 + f.f * g.d2


@given(jets, jets)
def test_quotient_inverts_product(f, g):
    if g.f == 0:
        with pytest.raises(DenominatorZero):
            f / g
        return
    q = f / g
    back = q * g
    assert back.astuple() == f.astuple()


@given(jets, jets)
def test_sum_and_difference(f, g):
    assert (f + g).astuple() == tuple(a + b for a, b in zip(f.astuple(), g.astuple()))
    assert (f - g).astuple() == tuple(a - b for a, b in zip(f.astuple(), g.astuple()))
    assert (2 - f).astuple() == (2 - f.f, -f.d1, -f.d2)


@given(jets, st.integers(min_value=0, max_value=5))
def test_power_matches_repeated_product(f, k):
    p = Jet2(Fraction(1), Fraction(0), Fraction(0))
    for _ in range(k):
        p = p * f
    assert (f**k).astuple() == p.astuple()


def test_jet_of_composite_function(cfg):
    # f(t) = t^2 / (1 + t) at t = 2: f = 4/3, f' = 8/9, f'' = 2/27
    t = Jet2.variable(Fraction(2))
    h = t * t / (1 + t)
    assert h.astuple() == (Fraction(4, 3), Fraction(8, 9), Fraction(2, 27))


def test_jet_arith_dispatch():
    a, b = Jet2(Fraction(2), Fraction(1)), Jet2(Fraction(3), Fraction(-1))
    assert jet_arith(a, b, "mul").astuple() == (a * b).astuple()
    assert jet_arith(a, b, "div").astuple() == (a / b).astuple()
    with pytest.raises(ValueError):
        jet_arith(a, b, "^")


@pytest.mark.parametrize("name", sorted(TABLEAUS))
def test_tableau_consistency(name):
    tab = TABLEAUS[name]
    for ci, row in zip(tab.c, tab.a):
        assert sum(row, Fraction(0)) == ci
    assert sum(tab.b, Fraction(0)) == 1
    assert sum(tab.e, Fraction(0)) == 0


@pytest.mark.parametrize("name", sorted(TABLEAUS))
def test_tableau_quadrature_order(name):
    # sum b_i c_i^(k-1) = 1/k for k up to the order
    tab = TABLEAUS[name]
    for k in range(1, tab.order + 1):
        assert sum(b * c ** (k - 1) for b, c in zip(tab.b, tab.c)) == Fraction(1, k)


@pytest.mark.parametrize("method,bits,tol", [("dopri5", 53, 1e-12), ("rkf78", 256, 1e-40)])
def test_exponential(method, bits, tol):
    cfg = PrecisionConfig(bits)
    y = integrate_ode(lambda t, y: y, 0, 1, 1, cfg, method=method, rtol=tol, atol=tol)
    assert abs(y - cfg.ctx.e) < 100 * tol


def test_error_shrinks_with_tolerance(cfg):
    errs = []
    for tol in (1e-8, 1e-12, 1e-16):
        y = integrate_ode(lambda t, y: [y[1], -y[0]], 0, [0, 1], 3, cfg, rtol=tol, atol=tol)
        errs.append(abs(y[0] - cfg.ctx.sin(3)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-14


def test_backward_and_complex_states(cfg):
    y = integrate_ode(lambda t, y: 1j * y, 1, 1, 0, cfg, method="rkf78", rtol=1e-30, atol=1e-30)
    assert abs(y - cfg.ctx.exp(-1j)) < 1e-28


def test_step_size_underflow_at_blowup(cfg53):
    # y' = y^2, y(0) = 1 blows up at t = 1
    with pytest.raises(StepSizeUnderflow):
        integrate_ode(lambda t, y: y * y, 0, 1, 2, cfg53, rtol=1e-10, atol=1e-10)


def test_central_diff_second_order(cfg):
    f, t = cfg.ctx.exp, cfg.mpf("0.3")
    exact = f(t)
    e1 = abs(central_diff(f, t, cfg.mpf("1e-2")) - exact)
    e2 = abs(central_diff(f, t, cfg.mpf("5e-3")) - exact)
    assert 3.9 < e1 / e2 < 4.1


def test_central_diff_rejects_nonpositive_step():
    with pytest.raises(DomainError):
        central_diff(lambda x: x, 0.0, 0.0)
