from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from meixner_pv import KummerArgs, Lattice, ModelParams, closed_form_moments, kummer_m, moments, validate, weight_at
from meixner_pv.errors import DomainError, PoleError, ValidationError
from meixner_pv.measure import (
    closed_form_moment_jets,
    discrete_measure,
    pearson_residual_classical,
    shifted_weight_factor,
)
from meixner_pv.specialfn import pochhammer

LATTICES = [
    ModelParams("1.5", "0.7", "0.4"),
    ModelParams("1.5", "0.7", "0.4", Lattice.SHIFTED),
    ModelParams("1.5", "0.7", "0.4", Lattice.BILATTICE, "0.5"),
    ModelParams("2.3", "1.6", "0.9", Lattice.BILATTICE, "2"),
]


def test_lattice_parse():
    assert Lattice.parse("n") is Lattice.PLAIN
    assert Lattice.parse("bi") is Lattice.BILATTICE
    with pytest.raises(ValueError):
        Lattice.parse("hex")


@pytest.mark.parametrize(
    "params,expected",
    [
        (ModelParams(1, 1, 0.5), []),
        (ModelParams(1, 1, 0), ["c>0"]),
        (ModelParams(-1, 0, 0.5), ["beta>0", "gamma>0"]),
        (ModelParams(0.1, 1.5, 0.5, "shifted"), ["gamma>beta-1"]),
        (ModelParams(1, 2.5, 0.5, "shifted"), ["beta<2", "gamma>beta-1"]),
        (ModelParams(1, 0.5, 0.5, "bilattice", 0), ["tau>0"]),
        (ModelParams(1, 1, 0.5, "bilattice", 1), ["beta not an integer"]),
    ],
)
def test_validate(params, expected):
    assert validate(params) == expected


def test_invalid_params_raise(cfg):
    with pytest.raises(ValidationError) as info:
        moments(ModelParams(1, 1, -0.5), 2, cfg)
    assert info.value.violations == ["c>0"]


def test_plain_weight_is_pochhammer_ratio(cfg):
    p = ModelParams(Fraction(3, 2), Fraction(7, 10), Fraction(2, 5))
    for k in range(8):
        exact = pochhammer(Fraction(3, 2), k) * Fraction(2, 5) ** k / (pochhammer(Fraction(7, 10), k) * pochhammer(1, k))
        assert abs(weight_at(p, k, cfg) - cfg.mpf(exact)) < 1e-70


@pytest.mark.parametrize("g,b,c", [("1.5", "0.7", "0.4"), ("0.4", "1.3", "2.5")])
def test_shifted_weight_identity(cfg, g, b, c):
    # on N + 1 - beta the weight is Gamma(gamma + x) c^x / (Gamma(beta + x) Gamma(x + 1)),
    # normalised like the N-weight
    p = ModelParams(g, b, c, Lattice.SHIFTED)
    ctx = cfg.ctx
    gm, be, cc = p.numeric(cfg)

    def raw(x):
        return ctx.gamma(gm + x) * cc**x / (ctx.gamma(be + x) * ctx.gamma(x + 1))

    norm = ctx.gamma(be) / ctx.gamma(gm)
    for k in range(21):
        x = k + 1 - be
        assert abs(weight_at(p, x, cfg) - raw(x) * norm) < 1e-60 * (1 + raw(x) * norm)


def test_weight_off_lattice(cfg):
    with pytest.raises(DomainError):
        weight_at(ModelParams("1.5", "0.7", "0.4"), "0.5", cfg)
    with pytest.raises(DomainError):
        weight_at(LATTICES[2], 1, cfg)


def test_bilattice_weight_parts(cfg):
    p = LATTICES[2]
    plain = weight_at(p, 2, cfg, part=Lattice.PLAIN)
    shifted = weight_at(p, cfg.mpf(2) + 1 - cfg.mpf("0.7"), cfg, part=Lattice.SHIFTED)
    assert plain == weight_at(LATTICES[0], 2, cfg)
    assert abs(shifted - cfg.mpf("0.5") * weight_at(LATTICES[1], cfg.mpf(3) - cfg.mpf("0.7"), cfg)) < 1e-70


def test_shifted_factor_domain(cfg):
    with pytest.raises(DomainError):
        shifted_weight_factor(ModelParams("0.2", "1.5", "0.4", Lattice.SHIFTED), cfg)


@pytest.mark.parametrize("params", LATTICES)
def test_moments_match_closed_forms(cfg, params):
    mv = moments(params, 1, cfg)
    m0, m1 = closed_form_moments(params, cfg)
    assert abs(mv.values[0] - m0) < 1e-60 * abs(m0)
    assert abs(mv.values[1] - m1) < 1e-60 * abs(m1)


def test_plain_m0_is_kummer(cfg):
    p = ModelParams("1.5", "0.7", "0.4")
    assert abs(moments(p, 0, cfg).values[0] - kummer_m(KummerArgs("1.5", "0.7", "0.4"), cfg)) < 1e-70


@pytest.mark.parametrize("params", LATTICES)
def test_tail_bound_is_honest(cfg, params):
    # a much longer truncation differs from the default one by less than the reported tail
    from meixner_pv import PrecisionConfig

    mu = discrete_measure(params, cfg, 4)
    longer = discrete_measure(params, PrecisionConfig(cfg.mantissa_bits, cfg.rel_tol, cfg.abs_tol / 2**40), 12)
    assert len(longer.nodes) > len(mu.nodes)
    fsum = cfg.ctx.fsum
    short = fsum(w * x**4 for x, w in zip(mu.nodes, mu.weights))
    full = fsum(w * x**4 for x, w in zip(longer.nodes, longer.weights))
    assert abs(full - short) <= mu.tail_bound + 1e-70 * abs(full)


def test_moment_jets_derivative(cfg):
    from meixner_pv import central_diff

    p = LATTICES[2]
    m0, m1 = closed_form_moment_jets(p, cfg)
    fd = central_diff(lambda c: closed_form_moments(p.with_c(c), cfg)[1], cfg.mpf("0.4"), cfg.mpf("1e-15"))
    assert abs(fd - m1.d1) < 1e-25


def test_closed_forms_pole_near_beta_one(cfg):
    with pytest.raises(PoleError):
        closed_form_moments(ModelParams("1.5", "1.0000001", "0.4", Lattice.SHIFTED), cfg)


@given(st.floats(0.1, 5), st.floats(0.05, 0.95), st.integers(1, 30))
def test_classical_pearson(beta, c, k):
    from meixner_pv import PrecisionConfig

    cfg = PrecisionConfig(128)
    assert abs(pearson_residual_classical(beta, c, k, cfg)) < 1e-30


def test_classical_pearson_domain(cfg):
    with pytest.raises(DomainError):
        pearson_residual_classical(1, 1.5, 2, cfg)
