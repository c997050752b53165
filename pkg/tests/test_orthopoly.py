import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meixner_pv import Lattice, ModelParams, PrecisionConfig, classical_meixner_coeffs, moments, stieltjes_coeffs
from meixner_pv.errors import DomainError, PrecisionExhausted
from meixner_pv.orthopoly import eval_monic, eval_orthonormal, orthonormality_residual


def rel(a, b):
    return abs(a - b) / max(abs(b), 1)


@pytest.mark.parametrize("g", ["0.8", "2.5"])
def test_charlier(cfg, g):
    t = stieltjes_coeffs(ModelParams(g, g, "0.3"), 12, cfg)
    c = cfg.mpf("0.3")
    for n, a2, b in t.entries:
        assert rel(a2, n * c) < 1e-60
        assert rel(b, n + c) < 1e-60
    assert t.entries[0][1] == 0
    assert t.est_correct_digits > 60


def test_charlier_double_precision(cfg53):
    t = stieltjes_coeffs(ModelParams(1.2, 1.2, 0.7), 10, cfg53)
    for n, a2, b in t.entries:
        assert rel(b, n + 0.7) < 1e-12
    assert 5 < t.est_correct_digits < 16


def test_shifted_charlier(cfg):
    t = stieltjes_coeffs(ModelParams(1, "0.4", "0.4", Lattice.SHIFTED), 8, cfg)
    for n, a2, b in t.entries:
        assert rel(b, n + cfg.mpf("0.4") + 1 - cfg.mpf("0.4")) < 1e-60
        assert rel(a2, n * cfg.mpf("0.4")) < 1e-60


def _stieltjes_reference(nodes, weights, n_max):
    # plain discretized Stieltjes on explicit nodes, independent of the library
    p_prev, p = [0] * len(nodes), [1] * len(nodes)
    norm = sum(weights)
    a2, out = 0, []
    for n in range(n_max + 1):
        b = sum(w * x * q * q for x, w, q in zip(nodes, weights, p)) / norm
        out.append((a2, b))
        nxt = [(x - b) * q - a2 * r for x, q, r in zip(nodes, p, p_prev)]
        new_norm = sum(w * q * q for w, q in zip(weights, nxt))
        a2, norm, p_prev, p = new_norm / norm, new_norm, p, nxt
    return out


@pytest.mark.parametrize("beta,c", [("2", "0.5"), ("0.6", "0.3")])
def test_classical_meixner(cfg, beta, c):
    beta, c = cfg.mpf(beta), cfg.mpf(c)
    nodes, weights, w = [], [], cfg.mpf(1)
    for k in range(600):
        nodes.append(k)
        weights.append(w)
        w = w * (beta + k) * c / (k + 1)
    for n, (a2, b) in enumerate(_stieltjes_reference(nodes, weights, 6)):
        ea2, eb = classical_meixner_coeffs(beta, c, n)
        assert rel(a2, ea2) < 1e-40
        assert rel(b, eb) < 1e-40


def test_classical_meixner_closed_form():
    a2, b = classical_meixner_coeffs(2, 0.5, 3)
    assert a2 == pytest.approx(24)
    assert b == pytest.approx(11)
    with pytest.raises(DomainError):
        classical_meixner_coeffs(2, 1.0, 3)


@pytest.mark.parametrize(
    "params",
    [
        ModelParams("1.5", "0.7", "0.4"),
        ModelParams("1.5", "0.7", "0.4", Lattice.SHIFTED),
        ModelParams("1.5", "0.7", "0.4", Lattice.BILATTICE, "1"),
    ],
)
def test_hankel_cross_check(cfg, params):
    # a_n^2 = D_{n+1} D_{n-1} / D_n^2 with Hankel determinants D_n = det(m_{i+j})
    N = 5
    ctx = cfg.ctx
    m = moments(params, 2 * N, cfg).values
    D = [ctx.one] + [ctx.det(ctx.matrix([[m[i + j] for j in range(k)] for i in range(k)])) for k in range(1, N + 2)]
    t = stieltjes_coeffs(params, N, cfg)
    for n in range(1, N + 1):
        assert rel(t.a2[n], D[n + 1] * D[n - 1] / D[n] ** 2) < 1e-40


@pytest.mark.parametrize("lattice,tau", [(Lattice.PLAIN, None), (Lattice.BILATTICE, "2")])
def test_orthonormality(cfg, lattice, tau):
    params = ModelParams("1.5", "0.7", "0.4", lattice, tau)
    t = stieltjes_coeffs(params, 6, cfg)
    for n in range(6):
        for m in range(n + 1):
            assert orthonormality_residual(t, params, n, m, cfg) < 1e-50


def test_eval_monic_low_degrees(cfg):
    t = stieltjes_coeffs(ModelParams("1.5", "0.7", "0.4"), 3, cfg)
    x = cfg.mpf("1.3")
    assert eval_monic(t, 0, x) == 1
    assert eval_monic(t, 1, x) == x - t.b[0]
    assert abs(eval_orthonormal(t, 0, x) ** 2 * t.norms[0] - 1) < 1e-70
    with pytest.raises(IndexError):
        eval_monic(t, 10, x)


def test_precision_exhausted():
    with pytest.raises(PrecisionExhausted):
        stieltjes_coeffs(ModelParams(1.5, 0.7, 5.0), 60, PrecisionConfig(53))


@settings(max_examples=15)
@given(st.floats(0.3, 3), st.floats(0.3, 3), st.floats(0.1, 2))
def test_coefficients_are_positive_and_increasing(g, b, c):
    cfg = PrecisionConfig(128)
    t = stieltjes_coeffs(ModelParams(g, b, c), 6, cfg)
    assert all(a2 > 0 for a2 in t.a2[1:])
    assert all(t.b[n + 1] > t.b[n] for n in range(6))
