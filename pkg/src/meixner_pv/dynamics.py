"""Auxiliary variables (u_n, v_n) of the recurrence coefficients.

The recurrence coefficients of the generalized Meixner weight on every
lattice can be written as

    a_n^2 = n c - (gamma - 1) u_n,
    b_n   = n + gamma - beta + c - (gamma - 1) v_n / c,

where (u_n, v_n) obey the first-order discrete system

    (u_n + v_n)(u_{n+1} + v_n) = (gamma-1)/c^2 v_n (v_n - c)(v_n - c (gamma-beta)/(gamma-1)),
    (u_n + v_n)(u_n + v_{n-1}) = u_n/(u_n - c n/(gamma-1)) (u_n + c)(u_n + c (gamma-beta)/(gamma-1)),

with ``u_0 = 0`` and a lattice-dependent ``v_0``.  As functions of ``c``
the coefficients follow the Toda flow; eliminating the neighbours with
the discrete system turns it into a closed ODE for (u_n, v_n).

Functions accept plain Python numbers, Fractions or mpf values.  When a
``cfg`` is given, parameters are first converted into its working context.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DenominatorZero, DomainError, IndeterminateStep, PoleError
from .measure import ModelParams, closed_form_moment_jets, moments
from .numeric import Jet2, PrecisionConfig, integrate_ode
from .orthopoly import RecurrenceTable, stieltjes_coeffs

__all__ = [
    "UVState",
    "GAMMA_ONE_TOL",
    "ab_to_uv",
    "uv_to_ab",
    "discrete_residuals",
    "initial_b0",
    "initial_v0_jet",
    "step_uv",
    "forward_chain",
    "chain_from_table",
    "toda_rhs",
    "uv_ode_rhs",
    "integrate_uv",
    "riccati_v0_rhs",
    "moment_state",
]

GAMMA_ONE_TOL = 1e-9


@dataclass(frozen=True)
class UVState:
    n: int
    u: object
    v: object
    c: object
    gamma: object
    beta: object

    @classmethod
    def from_params(cls, n, u, v, params: ModelParams, cfg: PrecisionConfig | None = None):
        g, b, c = _gbc(params, cfg)
        return cls(n, u, v, c, g, b)


def _gbc(params: ModelParams, cfg: PrecisionConfig | None):
    if cfg is not None:
        return params.numeric(cfg)
    return params.gamma, params.beta, params.c


def _check_gamma(gamma):
    if abs(gamma - 1) < GAMMA_ONE_TOL:
        raise DomainError("the (u, v) variables are undefined for gamma = 1")


def ab_to_uv(n: int, a2, b, params: ModelParams, cfg: PrecisionConfig | None = None):
    """``(u_n, v_n)`` from the monic recurrence pair ``(a_n^2, b_n)``."""
    g, be, c = _gbc(params, cfg)
    _check_gamma(g)
    u = (n * c - a2) / (g - 1)
    v = c * (n + g - be + c - b) / (g - 1)
    return u, v


def uv_to_ab(state: UVState):
    """``(a_n^2, b_n)`` from ``(u_n, v_n)``."""
    g, be, c, n = state.gamma, state.beta, state.c, state.n
    _check_gamma(g)
    a2 = n * c - (g - 1) * state.u
    b = n + g - be + c - (g - 1) * state.v / c
    return a2, b


def _rhs1(v, g, be, c):
    return (g - 1) / c**2 * v * (v - c) * (v - c * (g - be) / (g - 1))


def _rhs2_numerator(u, g, be, c):
    # right side of the second equation times (u - c n/(gamma - 1))
    return u * (u + c) * (u + c * (g - be) / (g - 1))


def discrete_residuals(u_n, v_n, u_next, v_prev, n: int, params: ModelParams, cfg: PrecisionConfig | None = None):
    """Residuals ``(r1, r2)`` of the discrete system at index ``n``.

    ``r2`` is cross-multiplied by ``u_n - c n/(gamma - 1)`` so it has no pole.
    """
    g, be, c = _gbc(params, cfg)
    _check_gamma(g)
    r1 = (u_n + v_n) * (u_next + v_n) - _rhs1(v_n, g, be, c)
    r2 = (u_n + v_n) * (u_n + v_prev) * (u_n - c * n / (g - 1)) - _rhs2_numerator(u_n, g, be, c)
    return r1, r2


def initial_v0_jet(params: ModelParams, cfg: PrecisionConfig) -> tuple[Jet2, Jet2]:
    """Jets in ``c`` of ``b_0`` and ``v_0`` from the Kummer closed forms.

    Derivatives are analytic (contiguous relation for dM/dz), so the pair
    can be substituted into the Riccati equation for ``v_0`` directly.
    """
    g, be, c = params.numeric(cfg)
    _check_gamma(g)
    m0, m1 = closed_form_moment_jets(params, cfg)
    b0 = m1 / m0
    cj = Jet2.variable(c)
    v0 = cj * (g - be + cj - b0) / (g - 1)
    return b0, v0


def initial_b0(params: ModelParams, cfg: PrecisionConfig, *, fallback: bool = True):
    """Initial value ``b_0`` on the lattice of ``params``.

    Plain lattice ``(gamma c/beta) M(gamma+1, beta+1, c)/M(gamma, beta, c)``;
    shifted ``(1-beta) M(gamma-beta+1, 1-beta, c)/M(gamma-beta+1, 2-beta, c)``;
    bi-lattice ``(m1 + tau m1_hat)/(m0 + tau m0_hat)``.  Near ``beta = 1`` the
    shifted closed forms have a pole; with ``fallback`` the summed moment
    ratio ``m1/m0`` is returned instead, otherwise :class:`PoleError` propagates.
    """
    try:
        m0, m1 = closed_form_moment_jets(params, cfg)
    except PoleError:
        if not fallback:
            raise
        mv = moments(params, 1, cfg)
        return mv.values[1] / mv.values[0]
    return m1.f / m0.f


def _is_zero(x, scale, cfg: PrecisionConfig | None):
    if cfg is None:
        return x == 0
    return abs(x) <= 64 * cfg.eps * (1 + abs(scale))


def step_uv(state: UVState, cfg: PrecisionConfig | None = None) -> UVState:
    """Advance ``(u_n, v_n)`` to ``(u_{n+1}, v_{n+1})`` with the discrete system.

    The first equation is solved for ``u_{n+1}``, then the second one,
    taken at index ``n+1``, for ``v_{n+1}``.

    Raises
    ------
    IndeterminateStep
        When a solve is 0/0 (e.g. on the Charlier chain ``u = v = 0``).
    DenominatorZero
        When only the divisor vanishes.
    """
    g, be, c, n = state.gamma, state.beta, state.c, state.n
    _check_gamma(g)
    u, v = state.u, state.v

    num1 = _rhs1(v, g, be, c)
    den1 = u + v
    _check_division(num1, den1, abs(u) + abs(v), cfg, "u_{n+1}")
    u_next = num1 / den1 - v

    pole = u_next - c * (n + 1) / (g - 1)
    num2 = _rhs2_numerator(u_next, g, be, c)
    den2 = (u_next + v) * pole
    _check_division(num2, den2, abs(u_next) + abs(v), cfg, "v_{n+1}")
    v_next = num2 / den2 - u_next
    return replace(state, n=n + 1, u=u_next, v=v_next)


def _check_division(num, den, scale, cfg, what):
    if _is_zero(den, scale, cfg):
        if _is_zero(num, scale, cfg):
            raise IndeterminateStep(f"0/0 while solving for {what}")
        raise DenominatorZero(f"vanishing divisor while solving for {what}")


def chain_from_table(table: RecurrenceTable, cfg: PrecisionConfig | None = None) -> list[UVState]:
    """``(u_n, v_n)`` for every row of a recurrence table."""
    params = table.params
    cfg = cfg or table.precision
    g, be, c = params.numeric(cfg)
    out = []
    for n, a2, b in table.entries:
        u, v = ab_to_uv(n, a2, b, params, cfg)
        out.append(UVState(n, u, v, c, g, be))
    return out


def forward_chain(params: ModelParams, n_steps: int, cfg: PrecisionConfig, *, guard_bits: int = 64):
    """Iterate the discrete system from ``u_0 = 0`` and the closed-form ``v_0``.

    Returns ``(states, digits)`` where ``digits[n]`` estimates the correct
    decimal digits of state ``n`` by comparing against a shadow run with
    ``guard_bits`` extra bits.  Forward iteration is unstable (the
    orthogonal-polynomial chain is a distinguished solution), so digits
    decrease with ``n``.
    """
    shadow_cfg = PrecisionConfig(cfg.mantissa_bits + guard_bits)
    runs = []
    for run_cfg in (cfg, shadow_cfg):
        g, be, c = params.numeric(run_cfg)
        b0 = initial_b0(params, run_cfg)
        _, v0 = ab_to_uv(0, 0, b0, params, run_cfg)
        state = UVState(0, run_cfg.ctx.zero, v0, c, g, be)
        states = [state]
        for _ in range(n_steps):
            state = step_uv(state, run_cfg)
            states.append(state)
        runs.append(states)
    ctx = cfg.ctx
    digits = []
    for s, t in zip(*runs):
        err = max(abs(s.u - t.u) / (1 + abs(t.u)), abs(s.v - t.v) / (1 + abs(t.v)))
        digits.append(cfg.digits if err == 0 else float(-ctx.log10(err)))
    return runs[0], digits


def toda_rhs(a2_n, b_n, b_prev, a2_next, c):
    """Toda flow in ``c``: ``((a_n^2)', b_n')``."""
    if c == 0:
        raise DomainError("the Toda flow is singular at c = 0")
    return a2_n * (b_n - b_prev) / c, (a2_next - a2_n) / c


def uv_ode_rhs(state: UVState):
    """``(du_n/dc, dv_n/dc)`` for fixed ``n``.

    ``b_{n-1}`` and ``a_{n+1}^2`` are eliminated from the Toda flow through
    the discrete system (``v_{n-1}`` from the second equation, ``u_{n+1}``
    from the first), leaving a closed system in ``(u_n, v_n)``.  At
    ``a_n^2 = 0`` (``n = 0``) the ``b_{n-1}`` term drops out.
    """
    g, be, c, n = state.gamma, state.beta, state.c, state.n
    _check_gamma(g)
    u, v = state.u, state.v
    a2, b = uv_to_ab(state)
    den = u + v
    if den == 0:
        raise DenominatorZero("u_n + v_n = 0")

    if a2 == 0:
        da2 = 0 * a2
    else:
        pole = u - c * n / (g - 1)
        if pole == 0:
            raise DenominatorZero("u_n = c n/(gamma - 1)")
        v_prev = _rhs2_numerator(u, g, be, c) / (pole * den) - u
        b_prev = n - 1 + g - be + c - (g - 1) * v_prev / c
        da2 = a2 * (b - b_prev) / c

    u_next = _rhs1(v, g, be, c) / den - v
    a2_next = (n + 1) * c - (g - 1) * u_next
    db = (a2_next - a2) / c

    du = (n - da2) / (g - 1)
    dv = c * (1 - db) / (g - 1) + v / c
    return du, dv


def integrate_uv(state: UVState, c1, cfg: PrecisionConfig, *, path: str = "arc", **kwargs) -> UVState:
    """Carry ``(u_n, v_n)`` from ``state.c`` to ``c1`` along the closed ODE.

    ``path="real"`` integrates along the real segment.  The vector field
    is 0/0 wherever the orthogonal-polynomial solution crosses
    ``u_n + v_n = 0`` (it does, e.g. for n = 2 near c = 0.495 at
    gamma = 1.5, beta = 0.7), and a real-path integrator loses about half
    its digits there.  ``path="arc"`` (default) follows the semicircle over
    the segment in the upper half ``c``-plane, where the solution is
    analytic and the field is regular; the imaginary part left at the
    endpoint is discarded after a sanity check against the tolerance.
    Remaining keyword arguments go to :func:`integrate_ode`.
    """
    ctx = cfg.ctx
    c0, c1 = cfg.mpf(state.c), cfg.mpf(c1)
    y0 = [state.u, state.v]

    if path == "real":

        def rhs(c, y):
            return uv_ode_rhs(replace(state, u=y[0], v=y[1], c=c))

        u1, v1 = integrate_ode(rhs, c0, y0, c1, cfg, **kwargs)
        return replace(state, u=u1, v=v1, c=c1)
    if path != "arc":
        raise ValueError(f"unknown path {path!r}")

    mid, rad = (c0 + c1) / 2, (c1 - c0) / 2
    j_pi = ctx.mpc(0, ctx.pi)

    def rhs_arc(s, y):
        rot = ctx.exp(j_pi * (1 - s))
        c = mid + rad * rot
        du, dv = uv_ode_rhs(replace(state, u=y[0], v=y[1], c=c))
        dc = -rad * j_pi * rot
        return du * dc, dv * dc

    u1, v1 = integrate_ode(rhs_arc, 0, y0, 1, cfg, **kwargs)
    imag = max(abs(ctx.im(u1)), abs(ctx.im(v1)))
    scale = 1 + max(abs(u1), abs(v1))
    limit = 1e6 * cfg.mpf(kwargs.get("rtol", cfg.rel_tol)) * scale
    if imag > limit:
        raise ArithmeticError(f"arc integration left imaginary part {ctx.nstr(imag, 5)}")
    return replace(state, u=ctx.re(u1), v=ctx.re(v1), c=c1)


def riccati_v0_rhs(v, t, params: ModelParams, cfg: PrecisionConfig | None = None):
    """``v'`` from ``t^2 v' = (gamma-1) v^2 + t (2 - t + beta - 2 gamma) v + (gamma - beta) t^2``."""
    if t == 0:
        raise DomainError("the Riccati equation for v_0 is singular at t = 0")
    g, be, _ = _gbc(params, cfg)
    return ((g - 1) * v**2 + t * (2 - t + be - 2 * g) * v + (g - be) * t**2) / t**2


def moment_state(params: ModelParams, n: int, cfg: PrecisionConfig) -> UVState:
    """``(u_n, v_n)`` at ``params.c`` from the Stieltjes pipeline."""
    table = stieltjes_coeffs(params, n, cfg)
    return chain_from_table(table, cfg)[n]

