"""Generalized Meixner weight on three lattices.

The weight ``w_k = (gamma)_k c^k / ((beta)_k k!)`` lives on the lattice
``N = {0, 1, 2, ...}``.  The same weight function evaluated on the shifted
lattice ``N + 1 - beta`` equals, up to a constant factor, the N-weight with
parameters ``(gamma + 1 - beta, 2 - beta)``; the bi-lattice measure is the
N-measure plus ``tau`` times the shifted one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, PoleError, ValidationError
from .numeric import PrecisionConfig
from .specialfn import KummerArgs, kummer_jet, kummer_m, log_gamma, pochhammer

__all__ = [
    "Lattice",
    "ModelParams",
    "MomentVector",
    "DiscreteMeasure",
    "validate",
    "weight_at",
    "shifted_weight_factor",
    "discrete_measure",
    "moment",
    "moments",
    "closed_form_moments",
    "closed_form_moment_jets",
    "pearson_residual_classical",
]

# bi-lattice with integer beta makes the two lattices collide
INTEGER_BETA_TOL = 1e-9
# closed forms for the shifted lattice contain Gamma(1 - beta)
BETA_ONE_TOL = 1e-6

_CONSECUTIVE_SMALL = 20


class Lattice(enum.Enum):
    PLAIN = "n"
    SHIFTED = "shifted"
    BILATTICE = "bilattice"

    @classmethod
    def parse(cls, value) -> Lattice:
        if isinstance(value, cls):
            return value
        aliases = {"n": cls.PLAIN, "plain": cls.PLAIN, "plainn": cls.PLAIN,
                   "shifted": cls.SHIFTED, "bilattice": cls.BILATTICE, "bi": cls.BILATTICE}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown lattice {value!r}") from None


@dataclass(frozen=True)
class ModelParams:
    """Weight parameters.  Values may be ints, floats, strings, Fractions or mpf."""

    gamma: object
    beta: object
    c: object
    lattice: Lattice = Lattice.PLAIN
    tau: object = None

    def __post_init__(self):
        object.__setattr__(self, "lattice", Lattice.parse(self.lattice))

    def with_c(self, c) -> ModelParams:
        return ModelParams(self.gamma, self.beta, c, self.lattice, self.tau)

    def shifted_part(self) -> ModelParams:
        return ModelParams(self.gamma, self.beta, self.c, Lattice.SHIFTED)

    def plain_part(self) -> ModelParams:
        return ModelParams(self.gamma, self.beta, self.c, Lattice.PLAIN)

    def numeric(self, cfg: PrecisionConfig):
        """(gamma, beta, c) converted into the working context."""
        return cfg.mpf(self.gamma), cfg.mpf(self.beta), cfg.mpf(self.c)


@dataclass(frozen=True)
class MomentVector:
    values: list
    truncation_K: int
    tail_bound: object


def validate(params: ModelParams) -> list[str]:
    """Return the names of all violated positivity conditions (empty when valid)."""
    g, b, c = float(params.gamma), float(params.beta), float(params.c)
    bad = []
    if not c > 0:
        bad.append("c>0")
    if params.lattice is Lattice.PLAIN:
        if not b > 0:
            bad.append("beta>0")
        if not g > 0:
            bad.append("gamma>0")
    elif params.lattice is Lattice.SHIFTED:
        if not b < 2:
            bad.append("beta<2")
        if not g > b - 1:
            bad.append("gamma>beta-1")
    else:
        if not 0 < b < 2:
            bad.append("0<beta<2")
        if not g > max(0.0, b - 1):
            bad.append("gamma>max(0,beta-1)")
        if params.tau is None or not float(params.tau) > 0:
            bad.append("tau>0")
        if abs(b - round(b)) < INTEGER_BETA_TOL:
            bad.append("beta not an integer")
    return bad


def _require_valid(params: ModelParams):
    bad = validate(params)
    if bad:
        raise ValidationError(bad)


def _log_weight_plain(gamma, beta, c, k: int, cfg: PrecisionConfig):
    ctx = cfg.ctx
    return (
        log_gamma(gamma + k, cfg) - log_gamma(gamma, cfg)
        - log_gamma(beta + k, cfg) + log_gamma(beta, cfg)
        + k * ctx.ln(c) - log_gamma(k + 1, cfg)
    )


def shifted_weight_factor(params: ModelParams, cfg: PrecisionConfig):
    """Constant relating the weight on ``N + 1 - beta`` to the N-weight with
    parameters ``(gamma + 1 - beta, 2 - beta)``:

        c^(1-beta) Gamma(beta) Gamma(gamma+1-beta) / (Gamma(2-beta) Gamma(gamma))
    """
    g, b, c = params.numeric(cfg)
    args = (b, g + 1 - b, 2 - b, g)
    if any(x <= 0 for x in args):
        raise DomainError("shifted weight factor needs beta, gamma, 2-beta, gamma+1-beta > 0")
    ctx = cfg.ctx
    return ctx.exp(
        (1 - b) * ctx.ln(c)
        + log_gamma(b, cfg) + log_gamma(g + 1 - b, cfg)
        - log_gamma(2 - b, cfg) - log_gamma(g, cfg)
    )


def _shifted_scale(params: ModelParams, cfg: PrecisionConfig):
    # recurrence coefficients do not see a constant factor; fall back to 1
    # when Gamma(beta) or Gamma(gamma) would need a non-positive argument
    g, b, _ = params.numeric(cfg)
    if b > 0 and g > 0:
        return shifted_weight_factor(params, cfg)
    return cfg.ctx.mpf(1)


def weight_at(params: ModelParams, x, cfg: PrecisionConfig, *, part: Lattice | None = None):
    """Weight at lattice point ``x``.

    On the plain lattice ``x`` must be a non-negative integer; on the
    shifted lattice ``x = k + 1 - beta``.  For the bi-lattice, ``part``
    selects which sub-lattice ``x`` belongs to (the shifted part carries
    the factor ``tau``).
    """
    _require_valid(params)
    g, b, c = params.numeric(cfg)
    lattice = params.lattice
    tau = 1
    if lattice is Lattice.BILATTICE:
        if part not in (Lattice.PLAIN, Lattice.SHIFTED):
            raise DomainError("bi-lattice weight needs part=Lattice.PLAIN or Lattice.SHIFTED")
        lattice = part
        if part is Lattice.SHIFTED:
            tau = cfg.mpf(params.tau)
    x = cfg.mpf(x)
    if lattice is Lattice.PLAIN:
        k = _lattice_index(x, 0, cfg)
        return cfg.ctx.exp(_log_weight_plain(g, b, c, k, cfg))
    k = _lattice_index(x, 1 - b, cfg)
    scale = _shifted_scale(params, cfg)
    return tau * scale * cfg.ctx.exp(_log_weight_plain(g + 1 - b, 2 - b, c, k, cfg))


def _lattice_index(x, offset, cfg: PrecisionConfig) -> int:
    k = x - offset
    ki = int(cfg.ctx.nint(k))
    if ki < 0 or abs(k - ki) > 16 * cfg.eps * max(1, abs(x)):
        raise DomainError(f"{x} is not a lattice point")
    return ki


@dataclass(frozen=True)
class DiscreteMeasure:
    """Truncated measure: lattice nodes, weights and an estimate of the neglected tail."""

    nodes: tuple
    weights: tuple
    truncation_K: int
    tail_bound: object
    degree: int


def _plain_sequence(g, b, c, offset, degree, cfg: PrecisionConfig):
    """Nodes ``k + offset`` and weights ``(g)_k c^k / ((b)_k k!)`` until the
    ``degree``-th moment terms are negligible, then the same again as a guard."""
    ctx = cfg.ctx
    small = cfg.mpf(cfg.abs_tol) / 10
    nodes, weights = [], []
    w = ctx.mpf(1)
    k = run = 0
    while True:
        x = k + offset
        nodes.append(x)
        weights.append(w)
        term = abs(x) ** degree * w
        # the ratio of successive weights must already be < 1 for the run to count
        decaying = k > 0 and abs((g + k) * c / ((b + k) * (k + 1))) < 1
        run = run + 1 if (term < small and decaying) else 0
        w = w * (g + k) * c / ((b + k) * (k + 1))
        k += 1
        if run >= _CONSECUTIVE_SMALL:
            break
    K = 2 * k
    while k < K:
        nodes.append(k + offset)
        weights.append(w)
        w = w * (g + k) * c / ((b + k) * (k + 1))
        k += 1
    # geometric majorant of the tail beyond the guard
    x = k + offset
    term = abs(x) ** degree * w
    ratio = abs((g + k) * c / ((b + k) * (k + 1))) * (abs(x + 1) / abs(x)) ** degree
    tail = term / (1 - ratio) if ratio < 1 else ctx.inf
    return nodes, weights, K, tail


@lru_cache(maxsize=256)
def _discrete_measure_cached(params: ModelParams, cfg: PrecisionConfig, degree: int):
    g, b, c = params.numeric(cfg)
    if params.lattice is Lattice.PLAIN:
        nodes, weights, K, tail = _plain_sequence(g, b, c, 0, degree, cfg)
        return DiscreteMeasure(tuple(nodes), tuple(weights), K, tail, degree)
    scale = _shifted_scale(params, cfg)
    snodes, sweights, sK, stail = _plain_sequence(g + 1 - b, 2 - b, c, 1 - b, degree, cfg)
    sweights = [scale * w for w in sweights]
    stail = scale * stail
    if params.lattice is Lattice.SHIFTED:
        return DiscreteMeasure(tuple(snodes), tuple(sweights), sK, stail, degree)
    tau = cfg.mpf(params.tau)
    nodes, weights, K, tail = _plain_sequence(g, b, c, 0, degree, cfg)
    return DiscreteMeasure(
        tuple(nodes + snodes),
        tuple(weights + [tau * w for w in sweights]),
        max(K, sK),
        tail + tau * stail,
        degree,
    )


def discrete_measure(params: ModelParams, cfg: PrecisionConfig, degree: int = 0) -> DiscreteMeasure:
    """Truncated lattice measure accurate for integrands growing like ``|x|**degree``.

    Bi-lattice nodes are the plain nodes followed by the shifted nodes
    (separate sums, not a merged sort).
    """
    _require_valid(params)
    return _discrete_measure_cached(params, cfg, int(degree))


def moment(params: ModelParams, j: int, cfg: PrecisionConfig):
    """j-th moment ``sum_x x^j w(x)`` of the (truncated) lattice measure."""
    return moments(params, j, cfg).values[j]


def moments(params: ModelParams, J: int, cfg: PrecisionConfig) -> MomentVector:
    """Moments ``m_0 .. m_J`` summed over the truncated lattice."""
    mu = discrete_measure(params, cfg, J)
    ctx = cfg.ctx
    values = [ctx.fsum(w * x**j for x, w in zip(mu.nodes, mu.weights)) for j in range(J + 1)]
    return MomentVector(values, mu.truncation_K, mu.tail_bound)


def closed_form_moment_jets(params: ModelParams, cfg: PrecisionConfig):
    """Jets in ``c`` of the first two moments from Kummer functions.

    Returns ``(m0, m1)`` for the plain lattice, ``(m0_hat, m1_hat)`` for
    the shifted lattice and ``(m0 + tau m0_hat, m1 + tau m1_hat)`` for the
    bi-lattice, each as a :class:`~meixner_pv.numeric.Jet2` in ``c``.

    Raises
    ------
    PoleError
        For shifted/bi-lattice when ``beta`` is within 1e-6 of 1, where
        ``M(., 1 - beta, c)`` has a pole.
    """
    _require_valid(params)
    from .numeric import Jet2

    g, b, c = params.numeric(cfg)
    cj = Jet2.variable(c)
    if params.lattice is not Lattice.SHIFTED:
        m0 = kummer_jet(g, b, c, cfg)
        m1 = g / b * cj * kummer_jet(g + 1, b + 1, c, cfg)
        if params.lattice is Lattice.PLAIN:
            return m0, m1
    if abs(b - 1) < BETA_ONE_TOL:
        raise PoleError("closed-form shifted moments are singular at beta = 1")
    ctx = cfg.ctx
    # constant part of the shifted weight factor, c^(1-beta) handled as a jet
    const = _shifted_scale(params, cfg) / ctx.power(c, 1 - b)
    p = 1 - b
    cpow = Jet2(ctx.power(c, p), p * ctx.power(c, p - 1), p * (p - 1) * ctx.power(c, p - 2))
    mh0 = const * cpow * kummer_jet(g - b + 1, 2 - b, c, cfg)
    mh1 = const * (1 - b) * cpow * kummer_jet(g - b + 1, 1 - b, c, cfg)
    if params.lattice is Lattice.SHIFTED:
        return mh0, mh1
    tau = cfg.mpf(params.tau)
    return m0 + tau * mh0, m1 + tau * mh1


def closed_form_moments(params: ModelParams, cfg: PrecisionConfig):
    """``(m0, m1)`` of the lattice measure from Kummer functions (values only)."""
    m0, m1 = closed_form_moment_jets(params, cfg)
    return m0.f, m1.f


def pearson_residual_classical(beta, c, k: int, cfg: PrecisionConfig):
    """LHS - RHS of the Pearson equation of the classical Meixner weight
    ``(beta)_k c^k / k!`` at ``x = k``:

        (beta + k) w(k) - (beta + k - 1) w(k-1) - (beta + k - k/c) w(k)
    """
    beta, c = cfg.mpf(beta), cfg.mpf(c)
    if not (0 < c < 1 and beta > 0):
        raise DomainError("classical Meixner weight needs 0 < c < 1 and beta > 0")
    if k < 1:
        raise DomainError("the backward difference needs k >= 1")
    ctx = cfg.ctx

    def w(j):
        return pochhammer(beta, j) * c**j / ctx.factorial(j)

    lhs = (beta + k) * w(k) - (beta + k - 1) * w(k - 1)
    rhs = (beta + k - k / c) * w(k)
    return lhs - rhs
