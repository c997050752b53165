"""Painleve V: residuals, Backlund transformations and the special families
attached to the generalized Meixner recurrence coefficients.

    y'' = (1/(2y) + 1/(y-1)) y'^2 - y'/t + (y-1)^2 (A y + B/y)/t^2
          + C y/t + D y (y+1)/(y-1)

Transformations are verified as residual identities: a jet ``(y, y', y'')``
with ``y''`` taken from the equation is pushed through the (rational)
transformation with jet arithmetic, and the image jet is substituted into
the target equation.  The third derivative needed for the image's second
derivative comes from differentiating the equation itself, so only
``(t, y, y')`` are free.

All routines are generic in the number type: floats, mpmath numbers and
``fractions.Fraction`` all work (Fractions give exact parameter maps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateM, DenominatorZero, DomainError, SignDomain, SingularityError
from .numeric import Jet2

__all__ = [
    "PVParams",
    "SignTriple",
    "CaseId",
    "NotApplicable",
    "pv_rhs",
    "pv_residual",
    "solution_jets",
    "backlund",
    "backlund_params",
    "compose",
    "image_roots",
    "case1_roots",
    "case_params",
    "v_from_y",
    "ladder",
    "ladder_params",
    "riccati_y_rhs",
    "riccati_jet",
    "lincomb",
    "lincomb_jet",
    "remark2_transforms",
    "exact_sqrt",
    "COMPOSITE_SIGNS",
    "LADDER_SIGNS",
    "case1_composite",
    "sample_jet",
    "DENOM_TOL",
]

# rejection threshold for denominators at sample points
DENOM_TOL = 1e-6


@dataclass(frozen=True)
class PVParams:
    A: object
    B: object
    C: object
    D: object

    def astuple(self):
        return (self.A, self.B, self.C, self.D)


@dataclass(frozen=True)
class SignTriple:
    e1: int
    e2: int
    e3: int

    def __post_init__(self):
        for e in (self.e1, self.e2, self.e3):
            if e not in (1, -1):
                raise DomainError(f"sign components must be +1 or -1, got {e}")

    def __iter__(self):
        return iter((self.e1, self.e2, self.e3))

    def __str__(self):
        return "({:+d},{:+d},{:+d})".format(self.e1, self.e2, self.e3)

    @classmethod
    def all(cls):
        return [cls(a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)]


@dataclass(frozen=True)
class CaseId:
    case: int
    n: int
    gamma: object
    beta: object
    k1: object = 1

    def __post_init__(self):
        if self.case not in (1, 2, 3):
            raise DomainError("case must be 1, 2 or 3")
        if self.k1 == 0:
            raise DomainError("k1 must be nonzero")
        if self.gamma == 1:
            raise DomainError("gamma = 1 is excluded")


@dataclass(frozen=True)
class NotApplicable:
    """Returned when a linear combination of two Backlund images is not covered."""

    reason: str


def _unit(*xs):
    """1 in the number type of ``xs`` (Fraction when all are exact)."""
    for x in xs:
        if not isinstance(x, (int, Fraction)):
            return x * 0 + 1
    return Fraction(1)


def _value(x):
    return x.f if isinstance(x, Jet2) else x


def exact_sqrt(x):
    """Principal square root; exact for perfect-square rationals."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if x < 0:
            raise SignDomain(f"square root of negative {x}")
        num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if num * num == x.numerator and den * den == x.denominator:
            return Fraction(num, den)
        return math.sqrt(x)
    if x < 0:
        raise SignDomain(f"square root of negative {x}")
    ctx = getattr(type(x), "context", None)
    if ctx is not None:
        return ctx.sqrt(x)
    return math.sqrt(x)


def pv_rhs(t, y, yp, p: PVParams):
    """``y''`` from Painleve V.  Accepts numbers or jets for ``t``, ``y``, ``yp``."""
    if _value(t) == 0:
        raise SingularityError("t = 0")
    if _value(y) == 0 or _value(y) == 1:
        raise SingularityError("y = 0 or y = 1")
    A, B, C, D = p.astuple()
    ym1 = y - 1
    return (
        (1 / (2 * y) + 1 / ym1) * yp * yp
        - yp / t
        + ym1 * ym1 * (A * y + B / y) / (t * t)
        + C * y / t
        + D * y * (y + 1) / ym1
    )


def pv_residual(t, jet: Jet2, p: PVParams):
    """``y'' - P_V(t, y, y')`` for the jet ``(y, y', y'')``."""
    return jet.d2 - pv_rhs(t, jet.f, jet.d1, p)


def solution_jets(t, y, yp, p: PVParams):
    """Jets of ``t``, ``y`` and ``y'`` along the P_V solution through ``(t, y, y')``.

    ``y''`` and ``y'''`` are eliminated with the equation.
    """
    ypp = pv_rhs(t, y, yp, p)
    tj = Jet2.variable(t)
    # only the first derivative of the right side is needed, so y''' may be a placeholder
    yppp = pv_rhs(tj, Jet2(y, yp, ypp), Jet2(yp, ypp, 0), p).d1
    return tj, Jet2(y, yp, ypp), Jet2(yp, ypp, yppp)


def _check_den(den, what):
    if _value(den) == 0:
        raise DenominatorZero(f"vanishing denominator in {what}")


def _abd(p: PVParams, s: SignTriple, roots=None):
    if roots is not None:
        ra, rb, rd = roots
    else:
        if p.A < 0 or p.B > 0 or not p.D < 0:
            raise SignDomain("Backlund transformation needs A >= 0, B <= 0, D < 0")
        ra, rb, rd = exact_sqrt(2 * p.A), exact_sqrt(-2 * p.B), exact_sqrt(-2 * p.D)
    return s.e1 * ra, s.e2 * rb, s.e3 * rd


def backlund_params(p: PVParams, s: SignTriple, roots=None) -> PVParams:
    """Parameters of the image of ``T_s``.

    ``roots`` optionally replaces the principal square roots of
    ``(2A, -2B, -2D)`` by signed ones (see :func:`image_roots`).
    """
    a, b, d = _abd(p, s, roots)
    C, D = p.C, p.D
    A1 = -((C + d * (1 - a - b)) ** 2) / (16 * D)
    B1 = (C - d * (1 - a - b)) ** 2 / (16 * D)
    return PVParams(A1, B1, d * (b - a), D)


def image_roots(p: PVParams, s: SignTriple, roots=None):
    """Signed roots of ``(2A1, -2B1, -2D1)`` that vary rationally with the parameters.

    With ``X = C + d(1-a-b)`` and ``Y = C - d(1-a-b)`` they are
    ``(X/(2d), Y/(2d), d)``.  Threading these through a composition, instead
    of taking principal roots at every step, keeps composite identities
    valid on the whole parameter family (principal roots flip sign where
    e.g. ``gamma - beta`` changes sign).
    """
    a, b, d = _abd(p, s, roots)
    X = p.C + d * (1 - a - b)
    Y = p.C - d * (1 - a - b)
    return X / (2 * d), Y / (2 * d), d


def case1_roots(n, beta, k1=1):
    """Signed roots ``(beta - 1, n, k1)`` of the case-1 parameters."""
    return beta - 1, n, k1


def backlund(t, jet: Jet2, p: PVParams, s: SignTriple, roots=None):
    """Apply ``T_s``: ``y1 = 1 - 2 d t y / (t y' - a y^2 + (a - b + d t) y + b)``.

    ``a, b, d`` are ``s`` times the principal roots of ``2A, -2B, -2D``, or
    times ``roots`` when given.  ``jet.d2`` is ignored and recomputed from
    P_V(p).  Returns the jet of ``y1`` and its parameters.
    """
    a, b, d = _abd(p, s, roots)
    tj, yj, ypj = solution_jets(t, jet.f, jet.d1, p)
    den = tj * ypj - a * yj * yj + (a - b + d * tj) * yj + b
    _check_den(den, "Backlund transformation")
    y1 = 1 - 2 * d * tj * yj / den
    return y1, backlund_params(p, s, roots)


def compose(t, jet: Jet2, p: PVParams, signs, roots=None):
    """Apply ``T_{s_k} o ... o T_{s_1}`` for ``signs = [s_1, ..., s_k]`` (rightmost first).

    With ``roots`` given for the input parameters, signed roots are
    propagated through :func:`image_roots`; otherwise every step uses
    principal roots.
    """
    for s in signs:
        new_jet, new_p = backlund(t, jet, p, s, roots)
        if roots is not None:
            roots = image_roots(p, s, roots)
        jet, p = new_jet, new_p
    return jet, p


def case_params(cid: CaseId) -> PVParams:
    """Painleve V parameters of the three reductions (``D = -k1^2/2``)."""
    one = _unit(cid.gamma, cid.beta)
    n, g, b, k = cid.n * one, cid.gamma, cid.beta, cid.k1 * one
    half = one / 2
    if cid.case == 1:
        return PVParams(half * (b - 1) ** 2, -half * n**2, k * (n - b + 2 * g), -half * k**2)
    if cid.case == 2:
        return PVParams(half * (b - g) ** 2, -half * (g + n - 1) ** 2, k * (2 + n - b), -half * k**2)
    return PVParams(half * (g - 1) ** 2, -half * (g - b + n) ** 2, k * (b + n), -half * k**2)


def _case1_den(t, y, yp, n, g, b, k):
    return t * yp - (1 + b - 2 * g) * y * y + (1 + n - k * t + b - 2 * g) * y - n


def v_from_y(cid: CaseId, t, jet: Jet2):
    """The auxiliary variable ``V(t) = v_n(k1 t)`` expressed through a P_V solution ``y``."""
    y, yp = jet.f, jet.d1
    if y == 0 or y == 1:
        raise SingularityError("y = 0 or y = 1")
    n, g, b, k = cid.n, cid.gamma, cid.beta, cid.k1
    if cid.case == 1:
        inner = _case1_den(t, y, yp, n, g, b, k)
    elif cid.case == 2:
        inner = t * yp - (b - g) * y * y + (n - 1 - k * t + b) * y + 1 - n - g
    else:
        inner = t * yp + (g - 1) * y * y + (1 + n - k * t - b) * y - n + b - g
    return k * t * inner / (2 * (g - 1) * (y - 1) * y)


def ladder_params(n, gamma, beta) -> PVParams:
    """Case-1 parameters with ``k1 = 1``."""
    return case_params(CaseId(1, n, gamma, beta, 1))


def ladder(t, jet: Jet2, direction: str, n: int, gamma, beta):
    """Map a solution ``y_n`` of P_V(case 1, n, k1=1) to ``y_{n+1}`` or ``y_{n-1}``.

    ``direction`` is ``"up"`` or ``"down"``.  ``jet.d2`` is recomputed.
    """
    if beta == 1:
        raise DomainError("the ladder formulas divide by beta - 1")
    g, b = gamma, beta
    p = ladder_params(n, g, b)
    tj, y, yp = solution_jets(t, jet.f, jet.d1, p)
    if direction == "up":
        den1 = (b - 1) * (tj * yp + y * (1 + n + tj - b + (b - 1) * y) - n)
        den2 = (b - 1) * (tj * yp + y * (n - 1 + tj + b + (1 - b) * y) - n)
        _check_den(den1, "ladder")
        _check_den(den2, "ladder")
        return 1 - 2 * tj * (n + g) * y / den1 + 2 * tj * (1 + n - b + g) * y / den2
    if direction == "down":
        den1 = (b - 1) * (tj * yp - y * (1 + n + tj - b + (b - 1) * y) + n)
        den2 = (b - 1) * (tj * yp - y * (n - 1 + tj + b + (1 - b) * y) + n)
        _check_den(den1, "ladder")
        _check_den(den2, "ladder")
        return 1 + 2 * tj * (g + n - 1) * y / den1 - 2 * tj * (n - b + g) * y / den2
    raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")


def riccati_y_rhs(t, y, gamma, beta):
    """``y'`` from ``t y' = (beta - gamma) y^2 + (t - 1 - beta + 2 gamma) y + 1 - gamma``."""
    if _value(t) == 0:
        raise DomainError("the Riccati equation is singular at t = 0")
    return ((beta - gamma) * y * y + (t - 1 - beta + 2 * gamma) * y + 1 - gamma) / t


def riccati_jet(t, y, gamma, beta) -> Jet2:
    """``(y, y', y'')`` of the Riccati solution through ``(t, y)``."""
    yp = riccati_y_rhs(t, y, gamma, beta)
    # differentiate the right side along the solution
    ypp = riccati_y_rhs(Jet2.variable(t), Jet2(y, yp, 0), gamma, beta).d1
    return Jet2(y, yp, ypp)


def _lincomb_case(eps: SignTriple, delta: SignTriple):
    e1, e2, e3 = eps
    if delta.e3 != e3:
        return None
    if delta.e1 == e1 and delta.e2 == -e2:
        return 1
    if delta.e1 == -e1 and delta.e2 == e2:
        return 2
    return None


def lincomb(p: PVParams, eps: SignTriple, delta: SignTriple, roots=None):
    """Mixing constant ``M`` and parameters of ``M T_eps y + (1 - M) T_delta y``.

    Only ``D = -2`` is covered.  Returns :class:`NotApplicable` for sign
    patterns that only admit ``M = 0`` or ``M = 1`` (``delta_3 = -eps_3``,
    or both of the first two signs flipped) and for ``delta = eps``.
    """
    if p.D != -2:
        raise DomainError("the linear-combination family needs D = -2")
    case = _lincomb_case(eps, delta)
    if case is None:
        if delta == eps:
            return NotApplicable("identical transformations")
        if delta.e3 != eps.e3:
            return NotApplicable("delta_3 = -eps_3 gives only M = 0 or M = 1")
        return NotApplicable("flipping both eps_1 and eps_2 gives only M = 0 or M = 1")
    e1, e2, e3 = eps
    if roots is not None:
        ra, rb = roots[0], roots[1]
    else:
        ra, rb = exact_sqrt(2 * p.A), exact_sqrt(-2 * p.B)
    A, B, C = p.A, p.B, p.C
    num = 2 * e1 * ra + 2 * e2 * rb - e3 * C - 2
    if case == 1:
        den = 4 * e2 * rb
        if den == 0:
            raise DegenerateM("B = 0 leaves M undefined")
        M = num / den
        pv = PVParams(-B, (2 * e1 * ra - 2 * A - 1) / 2, -C - 2 * e3, p.D)
    else:
        den = 4 * e1 * ra
        if den == 0:
            raise DegenerateM("A = 0 leaves M undefined")
        M = num / den
        pv = PVParams(A, (2 * e2 * rb + 2 * B - 1) / 2, C + 2 * e3, p.D)
    if M == 0 or M == 1:
        raise DegenerateM(f"M = {M}")
    return M, pv


def lincomb_jet(t, jet: Jet2, p: PVParams, eps: SignTriple, delta: SignTriple, roots=None):
    """Jet of ``v = M T_eps y + (1 - M) T_delta y`` and its parameters."""
    res = lincomb(p, eps, delta, roots)
    if isinstance(res, NotApplicable):
        return res
    M, pv = res
    y1, _ = backlund(t, jet, p, eps, roots)
    y2, _ = backlund(t, jet, p, delta, roots)
    return M * y1 + (1 - M) * y2, pv


def remark2_transforms(t, jet: Jet2, n: int, gamma, beta, k1=1):
    """Images ``(Y1, Y2)`` of a case-1 solution; ``Y1`` solves case 2, ``Y2`` case 3.

        Y1 = y - 2 (gamma - 1)(y - 1)^2 y / den,   Y2 = y + 2 (beta - gamma)(y - 1)^2 y / den

    with ``den = t y' - (1 + beta - 2 gamma) y^2 + (1 + n - k1 t + beta - 2 gamma) y - n``.
    """
    p = case_params(CaseId(1, n, gamma, beta, k1))
    tj, y, yp = solution_jets(t, jet.f, jet.d1, p)
    den = _case1_den(tj, y, yp, n, gamma, beta, k1)
    _check_den(den, "case-1 transformation")
    w = (y - 1) * (y - 1) * y / den
    return y - 2 * (gamma - 1) * w, y + 2 * (beta - gamma) * w


# sign sequences, first map first, for use with tracked roots from case1_roots
COMPOSITE_SIGNS = {
    "Y1": (SignTriple(1, -1, 1), SignTriple(1, 1, -1)),
    "Y2": (SignTriple(-1, -1, 1), SignTriple(1, 1, -1)),
}
LADDER_SIGNS = {
    "up": (SignTriple(-1, -1, 1), SignTriple(-1, -1, 1), SignTriple(1, 1, -1)),
    "down": (SignTriple(1, 1, 1), SignTriple(1, 1, -1), SignTriple(-1, -1, 1)),
}


def case1_composite(t, jet: Jet2, n: int, gamma, beta, signs, k1=1):
    """Compose Backlund maps on a case-1 solution with roots tracked from ``(beta - 1, n, k1)``.

    Principal roots would flip sign with ``beta - 1`` or ``gamma - beta``
    and break composite identities on part of the parameter range.
    """
    p = case_params(CaseId(1, n, gamma, beta, k1))
    return compose(t, jet, p, signs, case1_roots(n, beta, k1))


def sample_jet(rng, p: PVParams, cfg=None, *, t_range=(0.2, 2.0), tries=1000):
    """Random admissible ``(t, Jet2(y, y', y''))`` for P_V(p).

    ``t`` is uniform on ``t_range``, ``y`` on ``[0.1, 0.9] U [1.1, 3]`` and
    ``y'`` on ``[-2, 2]``.  Samples where ``y``, ``y - 1`` or ``t`` come within
    ``DENOM_TOL`` of zero are redrawn.  ``rng`` is a ``random.Random``.
    """
    conv = cfg.mpf if cfg is not None else float
    for _ in range(tries):
        t = rng.uniform(*t_range)
        y = rng.uniform(0.1, 0.9) if rng.random() < 0.4 else rng.uniform(1.1, 3.0)
        yp = rng.uniform(-2.0, 2.0)
        if min(abs(t), abs(y), abs(y - 1)) < DENOM_TOL:
            continue
        t, y, yp = conv(t), conv(y), conv(yp)
        return t, Jet2(y, yp, pv_rhs(t, y, yp, p))
    raise SingularityError("no admissible sample found")
