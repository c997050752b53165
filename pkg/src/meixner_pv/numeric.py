"""Precision-parameterized arithmetic substrate.

Everything above this module works with mpmath numbers living in a
private :class:`mpmath.MPContext` owned by a :class:`PrecisionConfig`, so
two configurations with different mantissa lengths never interfere with
each other (and the global ``mpmath.mp`` context is never touched).

Contents
--------
PrecisionConfig
    Working precision plus default tolerances.
Jet2
    Second-order truncated Taylor jet with exact chain/product rules.
integrate_ode
    Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4) or
    Fehlberg 7(8)) in arbitrary precision.
central_diff
    Symmetric finite-difference derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Number
from typing import Callable, Sequence

import mpmath

from .errors import DenominatorZero, DomainError, StepSizeUnderflow

__all__ = [
    "PrecisionConfig",
    "DEFAULT_BITS",
    "Jet2",
    "jet_arith",
    "integrate_ode",
    "central_diff",
    "TABLEAUS",
]

DEFAULT_BITS = 256


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision and tolerances.

    Parameters
    ----------
    mantissa_bits : int
        Binary mantissa length of the working arithmetic (>= 53).
    rel_tol : number, optional
        Relative tolerance; defaults to ``2**(-mantissa_bits/2)``.
    abs_tol : number, optional
        Absolute tolerance used for series and lattice-sum truncation;
        defaults to ``2**(-mantissa_bits)``.
    """

    mantissa_bits: int = DEFAULT_BITS
    rel_tol: object = None
    abs_tol: object = None

    def __post_init__(self):
        bits = int(self.mantissa_bits)
        if bits < 53:
            raise DomainError(f"mantissa_bits must be >= 53, got {bits}")
        object.__setattr__(self, "mantissa_bits", bits)
        if self.rel_tol is None:
            object.__setattr__(self, "rel_tol", mpmath.ldexp(1, -(bits // 2)))
        if self.abs_tol is None:
            object.__setattr__(self, "abs_tol", mpmath.ldexp(1, -bits))
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise DomainError("tolerances must be positive")

    @cached_property
    def ctx(self) -> mpmath.ctx_mp.MPContext:
        ctx = mpmath.MPContext()
        ctx.prec = self.mantissa_bits
        return ctx

    @property
    def eps(self):
        """Unit roundoff of the working precision."""
        return self.ctx.eps

    @property
    def digits(self) -> float:
        """Decimal digits carried by the mantissa."""
        return self.mantissa_bits * math.log10(2)

    def mpf(self, x):
        """Convert ``x`` (int, float, str, Fraction, mpf) into the working context."""
        if isinstance(x, Fraction):
            return self.ctx.mpf(x.numerator) / x.denominator
        return self.ctx.mpf(x)


def double_precision(**kwargs) -> PrecisionConfig:
    return PrecisionConfig(53, **kwargs)


# ----------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class Jet2:
    """Value, first and second derivative of a function at one point."""

    f: object
    d1: object = 0
    d2: object = 0

    @classmethod
    def constant(cls, x) -> Jet2:
        return cls(x, 0 * x, 0 * x)

    @classmethod
    def variable(cls, x) -> Jet2:
        return cls(x, 0 * x + 1, 0 * x)

    @staticmethod
    def _lift(x) -> Jet2:
        if isinstance(x, Jet2):
            return x
        return Jet2(x, 0, 0)

    def __neg__(self):
        return Jet2(-self.f, -self.d1, -self.d2)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._lift(other)
        return Jet2(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Jet2(self.f - o.f, self.d1 - o.d1, self.d2 - o.d2)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.f * other, self.d1 * other, self.d2 * other)
        return Jet2(
            self.f * other.f,
            self.d1 * other.f + self.f * other.d1,
            self.d2 * other.f + 2 * self.d1 * other.d1 + self.f * other.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.f == 0:
            raise DenominatorZero("jet division by a jet with zero value")
        q = self.f / o.f
        q1 = (self.d1 - q * o.d1) / o.f
        q2 = (self.d2 - 2 * q1 * o.d1 - q * o.d2) / o.f
        return Jet2(q, q1, q2)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("Jet2 supports non-negative integer powers only")
        out = Jet2(1, 0, 0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def astuple(self):
        return (self.f, self.d1, self.d2)


def jet_arith(lhs: Jet2, rhs: Jet2, op: str) -> Jet2:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two jets."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown jet operation {op!r}")


# ----------------------------------------------------------------------------
# adaptive Runge-Kutta


@dataclass(frozen=True)
class Tableau:
    """Explicit embedded Runge-Kutta pair with rational coefficients."""

    name: str
    order: int  # order of the propagated solution
    c: tuple
    a: tuple  # lower-triangular rows
    b: tuple  # propagated weights
    e: tuple  # error weights (b_high - b_low)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def in_context(self, cfg: PrecisionConfig):
        key = cfg.mantissa_bits
        if key not in self._cache:
            conv = cfg.mpf
            self._cache[key] = (
                [conv(x) for x in self.c],
                [[conv(x) for x in row] for row in self.a],
                [conv(x) for x in self.b],
                [conv(x) for x in self.e],
            )
        return self._cache[key]


def _F(s):
    return Fraction(s)


_DP_B5 = tuple(map(_F, ["35/384", "0", "500/1113", "125/192", "-2187/6784", "11/84", "0"]))
_DP_B4 = tuple(
    map(_F, ["5179/57600", "0", "7571/16695", "393/640", "-92097/339200", "187/2100", "1/40"])
)

DOPRI5 = Tableau(
    name="dopri5",
    order=5,
    c=tuple(map(_F, ["0", "1/5", "3/10", "4/5", "8/9", "1", "1"])),
    a=(
        (),
        (_F("1/5"),),
        (_F("3/40"), _F("9/40")),
        (_F("44/45"), _F("-56/15"), _F("32/9")),
        (_F("19372/6561"), _F("-25360/2187"), _F("64448/6561"), _F("-212/729")),
        (_F("9017/3168"), _F("-355/33"), _F("46732/5247"), _F("49/176"), _F("-5103/18656")),
        _DP_B5[:6],
    ),
    b=_DP_B5,
    e=tuple(x - y for x, y in zip(_DP_B5, _DP_B4)),
)


def _row(n, entries):
    row = [Fraction(0)] * n
    for j, v in entries.items():
        row[j] = Fraction(v)
    return tuple(row)


# Fehlberg 7(8); the 8th-order solution is propagated (local extrapolation)
_F78_B8 = _row(13, {5: "34/105", 6: "9/35", 7: "9/35", 8: "9/280", 9: "9/280", 11: "41/840", 12: "41/840"})
_F78_B7 = _row(13, {0: "41/840", 5: "34/105", 6: "9/35", 7: "9/35", 8: "9/280", 9: "9/280", 10: "41/840"})

RKF78 = Tableau(
    name="rkf78",
    order=8,
    c=tuple(
        map(_F, ["0", "2/27", "1/9", "1/6", "5/12", "1/2", "5/6", "1/6", "2/3", "1/3", "1", "0", "1"])
    ),
    a=(
        (),
        _row(1, {0: "2/27"}),
        _row(2, {0: "1/36", 1: "1/12"}),
        _row(3, {0: "1/24", 2: "1/8"}),
        _row(4, {0: "5/12", 2: "-25/16", 3: "25/16"}),
        _row(5, {0: "1/20", 3: "1/4", 4: "1/5"}),
        _row(6, {0: "-25/108", 3: "125/108", 4: "-65/27", 5: "125/54"}),
        _row(7, {0: "31/300", 4: "61/225", 5: "-2/9", 6: "13/900"}),
        _row(8, {0: "2", 3: "-53/6", 4: "704/45", 5: "-107/9", 6: "67/90", 7: "3"}),
        _row(9, {0: "-91/108", 3: "23/108", 4: "-976/135", 5: "311/54", 6: "-19/60", 7: "17/6", 8: "-1/12"}),
        _row(
            10,
            {0: "2383/4100", 3: "-341/164", 4: "4496/1025", 5: "-301/82", 6: "2133/4100",
             7: "45/82", 8: "45/164", 9: "18/41"},
        ),
        _row(11, {0: "3/205", 5: "-6/41", 6: "-3/205", 7: "-3/41", 8: "3/41", 9: "6/41"}),
        _row(
            12,
            {0: "-1777/4100", 3: "-341/164", 4: "4496/1025", 5: "-289/82", 6: "2193/4100",
             7: "51/82", 8: "33/164", 9: "12/41", 11: "1"},
        ),
    ),
    b=_F78_B8,
    e=tuple(x - y for x, y in zip(_F78_B8, _F78_B7)),
)

TABLEAUS = {"dopri5": DOPRI5, "rkf78": RKF78}


def integrate_ode(
    rhs: Callable[[object, Sequence], Sequence],
    t0,
    y0,
    t1,
    cfg: PrecisionConfig,
    *,
    method: str = "dopri5",
    rtol=None,
    atol=None,
    h0=None,
    max_steps: int = 1_000_000,
    stats: dict | None = None,
):
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1`` and return ``y(t1)``.

    ``y0`` may be a scalar or a sequence; the result has the same shape.
    States may be complex (the independent variable stays real), which
    lets callers integrate along a parameterized contour.
    Integration runs in the working context of ``cfg``; ``t1 < t0`` is allowed.
    Local error per step is held below ``atol + rtol*|y|`` componentwise
    (defaults: ``cfg.abs_tol`` and ``cfg.rel_tol``).

    Raises
    ------
    StepSizeUnderflow
        If the step size collapses, which usually means a singularity of
        the solution lies on the integration path.
    """
    tab = TABLEAUS[method]
    c, a, b, e = tab.in_context(cfg)
    ctx = cfg.ctx
    scalar = isinstance(y0, Number) or not hasattr(y0, "__len__")
    conv = cfg.ctx.convert
    y = [conv(y0)] if scalar else [conv(v) for v in y0]
    f = (lambda t, v: [rhs(t, v[0])]) if scalar else (lambda t, v: list(rhs(t, v)))

    t = cfg.mpf(t0)
    t_end = cfg.mpf(t1)
    rtol = cfg.mpf(cfg.rel_tol if rtol is None else rtol)
    atol = cfg.mpf(cfg.abs_tol if atol is None else atol)
    span = t_end - t
    if span == 0:
        return y[0] if scalar else y
    direction = 1 if span > 0 else -1
    h = cfg.mpf(h0) if h0 is not None else abs(span) * ctx.power(rtol, ctx.mpf(1) / (tab.order + 1))
    h = min(h, abs(span)) * direction
    expo = ctx.mpf(-1) / tab.order
    n_steps = n_reject = 0
    tiny = 64 * ctx.eps

    while (t_end - t) * direction > 0:
        if n_steps + n_reject > max_steps:
            raise StepSizeUnderflow(f"exceeded {max_steps} steps at t={t}")
        if abs(h) <= tiny * max(abs(t), 1):
            raise StepSizeUnderflow(f"step size underflow at t={t}")
        if (t + h - t_end) * direction > 0:
            h = t_end - t
        ks = []
        for i in range(len(c)):
            yi = y
            if i:
                yi = [y[m] + h * ctx.fsum(a[i][j] * ks[j][m] for j in range(i) if a[i][j]) for m in range(len(y))]
            ks.append(f(t + c[i] * h, yi))
        y_new = [y[m] + h * ctx.fsum(b[i] * ks[i][m] for i in range(len(b)) if b[i]) for m in range(len(y))]
        err = 0
        for m in range(len(y)):
            em = abs(h * ctx.fsum(e[i] * ks[i][m] for i in range(len(e)) if e[i]))
            scale = atol + rtol * max(abs(y[m]), abs(y_new[m]))
            err = max(err, em / scale)
        if err <= 1:
            t = t + h
            y = y_new
            n_steps += 1
            fac = 5 if err == 0 else min(5, max(ctx.mpf("0.2"), ctx.mpf("0.9") * ctx.power(err, expo)))
        else:
            n_reject += 1
            fac = max(ctx.mpf("0.1"), ctx.mpf("0.9") * ctx.power(err, expo))
        h = h * fac

    if stats is not None:
        stats.update(steps=n_steps, rejected=n_reject)
    return y[0] if scalar else y


def central_diff(f: Callable, t, h):
    """Symmetric difference quotient ``(f(t+h) - f(t-h)) / (2h)``."""
    if not h > 0:
        raise DomainError("step h must be positive")
    return (f(t + h) - f(t - h)) / (2 * h)
