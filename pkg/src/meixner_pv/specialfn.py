"""Gamma-family and confluent hypergeometric primitives.

Kummer's function is summed directly from its Maclaurin series in the
working precision; the arguments needed here are modest (``0 < z`` of
order one), so no asymptotic expansion is required.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import DomainError, PoleError
from .numeric import Jet2, PrecisionConfig

__all__ = ["KummerArgs", "log_gamma", "pochhammer", "kummer_m", "kummer_m_dz", "kummer_jet"]

_POLE_TOL = 1e-12


@dataclass(frozen=True)
class KummerArgs:
    a: object
    b: object
    z: object

    def __post_init__(self):
        b = mpmath.mpf(self.b) if isinstance(self.b, str) else self.b
        if b <= 0 and abs(b - round(b)) < _POLE_TOL:
            raise PoleError(f"M(a, b, z) has a pole at b = {b}")


def log_gamma(x, cfg: PrecisionConfig):
    """ln Gamma(x) for real ``x > 0``."""
    x = cfg.mpf(x)
    if x <= 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return cfg.ctx.loggamma(x)


def pochhammer(x, k: int):
    """Rising factorial ``x (x+1) ... (x+k-1)`` as an explicit product.

    Works for any real (or exact rational) ``x``, including non-positive
    values, and is exact when the inputs are.
    """
    if k < 0:
        raise DomainError("pochhammer needs k >= 0")
    out = 1
    for i in range(k):
        out = out * (x + i)
    return out


def kummer_m(args: KummerArgs, cfg: PrecisionConfig):
    """Confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).

    The series is summed until a term falls below ``cfg.abs_tol`` relative
    to the partial sum while terms are decreasing in magnitude.
    """
    ctx = cfg.ctx
    a, b, z = cfg.mpf(args.a), cfg.mpf(args.b), cfg.mpf(args.z)
    tol = cfg.mpf(cfg.abs_tol)
    total = term = ctx.mpf(1)
    prev = abs(term)
    k = 0
    while True:
        term = term * (a + k) * z / ((b + k) * (k + 1))
        k += 1
        total += term
        mag = abs(term)
        # past k > |a| + |z| the term ratio stays below one
        if mag <= tol * abs(total) and mag <= prev and k > abs(a) + abs(z):
            return total
        prev = mag


def kummer_m_dz(args: KummerArgs, cfg: PrecisionConfig):
    """d/dz M(a, b, z) = (a/b) M(a+1, b+1, z)."""
    a, b = cfg.mpf(args.a), cfg.mpf(args.b)
    return a / b * kummer_m(KummerArgs(a + 1, b + 1, args.z), cfg)


def kummer_jet(a, b, z, cfg: PrecisionConfig) -> Jet2:
    """Jet of ``s -> M(a, b, s)`` at ``s = z`` (value, first and second z-derivative)."""
    a, b = cfg.mpf(a), cfg.mpf(b)
    m0 = kummer_m(KummerArgs(a, b, z), cfg)
    m1 = a / b * kummer_m(KummerArgs(a + 1, b + 1, z), cfg)
    m2 = a * (a + 1) / (b * (b + 1)) * kummer_m(KummerArgs(a + 2, b + 2, z), cfg)
    return Jet2(m0, m1, m2)
