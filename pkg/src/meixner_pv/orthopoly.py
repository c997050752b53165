"""Recurrence coefficients of the orthogonal polynomials of a lattice measure.

Coefficients are stored in the monic convention

    x P_n(x) = P_{n+1}(x) + b_n P_n(x) + a_n^2 P_{n-1}(x),   a_0^2 = 0,

and extracted with the discretized Stieltjes procedure: inner products are
weighted lattice sums of polynomial values, never raw moments, so the
conditioning of the Hankel moment matrix does not enter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, PrecisionExhausted
from .measure import ModelParams, discrete_measure
from .numeric import PrecisionConfig

__all__ = [
    "RecurrenceTable",
    "MIN_DIGITS",
    "stieltjes_coeffs",
    "eval_monic",
    "eval_orthonormal",
    "orthonormality_residual",
    "classical_meixner_coeffs",
]

MIN_DIGITS = 5


@dataclass(frozen=True)
class RecurrenceTable:
    """Rows ``(n, a_n^2, b_n)`` for ``n = 0 .. n_max`` plus squared norms ``<P_n, P_n>``."""

    entries: list
    norms: list
    params: ModelParams
    precision: PrecisionConfig
    est_correct_digits: float
    truncation_K: int
    tail_bound: object
    digits_per_n: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    @property
    def a2(self) -> list:
        return [e[1] for e in self.entries]

    @property
    def b(self) -> list:
        return [e[2] for e in self.entries]

    @property
    def n_max(self) -> int:
        return len(self.entries) - 1


def stieltjes_coeffs(params: ModelParams, n_max: int, cfg: PrecisionConfig) -> RecurrenceTable:
    """Monic recurrence coefficients up to index ``n_max`` by the Stieltjes procedure.

    ``est_correct_digits`` is the working-precision digit count minus the
    accumulated cancellation in the three-term recurrence, measured at each
    step as the ratio between the weighted norm of
    ``|x - b_n| |P_n| + a_n^2 |P_{n-1}|`` and the norm of ``P_{n+1}``.

    Raises
    ------
    PrecisionExhausted
        If the estimate drops below ``MIN_DIGITS`` before ``n_max``.
    """
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    ctx = cfg.ctx
    mu = discrete_measure(params, cfg, 2 * n_max + 1)
    xs, ws = mu.nodes, mu.weights
    fsum = ctx.fsum

    p_prev = [ctx.zero] * len(xs)
    p_cur = [ctx.one] * len(xs)
    norm = fsum(ws)
    entries, norms, digits = [], [norm], []
    a2 = ctx.zero
    loss = 0.0
    total_digits = cfg.digits
    for n in range(n_max + 1):
        b = fsum(w * x * p * p for x, w, p in zip(xs, ws, p_cur)) / norm
        entries.append((n, a2, b))
        digits.append(total_digits - loss)
        if total_digits - loss < MIN_DIGITS:
            raise PrecisionExhausted(
                f"only {total_digits - loss:.1f} digits left at n={n} "
                f"(working precision {cfg.mantissa_bits} bits)"
            )
        if n == n_max:
            break
        p_next = [(x - b) * p - a2 * q for x, p, q in zip(xs, p_cur, p_prev)]
        norm_next = fsum(w * p * p for w, p in zip(ws, p_next))
        bound = fsum(
            w * (abs(x - b) * abs(p) + a2 * abs(q)) ** 2 for x, w, p, q in zip(xs, ws, p_cur, p_prev)
        )
        if norm_next <= 0:
            raise PrecisionExhausted(f"norm of P_{n + 1} vanished")
        loss += max(0.0, 0.5 * float(ctx.log10(bound / norm_next)))
        a2 = norm_next / norm
        p_prev, p_cur, norm = p_cur, p_next, norm_next
        norms.append(norm)

    return RecurrenceTable(
        entries=entries,
        norms=norms,
        params=params,
        precision=cfg,
        est_correct_digits=total_digits - loss,
        truncation_K=mu.truncation_K,
        tail_bound=mu.tail_bound,
        digits_per_n=digits,
    )


def eval_monic(table: RecurrenceTable, n: int, x):
    """Monic ``P_n(x)`` by forward recurrence from ``P_{-1} = 0``, ``P_0 = 1``."""
    if n < 0 or n > len(table.entries):
        raise IndexError(f"degree {n} outside table of length {len(table.entries)}")
    p_prev, p = 0, 1
    for k in range(n):
        _, a2, b = table.entries[k]
        p_prev, p = p, (x - b) * p - a2 * p_prev
    return p


def eval_orthonormal(table: RecurrenceTable, n: int, x):
    """Orthonormal ``p_n(x) = P_n(x) / sqrt(<P_n, P_n>)``."""
    if n >= len(table.norms):
        raise IndexError(f"no norm stored for degree {n}")
    ctx = table.precision.ctx
    return eval_monic(table, n, x) / ctx.sqrt(table.norms[n])


def orthonormality_residual(table: RecurrenceTable, params: ModelParams, n: int, m: int, cfg: PrecisionConfig):
    """``|sum_x p_n(x) p_m(x) w(x) - delta_{nm}|`` over the truncated lattice."""
    mu = discrete_measure(params, cfg, 2 * max(n, m))
    s = cfg.ctx.fsum(
        w * eval_orthonormal(table, n, x) * eval_orthonormal(table, m, x) for x, w in zip(mu.nodes, mu.weights)
    )
    return abs(s - (1 if n == m else 0))


def classical_meixner_coeffs(beta, c, n: int):
    """Closed-form monic recurrence coefficients of the classical Meixner polynomials:

        a_n^2 = n (n + beta - 1) c / (1 - c)^2,   b_n = (n + (n + beta) c) / (1 - c)
    """
    if not c < 1:
        raise DomainError("classical Meixner coefficients need c < 1")
    if not (c > 0 and beta > 0):
        raise DomainError("classical Meixner coefficients need c > 0 and beta > 0")
    a2 = n * (n + beta - 1) * c / (1 - c) ** 2
    b = (n + (n + beta) * c) / (1 - c)
    return a2, b

