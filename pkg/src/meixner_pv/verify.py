"""Verification suites.

Each suite returns a list of :class:`Check` records carrying the largest
residual seen and the tolerance it was held to.  Random samples are drawn
from ``random.Random(seed)`` streams derived from the suite name, so a
fixed seed reproduces every report exactly.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .dynamics import (
    UVState,
    ab_to_uv,
    chain_from_table,
    discrete_residuals,
    initial_v0_jet,
    integrate_uv,
    moment_state,
    riccati_v0_rhs,
    toda_rhs,
)
from .errors import DenominatorZero, DomainError, MeixnerPVError, SingularityError
from .measure import Lattice, ModelParams, validate
from .numeric import Jet2, PrecisionConfig, integrate_ode
from .orthopoly import stieltjes_coeffs
from .painleve import (
    DENOM_TOL,
    LADDER_SIGNS,
    COMPOSITE_SIGNS,
    CaseId,
    NotApplicable,
    PVParams,
    SignTriple,
    backlund,
    backlund_params,
    case1_composite,
    case1_roots,
    case_params,
    image_roots,
    ladder,
    lincomb,
    lincomb_jet,
    pv_residual,
    remark2_transforms,
    riccati_jet,
    riccati_y_rhs,
    sample_jet,
)

__all__ = ["Check", "VerifyConfig", "SUITES", "SAMPLE_TOL", "sample_tol", "run_suite", "run_all", "format_report"]

log = logging.getLogger(__name__)

PASS, FAIL, NA = "pass", "fail", "n/a"

# tolerance for residual identities at random samples
SAMPLE_TOL = 1e-10


def sample_tol(cfg: PrecisionConfig) -> float:
    """``max(SAMPLE_TOL, 1e3 rel_tol)``: images of size up to ``1/DENOM_TOL`` cost digits."""
    return max(SAMPLE_TOL, 1e3 * float(cfg.rel_tol))


@dataclass
class Check:
    suite: str
    name: str
    status: str
    max_residual: float | None = None
    tol: float | None = None
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == FAIL


@dataclass(frozen=True)
class VerifyConfig:
    gamma: object = "1.5"
    beta: object = "0.7"
    c: object = "0.4"
    tau: object = None
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    seed: int = 0
    samples: int = 100
    n_max: int = 15

    def taus(self):
        return [self.tau] if self.tau is not None else ["0.5", "1", "2"]

    def param_sets(self):
        """One ModelParams per lattice (several for the bi-lattice when tau is unset)."""
        out = [
            ModelParams(self.gamma, self.beta, self.c, Lattice.PLAIN),
            ModelParams(self.gamma, self.beta, self.c, Lattice.SHIFTED),
        ]
        out += [ModelParams(self.gamma, self.beta, self.c, Lattice.BILATTICE, t) for t in self.taus()]
        return out

    def rng(self, suite: str) -> random.Random:
        return random.Random(f"{self.seed}:{suite}")


def _label(params: ModelParams) -> str:
    s = params.lattice.value
    if params.lattice is Lattice.BILATTICE:
        s += f"(tau={params.tau})"
    return s


def _judge(suite, name, worst, tol, detail=""):
    status = PASS if worst <= tol else FAIL
    return Check(suite, name, status, float(worst), float(tol), detail)


def _skip_invalid(suite, params):
    bad = validate(params)
    if bad:
        return Check(suite, _label(params), NA, detail="invalid parameters: " + ", ".join(bad))
    return None


# ---------------------------------------------------------------- discrete


def suite_discrete(vc: VerifyConfig):
    cfg = vc.precision
    out = []
    for params in vc.param_sets():
        skip = _skip_invalid("discrete", params)
        if skip:
            out.append(skip)
            continue
        if abs(float(params.gamma) - 1) < 1e-9:
            out.append(Check("discrete", _label(params), NA, detail="gamma = 1"))
            continue
        table = stieltjes_coeffs(params, vc.n_max + 1, cfg)
        chain = chain_from_table(table, cfg)
        worst, tol_worst, ratio = 0, 1, 0
        for n in range(vc.n_max + 1):
            s = chain[n]
            v_prev = chain[n - 1].v if n > 0 else 0
            r1, r2 = discrete_residuals(s.u, s.v, chain[n + 1].u, v_prev, n, params, cfg)
            scale = (1 + abs(s.u) + abs(s.v) + n * s.c) ** 3
            tol = 10 ** (3 - table.digits_per_n[n + 1]) * scale
            r = max(abs(r1), abs(r2))
            if r / tol > ratio:
                worst, tol_worst, ratio = r, tol, r / tol
        out.append(_judge("discrete", f"{_label(params)} n<={vc.n_max}", worst, tol_worst))
    return out


# -------------------------------------------------------------------- toda


def _toda_error(params, cfg, n_max, h):
    ctx = cfg.ctx
    c = cfg.mpf(params.c)
    tp = stieltjes_coeffs(params.with_c(c + h), n_max + 1, cfg)
    tm = stieltjes_coeffs(params.with_c(c - h), n_max + 1, cfg)
    t0 = stieltjes_coeffs(params.with_c(c), n_max + 1, cfg)
    errs = []
    for n in range(n_max + 1):
        da2_fd = (tp.a2[n] - tm.a2[n]) / (2 * h)
        db_fd = (tp.b[n] - tm.b[n]) / (2 * h)
        b_prev = t0.b[n - 1] if n > 0 else ctx.zero
        da2, db = toda_rhs(t0.a2[n], t0.b[n], b_prev, t0.a2[n + 1], c)
        errs.append(max(abs(da2_fd - da2), abs(db_fd - db)))
    return errs


def suite_toda(vc: VerifyConfig, h="1e-3", n_max=10):
    cfg = vc.precision
    h = cfg.mpf(h)
    # differences below this are rounding noise, not truncation error
    floor = 1e3 * cfg.eps / h
    out = []
    for params in vc.param_sets():
        skip = _skip_invalid("toda", params)
        if skip:
            out.append(skip)
            continue
        e1 = _toda_error(params, cfg, n_max, h)
        e2 = _toda_error(params, cfg, n_max, h / 2)
        bad, lo, hi = [], 4.0, 4.0
        for n, (a, b) in enumerate(zip(e1, e2)):
            if a <= floor:
                continue
            r = float(a / b)
            lo, hi = min(lo, r), max(hi, r)
            if not 3.5 <= r <= 4.5:
                bad.append(n)
        status = FAIL if bad else PASS
        detail = f"h^2 ratio in [{lo:.3f}, {hi:.3f}]" + (f", off at n={bad}" if bad else "")
        out.append(Check("toda", f"{_label(params)} n<={n_max}", status, float(max(e1)), None, detail))
    return out


# --------------------------------------------------------------------- ode


def ode_settings(cfg: PrecisionConfig):
    """(method, integrator tolerance, acceptance tolerance) for the working precision."""
    if cfg.mantissa_bits <= 64:
        return "dopri5", 1e-12, 1e-8
    itol = max(1e-26, 2.0 ** (-0.85 * cfg.mantissa_bits))
    return "rkf78", itol, max(1e-20, 1e6 * itol)


def suite_ode(vc: VerifyConfig, c0="0.3", c1="0.5", ns=(1, 2, 3)):
    cfg = vc.precision
    method, itol, tol = ode_settings(cfg)
    out = []
    for params in vc.param_sets():
        if abs(float(params.gamma) - 1) < 1e-9:
            out.append(Check("ode", _label(params), NA, detail="gamma = 1"))
            continue
        start, end = params.with_c(c0), params.with_c(c1)
        skip = _skip_invalid("ode", start) or _skip_invalid("ode", end)
        if skip:
            out.append(skip)
            continue
        worst = 0
        for n in ns:
            s0 = moment_state(start, n, cfg)
            s1 = integrate_uv(s0, c1, cfg, method=method, rtol=itol, atol=itol)
            ref = moment_state(end, n, cfg)
            worst = max(worst, abs(s1.u - ref.u), abs(s1.v - ref.v))
        out.append(_judge("ode", f"{_label(params)} c {c0}->{c1} n={list(ns)}", worst, tol, method))
    return out


# ---------------------------------------------------------------- riccati


def suite_riccati(vc: VerifyConfig, ts=("0.2", "0.4", "0.8")):
    cfg = vc.precision
    out = []
    g, be = cfg.mpf(vc.gamma), cfg.mpf(vc.beta)
    if abs(g - 1) < 1e-9:
        return [Check("riccati", "all", NA, detail="gamma = 1")]
    tol = max(1e3 * cfg.rel_tol, 1e-25) if cfg.mantissa_bits > 64 else 1e3 * cfg.rel_tol
    for params in vc.param_sets():
        worst = 0
        skipped = None
        for t in ts:
            p = params.with_c(t)
            skipped = _skip_invalid("riccati", p)
            if skipped:
                break
            _, v = initial_v0_jet(p, cfg)
            tt = cfg.mpf(t)
            res = tt * tt * (v.d1 - riccati_v0_rhs(v.f, tt, p, cfg))
            worst = max(worst, abs(res))
        out.append(skipped or _judge("riccati", f"v0 {_label(params)}", worst, tol, "analytic Kummer derivatives"))

    # Riccati seed solves P_V with the case-2 parameters at n = 0
    rng = vc.rng("riccati")
    p2 = case_params(CaseId(2, 0, g, be, 1))
    worst = 0
    for _ in range(vc.samples):
        t = cfg.mpf(rng.uniform(0.2, 2.0))
        y = cfg.mpf(rng.uniform(0.1, 0.9) if rng.random() < 0.4 else rng.uniform(1.1, 3.0))
        worst = max(worst, abs(pv_residual(t, riccati_jet(t, y, g, be), p2)))
    out.append(_judge("riccati", f"seed in P_V case 2, {vc.samples} samples", worst, SAMPLE_TOL))

    # v0 = t/y along a Riccati solution seeded from the Kummer value
    params = ModelParams(vc.gamma, vc.beta, "0.2", Lattice.PLAIN)
    if not validate(params):
        method, itol, _ = ode_settings(cfg)
        t0, t1 = cfg.mpf("0.2"), cfg.mpf("0.8")
        _, v_start = initial_v0_jet(params, cfg)
        (y1,) = integrate_ode(
            lambda t, y: [riccati_y_rhs(t, y[0], g, be)], t0, [t0 / v_start.f], t1, cfg,
            method=method, rtol=itol, atol=itol,
        )
        _, v_end = initial_v0_jet(params.with_c(t1), cfg)
        err = abs(t1 / y1 - v_end.f)
        out.append(_judge("riccati", "v0 = t/y on [0.2, 0.8]", err, 1e3 * itol, method))
    return out


# --------------------------------------------------------------- backlund


def backlund_families(gamma, beta):
    """Three admissible case families as (label, CaseId)."""
    return [
        ("case1 n=1", CaseId(1, 1, gamma, beta, 1)),
        ("case2 n=2", CaseId(2, 2, gamma, beta, 1)),
        ("case3 n=1 k1=2", CaseId(3, 1, gamma, beta, 2)),
    ]


def _draw(rng, p, cfg, fn, samples, max_tries=20):
    """Apply ``fn(t, jet)`` at ``samples`` admissible points; redraw near singular denominators."""
    out = []
    for _ in range(samples):
        for _ in range(max_tries):
            t, jet = sample_jet(rng, p, cfg)
            try:
                res = fn(t, jet)
            except (DenominatorZero, SingularityError):
                continue
            if res is None:
                continue
            out.append(res)
            break
        else:
            raise SingularityError("could not find admissible samples")
    return out


def _bounded(j: Jet2):
    return max(abs(j.f), abs(j.d1)) < 1 / DENOM_TOL


def suite_backlund(vc: VerifyConfig):
    cfg = vc.precision
    tol = sample_tol(cfg)
    rng = vc.rng("backlund")
    g, be = cfg.mpf(vc.gamma), cfg.mpf(vc.beta)
    out = []
    for label, cid in backlund_families(g, be):
        p = case_params(cid)
        worst = 0
        d_ok = True
        for s in SignTriple.all():
            p1 = backlund_params(p, s)
            d_ok &= p1.D == p.D

            def res(t, jet, s=s, p1=p1):
                y1, _ = backlund(t, jet, p, s)
                if not _bounded(y1):
                    return None
                return abs(pv_residual(t, y1, p1))

            worst = max([worst] + _draw(rng, p, cfg, res, vc.samples))
        out.append(_judge("backlund", f"{label}: 8 sign triples x {vc.samples}", worst, tol))
        out.append(Check("backlund", f"{label}: D1 = D", PASS if d_ok else FAIL))

    # composite parameter maps, exact on rationals
    gq, bq = Fraction(vc.gamma), Fraction(vc.beta)
    bad = []
    for n in range(4):
        p = case_params(CaseId(1, n, gq, bq, 1))
        for key, case in (("Y1", 2), ("Y2", 3)):
            roots, q = case1_roots(n, bq), p
            for s in COMPOSITE_SIGNS[key]:
                q, roots = backlund_params(q, s, roots), image_roots(q, s, roots)
            if q != case_params(CaseId(case, n, gq, bq, 1)):
                bad.append(f"{key} n={n}")
    out.append(Check("backlund", "composite parameter maps (exact)", FAIL if bad else PASS, detail=", ".join(bad)))

    # composites agree pointwise with the closed-form case maps
    worst = 0
    for n in (1, 2):
        p = case_params(CaseId(1, n, g, be, 1))

        def diff(t, jet, n=n):
            y1, y2 = remark2_transforms(t, jet, n, g, be)
            c1, _ = case1_composite(t, jet, n, g, be, COMPOSITE_SIGNS["Y1"])
            c2, _ = case1_composite(t, jet, n, g, be, COMPOSITE_SIGNS["Y2"])
            if not (_bounded(y1) and _bounded(y2)):
                return None
            return max(abs(c1.f - y1.f), abs(c2.f - y2.f))

        worst = max([worst] + _draw(rng, p, cfg, diff, vc.samples))
    out.append(_judge("backlund", "composites match Y1, Y2 pointwise", worst, tol))

    # case maps solve their target equations
    worst = 0
    for n in (0, 1, 2):
        p = case_params(CaseId(1, n, g, be, 1))
        p2, p3 = case_params(CaseId(2, n, g, be, 1)), case_params(CaseId(3, n, g, be, 1))

        def res(t, jet, n=n, p2=p2, p3=p3):
            y1, y2 = remark2_transforms(t, jet, n, g, be)
            if not (_bounded(y1) and _bounded(y2)):
                return None
            return max(abs(pv_residual(t, y1, p2)), abs(pv_residual(t, y2, p3)))

        worst = max([worst] + _draw(rng, p, cfg, res, vc.samples))
    out.append(_judge("backlund", "Y1 in case 2, Y2 in case 3", worst, tol))
    return out


# ----------------------------------------------------------------- ladder


def suite_ladder(vc: VerifyConfig, ns=(0, 1, 2)):
    cfg = vc.precision
    tol = sample_tol(cfg)
    rng = vc.rng("ladder")
    g, be = cfg.mpf(vc.gamma), cfg.mpf(vc.beta)
    if be == 1:
        return [Check("ladder", "all", NA, detail="beta = 1")]
    out = []
    for direction, step in (("up", 1), ("down", -1)):
        worst = worst_c = 0
        for n in ns:
            p = case_params(CaseId(1, n, g, be, 1))
            target = case_params(CaseId(1, n + step, g, be, 1))

            def res(t, jet, n=n, target=target):
                y = ladder(t, jet, direction, n, g, be)
                if not _bounded(y):
                    return None
                comp, _ = case1_composite(t, jet, n, g, be, LADDER_SIGNS[direction])
                return abs(pv_residual(t, y, target)), abs(comp.f - y.f)

            r = _draw(rng, p, cfg, res, vc.samples)
            worst = max([worst] + [a for a, _ in r])
            worst_c = max([worst_c] + [b for _, b in r])
        out.append(_judge("ladder", f"{direction} n={list(ns)}, {vc.samples} samples", worst, tol))
        out.append(_judge("ladder", f"{direction} equals Backlund composite", worst_c, tol))
    return out


# ---------------------------------------------------------------- lincomb


def lincomb_family(n, beta):
    """``D = -2`` family with ``A = (beta-1)^2/2``, ``B = -(beta+n)^2/2``, ``C = 2n``, and its signed roots."""
    return PVParams((beta - 1) ** 2 / 2, -((beta + n) ** 2) / 2, 2 * n, -2 + 0 * beta), (beta - 1, beta + n, 2)


def suite_lincomb(vc: VerifyConfig, ns=(0, 1, 2)):
    cfg = vc.precision
    tol = sample_tol(cfg)
    rng = vc.rng("lincomb")
    be = cfg.mpf(vc.beta)
    out = []
    worst = {1: 0, 2: 0}
    na = []
    for n in ns:
        p, _ = lincomb_family(n, be)
        for eps in SignTriple.all():
            for delta in SignTriple.all():
                try:
                    res = lincomb(p, eps, delta)
                except MeixnerPVError as exc:
                    na.append(f"{eps}/{delta}: {exc}")
                    continue
                if isinstance(res, NotApplicable):
                    na.append(f"{eps}/{delta}: {res.reason}")
                    continue
                case = 1 if delta.e1 == eps.e1 else 2

                def r(t, jet, eps=eps, delta=delta):
                    v, pv = lincomb_jet(t, jet, p, eps, delta)
                    if not _bounded(v):
                        return None
                    return abs(pv_residual(t, v, pv))

                samples = max(1, vc.samples // 8)
                worst[case] = max([worst[case]] + _draw(rng, p, cfg, r, samples))
    for case in (1, 2):
        out.append(_judge("lincomb", f"theorem case {case}", worst[case], tol))
    out.append(Check("lincomb", "excluded sign patterns", NA, detail=f"{len(na)} patterns not covered"))

    # the worked example: M = (n + 1)/(1 - beta), exactly
    bq = Fraction(vc.beta)
    bad = []
    for n in ns:
        p, roots = lincomb_family(n, bq)
        try:
            M, _ = lincomb(p, SignTriple(1, -1, 1), SignTriple(-1, -1, 1), roots)
        except (MeixnerPVError, ZeroDivisionError) as exc:
            bad.append(f"n={n}: {exc}")
            continue
        if M != Fraction(n + 1) / (1 - bq):
            bad.append(f"n={n}: M={M}")
    out.append(Check("lincomb", "M = (n+1)/(1-beta) (exact)", FAIL if bad else PASS, detail="; ".join(bad)))
    return out


SUITES = {
    "discrete": suite_discrete,
    "toda": suite_toda,
    "ode": suite_ode,
    "riccati": suite_riccati,
    "backlund": suite_backlund,
    "ladder": suite_ladder,
    "lincomb": suite_lincomb,
}


def run_suite(name: str, vc: VerifyConfig) -> list[Check]:
    if name == "all":
        return run_all(vc)
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None
    log.info("running suite %s", name)
    try:
        return fn(vc)
    except (DomainError, MeixnerPVError, ArithmeticError) as exc:
        return [Check(name, "suite", FAIL, detail=f"{type(exc).__name__}: {exc}")]


def run_all(vc: VerifyConfig) -> list[Check]:
    checks = []
    for name in SUITES:
        checks += run_suite(name, vc)
    return checks


def format_report(checks) -> str:
    lines = []
    for ch in checks:
        res = "" if ch.max_residual is None else f" max_residual={ch.max_residual:.3e}"
        tol = "" if ch.tol is None else f" tol={ch.tol:.1e}"
        det = f" [{ch.detail}]" if ch.detail else ""
        lines.append(f"{ch.status.upper():4s} {ch.suite}: {ch.name}{res}{tol}{det}")
    n_fail = sum(ch.failed for ch in checks)
    lines.append(f"{len(checks)} checks, {n_fail} failed")
    return "\n".join(lines)
