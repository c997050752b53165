"""Toda flow in ``c`` and the (u, v) ODE.

Central differences of the recurrence coefficients in ``c`` are compared
with the Toda right-hand side, then the (u, v) system is integrated from
``c = 0.3`` to ``c = 0.5`` and compared with a direct Stieltjes computation.
"""

from meixner_pv import ModelParams, PrecisionConfig, integrate_uv, moment_state, stieltjes_coeffs, toda_rhs

cfg = PrecisionConfig(256)
params = ModelParams("1.5", "0.7", "0.4")
c = cfg.mpf("0.4")

for h in (cfg.mpf("1e-2"), cfg.mpf("1e-3")):
    tp, tm, t0 = (stieltjes_coeffs(params.with_c(c + d), 6, cfg) for d in (h, -h, 0))
    worst = 0
    for n in range(6):
        b_prev = t0.b[n - 1] if n else 0
        da2, db = toda_rhs(t0.a2[n], t0.b[n], b_prev, t0.a2[n + 1], c)
        worst = max(worst, abs((tp.a2[n] - tm.a2[n]) / (2 * h) - da2), abs((tp.b[n] - tm.b[n]) / (2 * h) - db))
    print(f"h = {float(h):.0e}: max |central difference - Toda| = {float(worst):.3e}")

print("\nn   |u(0.5) - u_ref|   |v(0.5) - v_ref|")
for n in (1, 2, 3):
    start = moment_state(params.with_c("0.3"), n, cfg)
    end = integrate_uv(start, "0.5", cfg, method="rkf78", rtol=1e-26, atol=1e-26)
    ref = moment_state(params.with_c("0.5"), n, cfg)
    print(f"{n:<3} {float(abs(end.u - ref.u)):.3e}          {float(abs(end.v - ref.v)):.3e}")
