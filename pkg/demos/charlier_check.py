"""Charlier limit and forward-iteration instability.

With ``gamma = beta`` the weight collapses to the Poisson weight and the
recurrence coefficients are ``a_n^2 = n c`` and ``b_n = n + c``.  The second
half iterates the discrete system forward from its initial values and shows
how fast digits are lost compared with the Stieltjes table.
"""

from meixner_pv import ModelParams, PrecisionConfig, forward_chain, stieltjes_coeffs

cfg = PrecisionConfig(256)

# Charlier: gamma = beta
table = stieltjes_coeffs(ModelParams("1.3", "1.3", "0.4"), 8, cfg)
c = cfg.mpf("0.4")
print("n   a_n^2 - n c      b_n - (n + c)")
for n, a2, b in table.entries:
    print(f"{n:<3} {float(a2 - n * c):+.3e}      {float(b - (n + c)):+.3e}")
print(f"estimated correct digits: {table.est_correct_digits:.1f}")

# forward iteration loses digits geometrically
params = ModelParams("1.5", "0.7", "0.4")
states, digits = forward_chain(params, 30, cfg)
print("\nn   digits of the forward-iterated (u_n, v_n)")
for n in range(0, 31, 5):
    print(f"{n:<3} {digits[n]:.1f}")
