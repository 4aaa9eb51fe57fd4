"""
Calibrated closed forms on a nonlinear time scale
=================================================

Replacing time by eps^h turns the slow-flow amplitude into a closed form
with one calibration constant fixed by a single boundary amplitude at
eps = 1.  This script calibrates both systems, checks the published
constants, inverts the closed form for the exponent, and traces the
high-accuracy two-branch fit for the van der Pol amplitude.
"""

import numpy as np

from limitcycles import (
    amplitude_flow,
    amplitude_irgm,
    calibrate_constant,
    consistency_report,
    get_preset,
    invert_h,
    vdp_fit,
)

# ---------------------------------------------------------------------------
# Calibration is one logarithm: C = ln(a^2 / (a^2 - 4)) - 1 at the boundary
# amplitude.  For Rayleigh the published constant agrees with its own
# boundary condition to 4e-6.  For van der Pol it does not -- the stored
# constant is 0.325 away from what its stated boundary condition implies.
# The package keeps both: a verbatim preset for reproduction and a
# recomputed, self-consistent one.
# ---------------------------------------------------------------------------

print(f"rayleigh constant from a=2.17271: {calibrate_constant(2.17271):.6f}")
print(f"vdp constant from a=2.0086:       {calibrate_constant(2.0086):.6f}")
print()
for line in consistency_report():
    print(line)

# ---------------------------------------------------------------------------
# With the constant fixed, amplitude and exponent are a bijective pair away
# from eps = 1 (where the time scale degenerates for every exponent): the
# inversion recovers the exponent to machine precision.
# ---------------------------------------------------------------------------

calibration = get_preset("rayleigh")
eps, h = 3.0, 0.7
a = amplitude_irgm(eps, h, calibration.constant)
print()
print(f"amplitude at (eps={eps}, h={h}): {a:.8f}")
print(f"exponent recovered by inversion: {invert_h(a, eps, calibration.constant):.12f}")

# ---------------------------------------------------------------------------
# The flow solution behind these forms: closed-form amplitude relaxation
# from any start toward the radius 2, checked against its own rate equation.
# ---------------------------------------------------------------------------

taus = np.linspace(0.0, 6.0, 7)
for a0 in (0.5, 3.0):
    values = " ".join(f"{amplitude_flow(t, a0):.4f}" for t in taus)
    print(f"a0={a0}: {values}")

# ---------------------------------------------------------------------------
# For van der Pol, a two-branch fitted exponent gives amplitudes within
# 0.05% of the exact sweep over (0, 50].  Its maximum sits near eps = 3.2 --
# matching the exact sweep's peak location, though the published text places
# the peak elsewhere (the quoted 2.0235 is the peak's value, reproduced
# below to four decimals).
# ---------------------------------------------------------------------------

fine = np.arange(0.5, 4.0001, 0.01)
amps = np.array([vdp_fit(e) for e in fine])
peak = int(np.argmax(amps))
print()
print(f"two-branch fit: a(1)={vdp_fit(1.0):.5f}, a(50)={vdp_fit(50.0):.5f}")
print(f"fit maximum: {amps[peak]:.6f} at eps={fine[peak]:.2f}")
print(f"branch seam at eps=3: jump {abs(vdp_fit(3.0 + 1e-12) - vdp_fit(3.0 - 1e-12)):.2e}")
