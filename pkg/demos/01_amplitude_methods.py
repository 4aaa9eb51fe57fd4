"""
Four routes to a limit-cycle amplitude
======================================

The package computes the amplitude of the Rayleigh oscillator's limit cycle
four independent ways: adaptive integration (the reference), a tuned
second-order deformation expansion, the plain slow-flow balance, and a
calibrated closed form on a nonlinear time scale.  This script prints them
side by side so the regimes where each works (and fails) are visible.
"""

import numpy as np

from limitcycles import (
    IntegratorConfig,
    OscillatorSpec,
    a_rg,
    amplitude_ham,
    amplitude_irgm,
    get_preset,
    limit_cycle,
)

# ---------------------------------------------------------------------------
# The closed forms need no setup; the reference comes from integration with
# crossing detection.  The calibrated closed form uses the published
# calibration constant with the scaling exponent left at 1.
# ---------------------------------------------------------------------------

calibration = get_preset("rayleigh")
grid = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]

print(f"{'eps':>6} {'exact':>10} {'tuned 2nd':>10} {'flow bal':>10} {'calibrated':>10}")
for eps in grid:
    cycle = limit_cycle(OscillatorSpec.rayleigh(eps), IntegratorConfig())
    tuned = amplitude_ham(eps)
    balance = a_rg(eps)
    calibrated = amplitude_irgm(eps, 1.0, calibration.constant)
    print(
        f"{eps:6.1f} {cycle.amplitude:10.5f} {tuned:10.5f} "
        f"{balance:10.5f} {calibrated:10.5f}"
    )

# ---------------------------------------------------------------------------
# What the table shows:
#  * the tuned expansion tracks the exact amplitude to within 1% everywhere
#    (it was calibrated to do exactly that);
#  * the flow balance saturates near 2.56 and is useless beyond eps ~ 1 --
#    at eps = 5 it is off by more than 40%;
#  * the calibrated closed form is exact at its calibration point (eps = 1,
#    where the time scale collapses for every exponent) and decays toward 2
#    elsewhere unless the exponent is retuned per eps.
# ---------------------------------------------------------------------------

cycle = limit_cycle(OscillatorSpec.rayleigh(5.0), IntegratorConfig())
print()
print(f"flow-balance relative error at eps=5: "
      f"{abs(a_rg(5.0) - cycle.amplitude) / cycle.amplitude * 100:.1f}%")
