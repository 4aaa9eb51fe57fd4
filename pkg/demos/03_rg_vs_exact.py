"""
Where the slow flow works, and where it breaks
==============================================

The renormalized slow flow gives autonomous equations for the cycle's
amplitude and phase.  Setting the amplitude rate to zero predicts the limit
cycle radius.  The prediction is excellent for weak nonlinearity and fails
badly beyond eps ~ 1 -- a failure mode this package reproduces on purpose.
"""

import numpy as np
from scipy.integrate import solve_ivp

from limitcycles import (
    IntegratorConfig,
    OscillatorSpec,
    a_rg,
    limit_cycle,
    renormalized_solution,
    rg_amp_rate,
    rg_phase_rate,
)

# ---------------------------------------------------------------------------
# The stationary amplitude comes from a bracketed root of the amplitude rate
# on (2, 4].  Compare it against integration over a range of eps.
# ---------------------------------------------------------------------------

print(f"{'eps':>5} {'flow':>9} {'exact':>9} {'rel err':>9}")
for eps in (0.1, 0.5, 1.0, 2.0, 5.0):
    exact = limit_cycle(OscillatorSpec.rayleigh(eps), IntegratorConfig()).amplitude
    flow = a_rg(eps)
    print(f"{eps:5.1f} {flow:9.5f} {exact:9.5f} {abs(flow - exact) / exact:9.2%}")

# ---------------------------------------------------------------------------
# The flow is attracting: trajectories of the amplitude equation converge to
# the stationary radius from both sides.  Integrate the flow itself to see.
# ---------------------------------------------------------------------------

eps = 0.5
target = a_rg(eps)
for r0 in (0.5, 3.5):
    sol = solve_ivp(
        lambda t, r: [rg_amp_rate(r[0], eps)], (0.0, 80.0), [r0], rtol=1e-10
    )
    print(f"flow from R(0)={r0}: R(80)={sol.y[0][-1]:.6f} (stationary {target:.6f})")

# ---------------------------------------------------------------------------
# On the cycle, the renormalized solution adds a third-harmonic correction
# to the circular motion, and the phase drifts at a slow constant rate.
# ---------------------------------------------------------------------------

t = np.linspace(0.0, 2 * np.pi, 9)
y = renormalized_solution(target, 0.0, t, eps)
print()
print("renormalized waveform samples over one turn:")
print("  ", " ".join(f"{v:+.4f}" for v in y))
print(f"phase drift rate at R={target:.4f}: {rg_phase_rate(target, eps):+.6f}")
