"""Sweep the one-parameter family between BT and BSPA.

Each removed state carries a knob eta in [0, theta]: eta = 0 discards the
state outright (BT), eta = theta folds its full quasi-static contribution
into the kept block (BSPA).  Intermediate values trade DC accuracy against
high-frequency accuracy.  The second half finds the family member closest
to a target point in data space (sampled frequency-response magnitudes)
and shows it beating both endpoints.
"""

import numpy as np

from balred import (
    BalancedParams,
    balanced_truncate,
    bspa,
    eval_transfer,
    interpolated_reduce,
    nearest_on_family,
    realize,
    response_point,
    two_state_freq_model,
)

params = BalancedParams(
    theta=[1.0, 0.7],
    r=[1.0, 8.0],
    beta=[[1.0], [1.0]],
    gamma=[[1.0, 1.0]],
    D=[[0.0]],
)
bal = realize(params)
theta2 = bal.hsv[-1]
g0 = eval_transfer(bal.sys, 0.0)[0, 0]

print("family sweep, k = 1 (eta in [0, theta_2], theta_2 = %.1f)" % theta2)
print(f"{'eta':>8s} {'DC error':>12s} {'feedthrough':>12s}")
for eta in np.linspace(0.0, theta2, 8):
    red = interpolated_reduce(bal, 1, [eta]).reduced
    dc_err = abs(eval_transfer(red, 0.0)[0, 0] - g0)
    print(f"{eta:8.3f} {dc_err:12.3e} {red.D[0, 0]:12.6f}")
print("eta = 0 is BT (feedthrough preserved), eta = theta_2 is BSPA (DC exact)")
print()

# target: the data point of a nearby two-state system sitting close to the
# theta_2 -> 0 boundary of the manifold, where BT is the better endpoint
freqs = (0.01, 1.0, 100.0)
model = two_state_freq_model(1.0, 1.0)
target = model(np.array([0.01, 0.8]))

bt_pt = response_point(balanced_truncate(bal, 1).reduced, freqs)
sp_pt = response_point(bspa(bal, 1).reduced, freqs)
print("distances to the target data point")
print(f"  BT endpoint:   {np.linalg.norm(bt_pt - target):.6f}")
print(f"  BSPA endpoint: {np.linalg.norm(sp_pt - target):.6f}")

res = nearest_on_family(target, bal, frequencies=freqs)
print(f"  best family member: eta* = {res.eta_star:.6f}  "
      f"distance {res.distance:.6f} (interior, beats both endpoints)")
