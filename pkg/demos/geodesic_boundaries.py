"""Find model-manifold boundaries by integrating Fisher-information geodesics.

A sloppy model's manifold (the set of predictions it can produce) has
boundaries where parameters hit 0 or infinity.  Following a geodesic of the
Fisher-information metric along the sloppiest direction drives the model to
such a boundary; the diverging parameter combination names the limit that
reduces the model by one parameter.

Demo model: a saturable reaction dx/dt = -rho1 x / (rho2 + x) sampled at
three times.  The two geodesic directions from (rho1, rho2) = (1, 1) find
its two classic limits: the dilute regime (rho2 -> 0 gives dx/dt = -rho1)
and the saturated regime (rho1, rho2 -> infinity with rho1/rho2 fixed,
giving first-order decay).
"""

import numpy as np

from balred import GeodesicOptions, classify_limit, run_geodesic
from balred.models import mmr_model, two_exp_model

model = mmr_model(1.0, (0.3, 1.0, 3.0))
p0 = [1.0, 1.0]

for direction in (+1, -1):
    trace = run_geodesic(model, p0, GeodesicOptions(direction=direction))
    cl = classify_limit(trace)
    print(f"direction {direction:+d}: stopped on {trace.termination} "
          f"at tau = {trace.taus[-1]:.4f}")
    for name, tag, value in zip(("rho1", "rho2"), cl.tags, trace.params[-1]):
        print(f"  {name}: {tag:10s} (final value {value:.4e})")
    for inv in cl.invariants:
        print(f"  invariant: rho1/rho2 -> {inv['ratio']:.6f} "
              f"(log drift {inv['drift']:.1e} over the final stretch)")
    speeds = np.asarray(trace.data_speeds)
    print(f"  data-space speed constant to {speeds.max() / speeds.min() - 1:.2e} "
          "(geodesic invariant)")
    print()

# a second curved model: sum of two exponentials with unknown rates
print("two-exponential model y = exp(-rho1 t) + exp(-rho2 t), from (0.5, 2.0)")
model2 = two_exp_model([1.0, 1.0], np.linspace(0.1, 3.0, 7))
trace2 = run_geodesic(model2, [0.5, 2.0], GeodesicOptions(tau_max=10.0))
cl2 = classify_limit(trace2)
print(f"  stopped on {trace2.termination}; tags {cl2.tags}; "
      f"final params {np.round(trace2.params[-1], 4)}")
print("  (the rates merge: the sloppy direction collapses the two "
      "exponentials into one)")
