"""Count parameters across equivalent LTI model representations.

The same p x m system of order N can be written as a transfer function, a
rank-one partial-fraction form, a raw state space, or a balanced state
space.  The totals differ, and so does the split between parameters the
data can identify and parameters that only fix a coordinate choice.  The
balanced form isolates the coordinate freedom cleanly: nm + np + pm
identifiable numbers plus n^2 structural ones (the change of basis).
"""

from balred import param_census

KINDS = (
    "transfer_function",
    "transfer_function_rank1",
    "state_space",
    "balanced_state_space",
)

for n, m, p in ((2, 1, 1), (4, 2, 2), (8, 3, 2)):
    print(f"order n = {n}, inputs m = {m}, outputs p = {p}")
    print(f"  {'representation':26s} {'identifiable':>12s} {'conditional':>12s} "
          f"{'structural':>11s} {'total':>6s}")
    for kind in KINDS:
        c = param_census(kind, n, m, p)
        print(f"  {kind:26s} {c.identifiable:12d} "
              f"{c.conditionally_identifiable:12d} {c.structural:11d} {c.total:6d}")
    print()

print("single-state SISO sanity check: a transfer function b/(s+a) + d has")
c = param_census("transfer_function", 1, 1, 1)
print(f"  {c.total} parameters (gain, pole, feedthrough)")
