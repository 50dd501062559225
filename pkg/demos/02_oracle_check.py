"""
Checking the approximation against exhaustive search
====================================================
"""

import numpy as np

from dcmulticast import EnergyModel, build_extended_graph, energy_cost, find_msb, solve_memtcs
from dcmulticast.experiments import random_small_instance
from dcmulticast.oracle import exact_memtcs, exact_msb, harmonic

# On networks of at most seven nodes every spanning tree can be
# enumerated, so the optimum is known exactly.  We draw a batch of random
# instances and compare.

rng = np.random.default_rng(7)
model = EnergyModel(10, 2)
ratios = []
for _ in range(40):
    net, inst = random_small_instance(rng, n_nodes=int(rng.integers(3, 8)), K=int(rng.integers(1, 5)))
    approx = energy_cost(solve_memtcs(net, inst, model), model)
    best = energy_cost(exact_memtcs(net, inst, model), model)
    bound = float(24 * harmonic(net.max_degree() + 1) + 8)
    ratios.append(approx / best)
    assert approx <= bound * best

ratios = np.array(ratios)
print(f"energy ratio over 40 instances: mean {ratios.mean():.3f}, max {ratios.max():.3f}")
print(f"optimal in {np.mean(ratios == 1.0):.0%} of instances")

# ### Satellite bridges
#
# The solver's first stage looks for a small connected set of satellites
# touching every terminal.  The exact minimum is available for comparison.

net, inst = random_small_instance(rng, n_nodes=7, K=4)
g = build_extended_graph(net)
print("greedy bridge:", sorted(map(str, find_msb(g, inst.terminals).nodes)))
print("exact bridge: ", sorted(map(str, exact_msb(g, inst.terminals).nodes)))
