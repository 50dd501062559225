"""
Quickstart: one multicast session on a hand-built network
=========================================================
"""

from dcmulticast import (
    BaselineKind,
    EnergyModel,
    MulticastInstance,
    Network,
    build_extended_graph,
    energy_cost,
    run_baseline,
    solve_memtcs,
)

# ### A small duty-cycled network
#
# Six nodes, a working period of K=4 slots.  Each node listens only in its
# active slots, so a sender must transmit once per distinct slot its
# children need.  Node 0 is the source.

net = Network(
    nodes=range(6),
    edges=[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5)],
    K=4,
    schedule={0: {1}, 1: {2}, 2: {2, 3}, 3: {1, 4}, 4: {3}, 5: {3}},
)
inst = MulticastInstance(terminals={0, 3, 4, 5}, source=0)
model = EnergyModel(e_s=100, e_r=15)

# ### The extended graph
#
# Every node u gets a satellite λ(u,i) for each slot i in which some
# neighbour listens.  Picking satellites picks (sender, slot) pairs.

g = build_extended_graph(net)
print(f"extended graph: {g.n_nodes} nodes, {g.n_edges} edges, {len(g.satellites)} satellites")

# ### Solve and compare with the slot-oblivious baselines

plan = solve_memtcs(net, inst, model)
print("TCS tree edges:", sorted(plan.tree.edges))
print("TCS schedule:  ", {u: sorted(b) for u, b in sorted(plan.schedule.items())})
print(f"TCS: {plan.transmissions} transmissions, energy {energy_cost(plan, model)}")

for kind in BaselineKind:
    other = run_baseline(kind, net, inst, model)
    print(f"{kind.value:>4}: {other.transmissions} transmissions, energy {energy_cost(other, model)}")
