"""Synchronous message-passing simulation of the distributed satellite cover.

Colours: uncovered terminals are red, covered ones green, selected
satellites blue, everything else white.  Each round has five lock-step
phases: white nodes with red neighbours announce an election, every red
node answers ``you win`` to its best candidate (most red neighbours, then
largest id), a candidate endorsed by all its red neighbours turns blue and
announces itself, red neighbours of a new blue node turn green and say so,
and white nodes drop those terminals from their red-neighbour sets.

A transmission is one message whether it is a broadcast or a unicast.  On
the base graph a nuclear node acts for its satellites, so only
transmissions that leave the nuclear node are counted there.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple

from .extended import ExtendedGraph, ExtNode, build_extended_graph
from .model import (
    EnergyModel,
    InfeasibleInstanceError,
    MulticastInstance,
    MulticastPlan,
    Network,
    terminals_connected,
)
from .solver import SolverConfig, bridge_from_cover, map_bridge_to_tree, plan_from_mapping, trivial_plan

__all__ = [
    "NodeColor",
    "Message",
    "SimState",
    "SimResult",
    "MESSAGE_CONSTANT",
    "simulate_distributed_cover",
    "simulate_on_base_graph",
    "distributed_pipeline",
]

# Per round every node transmits at most once in the election/you-win
# phases, and each node announces dominator/dominated at most once overall,
# so messages <= |M|*|V~| + 2|M| <= 2*|M|*|V~|.
MESSAGE_CONSTANT = 2

PHASES_PER_ROUND = 5

ELECTION = "election"
YOU_WIN = "you_win"
DOMINATOR = "dominator"
DOMINATED = "dominated"
KINDS = (ELECTION, YOU_WIN, DOMINATOR, DOMINATED)


class NodeColor(str, enum.Enum):
    RED = "red"
    GREEN = "green"
    WHITE = "white"
    BLUE = "blue"


class Message(NamedTuple):
    round: int
    kind: str
    sender: ExtNode | int
    receiver: ExtNode | int | None  # None: broadcast


def _fmt(x) -> str:
    if x is None:
        return "*"
    if isinstance(x, ExtNode):
        return f"{x.node}:{x.slot}" if x.slot else str(x.node)
    return str(x)


@dataclass
class SimState:
    color: dict[ExtNode, NodeColor]
    rnb: dict[ExtNode, set[int]]
    round: int = 0
    messages: int = 0
    log: list[Message] = field(default_factory=list)

    def send(self, kind: str, sender, receiver=None) -> None:
        self.messages += 1
        self.log.append(Message(self.round, kind, sender, receiver))

    def red(self) -> list[ExtNode]:
        return sorted(x for x, c in self.color.items() if c is NodeColor.RED)


@dataclass(frozen=True)
class SimResult:
    cover: frozenset[ExtNode]
    rounds: int
    messages: int
    by_kind: dict[str, int]
    log: tuple[Message, ...] = ()
    time_slots: int = 0
    budgets: dict[str, int] = field(default_factory=dict)

    def trace(self) -> str:
        """Message log as ``round,kind,from,to`` lines; satellites print as ``u:i``."""
        lines = ["round,kind,from,to"]
        lines += [f"{m.round},{m.kind},{_fmt(m.sender)},{_fmt(m.receiver)}" for m in self.log]
        return "\n".join(lines) + "\n"


def _run(g: ExtendedGraph, terminals: frozenset[int]) -> SimState:
    for m in terminals:
        if ExtNode(m) not in g:
            raise ValueError(f"terminal {m} is not a network node")
        if not g.satellite_neighbors(m):
            raise InfeasibleInstanceError(f"terminal {m} has no satellite neighbour")
    nbrs = {x: g.neighbors(x) for x in g.ids}
    color = {x: NodeColor.WHITE for x in g.ids}
    for m in terminals:
        color[ExtNode(m)] = NodeColor.RED
    rnb = {
        x: {y.node for y in nbrs[x] if color[y] is NodeColor.RED}
        for x in g.ids
        if color[x] is NodeColor.WHITE
    }
    st = SimState(color, rnb)
    limit = len(terminals)

    while st.red():
        st.round += 1
        if st.round > limit:
            raise RuntimeError(f"protocol did not terminate within {limit} rounds")
        red_before = len(st.red())

        # phase 1: elections
        candidates = sorted(x for x, r in st.rnb.items() if r and st.color[x] is NodeColor.WHITE)
        heard: dict[ExtNode, list[tuple[int, ExtNode]]] = {}
        for u in candidates:
            st.send(ELECTION, u)
            for y in nbrs[u]:
                if st.color[y] is NodeColor.RED:
                    heard.setdefault(y, []).append((len(st.rnb[u]), u))
        # phase 2: each red node endorses its best candidate
        wins: dict[ExtNode, set[int]] = {}
        for r in st.red():
            _, v = max(heard[r])
            st.send(YOU_WIN, r, v)
            wins.setdefault(v, set()).add(r.node)
        # phase 3: unanimously endorsed candidates become dominators
        new_blue = set()
        for u in candidates:
            if wins.get(u, set()) == st.rnb[u]:
                st.color[u] = NodeColor.BLUE
                new_blue.add(u)
                st.send(DOMINATOR, u)
        # phase 4: red neighbours of dominators turn green
        new_green = []
        for r in st.red():
            if any(y in new_blue for y in nbrs[r]):
                st.color[r] = NodeColor.GREEN
                new_green.append(r)
                st.send(DOMINATED, r)
        # phase 5: whites forget covered terminals
        for r in new_green:
            for y in nbrs[r]:
                if st.color[y] is NodeColor.WHITE:
                    st.rnb[y].discard(r.node)
        if len(st.red()) >= red_before:
            raise RuntimeError(f"no progress in round {st.round}")
    return st


def _result(st: SimState, log: list[Message], time_slots: int) -> SimResult:
    by_kind = {k: 0 for k in KINDS}
    for m in log:
        by_kind[m.kind] += 1
    cover = frozenset(x for x, c in st.color.items() if c is NodeColor.BLUE)
    return SimResult(cover, st.round, len(log), by_kind, tuple(log), time_slots)


def simulate_distributed_cover(g: ExtendedGraph, terminals: Iterable[int]) -> SimResult:
    """Run the protocol on the extended graph itself."""
    st = _run(g, frozenset(terminals))
    return _result(st, st.log, st.round * PHASES_PER_ROUND)


def simulate_on_base_graph(
    net: Network,
    terminals: Iterable[int],
    delta: int | None = None,
    extended: ExtendedGraph | None = None,
) -> SimResult:
    """Same protocol with each nuclear node acting for its satellites.

    Transmissions that stay inside one nuclear node become local work and
    are dropped; the survivors are re-labelled with nuclear senders and
    receivers.  Each phase waits ``delta`` slots (default K+1) so a nuclear
    node can serialise its satellites' outgoing messages.
    """
    delta = net.K + 1 if delta is None else delta
    if delta <= net.K:
        raise ValueError(f"delta must exceed K={net.K}")
    g = extended if extended is not None else build_extended_graph(net)
    st = _run(g, frozenset(terminals))
    nbrs: dict[ExtNode, list[ExtNode]] = {}
    log = []
    for m in st.log:
        s = m.sender
        if m.receiver is None:
            if s not in nbrs:
                nbrs[s] = g.neighbors(s)
            if all(y.node == s.node for y in nbrs[s]):
                continue
            log.append(Message(m.round, m.kind, s.node, None))
        elif m.receiver.node != s.node:
            log.append(Message(m.round, m.kind, s.node, m.receiver.node))
    return _result(st, log, st.round * PHASES_PER_ROUND * delta)


def _hops(net: Network, s: int) -> dict[int, int]:
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _diameter(net: Network, s: int) -> int:
    """Diameter of the component containing ``s``."""
    return max(max(_hops(net, u).values()) for u in _hops(net, s))


def distributed_pipeline(
    net: Network,
    inst: MulticastInstance,
    model: EnergyModel | None = None,
    cfg: SolverConfig = SolverConfig(),
) -> tuple[MulticastPlan, SimResult]:
    """Distributed cover, then centralized Steiner connection and tree extraction.

    The Steiner and DFS stages are not simulated; their message and time
    budgets (|M|*|V| and |M|*D messages/time for the Steiner stage, |V| for
    the DFS) are attached to the result as metadata.
    """
    inst.check_against(net)
    if len(inst.terminals) == 1:
        empty = SimResult(frozenset(), 0, 0, {k: 0 for k in KINDS})
        return trivial_plan(inst.source), empty
    if not terminals_connected(net, inst.terminals):
        raise InfeasibleInstanceError("terminals are not in one connected component")
    g = build_extended_graph(net)
    sim = simulate_distributed_cover(g, inst.terminals)
    sb = bridge_from_cover(g, sim.cover, cfg)
    mapping = map_bridge_to_tree(sb, g, inst.terminals, root=inst.source)
    plan = plan_from_mapping(mapping, net, inst.terminals, refine=cfg.refine)
    n, m = len(net.nodes), len(inst.terminals)
    D = _diameter(net, inst.source)
    budgets = {
        "steiner_messages": m * n,
        "steiner_time": m * D,
        "dfs_messages": n,
        "dfs_time": n,
    }
    return plan, replace(sim, budgets=budgets)
