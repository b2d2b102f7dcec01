import math

import pytest

from uowsim import (
    ChannelParams,
    LinkQuality,
    NetworkGraph,
    Node,
    PhysicalConstants,
    ReceiverNoise,
    Role,
)


@pytest.fixture
def default_setup():
    """Stock channel, noise and constants."""
    return ChannelParams(), ReceiverNoise(), PhysicalConstants()


def make_graph(positions, edge_bers, edge_distances=None):
    """Synthetic NetworkGraph from (x, y) positions and {(u, v): ber} edges.

    Node 0 is the source, node 1 the target.  Edge distances default to the
    euclidean separation; received power is not meaningful for synthetic
    edges and is stored as 0.
    """
    roles = {0: Role.SOURCE, 1: Role.TARGET}
    nodes = [
        Node(i, float(x), float(y), roles.get(i, Role.RELAY))
        for i, (x, y) in enumerate(positions)
    ]
    edges = []
    for (u, v), ber in edge_bers.items():
        if edge_distances and (u, v) in edge_distances:
            distance = edge_distances[(u, v)]
        else:
            distance = math.dist(positions[u], positions[v])
        edges.append((u, v, LinkQuality(distance=distance, received_power=0.0, ber=ber)))
    return NetworkGraph(nodes, edges)
