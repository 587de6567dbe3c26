"""ocmg: a laboratory for k-cop-move pursuit games on a 720-vertex planar arena.

The package builds the arena graph from the truncated icosahedron, plays and
exactly solves small cops-and-robbers instances, runs a scripted robber that
evades 3 cops and a 7-cop strategy that always captures, and ships the
verification harnesses that check every quantitative claim behind those
strategies.
"""

__version__ = "0.1.0"

from .graphs import Graph, FaceRecord, EmbeddingAtlas  # noqa: F401
