"""Local node differential privacy on graphs.

A library + CLI harness for locally private graph statistics: each of n
nodes runs a randomizer on its own adjacency list and an untrusted server
aggregates the reports.  Implements blurry degree distributions, linear
queries via the factorization mechanism, edge counting, Erdos-Renyi and
clique-size estimation, a starpartite/regular distinguisher, and the
analytic machinery (sensitivity oracles, statistical distances, privacy
accounting) that certifies them.
"""

from lndp.graph_core import Graph
from lndp.mechanisms import PrivacyParams

__all__ = ["Graph", "PrivacyParams"]
