"""
Stable Matching Lab

A simulation and verification laboratory for stable matchings on complete
bipartite and complete graphs with i.i.d. exponential edge costs: greedy
construction, exact exponential representations of the matching costs, the
Poisson weighted infinite tree limit, and perturbation experiments.
"""

__version__ = "0.1.0"
