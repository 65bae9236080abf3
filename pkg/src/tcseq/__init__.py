"""Exact arithmetic for topological complexity sequences of groups.

Submodules:

* :mod:`tcseq.dyadic` -- binary digit sums, 2-adic valuations, binomials mod 2
* :mod:`tcseq.growth` -- the closed-form bound functions and their sweeps
* :mod:`tcseq.f2ring` -- the mod-2 cohomology ring of BQ8 and the Q8 certificate
* :mod:`tcseq.tcbounds` -- rule engine for two-sided bounds on TC^n_r(G)
* :mod:`tcseq.cli` -- command line front end
"""

__version__ = "0.1.0"
