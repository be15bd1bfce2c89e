"""photonlab: design, validate and simulate table-top quantum optics experiments.

The package is organized as a layered library:

* :mod:`photonlab.model` -- optical setup graph, JSON serialization, checks.
* :mod:`photonlab.toolbox` -- three-tier component library with approvals.
* :mod:`photonlab.retrieval` -- deterministic embedding index over composites.
* :mod:`photonlab.qcore` -- quantum numerics (states, linear optics, Lindblad).
* :mod:`photonlab.experiments` -- thirteen deterministic experiment simulators.
* :mod:`photonlab.pipeline` -- lint / simulate / score / refine workflow.
* :mod:`photonlab.report` and :mod:`photonlab.cli` -- report bundles and CLI.
"""

__version__ = "0.1.0"
