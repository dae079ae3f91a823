"""Exact enumeration, statistics and sampling of topological RNA structures.

A topological RNA structure is a partial chord diagram: vertices 1..n on an
oriented line (the backbone), some of them joined in pairs by arcs drawn in
the upper half plane.  Arcs may cross; the genus of the surface obtained by
thickening the diagram into a fatgraph stratifies structures by their
topological complexity.  Genus zero recovers classical secondary structures.

The package computes, all in exact rational arithmetic:

* genus and related invariants of individual diagrams (:mod:`toporna.diagram`),
* counting sequences via recursions and closed forms (:mod:`toporna.recursions`),
* generating functions filtered by genus, minimum arc length and minimum
  stack size, with derivatives for moments (:mod:`toporna.genfun`),
* brute-force cross-checks by explicit enumeration (:mod:`toporna.oracle`),
* singularity analysis and limit laws (:mod:`toporna.asymptotics`),
* exact uniform random generation (:mod:`toporna.sampler`).

Shared series and polynomial arithmetic lives in :mod:`toporna.series`;
:mod:`toporna.cli` exposes the whole surface as the ``toporna`` command.
"""

from __future__ import annotations

__version__ = "0.1.0"
