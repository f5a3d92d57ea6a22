"""Exact integral homology of bordered and punctured mapping class groups.

The pipeline: enumerate bordered fat graphs of a surface type as
canonical boundary words, assemble the cellular chain complex on them,
and read off integral homology through Smith normal form.  The circle
action, the pair-of-pants product, and the first Kudo-Araki and Browder
operations act at chain level on the same generators.
"""

from .graphs import (
    BorderedFatGraph,
    BoundaryWord,
    CombinatorialGraph,
    FatGraph,
    SurfaceType,
    boundary_cycles,
    canonical_word,
    collapse_edge,
    collapsible_edges,
    dimension,
    graph_from_word,
    surface_invariants,
)

__version__ = "0.1.0"
