"""Knot-diagram engine for pass, #- and 1-2-moves and the Arf invariant."""
from .diagram import (
    Crossing,
    Diagram,
    LkMatrix,
    is_proper,
    linking_matrix,
    parse_gauss,
    parse_pd,
    serialize_pd,
)
from .canon import canonical_relabel, canonicalize

__version__ = "0.1.0"
