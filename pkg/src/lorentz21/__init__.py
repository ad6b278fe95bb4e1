"""Constructions for flat and anti-de Sitter 2+1 spacetimes.

Modules:
    minkowski   -- R^{2+1} linear algebra, hyperboloid model, PSL(2,R) adjoint
    fuchsian    -- surface-group representations, word balls, Euler class
    laminations -- weighted multicurves, leaf lifts, transverse vectors
    flatspace   -- translation cocycles, developments, domains of dependence
    quakes      -- left/right earthquake maps and their boundary circle maps
    adshull     -- anti-de Sitter quadric, convex hulls, bending extraction
    cli         -- command-line entry points
"""

import os

__version__ = "0.1.0"


def bundled(name):
    """Absolute path of a bundled data file (e.g. 'octagon_rep.json')."""
    path = os.path.join(os.path.dirname(__file__), "data", name)
    if not os.path.exists(path):
        raise FileNotFoundError("no bundled data file %r" % name)
    return path
