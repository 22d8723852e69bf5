"""Self-contained 2D soccer arena with evolvable team behaviors.

Subpackages:

- ``geom``       planar geometry (Voronoi, Delaunay, sectors, barycentric)
- ``engine``     match state types and cycle physics
- ``kernel``     numba-compiled hot loop shared by engine and match farm
- ``behaviors``  the six parameterized decision mechanisms
- ``formation``  triangulated formation files and interpolation
- ``hbec``       genotypes, mutation/recombination, fitness statistics
- ``match``      full-match execution and seeded series
- ``cli``        command line entry points
- ``service``    local HTTP facade for the formation editor
"""

__version__ = "0.1.0"
