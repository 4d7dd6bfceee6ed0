"""Local characteristic decomposition of stencils."""
