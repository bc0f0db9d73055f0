"""Pseudo-spectral 3D Hall-MHD on the periodic torus, with Littlewood-Paley
regularity-criterion diagnostics (dissipation wavenumbers, Besov criterion
function, dyadic flux decompositions)."""

__version__ = "0.1.0"
