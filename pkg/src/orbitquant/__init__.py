"""Deformation quantization on coadjoint orbits of aff(R) and aff(C)."""

__version__ = "0.1.0"
