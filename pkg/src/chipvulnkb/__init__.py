"""Chipset vulnerability knowledge base.

Aggregates vulnerability information published by chipset manufacturers,
NVD, AOSP security bulletins and OEM changelogs into one relational model,
and computes lifecycle metrics (introduction, discovery, patching, updating)
over it.
"""

__version__ = "0.1.0"
