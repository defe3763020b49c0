"""Integral hyperplane and toric arrangements: posets of layers and their classification."""
