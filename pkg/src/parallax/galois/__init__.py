"""Differential Galois classification for second-order equations."""
