"""Exact computations in free Banach spaces over finite normed sets."""
