"""Degree growth of matrix inversion composed with the Hadamard inverse."""
