"""Singular values versus expansion for weighted Eulerian digraphs."""
