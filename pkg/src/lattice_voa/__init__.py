"""Exact lattice vertex algebras graded by P/Q and the semi-infinite flag ring."""
