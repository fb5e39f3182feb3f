"""
Test suite for congruent-census.

Unit tests for the residue symbols, F2 linear algebra, genus criteria and
the class-group oracle, plus census, reporting and CLI tests. Desk-scale
runs are marked slow and deselected by default.
"""
