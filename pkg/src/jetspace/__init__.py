"""Exact jet-scheme computations: liftable jets, cylinder codimensions and minimal log discrepancies."""
