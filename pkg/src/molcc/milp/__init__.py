"""Inference MILP: specification, model building, LP output, decoding and verification."""
