"""Proof nets for MALL: translation from proofs and correctness by erasure."""

__version__ = "0.1.0"
