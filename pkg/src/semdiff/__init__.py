"""Semantic differencing for class diagrams and activity diagrams.

Two engines with a shared summary layer: bounded witness search over object
models, and a symbolic (BDD-backed) diff over activity-diagram traces.  Both
come with brute-force oracles they are tested against.
"""

from .summary import PartitionKey, SummaryEntry, SummaryReport, summarize

__all__ = ["PartitionKey", "SummaryEntry", "SummaryReport", "summarize"]

__version__ = "0.1.0"
