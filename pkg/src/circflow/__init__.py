"""circflow: exact circular-flow, edge-coloring and balanced-valuation
certificates for snark-like graph families."""

__version__ = "0.1.0"
