"""Classical and quantum Chinos games: simulation, strategies and two-qubit metrics."""

__version__ = "0.1.0"
