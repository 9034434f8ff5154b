"""Simulation toolbox for trapped-ion qubits."""

__version__ = "0.1.0"
