"""Single-qubit remainder-of-Hamming-weight machine: simulation, error
correction, Monte Carlo error estimates and time/energy accounting."""

__version__ = "0.1.0"
