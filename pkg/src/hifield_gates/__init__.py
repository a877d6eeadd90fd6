"""Design and analysis of light-shift and Molmer-Sorensen gates on high-field Zeeman qubits."""
__version__ = "0.1.0"
