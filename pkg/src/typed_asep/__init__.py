"""Quantum-group construction of the Type D ASEP and its q-Krawtchouk self-duality."""

__version__ = "0.1.0"
