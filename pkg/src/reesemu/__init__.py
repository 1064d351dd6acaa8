"""Finite generation of symbolic Rees rings of space monomial primes."""

__version__ = "0.1.0"
