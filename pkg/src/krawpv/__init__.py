"""Exact and numerical verification lab for a Krawtchouk-type differential
system, its blow-up regularisations and its Painlevé V reductions."""

__version__ = "0.1.0"
