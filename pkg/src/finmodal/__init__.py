"""finmodal: a finite-semantics workbench for second-order quantified modal logic."""

__version__ = "0.1.0"
