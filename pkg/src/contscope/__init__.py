"""Continuation-monad semantics for quantifier scope over finite models."""

__version__ = "0.1.0"
