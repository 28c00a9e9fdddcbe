"""Concrete problems the verifiers are exercised on."""
from . import bds, cvp, wordstats

__all__ = ["bds", "cvp", "wordstats"]
