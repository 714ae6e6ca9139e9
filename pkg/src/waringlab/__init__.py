"""Exact Waring and partially symmetric rank tools for forms l0^a0...lk^ak * q."""

__version__ = "0.1.0"
