"""Isogeny-based identity blind signature toolkit."""
