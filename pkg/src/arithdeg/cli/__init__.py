"""Command-line front end: system files, orbit cache, reports and the acceptance battery."""

from .main import main

__all__ = ["main"]
