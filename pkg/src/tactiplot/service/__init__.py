"""HTTP service exposing the compiler, validator and extraction client."""

from .app import create_app

__all__ = ["create_app"]
