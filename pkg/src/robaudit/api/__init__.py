"""HTTP service exposing the audit toolkit to local clients."""

from .app import create_app, serve

__all__ = ["create_app", "serve"]
