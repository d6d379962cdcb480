"""Deployable service: configuration, journal persistence, HTTP API, CLI."""

from .config import ServiceConfig
from .journal import Journal
from .state import AppState

__all__ = ["AppState", "Journal", "ServiceConfig"]
