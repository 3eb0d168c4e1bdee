from .app import create_app
from .live import LiveRunner

__all__ = ["create_app", "LiveRunner"]
