"""Parsing, serialization, DOT export and the ``fibrato`` command."""

from .dot import emit_dot
from .main import main, run
from .parse import Document, dsl_to_json, parse, serialize

__all__ = ["Document", "dsl_to_json", "emit_dot", "main", "parse", "run", "serialize"]
