"""The document language, reports and the ``relator-lab`` command."""

from .dsl import DSLError, PresentationDocument, document_from, format_document, parse, parse_file
from .main import EXIT_ABSENT, EXIT_ERROR, EXIT_OK, build_parser, run
from .report import SCHEMA, new_report, render

__all__ = [name for name in dir() if not name.startswith("_")]
