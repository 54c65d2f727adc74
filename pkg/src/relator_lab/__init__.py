"""Analysis toolkit for relative one-relator presentations ``<x, H; R>``."""

__version__ = "0.1.0"
REPORT_SCHEMA = "relator-lab/1"
