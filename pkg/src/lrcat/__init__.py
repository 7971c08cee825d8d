"""lrcat: harmonization engine and linked-data portal for language-resource catalogs."""

__version__ = "0.1.0"
