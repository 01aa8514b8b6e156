"""onto-seeker: crawl the web for RDF/OWL documents, index their terms, answer keyword queries."""

__version__ = "0.1.0"
