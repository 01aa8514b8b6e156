"""Base exception for everything this package raises on purpose."""


class OntoSeekerError(Exception):
    pass
