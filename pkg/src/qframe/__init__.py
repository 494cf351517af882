"""qframe: classifier diagrams, quantum reference frames and contextuality checks."""

__version__ = "0.1.0"
