"""Publication-style figure regeneration from experiment CSV outputs.

Consumes only the primary package's declared CSV schemas; no physics is
recomputed here.
"""

__version__ = "0.1.0"

from .render import FigureSpec, SchemaError, render
