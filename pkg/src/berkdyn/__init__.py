"""Exact-arithmetic dynamics of tame polynomials on the Berkovich line over
the completed Puiseux-series field, with a report-emitting CLI."""

from .rational import INF
from .series import PuiseuxSeries, parse_series, render_series

__version__ = "0.1.0"

__all__ = ["INF", "PuiseuxSeries", "parse_series", "render_series", "__version__"]
