"""Figure rendering for gravidec CSV artifacts.

Strictly a consumer: parses the documented sweep and evolve CSV contracts
and renders matplotlib figures. No import of, or linkage to, the core
package.
"""

from .render import (
    ContourInfo,
    DecayInfo,
    build_contour_figure,
    build_decay_figure,
    render_contour,
    render_decay,
)
from .tables import DecaySeries, SchemaError, SweepTable

__version__ = "0.1.0"
