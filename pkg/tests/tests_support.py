"""Small helpers shared (as plain imports) between test modules."""

from fractions import Fraction

from whitney.contact import ContactChart
from whitney.forms import MapBetweenCharts, source_chart


def cusp25_map(cap=8):
    """The (2,5)-cusp lift as a raw chart map (no integrality wrapper)."""
    cc = ContactChart(1)
    src = source_chart(1, names=["t"])
    t = src.var(0, cap)
    f = MapBetweenCharts(src, cc.chart, [t ** 3 * Fraction(5, 2), t ** 2, t ** 5])
    return cc, f
