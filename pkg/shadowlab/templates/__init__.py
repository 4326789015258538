from .svg_templates import CHART_TEMPLATE, LEGEND_ENTRY_TEMPLATE, SERIES_COLORS, SERIES_TEMPLATE

__all__ = ['CHART_TEMPLATE', 'LEGEND_ENTRY_TEMPLATE', 'SERIES_COLORS', 'SERIES_TEMPLATE']
