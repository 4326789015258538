CHART_TEMPLATE = """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">
  <rect x="0" y="0" width="{width}" height="{height}" fill="white"/>
  <text x="{title_x}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>
  <g stroke="black" stroke-width="1">
    <line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>
    <line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/>
  </g>
  <g font-family="sans-serif" font-size="11">
    <text x="{left}" y="{x_label_y}" text-anchor="start">{x_min}</text>
    <text x="{right}" y="{x_label_y}" text-anchor="end">{x_max}</text>
    <text x="{title_x}" y="{x_label_y}" text-anchor="middle">{x_label}</text>
    <text x="{y_label_x}" y="{bottom}" text-anchor="end">{y_min}</text>
    <text x="{y_label_x}" y="{top}" text-anchor="end">{y_max}</text>
  </g>
{series}
{legend}
</svg>
"""

SERIES_TEMPLATE = """  <polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>"""

LEGEND_ENTRY_TEMPLATE = """  <g font-family="sans-serif" font-size="11">
    <line x1="{x}" y1="{y}" x2="{line_end}" y2="{y}" stroke="{color}" stroke-width="2"/>
    <text x="{text_x}" y="{text_y}">{label}</text>
  </g>"""

SERIES_COLORS = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
)
