import html
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..exceptions import UsageError
from ..templates.svg_templates import (
    CHART_TEMPLATE,
    LEGEND_ENTRY_TEMPLATE,
    SERIES_COLORS,
    SERIES_TEMPLATE,
)
from .file_service import file_service

logger = logging.getLogger(__name__)


class PlotService:
    """
    Renders CSV columns as SVG line charts by filling text templates.

    No plotting library is involved; the chart is a polyline per column over a
    shared linear scale.
    """

    def __init__(self, width: int = 720, height: int = 420, margin: int = 60):
        self.logger = logger
        self.file_service = file_service
        self.width = width
        self.height = height
        self.margin = margin

    def set_file_service(self, file_service):
        """Set the file service instance."""
        self.file_service = file_service

    def _select_columns(self, table: pd.DataFrame, x_column: Optional[str],
                        y_columns: Optional[Sequence[str]]) -> Tuple[str, List[str]]:
        numeric = [c for c in table.columns if pd.api.types.is_numeric_dtype(table[c])
                   and not pd.api.types.is_bool_dtype(table[c])]
        if not numeric:
            raise UsageError("CSV has no numeric columns to plot")
        x = x_column or numeric[0]
        ys = list(y_columns) if y_columns else [c for c in numeric if c != x]
        unknown = [c for c in [x, *ys] if c not in table.columns]
        if unknown:
            raise UsageError(f"Unknown column(s): {', '.join(unknown)}. Columns: {', '.join(table.columns)}")
        if not ys:
            raise UsageError("No y columns to plot")
        return x, ys

    def render(self, table: pd.DataFrame, x_column: Optional[str] = None,
               y_columns: Optional[Sequence[str]] = None, title: str = "") -> str:
        """
        SVG text of a line chart of ``y_columns`` against ``x_column``.

        Args:
            table: Data to plot
            x_column: Column for the horizontal axis (default: first numeric column)
            y_columns: Columns drawn as lines (default: every other numeric column)
            title: Chart title

        Raises:
            UsageError: if the requested columns are missing or the table is empty
        """
        if table.empty:
            raise UsageError("Cannot plot an empty table")
        x_name, y_names = self._select_columns(table, x_column, y_columns)
        x = table[x_name].to_numpy(dtype=float)
        ys = table[y_names].to_numpy(dtype=float)

        left, top = self.margin, self.margin
        right, bottom = self.width - self.margin // 2, self.height - self.margin
        x_min, x_max = float(np.nanmin(x)), float(np.nanmax(x))
        y_min, y_max = float(np.nanmin(ys)), float(np.nanmax(ys))
        x_span = x_max - x_min or 1.0
        y_span = y_max - y_min or 1.0
        px = left + (x - x_min) / x_span * (right - left)

        series = []
        legend = []
        for i, name in enumerate(y_names):
            color = SERIES_COLORS[i % len(SERIES_COLORS)]
            py = bottom - (ys[:, i] - y_min) / y_span * (bottom - top)
            finite = np.isfinite(py)
            points = ' '.join(f"{a:.2f},{b:.2f}" for a, b in zip(px[finite], py[finite]))
            series.append(SERIES_TEMPLATE.format(color=color, points=points))
            y = top + 14 * i
            legend.append(LEGEND_ENTRY_TEMPLATE.format(
                x=right - 140, y=y, line_end=right - 120, color=color,
                text_x=right - 114, text_y=y + 4, label=html.escape(str(name)),
            ))

        return CHART_TEMPLATE.format(
            width=self.width,
            height=self.height,
            title_x=self.width // 2,
            title=html.escape(title),
            left=left,
            right=right,
            top=top,
            bottom=bottom,
            x_label_y=bottom + 20,
            y_label_x=left - 6,
            x_min=f"{x_min:.4g}",
            x_max=f"{x_max:.4g}",
            x_label=html.escape(x_name),
            y_min=f"{y_min:.4g}",
            y_max=f"{y_max:.4g}",
            series='\n'.join(series),
            legend='\n'.join(legend),
        )

    def plot_csv(self, csv_path: str, out_path: Optional[str] = None, x_column: Optional[str] = None,
                 y_columns: Optional[Sequence[str]] = None, title: Optional[str] = None) -> str:
        """Render a CSV file; the SVG goes next to it unless ``out_path`` is given."""
        table = self.file_service.read_csv(csv_path)
        target = out_path or str(Path(csv_path).with_suffix('.svg'))
        svg = self.render(table, x_column, y_columns, title if title is not None else Path(csv_path).stem)
        self.file_service.write_text(svg, target)
        self.logger.info(f"Chart written to {target}")
        return target


# Initialize service instance
plot_service = PlotService()
