"""Módulo de presentación de informes
Proporciona la tabla legible, la exportación y los gráficos del benchmark"""

from .report import (
    render_table,
    plot_bench,
    write_report
)

__all__ = [
    'render_table',
    'plot_bench',
    'write_report'
]
