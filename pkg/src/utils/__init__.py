"""Módulo de utilidades y funciones auxiliares
Proporciona funciones compartidas para el manejo de archivos y formateo de informes"""

from .utilities import (
    # Funciones de configuración y registro
    setup_logging,

    # Funciones de formateo y presentación
    format_list_preview,
    short_hex,
    create_timing_row,
    sort_timing_dataframe,
    export_report_to_excel
)

# Manejador de archivos del directorio de estado
from .file_handler import FileHandler

__all__ = [
    'setup_logging',
    'format_list_preview',
    'short_hex',
    'create_timing_row',
    'sort_timing_dataframe',
    'export_report_to_excel',
    'FileHandler'
]
