"""Funciones de utilidad: registro, filas de informe y exportación"""
import logging
from io import BytesIO
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from openpyxl.styles import Font, PatternFill
from openpyxl.utils import get_column_letter

from src.config import Config


def setup_logging(log_file: Optional[str] = None, level: Optional[str] = None) -> None:
    """Configura el sistema de registro para la aplicación"""
    # Registro tanto en archivo como en consola
    logging.basicConfig(
        level=getattr(logging, (level or Config.LOGGING.level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s: %(message)s",
        handlers=[
            logging.FileHandler(log_file or Config.LOGGING.log_file),
            logging.StreamHandler()
        ],
        force=True,
    )


def format_list_preview(items: Sequence[str], max_items: int = 5) -> str:
    """Formatea una lista para vista previa, mostrando solo los primeros elementos"""
    preview = [str(item) for item in items[:max_items]]
    return ', '.join(preview) + ('...' if len(items) > max_items else '')


def short_hex(data: bytes, chars: int = 16) -> str:
    """Prefijo hexadecimal de un resumen o codificación, para tablas legibles"""
    text = data.hex()
    return text if len(text) <= chars else text[:chars] + '…'


def create_timing_row(algorithm: str, n: int, seconds: Sequence[float], per_item: int = 1,
                      correct: bool = True) -> Dict[str, Any]:
    """Crea una fila del DataFrame de tiempos con la mediana de las repeticiones"""
    median = float(np.median(seconds)) if len(seconds) else float('nan')
    return {
        'algorithm': algorithm,
        'n': n,
        'repeats': len(seconds),
        'median_ms': median * 1000.0,
        'per_item_ms': median * 1000.0 / max(per_item, 1),
        'correct': bool(correct),
    }


def sort_timing_dataframe(df: pd.DataFrame, order: Optional[List[str]] = None) -> pd.DataFrame:
    """Ordena por algoritmo (en el orden de los paneles) y por n"""
    if df.empty:
        return df
    if order:
        categories = order + [name for name in df['algorithm'].unique() if name not in order]
        df = df.assign(algorithm=pd.Categorical(df['algorithm'], categories, ordered=True))
    df = df.sort_values(by=['algorithm', 'n']).reset_index(drop=True)
    df['algorithm'] = df['algorithm'].astype(str)
    return df


def export_report_to_excel(frames: Sequence[pd.DataFrame], sheet_names: Sequence[str],
                           buffer=None):
    """Exporta las tablas del informe a un libro Excel, una hoja por tabla"""
    if buffer is None:
        buffer = BytesIO()

    with pd.ExcelWriter(buffer, engine='openpyxl') as writer:
        for df, sheet_name in zip(frames, sheet_names):
            df.to_excel(writer, sheet_name=sheet_name, index=False)
            worksheet = writer.sheets[sheet_name]

            # Ajustar el ancho de las columnas
            for idx, col in enumerate(df.columns):
                values = df[col].astype(str).apply(len)
                max_length = max(values.max() if len(values) else 0, len(str(col))) + 2
                worksheet.column_dimensions[get_column_letter(idx + 1)].width = max_length

            for cell in worksheet[1]:
                cell.font = Font(bold=True)
                cell.fill = PatternFill(start_color='CCE5FF', end_color='CCE5FF', fill_type='solid')

    return buffer
