"""Pruebas para funciones utilitarias"""
import logging
from io import BytesIO

import pandas as pd
import pytest
from openpyxl import load_workbook

from src.utils.utilities import (
    create_timing_row, export_report_to_excel, format_list_preview, setup_logging, short_hex,
    sort_timing_dataframe,
)


def test_format_list_preview_under_max():
    """Prueba format_list_preview con una lista más corta que max_items"""
    items = ["A", "B", "C"]
    result = format_list_preview(items, max_items=5)
    assert result == "A, B, C"
    assert "..." not in result


def test_format_list_preview_over_max():
    """Prueba format_list_preview con una lista más larga que max_items"""
    items = ["A", "B", "C", "D", "E", "F"]
    result = format_list_preview(items, max_items=3)
    assert result == "A, B, C..."


def test_format_list_preview_empty():
    """Prueba format_list_preview con una lista vacía"""
    assert format_list_preview([], max_items=5) == ""


def test_short_hex():
    """Prueba el recorte del hexadecimal"""
    assert short_hex(b"\x01\x02") == "0102"
    assert short_hex(bytes(32), chars=8) == "00000000…"


def test_create_timing_row():
    """Prueba la mediana y el coste por elemento"""
    row = create_timing_row("PEKS", 10, [0.030, 0.010, 0.020], per_item=10)
    assert row["algorithm"] == "PEKS"
    assert row["repeats"] == 3
    assert row["median_ms"] == pytest.approx(20.0)
    assert row["per_item_ms"] == pytest.approx(2.0)
    assert row["correct"] is True


def test_create_timing_row_without_samples():
    """Prueba create_timing_row sin muestras"""
    row = create_timing_row("Trace", 10, [])
    assert row["repeats"] == 0
    assert pd.isna(row["median_ms"])


def test_sort_timing_dataframe():
    """Prueba el orden por algoritmo y n"""
    df = pd.DataFrame([
        create_timing_row("Test", 20, [0.1]),
        create_timing_row("Setup", 20, [0.1]),
        create_timing_row("Test", 10, [0.1]),
        create_timing_row("Setup", 10, [0.1]),
    ])
    sorted_df = sort_timing_dataframe(df, order=["Setup", "Test"])
    assert list(sorted_df["algorithm"]) == ["Setup", "Setup", "Test", "Test"]
    assert list(sorted_df["n"]) == [10, 20, 10, 20]


def test_sort_timing_dataframe_empty():
    """Prueba sort_timing_dataframe con un DataFrame vacío"""
    df = pd.DataFrame(columns=["algorithm", "n"])
    assert len(sort_timing_dataframe(df)) == 0


def test_export_report_to_excel():
    """Prueba la exportación con una hoja por tabla y cabecera en negrita"""
    frames = [pd.DataFrame({"a": [1, 2]}), pd.DataFrame({"b": ["x"]})]
    buffer = export_report_to_excel(frames, ["Uno", "Dos"])
    assert isinstance(buffer, BytesIO)
    workbook = load_workbook(BytesIO(buffer.getvalue()))
    assert workbook.sheetnames == ["Uno", "Dos"]
    assert workbook["Uno"]["A1"].font.bold


def test_setup_logging_writes_file(tmp_path):
    """Prueba que setup_logging escribe en el fichero indicado"""
    log_file = tmp_path / "app.log"
    setup_logging(str(log_file), "DEBUG")
    logging.debug("mensaje de prueba")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "mensaje de prueba" in log_file.read_text(encoding="utf-8")
