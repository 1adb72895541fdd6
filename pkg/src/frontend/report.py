"""Presentación de informes: tabla legible, CSV, libro Excel y gráfico de paneles"""
import logging
from pathlib import Path
from typing import Dict, Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

from src.harness import ALGORITHMS, BenchReport
from src.utils.file_handler import FileHandler
from src.utils.utilities import export_report_to_excel, format_list_preview


def render_table(report: BenchReport) -> str:
    """Informe legible: tiempos, aserciones y resumen del ledger"""
    lines = []
    if not report.timings.empty:
        table = report.timings.copy()
        table['median_ms'] = table['median_ms'].map(lambda v: f"{v:.2f}")
        table['per_item_ms'] = table['per_item_ms'].map(lambda v: f"{v:.2f}")
        lines += ["Tiempos por algoritmo", table.to_string(index=False), ""]
    if not report.payload_sizes.empty:
        sizes = report.payload_sizes.groupby('n')['bytes'].agg(['count', 'min', 'max']).reset_index()
        lines += ["Tamaño de los registros en el ledger (bytes)", sizes.to_string(index=False), ""]
    checks = report.assertions_frame()
    if not checks.empty:
        checks['passed'] = checks['passed'].map(lambda ok: 'OK' if ok else 'FALLO')
        lines += ["Comprobaciones", checks.to_string(index=False), ""]
    if report.audit:
        traced = [f"{row.block_index}:{row.identity}/{row.keyword}" for row in report.audit]
        lines.append(f"Registros trazados: {format_list_preview(traced, 6)}")
    if report.transcript_digest:
        lines.append(f"Resumen de la transcripción: {report.transcript_digest}")
    if report.ledger_tip:
        lines.append(f"Cabeza del ledger: {report.ledger_tip}")
    for diagnostic in report.diagnostics:
        lines.append(f"! {diagnostic}")
    lines.append(f"Resultado: {'OK' if report.passed else 'FALLO'}")
    return "\n".join(lines)


def plot_bench(report: BenchReport, filepath: Path) -> Optional[Path]:
    """Un panel por algoritmo (mediana frente a n) más el panel de tamaño de registro"""
    if report.timings.empty:
        return None
    try:
        sns.set_theme(style="whitegrid")
        fig, axes = plt.subplots(3, 3, figsize=(12, 10))
        for ax, name in zip(axes.flat, ALGORITHMS):
            data = report.timings[report.timings['algorithm'] == name]
            sns.lineplot(data=data, x='n', y='median_ms', marker='o', ax=ax)
            ax.set_title(name)
            ax.set_xlabel('n')
            ax.set_ylabel('ms')
        size_ax = axes.flat[len(ALGORITHMS)]
        if not report.payload_sizes.empty:
            sizes = report.payload_sizes.groupby('n', as_index=False)['bytes'].mean()
            sns.barplot(data=sizes, x='n', y='bytes', ax=size_ax, color='steelblue')
        size_ax.set_title('Registro en el ledger')
        size_ax.set_ylabel('bytes')
        fig.tight_layout()
        path = Path(filepath)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, dpi=120)
        plt.close(fig)
        return path
    except Exception as e:
        logging.error(f"Error al generar el gráfico: {str(e)}")
        raise


def write_report(report: BenchReport, out_dir: Path, stem: str, plot: bool = False) -> Dict[str, Path]:
    """Escribe CSV, Excel y (opcionalmente) PNG del informe en out_dir"""
    out_dir = Path(out_dir)
    written = {}
    timings_path = out_dir / f"{stem}_timings.csv"
    FileHandler.save_dataframe(report.timings, timings_path)
    written['timings'] = timings_path
    checks_path = out_dir / f"{stem}_checks.csv"
    FileHandler.save_dataframe(report.assertions_frame(), checks_path)
    written['checks'] = checks_path

    sheets = [report.timings, report.payload_sizes, report.assertions_frame()]
    buffer = export_report_to_excel(sheets, ['Tiempos', 'Ledger', 'Comprobaciones'])
    excel_path = out_dir / f"{stem}.xlsx"
    FileHandler.write_bytes(excel_path, buffer.getvalue())
    written['excel'] = excel_path

    if plot:
        png = plot_bench(report, out_dir / f"{stem}.png")
        if png is not None:
            written['plot'] = png
    return written


__all__ = ["render_table", "plot_bench", "write_report"]
