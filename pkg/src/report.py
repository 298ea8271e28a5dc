"""
Renderização determinística dos relatórios (text, csv, json), com 12
algarismos significativos em todos os formatos.
"""
import csv
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import click

logger = logging.getLogger(__name__)

FORMATS = ("text", "csv", "json")
SIGNIFICANT_DIGITS = 12


@dataclass(frozen=True)
class RunOptions:
    """
    Opções globais da linha de comando
    """
    fmt: str = "text"
    output: Optional[str] = None
    tolerance: Optional[float] = None


def format_number(value: float) -> str:
    # soma 0.0 para não imprimir -0
    return format(float(value) + 0.0, f".{SIGNIFICANT_DIGITS}g")


def _cell(value, fmt: str):
    if isinstance(value, bool):
        if fmt == "json":
            return value
        return "yes" if value else "no"
    if isinstance(value, int):
        return value if fmt == "json" else str(value)
    if isinstance(value, float):
        text = format_number(value)
        return float(text) if fmt == "json" else text
    if value is None:
        return None if fmt == "json" else ""
    return str(value)


def render(rows: Sequence[Dict], columns: Sequence[str], fmt: str, notes: Sequence[str] = ()) -> str:
    """
    Monta o relatório com as colunas na ordem dada
    """
    cells = [[_cell(row.get(col), fmt) for col in columns] for row in rows]
    if fmt == "json":
        return json.dumps([dict(zip(columns, line)) for line in cells], indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buffer.getvalue()
    widths = [max([len(col)] + [len(line[i]) for line in cells]) for i, col in enumerate(columns)]
    lines = ["  ".join(col.ljust(w) for col, w in zip(columns, widths)).rstrip()]
    for line in cells:
        lines.append("  ".join(value.ljust(w) for value, w in zip(line, widths)).rstrip())
    lines.extend(notes)
    return "\n".join(lines) + "\n"


def emit(options: RunOptions, rows: List[Dict], columns: Sequence[str], notes: Sequence[str] = ()) -> None:
    """
    Escreve o relatório no arquivo de saída ou na saída padrão. Notas só
    aparecem no formato text; nos demais vão para o log
    """
    if options.fmt != "text":
        for note in notes:
            logger.info(note)
    write_output(options, render(rows, columns, options.fmt, notes if options.fmt == "text" else ()))


def write_output(options: RunOptions, text: str) -> None:
    if options.output:
        Path(options.output).write_text(text, encoding="utf-8")
        logger.info(f"Relatório gravado em {options.output}")
    else:
        click.echo(text, nl=False)
