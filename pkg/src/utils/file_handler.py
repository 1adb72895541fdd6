"""Módulo de operaciones de manejo de archivos: claves, tablas, codificaciones y transcripciones"""
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

import aiofiles
import pandas as pd

PathLike = Union[str, Path]


class FileHandler:
    """Lee y escribe los formatos canónicos del directorio de estado"""

    @staticmethod
    def _ensure_parent(filepath: PathLike) -> Path:
        path = Path(filepath)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    @staticmethod
    def write_bytes(filepath: PathLike, data: bytes) -> None:
        FileHandler._ensure_parent(filepath).write_bytes(data)

    @staticmethod
    def read_bytes(filepath: PathLike) -> bytes:
        try:
            return Path(filepath).read_bytes()
        except OSError as e:
            logging.error(f"Error al leer archivo {filepath}: {str(e)}")
            raise

    @staticmethod
    def write_key_file(filepath: PathLike, fields: Dict[str, bytes]) -> None:
        """Una línea `nombre=hex` por campo"""
        lines = [f"{name}={value.hex()}" for name, value in fields.items()]
        FileHandler._ensure_parent(filepath).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @staticmethod
    def read_key_file(filepath: PathLike) -> Dict[str, bytes]:
        fields = {}
        for number, line in enumerate(Path(filepath).read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            name, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{filepath}:{number}: se esperaba nombre=hex")
            fields[name.strip()] = bytes.fromhex(value.strip())
        return fields

    @staticmethod
    def write_table(filepath: PathLike, pairs: Iterable[Tuple[bytes, bytes]]) -> None:
        """Pares (clave, valor) en hexadecimal, uno por línea"""
        lines = [f"{key.hex()} {value.hex()}" for key, value in pairs]
        FileHandler._ensure_parent(filepath).write_text("".join(line + "\n" for line in lines), encoding="utf-8")

    @staticmethod
    def read_table(filepath: PathLike) -> List[Tuple[bytes, bytes]]:
        pairs = []
        for number, line in enumerate(Path(filepath).read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{filepath}:{number}: se esperaban dos campos hexadecimales")
            pairs.append((bytes.fromhex(parts[0]), bytes.fromhex(parts[1])))
        return pairs

    @staticmethod
    async def dump_transcript(directory: PathLike, entries: Iterable[Tuple[str, bytes]]) -> List[Path]:
        """Escribe cada mensaje serializado en su propio archivo, numerado por orden de envío"""
        target = Path(directory)
        target.mkdir(parents=True, exist_ok=True)
        written = []
        for position, (label, payload) in enumerate(entries):
            path = target / f"{position:05d}_{label}.bin"
            async with aiofiles.open(path, "wb") as handle:
                await handle.write(payload)
            written.append(path)
        logging.info(f"{len(written)} mensajes volcados en {target}")
        return written

    @staticmethod
    async def read_file_content(filepath: PathLike) -> bytes:
        """Lee un archivo binario de forma asíncrona"""
        try:
            async with aiofiles.open(filepath, "rb") as handle:
                return await handle.read()
        except Exception as e:
            logging.error(f"Error al leer archivo {filepath}: {str(e)}")
            raise

    @staticmethod
    def save_dataframe(df: pd.DataFrame, filepath: PathLike, create_dirs: bool = True) -> None:
        """Save a pandas DataFrame to CSV, optionally creating the directory structure.

        Args:
            df: DataFrame to save
            filepath: Path to save the CSV file
            create_dirs: If True, create directory structure if it doesn't exist
        """
        if create_dirs:
            os.makedirs(os.path.dirname(os.fspath(filepath)) or ".", exist_ok=True)
        df.to_csv(filepath, index=False)
