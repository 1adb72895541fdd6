"""Configuración del sistema de búsqueda cifrada con trazabilidad"""
import os
from dataclasses import dataclass
from typing import Tuple

from dotenv import load_dotenv

load_dotenv()


@dataclass
class GroupConfig:
    """Configuración del grupo bilineal"""
    # Curva simétrica tipo A (orden primo de 160 bits)
    curve: str = os.getenv("TPEKS_CURVE", "SS512")

    # Prefijo de las etiquetas usadas para derivar los generadores
    domain_tag: str = "BP3KSEST"

    # Nombres de los generadores del sistema, en orden
    generator_labels: Tuple[str, ...] = ("g", "g0", "g1", "h1", "h2")


@dataclass
class HomomorphicConfig:
    """Configuración del cifrado homomórfico (Paillier)"""
    key_bits: int = int(os.getenv("TPEKS_PAILLIER_BITS", "2048"))
    min_key_bits: int = 2048

    # Parámetro estadístico de enmascaramiento (sigma)
    mask_bits: int = 80


@dataclass
class LedgerConfig:
    """Configuración del registro encadenado"""
    filename: str = "ledger.bin"

    # Reloj lógico de los escenarios deterministas (segundos unix)
    epoch: int = 1_700_000_000


@dataclass
class ScenarioDefaults:
    """Valores por defecto de un escenario de extremo a extremo"""
    n: int = 10
    users: int = 2
    queries: int = 1
    seed: int = 7


@dataclass
class BenchConfig:
    """Configuración del benchmark de escalado"""
    n_values: Tuple[int, ...] = None
    repeats: int = int(os.getenv("TPEKS_BENCH_REPEATS", "3"))

    # Límites de forma: constante dentro de 2x, lineal con t(50)/t(10) en [3, 7]
    constant_tolerance: float = 2.0
    linear_ratio_bounds: Tuple[float, float] = (3.0, 7.0)

    def __post_init__(self):
        if self.n_values is None:
            self.n_values = (10, 20, 30, 40, 50)


@dataclass
class LoggingConfig:
    """Configuración del registro de eventos"""
    log_file: str = os.getenv("TPEKS_LOG_FILE", "tpeks.log")
    level: str = os.getenv("TPEKS_LOG_LEVEL", "INFO")


class Config:
    """Contenedor de configuración global"""
    GROUP = GroupConfig()
    HOMOMORPHIC = HomomorphicConfig()
    LEDGER = LedgerConfig()
    SCENARIO = ScenarioDefaults()
    BENCH = BenchConfig()
    LOGGING = LoggingConfig()
