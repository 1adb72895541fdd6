"""Módulo inicial del sistema de búsqueda cifrada con trapdoor ciego y trazabilidad
Este módulo exporta los algoritmos principales para facilitar su importación"""

from .scheme import (
    # Claves y estructuras del esquema
    TgcKeyPair,
    TracerKeyPair,
    UserKeyPair,
    KeywordTable,
    IdTable,
    TrapdoorRecord,
    Trapdoor,
    Ciphertext,

    # Algoritmos
    setup,
    keygen_ca,
    keygen_tgc,
    keygen_tr,
    keygen_user,
    reg_request,
    reg_issue,
    trapdoor_request,
    trapdoor_respond,
    trapdoor_complete,
    trapdoor_finalize,
    run_trapdoor_protocol,
    peks_encrypt,
    search,
    extract_direct,
    record_validate,
    trace
)
from .ledger import Ledger, Block

__all__ = [
    'TgcKeyPair',
    'TracerKeyPair',
    'UserKeyPair',
    'KeywordTable',
    'IdTable',
    'TrapdoorRecord',
    'Trapdoor',
    'Ciphertext',
    'setup',
    'keygen_ca',
    'keygen_tgc',
    'keygen_tr',
    'keygen_user',
    'reg_request',
    'reg_issue',
    'trapdoor_request',
    'trapdoor_respond',
    'trapdoor_complete',
    'trapdoor_finalize',
    'run_trapdoor_protocol',
    'peks_encrypt',
    'search',
    'extract_direct',
    'record_validate',
    'trace',
    'Ledger',
    'Block'
]
