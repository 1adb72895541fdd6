"""Ledger de solo-anexado encadenado por hashes para los registros de consulta de trapdoor"""
import hashlib
import logging
import struct
import threading
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, List, Tuple

from src.algebra import length_prefixed, split_length_prefixed
from src.errors import DecodeError, LedgerIndexError, LedgerIntegrityError, PreconditionError
from src.utils.utilities import short_hex

DIGEST_SIZE = 32
GENESIS_PREV = bytes(DIGEST_SIZE)
_U64 = struct.Struct(">Q")


@dataclass(frozen=True)
class Block:
    index: int
    prev_hash: bytes
    timestamp: int
    payload: bytes
    block_hash: bytes

    @staticmethod
    def compute_hash(index: int, prev_hash: bytes, timestamp: int, payload: bytes) -> bytes:
        """SHA-256(index || prev_hash || timestamp || payload) con campos prefijados por longitud"""
        header = length_prefixed(_U64.pack(index), prev_hash, _U64.pack(timestamp), payload)
        return hashlib.sha256(header).digest()

    @classmethod
    def create(cls, index: int, prev_hash: bytes, timestamp: int, payload: bytes) -> "Block":
        if timestamp < 0:
            raise PreconditionError("La marca de tiempo no puede ser negativa")
        block_hash = cls.compute_hash(index, prev_hash, timestamp, payload)
        return cls(index=index, prev_hash=prev_hash, timestamp=timestamp, payload=bytes(payload), block_hash=block_hash)

    def is_sealed(self) -> bool:
        return self.block_hash == self.compute_hash(self.index, self.prev_hash, self.timestamp, self.payload)

    # Disposición plana de bits: index(8) || prev_hash(32) || timestamp(8) || payload || block_hash(32)

    def bit_length(self) -> int:
        return 8 * (2 * _U64.size + 2 * DIGEST_SIZE + len(self.payload))

    def flip_bit(self, bit: int) -> "Block":
        """Copia con un único bit invertido; no recalcula el hash"""
        if not 0 <= bit < self.bit_length():
            raise PreconditionError(f"Bit {bit} fuera del bloque")
        raw = bytearray(_U64.pack(self.index) + self.prev_hash + _U64.pack(self.timestamp) + self.payload + self.block_hash)
        raw[bit // 8] ^= 0x80 >> (bit % 8)
        payload_end = len(raw) - DIGEST_SIZE
        return replace(
            self,
            index=_U64.unpack_from(raw, 0)[0],
            prev_hash=bytes(raw[8:40]),
            timestamp=_U64.unpack_from(raw, 40)[0],
            payload=bytes(raw[48:payload_end]),
            block_hash=bytes(raw[payload_end:]),
        )

    def to_bytes(self) -> bytes:
        return length_prefixed(_U64.pack(self.index), self.prev_hash, _U64.pack(self.timestamp), self.payload, self.block_hash)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Block":
        index, prev_hash, timestamp, payload, block_hash = split_length_prefixed(data, expected=5)
        if len(index) != _U64.size or len(timestamp) != _U64.size:
            raise DecodeError("Índice o marca de tiempo con longitud inválida")
        if len(prev_hash) != DIGEST_SIZE or len(block_hash) != DIGEST_SIZE:
            raise DecodeError("Resumen con longitud inválida")
        return cls(
            index=_U64.unpack(index)[0], prev_hash=prev_hash,
            timestamp=_U64.unpack(timestamp)[0], payload=payload, block_hash=block_hash,
        )


class Ledger:
    """Cadena de bloques local con un único escritor. Los bloques existentes nunca se modifican."""

    def __init__(self):
        self._blocks: List[Block] = []
        self._lock = threading.Lock()

    @classmethod
    def from_blocks(cls, blocks: Iterable[Block], verify: bool = True) -> "Ledger":
        ledger = cls()
        ledger._blocks = list(blocks)
        if verify and not ledger.verify_chain():
            raise LedgerIntegrityError("La cadena cargada no verifica")
        return ledger

    def __len__(self) -> int:
        return len(self._blocks)

    def __iter__(self) -> Iterator[Block]:
        return iter(tuple(self._blocks))

    @property
    def tip(self) -> bytes:
        """Resumen del último bloque; 32 ceros para el ledger vacío"""
        blocks = self._blocks
        return blocks[-1].block_hash if blocks else GENESIS_PREV

    def append(self, payload: bytes, now: int) -> Block:
        with self._lock:
            if self._blocks and not self._blocks[-1].is_sealed():
                raise LedgerIntegrityError("El bloque cabeza no verifica")
            block = Block.create(len(self._blocks), self.tip, now, payload)
            self._blocks.append(block)
        logging.debug(f"Bloque {block.index} anexado ({len(payload)} bytes, {short_hex(block.block_hash)})")
        return block

    def fetch(self, index: int) -> Block:
        if not 0 <= index < len(self._blocks):
            raise LedgerIndexError(f"No existe el bloque {index} (longitud {len(self._blocks)})")
        return self._blocks[index]

    def verify_chain(self) -> bool:
        prev_hash = GENESIS_PREV
        for position, block in enumerate(tuple(self._blocks)):
            if block.index != position or block.prev_hash != prev_hash or not block.is_sealed():
                logging.debug(f"La cadena se rompe en el bloque {position}")
                return False
            prev_hash = block.block_hash
        return True

    def payload_sizes(self) -> List[Tuple[int, int]]:
        """(índice, tamaño en bytes del registro) por bloque"""
        return [(block.index, len(block.payload)) for block in self._blocks]

    def tampered_copy(self, index: int, bit: int) -> "Ledger":
        """Copia con un bit invertido en el bloque indicado; el original no cambia"""
        target = self.fetch(index)
        blocks = list(self._blocks)
        blocks[index] = target.flip_bit(bit)
        return Ledger.from_blocks(blocks, verify=False)

    def to_bytes(self) -> bytes:
        return length_prefixed(*(block.to_bytes() for block in self._blocks))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Ledger":
        try:
            blocks = [Block.from_bytes(chunk) for chunk in split_length_prefixed(data)]
        except DecodeError as e:
            raise LedgerIntegrityError(f"Fichero de ledger ilegible: {str(e)}") from e
        return cls.from_blocks(blocks, verify=True)
