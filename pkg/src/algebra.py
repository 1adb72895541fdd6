"""Grupo bilineal, aritmética escalar, la función H, el hash H1 y las codificaciones canónicas.

Todos los demás módulos usan estas codificaciones como formato de transcripción,
de mensaje y de registro. Los escalares son enteros de Python en [0, p).
"""
import base64
import hashlib
import logging
import random
import struct
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Iterable, List, Optional

from charm.toolbox.pairinggroup import PairingGroup, ZR, G1, pair as _charm_pair

from src.config import Config
from src.errors import DecodeError, PreconditionError

Rng = random.Random
Scalar = int
GroupElem = Any  # elemento de G (pc_element de charm)
GtElem = Any     # elemento de G_T

_LENGTH_PREFIX = struct.Struct(">I")


class ElementKind(str, Enum):
    """Tipo de elemento codificable"""
    SCALAR = "ZR"
    G = "G1"
    GT = "GT"


# Etiquetas de tipo que charm antepone a sus serializaciones
_CHARM_TAGS = {ElementKind.G: b"1", ElementKind.GT: b"3"}


def length_prefixed(*chunks: bytes) -> bytes:
    """Concatena fragmentos con un prefijo de longitud de 4 bytes big-endian"""
    return b"".join(_LENGTH_PREFIX.pack(len(chunk)) + chunk for chunk in chunks)


def split_length_prefixed(data: bytes, expected: Optional[int] = None) -> List[bytes]:
    """Inverso de length_prefixed; rechaza truncamientos y bytes sobrantes"""
    chunks = []
    offset = 0
    while offset < len(data):
        if offset + _LENGTH_PREFIX.size > len(data):
            raise DecodeError("Prefijo de longitud truncado")
        (size,) = _LENGTH_PREFIX.unpack_from(data, offset)
        offset += _LENGTH_PREFIX.size
        if offset + size > len(data):
            raise DecodeError("Fragmento truncado")
        chunks.append(bytes(data[offset:offset + size]))
        offset += size
    if expected is not None and len(chunks) != expected:
        raise DecodeError(f"Se esperaban {expected} fragmentos, hay {len(chunks)}")
    return chunks


@lru_cache(maxsize=None)
def _load_pairing_group(curve: str) -> PairingGroup:
    return PairingGroup(curve)


class BilinearGroup:
    """Envoltorio del backend de emparejamientos (charm) con interfaz simétrica"""

    def __init__(self, curve: Optional[str] = None):
        self.curve = curve or Config.GROUP.curve
        self._group = _load_pairing_group(self.curve)
        self.order: int = int(self._group.order())
        self.scalar_length = (self.order.bit_length() + 7) // 8

        probe = self._group.hash("probe", G1)
        self.identity: GroupElem = probe ** self._zr(0)
        self.gt_identity: GtElem = _charm_pair(probe, probe) ** self._zr(0)
        self._lengths = {
            ElementKind.SCALAR: self.scalar_length,
            ElementKind.G: len(self._raw(probe)[1]),
            ElementKind.GT: len(self._raw(_charm_pair(probe, probe))[1]),
        }

    def _zr(self, value: int):
        return self._group.init(ZR, value % self.order)

    def _raw(self, elem) -> tuple:
        serialized = self._group.serialize(elem, compression=False)
        tag, _, body = serialized.partition(b":")
        return tag, base64.b64decode(body)

    def element_length(self, kind: ElementKind) -> int:
        return self._lengths[kind]

    # --- aritmética escalar -------------------------------------------------

    def random_scalar(self, rng: Rng, nonzero: bool = False) -> Scalar:
        """Escalar uniforme en [0, p) o en [1, p)"""
        return rng.randrange(1 if nonzero else 0, self.order)

    def inv(self, value: Scalar) -> Scalar:
        if value % self.order == 0:
            raise PreconditionError("El cero no tiene inverso módulo p")
        return pow(value, -1, self.order)

    def reduce(self, value: int) -> Scalar:
        return value % self.order

    # --- operaciones de grupo -----------------------------------------------

    def exp(self, base, exponent: int):
        """base^exponent con el exponente reducido módulo p (sirve para G y G_T)"""
        return base ** self._zr(exponent)

    def pair(self, a: GroupElem, b: GroupElem) -> GtElem:
        return _charm_pair(a, b)

    def is_identity(self, elem) -> bool:
        tag, _ = self._raw(elem)
        if tag == _CHARM_TAGS[ElementKind.GT]:
            return elem == self.gt_identity
        return elem == self.identity

    def hash_to_group(self, label: str) -> GroupElem:
        return self._group.hash(label, G1)

    def hash_to_scalar(self, data: bytes) -> Scalar:
        """H1: SHA-256 interpretado big-endian y reducido módulo p"""
        return int.from_bytes(hashlib.sha256(data).digest(), "big") % self.order

    def transcript_hash(self, *elements) -> Scalar:
        """H1 sobre la concatenación con prefijos de longitud de las codificaciones"""
        return self.hash_to_scalar(length_prefixed(*(self.encode(e) for e in elements)))

    # --- codificación canónica ----------------------------------------------

    def kind_of(self, value) -> ElementKind:
        if isinstance(value, int):
            return ElementKind.SCALAR
        tag, _ = self._raw(value)
        for kind, charm_tag in _CHARM_TAGS.items():
            if tag == charm_tag:
                return kind
        raise DecodeError(f"Tipo de elemento no soportado: {tag!r}")

    def encode(self, value) -> bytes:
        """Codificación de longitud fija; la identidad se codifica como ceros"""
        if isinstance(value, int):
            if not 0 <= value < self.order:
                raise PreconditionError("Escalar fuera de [0, p)")
            return value.to_bytes(self.scalar_length, "big")
        kind = self.kind_of(value)
        if self.is_identity(value):
            return bytes(self._lengths[kind])
        return self._raw(value)[1]

    def decode(self, data: bytes, kind: ElementKind, allow_identity: bool = False):
        """Decodifica bytes canónicos; rechaza longitudes, identidades y puntos inválidos"""
        kind = ElementKind(kind)
        if len(data) != self._lengths[kind]:
            raise DecodeError(f"Longitud {len(data)} inválida para {kind.value}")
        if kind is ElementKind.SCALAR:
            value = int.from_bytes(data, "big")
            if value >= self.order:
                raise DecodeError("Escalar no canónico (>= p)")
            return value
        if not any(data):
            if allow_identity:
                return self.identity if kind is ElementKind.G else self.gt_identity
            raise DecodeError("La identidad no es una codificación aceptada")
        try:
            elem = self._group.deserialize(
                _CHARM_TAGS[kind] + b":" + base64.b64encode(data), compression=False
            )
            member = elem is not None and self._group.ismember(elem)
        except Exception as e:
            raise DecodeError(f"Bytes no decodificables como {kind.value}") from e
        if not member:
            raise DecodeError(f"El elemento no pertenece a {kind.value}")
        if self._raw(elem)[1] != bytes(data):
            raise DecodeError("Codificación no canónica")
        return elem

    def encode_many(self, values: Iterable) -> bytes:
        return length_prefixed(*(self.encode(v) for v in values))

    def decode_many(self, data: bytes, kinds: List[ElementKind]) -> list:
        chunks = split_length_prefixed(data, expected=len(kinds))
        return [self.decode(chunk, kind) for chunk, kind in zip(chunks, kinds)]


@dataclass(frozen=True, eq=False)
class SystemParams:
    """PP = (G, G_T, e, p, g, g0, g1, h1, h2, H, H1)"""
    group: BilinearGroup
    g: GroupElem
    g0: GroupElem
    g1: GroupElem
    h1: GroupElem
    h2: GroupElem

    @property
    def p(self) -> int:
        return self.group.order

    @classmethod
    def derive(cls, curve: Optional[str] = None) -> "SystemParams":
        """Generadores derivados de etiquetas ASCII separadas por dominio"""
        group = BilinearGroup(curve)
        tag = Config.GROUP.domain_tag
        generators = {
            label: group.hash_to_group(f"{tag}/{label}")
            for label in Config.GROUP.generator_labels
        }
        for label, elem in generators.items():
            if group.is_identity(elem):
                raise PreconditionError(f"El generador {label} es la identidad")
        logging.debug(f"Parámetros derivados sobre la curva {group.curve}")
        return cls(group=group, **generators)

    def keyword_map(self, omega: Scalar) -> GroupElem:
        """H(w) = g0 * g1^w"""
        return self.g0 * self.group.exp(self.g1, omega)

    def keyword_scalar(self, keyword: str) -> Scalar:
        """Aplica H1 a la cadena de la palabra clave (UTF-8)"""
        return self.group.hash_to_scalar(keyword.encode("utf-8"))

    def pair(self, a: GroupElem, b: GroupElem) -> GtElem:
        return self.group.pair(a, b)

    def exp(self, base, exponent: int):
        return self.group.exp(base, exponent)

    def g_exp(self, exponent: int) -> GroupElem:
        return self.group.exp(self.g, exponent)
