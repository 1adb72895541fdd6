"""Pruebas para el ledger encadenado por hashes"""
import hashlib

import pytest

from src.algebra import length_prefixed
from src.errors import DecodeError, LedgerIndexError, LedgerIntegrityError, PreconditionError
from src.ledger import DIGEST_SIZE, GENESIS_PREV, Block, Ledger

EPOCH = 1_700_000_000


@pytest.fixture
def chain():
    """Ledger con tres bloques"""
    ledger = Ledger()
    for i, payload in enumerate([b"alpha", b"beta", b"gamma"]):
        ledger.append(payload, EPOCH + i)
    return ledger


def test_empty_ledger():
    """Prueba el ledger vacío"""
    ledger = Ledger()
    assert len(ledger) == 0
    assert ledger.tip == GENESIS_PREV
    assert ledger.verify_chain()


def test_genesis_block(chain):
    """Prueba que el primer bloque enlaza con 32 ceros"""
    genesis = chain.fetch(0)
    assert genesis.index == 0
    assert genesis.prev_hash == bytes(DIGEST_SIZE)
    assert genesis.is_sealed()


def test_block_hash_definition():
    """Prueba que el hash cubre índice, enlace, marca de tiempo y carga"""
    block = Block.create(3, b"\x11" * 32, EPOCH, b"payload")
    expected = hashlib.sha256(length_prefixed(
        (3).to_bytes(8, "big"), b"\x11" * 32, EPOCH.to_bytes(8, "big"), b"payload",
    )).digest()
    assert block.block_hash == expected


def test_chaining(chain):
    """Prueba que cada bloque enlaza con el hash del anterior"""
    blocks = list(chain)
    for previous, current in zip(blocks, blocks[1:]):
        assert current.prev_hash == previous.block_hash
        assert current.index == previous.index + 1
    assert chain.tip == blocks[-1].block_hash
    assert chain.verify_chain()


def test_fetch_out_of_range(chain):
    """Prueba el error de índice"""
    with pytest.raises(LedgerIndexError):
        chain.fetch(3)
    with pytest.raises(LedgerIndexError):
        chain.fetch(-1)


def test_negative_timestamp_rejected():
    """Prueba el rechazo de marcas de tiempo negativas"""
    with pytest.raises(PreconditionError):
        Ledger().append(b"x", -1)


def test_empty_payload_allowed():
    """Prueba que una carga vacía también se encadena"""
    ledger = Ledger()
    ledger.append(b"", EPOCH)
    assert ledger.verify_chain()


@pytest.mark.parametrize("index", [0, 1, 2])
def test_every_bit_flip_detected(chain, index):
    """Prueba que invertir un bit cualquiera rompe la verificación"""
    block = chain.fetch(index)
    for bit in range(0, block.bit_length(), 7):
        assert not chain.tampered_copy(index, bit).verify_chain(), f"bit {bit} del bloque {index}"
    assert chain.verify_chain()


def test_flip_bit_out_of_range(chain):
    """Prueba el rechazo de bits fuera del bloque"""
    block = chain.fetch(0)
    with pytest.raises(PreconditionError):
        block.flip_bit(block.bit_length())


def test_swapped_blocks_detected(chain):
    """Prueba que reordenar bloques se detecta"""
    blocks = list(chain)
    swapped = Ledger.from_blocks([blocks[1], blocks[0], blocks[2]], verify=False)
    assert not swapped.verify_chain()
    with pytest.raises(LedgerIntegrityError):
        Ledger.from_blocks([blocks[1], blocks[0], blocks[2]])


def test_removed_block_detected(chain):
    """Prueba que eliminar un bloque intermedio se detecta"""
    blocks = list(chain)
    assert not Ledger.from_blocks([blocks[0], blocks[2]], verify=False).verify_chain()


def test_append_refuses_broken_head(chain):
    """Prueba que no se anexa sobre una cabeza alterada"""
    broken = chain.tampered_copy(2, 100)
    with pytest.raises(LedgerIntegrityError):
        broken.append(b"delta", EPOCH + 3)


def test_persistence(chain):
    """Prueba la reconstrucción del ledger desde bytes"""
    again = Ledger.from_bytes(chain.to_bytes())
    assert len(again) == 3
    assert again.tip == chain.tip
    assert [b.payload for b in again] == [b"alpha", b"beta", b"gamma"]


def test_persistence_rejects_tampering(chain):
    """Prueba que un fichero alterado no se carga"""
    with pytest.raises(LedgerIntegrityError):
        Ledger.from_bytes(chain.tampered_copy(1, 400).to_bytes())
    with pytest.raises(LedgerIntegrityError):
        Ledger.from_bytes(chain.to_bytes()[:-3])


def test_block_decoding_rejects_bad_lengths():
    """Prueba el rechazo de resúmenes con longitud incorrecta"""
    data = length_prefixed((0).to_bytes(8, "big"), b"\x00" * 31, EPOCH.to_bytes(8, "big"), b"", b"\x00" * 32)
    with pytest.raises(DecodeError):
        Block.from_bytes(data)


def test_payload_sizes(chain):
    """Prueba el informe de tamaños por bloque"""
    assert chain.payload_sizes() == [(0, 5), (1, 4), (2, 5)]
