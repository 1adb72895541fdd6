"""Pruebas para el grupo bilineal y las codificaciones canónicas"""
import hashlib

import pytest

from src.algebra import (
    BilinearGroup, ElementKind, SystemParams, length_prefixed, split_length_prefixed,
)
from src.errors import DecodeError, PreconditionError


def test_length_prefixed_roundtrip():
    """Prueba que los fragmentos se recuperan en orden"""
    chunks = [b"", b"a", b"\x00" * 300]
    assert split_length_prefixed(length_prefixed(*chunks)) == chunks


def test_split_length_prefixed_rejects_truncation():
    """Prueba el rechazo de datos truncados"""
    data = length_prefixed(b"abcdef")
    with pytest.raises(DecodeError):
        split_length_prefixed(data[:-1])
    with pytest.raises(DecodeError):
        split_length_prefixed(data + b"\x00\x00")


def test_split_length_prefixed_checks_count():
    """Prueba que se exige el número esperado de fragmentos"""
    with pytest.raises(DecodeError):
        split_length_prefixed(length_prefixed(b"a", b"b"), expected=3)


def test_params_derivation_is_deterministic(params):
    """Prueba que los generadores dependen solo de las etiquetas"""
    again = SystemParams.derive(params.group.curve)
    for name in ("g", "g0", "g1", "h1", "h2"):
        assert getattr(again, name) == getattr(params, name)
        assert not params.group.is_identity(getattr(params, name))


def test_generators_are_distinct(params):
    """Prueba que los cinco generadores son distintos"""
    encodings = {params.group.encode(getattr(params, n)) for n in ("g", "g0", "g1", "h1", "h2")}
    assert len(encodings) == 5


def test_bilinearity(params, rng):
    """Prueba e(g^a, g^b) = e(g, g)^(ab)"""
    a, b = params.group.random_scalar(rng), params.group.random_scalar(rng)
    left = params.pair(params.g_exp(a), params.g_exp(b))
    right = params.exp(params.pair(params.g, params.g), a * b)
    assert left == right


def test_exp_reduces_negative_exponents(params, rng):
    """Prueba que g^(-a) * g^a es la identidad"""
    a = params.group.random_scalar(rng, nonzero=True)
    assert params.group.is_identity(params.g_exp(-a) * params.g_exp(a))


def test_inv_and_zero(params):
    """Prueba el inverso modular y el rechazo del cero"""
    group = params.group
    assert group.reduce(7 * group.inv(7)) == 1
    with pytest.raises(PreconditionError):
        group.inv(group.order)


def test_scalar_encoding_is_fixed_width(params):
    """Prueba que los escalares se codifican con longitud fija"""
    group = params.group
    assert len(group.encode(0)) == group.scalar_length
    assert group.decode(group.encode(12345), ElementKind.SCALAR) == 12345
    with pytest.raises(PreconditionError):
        group.encode(group.order)


def test_decode_rejects_non_canonical_scalar(params):
    """Prueba el rechazo de escalares >= p"""
    group = params.group
    data = group.order.to_bytes(group.scalar_length, "big")
    with pytest.raises(DecodeError):
        group.decode(data, ElementKind.SCALAR)


def test_group_element_roundtrip(params, rng):
    """Prueba decode(encode(x)) == x para G y G_T"""
    group = params.group
    x = params.g_exp(group.random_scalar(rng, nonzero=True))
    gt = params.pair(x, params.h1)
    assert group.decode(group.encode(x), ElementKind.G) == x
    assert group.decode(group.encode(gt), ElementKind.GT) == gt


def test_identity_encodes_as_zeros_and_is_rejected(params):
    """Prueba que la identidad no se acepta salvo que se pida"""
    group = params.group
    data = group.encode(group.identity)
    assert data == bytes(group.element_length(ElementKind.G))
    with pytest.raises(DecodeError):
        group.decode(data, ElementKind.G)
    assert group.is_identity(group.decode(data, ElementKind.G, allow_identity=True))


def test_decode_rejects_wrong_length(params):
    """Prueba el rechazo de longitudes incorrectas"""
    group = params.group
    with pytest.raises(DecodeError):
        group.decode(b"\x01" * 3, ElementKind.G)


def test_decode_rejects_garbage(params):
    """Prueba el rechazo de bytes que no son un punto del grupo"""
    group = params.group
    garbage = b"\xff" * group.element_length(ElementKind.G)
    with pytest.raises(DecodeError):
        group.decode(garbage, ElementKind.G)


def test_transcript_hash_depends_on_framing(params):
    """Prueba que el prefijo de longitud separa las concatenaciones"""
    group = params.group
    assert group.hash_to_scalar(b"ab") == group.hash_to_scalar(b"ab")
    assert group.transcript_hash(1, 2) != group.transcript_hash(2, 1)
    assert 0 <= group.hash_to_scalar(b"x") < group.order


def test_keyword_scalar_and_map(params):
    """Prueba w = H1(palabra) y H(w) = g0 * g1^w"""
    omega = params.keyword_scalar("flu")
    assert omega == params.group.hash_to_scalar("flu".encode("utf-8"))
    assert params.keyword_map(omega) == params.g0 * params.exp(params.g1, omega)


def test_kind_of(params):
    """Prueba la clasificación de valores por tipo"""
    group = params.group
    assert group.kind_of(5) is ElementKind.SCALAR
    assert group.kind_of(params.g) is ElementKind.G
    assert group.kind_of(params.pair(params.g, params.g)) is ElementKind.GT


def test_bilinear_group_defaults_to_config_curve():
    """Prueba que la curva por defecto viene de la configuración"""
    from src.config import Config
    assert BilinearGroup().curve == Config.GROUP.curve


@pytest.mark.parametrize("data", [b"", b"flu", "ñandú".encode("utf-8"), bytes(range(256))])
def test_hash_to_scalar_matches_sha256(params, data):
    """Prueba H1 frente a SHA-256 reducido módulo p calculado aparte"""
    group = params.group
    assert group.hash_to_scalar(data) == int(hashlib.sha256(data).hexdigest(), 16) % group.order


def test_keyword_scalar_matches_sha256(params):
    """Prueba w = SHA-256(palabra en UTF-8) mod p"""
    expected = int(hashlib.sha256("asthma".encode("utf-8")).hexdigest(), 16) % params.p
    assert params.keyword_scalar("asthma") == expected


def test_pairing_is_symmetric(params, rng):
    """Prueba e(a, b) = e(b, a) sobre pares muestreados"""
    group = params.group
    for _ in range(8):
        a = params.g_exp(group.random_scalar(rng, nonzero=True))
        b = params.exp(params.h1, group.random_scalar(rng, nonzero=True))
        assert params.pair(a, b) == params.pair(b, a)


def test_encoding_is_injective_on_samples(params):
    """Prueba que elementos distintos de G y G_T tienen codificaciones distintas"""
    group = params.group
    points = [params.g_exp(i) for i in range(1, 41)]
    targets = [params.pair(point, params.g) for point in points[:10]]
    assert len({group.encode(point) for point in points}) == len(points)
    assert len({group.encode(target) for target in targets}) == len(targets)
    assert len({group.encode(i) for i in range(40)}) == 40
