"""Cifrado aditivamente homomórfico (Paillier) y el intercambio TPP de tres mensajes.

El usuario envía E(r1'), E(r2'), E(q = u3/r1'), E(u0), E(u1), E(u2) bajo su clave;
el TGC responde con tres cifrados enmascarados con múltiplos aleatorios de p; el
usuario descifra, reduce módulo p y devuelve x0, x1, x2 en claro. Modelo semi-honesto.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import gmpy2
from phe import paillier
from phe.util import mulmod, powmod

from src.algebra import Rng, Scalar, length_prefixed, split_length_prefixed
from src.config import Config
from src.errors import DecodeError, KeyMismatchError, PreconditionError, ProtocolAbortError


def _int_to_bytes(value: int) -> bytes:
    return value.to_bytes(max(1, (value.bit_length() + 7) // 8), "big")


def _bytes_to_int(data: bytes) -> int:
    return int.from_bytes(data, "big")


@dataclass(frozen=True)
class PaillierKeyPair:
    public_key: paillier.PaillierPublicKey
    private_key: paillier.PaillierPrivateKey

    @property
    def n(self) -> int:
        return self.public_key.n


@dataclass(frozen=True)
class HomCiphertext:
    """Valor en [0, N^2) ligado a la clave pública que lo produjo"""
    value: int
    public_key: paillier.PaillierPublicKey


def _seeded_prime(bits: int, rng: Rng) -> int:
    while True:
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | (1 << (bits - 2)) | 1
        prime = int(gmpy2.next_prime(candidate))
        if prime.bit_length() == bits:
            return prime


def max_plaintext(p: int, mask_bits: int) -> int:
    """Mayor entero que puede aparecer en E0: 2(p-1)^2 + (p-1) + 2^sigma p"""
    return 2 * (p - 1) ** 2 + (p - 1) + (1 << mask_bits) * p


def hom_keygen(bits: int, rng: Rng, scalar_order: Optional[int] = None,
               mask_bits: Optional[int] = None) -> PaillierKeyPair:
    """Genera un par de claves Paillier con primos derivados del rng inyectado.

    Si se indica scalar_order (p), comprueba que N supera 3 * 2^sigma * p^2 y el
    máximo texto claro del intercambio TPP, para que no haya desbordamiento.
    """
    if bits < Config.HOMOMORPHIC.min_key_bits:
        raise PreconditionError(f"El módulo Paillier debe tener al menos {Config.HOMOMORPHIC.min_key_bits} bits")
    mask_bits = Config.HOMOMORPHIC.mask_bits if mask_bits is None else mask_bits
    while True:
        p_factor = _seeded_prime(bits // 2, rng)
        q_factor = _seeded_prime(bits - bits // 2, rng)
        if p_factor != q_factor and (p_factor * q_factor).bit_length() == bits:
            break
    public_key = paillier.PaillierPublicKey(p_factor * q_factor)
    private_key = paillier.PaillierPrivateKey(public_key, p_factor, q_factor)
    if scalar_order is not None:
        n = public_key.n
        if n <= 3 * (1 << mask_bits) * scalar_order ** 2 or max_plaintext(scalar_order, mask_bits) >= n:
            raise PreconditionError("El módulo Paillier no deja margen para el enmascaramiento")
    logging.debug(f"Clave Paillier de {bits} bits generada")
    return PaillierKeyPair(public_key=public_key, private_key=private_key)


def encrypt(public_key: paillier.PaillierPublicKey, plaintext: int, rng: Rng) -> HomCiphertext:
    if not 0 <= plaintext < public_key.n:
        raise PreconditionError("Texto claro fuera de [0, N)")
    nonce = rng.randrange(1, public_key.n)
    return HomCiphertext(value=public_key.raw_encrypt(plaintext, r_value=nonce), public_key=public_key)


def decrypt(keypair: PaillierKeyPair, ciphertext: HomCiphertext) -> int:
    if ciphertext.public_key != keypair.public_key:
        raise KeyMismatchError("El cifrado no pertenece a esta clave")
    return keypair.private_key.raw_decrypt(ciphertext.value)


def hom_add(c1: HomCiphertext, c2: HomCiphertext) -> HomCiphertext:
    """E(a) (+) E(b) = E(a + b mod N)"""
    if c1.public_key != c2.public_key:
        raise KeyMismatchError("Suma homomórfica entre claves distintas")
    return HomCiphertext(value=mulmod(c1.value, c2.value, c1.public_key.nsquare), public_key=c1.public_key)


def hom_scale(c: HomCiphertext, k: int) -> HomCiphertext:
    """E(a)^k = E(k a mod N)"""
    pk = c.public_key
    return HomCiphertext(value=powmod(c.value, k % pk.n, pk.nsquare), public_key=pk)


# --- intercambio TPP ------------------------------------------------------------

@dataclass(frozen=True)
class TppUserState:
    u0: Scalar
    u1: Scalar
    u2: Scalar
    u3: Scalar
    r1_prime: Scalar
    r2_prime: Scalar
    p: int
    keypair: PaillierKeyPair

    def __post_init__(self):
        if 0 in (self.u3 % self.p, self.r1_prime % self.p, self.r2_prime % self.p):
            raise PreconditionError("u3, r1' y r2' deben ser no nulos")

    @property
    def q(self) -> Scalar:
        """q = u3 / r1' mod p"""
        return self.u3 * pow(self.r1_prime, -1, self.p) % self.p

    @classmethod
    def sample(cls, p: int, keypair: PaillierKeyPair, rng: Rng) -> "TppUserState":
        u0, u1, u2 = (rng.randrange(p) for _ in range(3))
        u3, r1_prime, r2_prime = (rng.randrange(1, p) for _ in range(3))
        return cls(u0=u0, u1=u1, u2=u2, u3=u3, r1_prime=r1_prime, r2_prime=r2_prime, p=p, keypair=keypair)


@dataclass
class TppTgcState:
    r1_hat: Scalar
    r2_hat: Scalar
    x0: Optional[Scalar] = None
    x1: Optional[Scalar] = None
    x2: Optional[Scalar] = None

    def receive(self, m3: "Msg3") -> None:
        self.x0, self.x1, self.x2 = m3.x0, m3.x1, m3.x2


@dataclass(frozen=True)
class Msg1:
    enc_r1_prime: HomCiphertext
    enc_r2_prime: HomCiphertext
    enc_q: HomCiphertext
    enc_u0: HomCiphertext
    enc_u1: HomCiphertext
    enc_u2: HomCiphertext
    public_key: paillier.PaillierPublicKey

    def ciphertexts(self) -> Tuple[HomCiphertext, ...]:
        return (self.enc_r1_prime, self.enc_r2_prime, self.enc_q, self.enc_u0, self.enc_u1, self.enc_u2)

    def to_bytes(self) -> bytes:
        return length_prefixed(_int_to_bytes(self.public_key.n), *(_int_to_bytes(c.value) for c in self.ciphertexts()))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Msg1":
        chunks = split_length_prefixed(data, expected=7)
        public_key = paillier.PaillierPublicKey(_bytes_to_int(chunks[0]))
        values = [_bytes_to_int(chunk) for chunk in chunks[1:]]
        if any(not 0 < v < public_key.nsquare for v in values):
            raise DecodeError("Cifrado fuera de (0, N^2)")
        return cls(*(HomCiphertext(value=v, public_key=public_key) for v in values), public_key=public_key)


@dataclass(frozen=True)
class Msg2:
    e0: HomCiphertext
    e1: HomCiphertext
    e2: HomCiphertext

    def to_bytes(self) -> bytes:
        return length_prefixed(*(_int_to_bytes(c.value) for c in (self.e0, self.e1, self.e2)))

    @classmethod
    def from_bytes(cls, data: bytes, public_key: paillier.PaillierPublicKey) -> "Msg2":
        values = [_bytes_to_int(chunk) for chunk in split_length_prefixed(data, expected=3)]
        return cls(*(HomCiphertext(value=v, public_key=public_key) for v in values))


@dataclass(frozen=True)
class Msg3:
    x0: Scalar
    x1: Scalar
    x2: Scalar

    def to_bytes(self) -> bytes:
        return length_prefixed(*(_int_to_bytes(x) for x in (self.x0, self.x1, self.x2)))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Msg3":
        return cls(*(_bytes_to_int(chunk) for chunk in split_length_prefixed(data, expected=3)))


def tpp_round1_user(state: TppUserState, rng: Rng) -> Msg1:
    pk = state.keypair.public_key
    plaintexts = (state.r1_prime, state.r2_prime, state.q, state.u0, state.u1, state.u2)
    return Msg1(*(encrypt(pk, m, rng) for m in plaintexts), public_key=pk)


def tpp_round2_tgc(m1: Msg1, tgc_secret: Tuple[Scalar, ...], r1_hat: Scalar, r2_hat: Scalar,
                   p: int, rng: Rng, mask_bits: Optional[int] = None,
                   masks: Optional[Tuple[int, int, int]] = None) -> Msg2:
    """Evalúa x0, x1, x2 bajo cifrado, cada uno enmascarado con m_i * p.

    masks permite fijar m_0, m_1, m_2 (solo pruebas); por defecto son uniformes en [0, 2^sigma).
    """
    t0, t1, t2, t3, t4 = tgc_secret
    mask_bits = Config.HOMOMORPHIC.mask_bits if mask_bits is None else mask_bits
    if masks is None:
        masks = tuple(rng.randrange(1 << mask_bits) for _ in range(3))
    pk = m1.public_key
    if any(c.public_key != pk for c in m1.ciphertexts()):
        raise KeyMismatchError("Msg1 mezcla claves públicas")

    def masked(acc: HomCiphertext, mask: int) -> HomCiphertext:
        return hom_add(acc, encrypt(pk, mask * p, rng))

    e0 = hom_add(
        hom_scale(m1.enc_r1_prime, r1_hat * t1 * t2 % p),
        hom_scale(m1.enc_r2_prime, r2_hat * t3 * t4 % p),
    )
    e0 = masked(hom_add(e0, m1.enc_u0), masks[0])
    e1 = masked(hom_add(hom_scale(m1.enc_q, (p - t0 * t2 % p) % p), m1.enc_u1), masks[1])
    e2 = masked(hom_add(hom_scale(m1.enc_q, (p - t0 * t1 % p) % p), m1.enc_u2), masks[2])
    return Msg2(e0=e0, e1=e1, e2=e2)


def tpp_round3_user(m2: Msg2, state: TppUserState) -> Msg3:
    try:
        x0, x1, x2 = (decrypt(state.keypair, c) % state.p for c in (m2.e0, m2.e1, m2.e2))
    except Exception as e:
        logging.error(f"Intercambio TPP abortado: {str(e)}")
        raise ProtocolAbortError("No se pudo descifrar la respuesta del TGC") from e
    return Msg3(x0=x0, x1=x1, x2=x2)
