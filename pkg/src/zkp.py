"""Pruebas sigma no interactivas (Fiat-Shamir).

Pi1 prueba la posesión de x_u con Y_u = g^x_u. Pi2 prueba que una petición de
trapdoor está bien formada y que el solicitante posee una credencial válida.
Los probadores aceptan un reto externo opcional (modo interactivo); el camino de
producción siempre deriva el reto de la transcripción.
"""
import logging
from dataclasses import dataclass, field, fields
from typing import Optional

from src.algebra import ElementKind, GroupElem, GtElem, Rng, Scalar, SystemParams
from src.credential import CaPublicKey, RandomizedCredential
from src.errors import PreconditionError

_G, _GT, _ZR = ElementKind.G, ElementKind.GT, ElementKind.SCALAR


def _field_kinds(cls) -> list:
    return [f.metadata["kind"] for f in fields(cls)]


def _proof_to_bytes(proof, params: SystemParams) -> bytes:
    return params.group.encode_many(getattr(proof, f.name) for f in fields(proof))


def _proof_from_bytes(cls, data: bytes, params: SystemParams):
    values = params.group.decode_many(data, _field_kinds(cls))
    return cls(*values)


def _elem(kind: ElementKind):
    return field(metadata={"kind": kind})


# --- Pi1: PoK{(x_u): Y_u = g^x_u} -----------------------------------------------

@dataclass(frozen=True, eq=False)
class Pi1Proof:
    commitment: GroupElem = _elem(_G)
    challenge: Scalar = _elem(_ZR)
    response: Scalar = _elem(_ZR)

    def to_bytes(self, params: SystemParams) -> bytes:
        return _proof_to_bytes(self, params)

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams) -> "Pi1Proof":
        return _proof_from_bytes(cls, data, params)


def pi1_prove(x_u: Scalar, Y_u: GroupElem, params: SystemParams, rng: Rng,
              challenge: Optional[Scalar] = None) -> Pi1Proof:
    """Y_u' = g^x_u', c = H1(Y_u || Y_u'), x^_u = x_u' - c x_u"""
    group = params.group
    nonce = group.random_scalar(rng)
    commitment = params.g_exp(nonce)
    if challenge is None:
        challenge = group.transcript_hash(Y_u, commitment)
    response = group.reduce(nonce - challenge * x_u)
    return Pi1Proof(commitment=commitment, challenge=group.reduce(challenge), response=response)


def pi1_check_responses(Y_u: GroupElem, proof: Pi1Proof, params: SystemParams) -> bool:
    """Solo la ecuación de verificación Y_u' = g^x^_u * Y_u^c, con el reto tal cual"""
    expected = params.g_exp(proof.response) * params.exp(Y_u, proof.challenge)
    return proof.commitment == expected


def pi1_verify(Y_u: GroupElem, proof: Pi1Proof, params: SystemParams) -> bool:
    try:
        if proof.challenge != params.group.transcript_hash(Y_u, proof.commitment):
            logging.debug("Pi1: el reto no coincide con la transcripción")
            return False
        return pi1_check_responses(Y_u, proof, params)
    except Exception as e:
        logging.debug(f"Pi1 mal formada: {str(e)}")
        return False


# --- Pi2: petición de trapdoor bien formada + posesión de credencial ----------

@dataclass(frozen=True, eq=False)
class Pi2Statement:
    h_prime: GroupElem
    d1: GroupElem
    d2: GroupElem
    d3: GroupElem
    d4: GroupElem
    d5: GroupElem
    credential: RandomizedCredential
    tracer_pk: GroupElem
    ca_pk: CaPublicKey

    def pairing_values(self, params: SystemParams):
        """(v_s, v_x, v_xy) = (e(g, c^), e(X, a~), e(X, b~))"""
        X = self.ca_pk.X
        return (
            params.pair(params.g, self.credential.c_hat),
            params.pair(X, self.credential.a_tilde),
            params.pair(X, self.credential.b_tilde),
        )


@dataclass(frozen=True)
class Pi2Witness:
    omega: Scalar
    u3: Scalar
    r0: Scalar
    r: Scalar
    x_u: Scalar

    def k(self, params: SystemParams) -> Scalar:
        return params.group.inv(self.r)

    def t(self, params: SystemParams) -> Scalar:
        return params.group.reduce(self.omega * self.u3)


@dataclass(frozen=True, eq=False)
class Pi2Proof:
    h_commit: GroupElem = _elem(_G)
    d1_commit: GroupElem = _elem(_G)
    d2_commit: GroupElem = _elem(_G)
    d3_commit: GroupElem = _elem(_G)
    d4_commit: GroupElem = _elem(_G)
    d5_commit: GroupElem = _elem(_G)
    vx_commit: GtElem = _elem(_GT)
    challenge: Scalar = _elem(_ZR)
    t_hat: Scalar = _elem(_ZR)
    omega_hat: Scalar = _elem(_ZR)
    u3_hat: Scalar = _elem(_ZR)
    r0_hat: Scalar = _elem(_ZR)
    r_hat: Scalar = _elem(_ZR)
    xu_hat: Scalar = _elem(_ZR)
    k_hat: Scalar = _elem(_ZR)

    def to_bytes(self, params: SystemParams) -> bytes:
        return _proof_to_bytes(self, params)

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams) -> "Pi2Proof":
        return _proof_from_bytes(cls, data, params)


def _pi2_challenge(stmt: Pi2Statement, proof_commitments: tuple, v_x: GtElem, params: SystemParams) -> Scalar:
    h_commit, d1c, d2c, d3c, d4c, d5c, vx_commit = proof_commitments
    # sigma~, v_s y v_xy no entran en el hash: quedan ligados a través de v_x
    return params.group.transcript_hash(
        stmt.h_prime, h_commit,
        stmt.d1, d1c, stmt.d2, d2c, stmt.d3, d3c, stmt.d4, d4c, stmt.d5, d5c,
        v_x, vx_commit,
    )


def check_pi2_relations(stmt: Pi2Statement, wit: Pi2Witness, params: SystemParams) -> None:
    """Comprueba que el testigo satisface cada relación del enunciado"""
    group = params.group
    if wit.u3 % params.p == 0 or wit.r % params.p == 0:
        raise PreconditionError("u3 y r deben ser no nulos")
    g_omega = params.g_exp(wit.omega)
    g_xu = params.g_exp(wit.x_u)
    blind = params.exp(stmt.tracer_pk, wit.r0)
    relations = {
        "H(w)' = (g0 g1^w)^u3": stmt.h_prime == params.exp(params.keyword_map(wit.omega), wit.u3),
        "D1 = g^w Y_t^r0": stmt.d1 == g_omega * blind,
        "D2 = g^x_u Y_t^r0": stmt.d2 == g_xu * blind,
        "D3 = g^r0": stmt.d3 == params.g_exp(wit.r0),
        "D4 = g^w h1^r": stmt.d4 == g_omega * params.exp(params.h1, wit.r),
        "D5 = g^x_u h2^r": stmt.d5 == g_xu * params.exp(params.h2, wit.r),
    }
    v_s, v_x, v_xy = stmt.pairing_values(params)
    relations["v_s^(1/r) = v_x v_xy^x_u"] = group.exp(v_s, wit.k(params)) == v_x * group.exp(v_xy, wit.x_u)
    failed = [name for name, holds in relations.items() if not holds]
    if failed:
        raise PreconditionError(f"El testigo no satisface: {', '.join(failed)}")


def pi2_prove(stmt: Pi2Statement, wit: Pi2Witness, params: SystemParams, rng: Rng,
              challenge: Optional[Scalar] = None) -> Pi2Proof:
    check_pi2_relations(stmt, wit, params)
    group = params.group
    omega_n, u3_n, r0_n, r_n, xu_n, k_n = (group.random_scalar(rng) for _ in range(6))

    v_s, v_x, v_xy = stmt.pairing_values(params)
    g_omega_n = params.g_exp(omega_n)
    g_xu_n = params.g_exp(xu_n)
    blind_n = params.exp(stmt.tracer_pk, r0_n)
    commitments = (
        params.exp(params.g0, u3_n) * params.exp(params.g1, omega_n * u3_n),
        g_omega_n * blind_n,
        g_xu_n * blind_n,
        params.g_exp(r0_n),
        g_omega_n * params.exp(params.h1, r_n),
        g_xu_n * params.exp(params.h2, r_n),
        group.exp(v_s, k_n) * group.exp(v_xy, -xu_n),
    )
    if challenge is None:
        challenge = _pi2_challenge(stmt, commitments, v_x, params)
    c = group.reduce(challenge)
    return Pi2Proof(
        *commitments,
        challenge=c,
        t_hat=group.reduce(omega_n * u3_n - c * wit.omega * wit.u3),
        omega_hat=group.reduce(omega_n - c * wit.omega),
        u3_hat=group.reduce(u3_n - c * wit.u3),
        r0_hat=group.reduce(r0_n - c * wit.r0),
        r_hat=group.reduce(r_n - c * wit.r),
        xu_hat=group.reduce(xu_n - c * wit.x_u),
        k_hat=group.reduce(k_n - c * wit.k(params)),
    )


def pi2_check_responses(stmt: Pi2Statement, proof: Pi2Proof, params: SystemParams) -> bool:
    """Las siete ecuaciones de verificación, usando el reto tal cual"""
    group = params.group
    c = proof.challenge
    v_s, v_x, v_xy = stmt.pairing_values(params)
    g_omega = params.g_exp(proof.omega_hat)
    g_xu = params.g_exp(proof.xu_hat)
    blind = params.exp(stmt.tracer_pk, proof.r0_hat)
    checks = (
        proof.h_commit == params.exp(params.g0, proof.u3_hat) * params.exp(params.g1, proof.t_hat)
        * params.exp(stmt.h_prime, c),
        proof.d1_commit == g_omega * blind * params.exp(stmt.d1, c),
        proof.d2_commit == g_xu * blind * params.exp(stmt.d2, c),
        proof.d3_commit == params.g_exp(proof.r0_hat) * params.exp(stmt.d3, c),
        proof.d4_commit == g_omega * params.exp(params.h1, proof.r_hat) * params.exp(stmt.d4, c),
        proof.d5_commit == g_xu * params.exp(params.h2, proof.r_hat) * params.exp(stmt.d5, c),
        proof.vx_commit == group.exp(v_s, proof.k_hat) * group.exp(v_xy, -proof.xu_hat) * group.exp(v_x, c),
    )
    return all(checks)


def pi2_verify(stmt: Pi2Statement, proof: Pi2Proof, params: SystemParams) -> bool:
    try:
        v_x = params.pair(stmt.ca_pk.X, stmt.credential.a_tilde)
        commitments = (proof.h_commit, proof.d1_commit, proof.d2_commit, proof.d3_commit,
                       proof.d4_commit, proof.d5_commit, proof.vx_commit)
        if proof.challenge != _pi2_challenge(stmt, commitments, v_x, params):
            logging.debug("Pi2: el reto no coincide con la transcripción")
            return False
        return pi2_check_responses(stmt, proof, params)
    except Exception as e:
        logging.debug(f"Pi2 mal formada: {str(e)}")
        return False
