"""Pruebas para las pruebas de conocimiento Pi1 y Pi2"""
import random
from dataclasses import fields, replace

import pytest

from src.credential import Credential, issue, randomize, show_verify
from src.errors import PreconditionError
from src.zkp import (
    Pi1Proof, Pi2Proof, Pi2Statement, Pi2Witness,
    pi1_check_responses, pi1_prove, pi1_verify, pi2_check_responses, pi2_prove, pi2_verify,
)


@pytest.fixture
def user_key(params, rng):
    x_u = params.group.random_scalar(rng, nonzero=True)
    return x_u, params.g_exp(x_u)


@pytest.fixture
def pi2_case(params, ca_keys, tracer_keys, user_key, rng):
    """Enunciado y testigo honestos de Pi2"""
    x_u, Y_u = user_key
    group = params.group
    omega = params.keyword_scalar("flu")
    u3 = group.random_scalar(rng, nonzero=True)
    r0 = group.random_scalar(rng)
    r = group.random_scalar(rng, nonzero=True)
    cred = issue(ca_keys, Y_u, params, rng)
    blind = params.exp(tracer_keys.Y_t, r0)
    g_omega = params.g_exp(omega)
    stmt = Pi2Statement(
        h_prime=params.exp(params.keyword_map(omega), u3),
        d1=g_omega * blind,
        d2=Y_u * blind,
        d3=params.g_exp(r0),
        d4=g_omega * params.exp(params.h1, r),
        d5=Y_u * params.exp(params.h2, r),
        credential=randomize(cred, r, group.random_scalar(rng, nonzero=True), params),
        tracer_pk=tracer_keys.Y_t,
        ca_pk=ca_keys.public,
    )
    return stmt, Pi2Witness(omega=omega, u3=u3, r0=r0, r=r, x_u=x_u)


def _bump(params, value):
    """Altera un escalar o un elemento de grupo"""
    if isinstance(value, int):
        return params.group.reduce(value + 1)
    return value * params.g if params.group.kind_of(value).value == "G1" else value * params.pair(params.g, params.g)


def test_pi1_honest_proof_verifies(params, user_key, rng):
    """Prueba la completitud de Pi1"""
    x_u, Y_u = user_key
    proof = pi1_prove(x_u, Y_u, params, rng)
    assert pi1_verify(Y_u, proof, params)


def test_pi1_wrong_key_fails(params, user_key, rng):
    """Prueba que Pi1 falla para otra clave pública"""
    x_u, Y_u = user_key
    proof = pi1_prove(x_u, Y_u, params, rng)
    assert not pi1_verify(params.g_exp(x_u + 1), proof, params)


@pytest.mark.parametrize("name", [f.name for f in fields(Pi1Proof)])
def test_pi1_mutation_rejected(params, user_key, rng, name):
    """Prueba que alterar cualquier campo de Pi1 la invalida"""
    x_u, Y_u = user_key
    proof = pi1_prove(x_u, Y_u, params, rng)
    mutated = replace(proof, **{name: _bump(params, getattr(proof, name))})
    assert not pi1_verify(Y_u, mutated, params)


def test_pi1_serialization(params, user_key, rng):
    """Prueba la codificación de Pi1"""
    x_u, Y_u = user_key
    proof = pi1_prove(x_u, Y_u, params, rng)
    assert pi1_verify(Y_u, Pi1Proof.from_bytes(proof.to_bytes(params), params), params)


def test_pi1_special_soundness(params, user_key):
    """Prueba que dos transcripciones con el mismo compromiso revelan x_u"""
    x_u, Y_u = user_key
    first = pi1_prove(x_u, Y_u, params, random.Random(1), challenge=3)
    second = pi1_prove(x_u, Y_u, params, random.Random(1), challenge=8)
    assert first.commitment == second.commitment
    assert pi1_check_responses(Y_u, first, params) and pi1_check_responses(Y_u, second, params)
    group = params.group
    extracted = group.reduce((first.response - second.response) * group.inv(second.challenge - first.challenge))
    assert extracted == x_u


def test_pi2_honest_proof_verifies(params, pi2_case, rng):
    """Prueba la completitud de Pi2"""
    stmt, wit = pi2_case
    assert pi2_verify(stmt, pi2_prove(stmt, wit, params, rng), params)


def test_pi2_rejects_false_witness(params, pi2_case, rng):
    """Prueba que el probador se niega a probar un enunciado falso"""
    stmt, wit = pi2_case
    with pytest.raises(PreconditionError):
        pi2_prove(stmt, replace(wit, x_u=params.group.reduce(wit.x_u + 1)), params, rng)
    with pytest.raises(PreconditionError):
        pi2_prove(stmt, replace(wit, r=0), params, rng)


@pytest.mark.parametrize("name", [f.name for f in fields(Pi2Proof)])
def test_pi2_mutation_rejected(params, pi2_case, rng, name):
    """Prueba que alterar cualquiera de los quince campos de Pi2 la invalida"""
    stmt, wit = pi2_case
    proof = pi2_prove(stmt, wit, params, rng)
    mutated = replace(proof, **{name: _bump(params, getattr(proof, name))})
    assert not pi2_verify(stmt, mutated, params)


@pytest.mark.parametrize("name", ["h_prime", "d1", "d2", "d3", "d4", "d5"])
def test_pi2_statement_mutation_rejected(params, pi2_case, rng, name):
    """Prueba que la prueba no sirve para otro enunciado"""
    stmt, wit = pi2_case
    proof = pi2_prove(stmt, wit, params, rng)
    assert not pi2_verify(replace(stmt, **{name: getattr(stmt, name) * params.g}), proof, params)


def test_pi2_wrong_tracer_key_rejected(params, pi2_case, rng):
    """Prueba que la prueba está ligada a la clave del trazador"""
    stmt, wit = pi2_case
    proof = pi2_prove(stmt, wit, params, rng)
    assert not pi2_verify(replace(stmt, tracer_pk=stmt.tracer_pk * params.g), proof, params)


def test_pi2_serialization(params, pi2_case, rng):
    """Prueba la codificación de Pi2"""
    stmt, wit = pi2_case
    proof = pi2_prove(stmt, wit, params, rng)
    assert len(fields(Pi2Proof)) == 15
    assert pi2_verify(stmt, Pi2Proof.from_bytes(proof.to_bytes(params), params), params)


def test_pi2_interactive_challenge(params, pi2_case):
    """Prueba que dos retos externos distintos satisfacen las ecuaciones pero no Fiat-Shamir"""
    stmt, wit = pi2_case
    first = pi2_prove(stmt, wit, params, random.Random(7), challenge=12345)
    second = pi2_prove(stmt, wit, params, random.Random(7), challenge=67890)
    for proof in (first, second):
        assert pi2_check_responses(stmt, proof, params)
        assert not pi2_verify(stmt, proof, params)
    assert first.h_commit == second.h_commit
    assert first.xu_hat != second.xu_hat
    assert first.k_hat != second.k_hat


@pytest.fixture
def known_nonce_credential(params, ca_keys, user_key):
    """Credencial honesta con r_u conocido y su falsificación con y + 1 en el exponente de c"""
    x_u, Y_u = user_key
    r_u = 987654321
    a = params.g_exp(r_u)
    b = params.exp(a, ca_keys.y)
    honest = Credential(a=a, b=b, c=params.exp(a, ca_keys.x) * params.exp(Y_u, r_u * ca_keys.x * ca_keys.y))
    forged = Credential(a=a, b=b, c=params.exp(a, ca_keys.x) * params.exp(Y_u, r_u * ca_keys.x * (ca_keys.y + 1)))
    return honest, forged


def test_pi2_rejects_forged_credential(params, ca_keys, pi2_case, known_nonce_credential, rng):
    """Prueba que una c falsificada supera show_verify pero no Pi2"""
    stmt, wit = pi2_case
    honest, forged = known_nonce_credential
    r_prime = 31337
    honest_stmt = replace(stmt, credential=randomize(honest, wit.r, r_prime, params))
    forged_stmt = replace(stmt, credential=randomize(forged, wit.r, r_prime, params))

    assert show_verify(forged_stmt.credential, ca_keys.public, params)
    with pytest.raises(PreconditionError):
        pi2_prove(forged_stmt, wit, params, rng)

    proof = pi2_prove(honest_stmt, wit, params, rng)
    assert pi2_verify(honest_stmt, proof, params)
    assert not pi2_verify(forged_stmt, proof, params)
