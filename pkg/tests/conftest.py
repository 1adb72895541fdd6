"""Configuración y fixtures compartidos para pruebas"""
import random
from dataclasses import dataclass
from typing import List

import pytest

from src.algebra import SystemParams
from src.credential import CaKeyPair, Credential
from src.homomorphic import PaillierKeyPair, hom_keygen
from src.ledger import Ledger
from src.scheme import (
    IdTable, KeywordTable, TgcKeyPair, TracerKeyPair, UserKeyPair,
    keygen_ca, keygen_tgc, keygen_tr, keygen_user, reg_issue, reg_request, setup,
)

VOCABULARY = ["flu", "covid", "diabetes", "asthma", "cancer", "hepatitis", "malaria", "measles", "mumps", "rabies"]


@dataclass
class RegisteredUser:
    keys: UserKeyPair
    credential: Credential


@pytest.fixture(scope="session")
def keywords() -> List[str]:
    """Proporcionar un vocabulario de diez palabras clave"""
    return list(VOCABULARY)


@pytest.fixture(scope="session")
def system(keywords):
    """Parámetros del sistema y tabla de palabras clave"""
    return setup(keywords)


@pytest.fixture(scope="session")
def params(system) -> SystemParams:
    return system[0]


@pytest.fixture(scope="session")
def keyword_table(system) -> KeywordTable:
    return system[1]


@pytest.fixture
def rng() -> random.Random:
    """RNG sembrado para que cada prueba sea reproducible"""
    return random.Random(20240611)


@pytest.fixture(scope="session")
def paillier(params) -> PaillierKeyPair:
    """Clave Paillier de 2048 bits compartida por toda la sesión"""
    return hom_keygen(2048, random.Random("paillier"), scalar_order=params.p)


@pytest.fixture(scope="session")
def ca_keys(params) -> CaKeyPair:
    return keygen_ca(params, random.Random("ca"))


@pytest.fixture(scope="session")
def tgc_keys(params) -> TgcKeyPair:
    return keygen_tgc(params, random.Random("tgc"))


@pytest.fixture(scope="session")
def tracer_keys(params) -> TracerKeyPair:
    return keygen_tr(params, random.Random("tr"))


@pytest.fixture
def id_table(params) -> IdTable:
    return IdTable(params)


@pytest.fixture
def ledger() -> Ledger:
    return Ledger()


@pytest.fixture
def alice(params, ca_keys, id_table) -> RegisteredUser:
    """Usuario 'alice' registrado en la tabla de identidades de la prueba"""
    user_rng = random.Random("alice")
    keys = keygen_user(params, user_rng, identity="alice")
    credential = reg_issue(ca_keys, reg_request(keys, params, user_rng), id_table, params, random.Random("ca-alice"))
    return RegisteredUser(keys=keys, credential=credential)


@pytest.fixture
def bob(params, ca_keys, id_table) -> RegisteredUser:
    user_rng = random.Random("bob")
    keys = keygen_user(params, user_rng, identity="bob")
    credential = reg_issue(ca_keys, reg_request(keys, params, user_rng), id_table, params, random.Random("ca-bob"))
    return RegisteredUser(keys=keys, credential=credential)
