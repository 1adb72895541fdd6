"""Los ocho algoritmos del esquema de búsqueda trazable con trapdoor ciego.

Setup, KeyGen, Reg, Trapdoor (petición, respuesta del TGC, finalización), PEKS,
Test, Record-Validation y Trace, más la extracción directa usada como oráculo de
pruebas y la búsqueda del servidor sobre un lote de cifrados.
"""
import logging
import threading
import time
from dataclasses import dataclass, field, fields
from typing import ClassVar, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.algebra import (
    ElementKind, GroupElem, GtElem, Rng, Scalar, SystemParams,
    length_prefixed, split_length_prefixed,
)
from src.credential import CaKeyPair, CaPublicKey, Credential, RandomizedCredential, issue, randomize, show_verify
from src.errors import (
    DecodeError, DuplicateKeywordError, IdentityConflictError, PreconditionError,
    SessionConsumedError, UnknownKeywordError, UnknownUserError, VerificationError,
)
from src.homomorphic import (
    Msg1, Msg2, Msg3, PaillierKeyPair, TppTgcState, TppUserState,
    tpp_round1_user, tpp_round2_tgc, tpp_round3_user,
)
from src.ledger import Ledger
from src.zkp import Pi1Proof, Pi2Proof, Pi2Statement, Pi2Witness, pi1_prove, pi1_verify, pi2_prove, pi2_verify

_G, _GT, _ZR = ElementKind.G, ElementKind.GT, ElementKind.SCALAR


class _ElementTuple:
    """Dataclass cuyos campos son elementos; se codifica en el orden de _KINDS"""
    _KINDS: ClassVar[Tuple[ElementKind, ...]] = ()

    def elements(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def to_bytes(self, params: SystemParams) -> bytes:
        return params.group.encode_many(self.elements())

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams):
        return cls(*params.group.decode_many(data, list(cls._KINDS)))


def _key_fields(obj, names: Sequence[str], params: SystemParams) -> Dict[str, bytes]:
    return {name: params.group.encode(getattr(obj, name)) for name in names}


# --- claves ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TgcPublicKey(_ElementTuple):
    """pk_TGC = (Omega = e(g,g)^(t0 t1 t2), nu1..nu4 = g^t1..g^t4)"""
    omega: GtElem
    nu1: GroupElem
    nu2: GroupElem
    nu3: GroupElem
    nu4: GroupElem
    _KINDS: ClassVar[Tuple[ElementKind, ...]] = (_GT, _G, _G, _G, _G)


@dataclass(frozen=True, eq=False)
class TgcKeyPair:
    t0: Scalar
    t1: Scalar
    t2: Scalar
    t3: Scalar
    t4: Scalar
    public: TgcPublicKey

    @property
    def secret(self) -> Tuple[Scalar, Scalar, Scalar, Scalar, Scalar]:
        return self.t0, self.t1, self.t2, self.t3, self.t4

    def to_fields(self, params: SystemParams) -> Dict[str, bytes]:
        encoded = _key_fields(self, ("t0", "t1", "t2", "t3", "t4"), params)
        encoded.update(_key_fields(self.public, ("omega", "nu1", "nu2", "nu3", "nu4"), params))
        return encoded

    @classmethod
    def from_fields(cls, encoded: Dict[str, bytes], params: SystemParams) -> "TgcKeyPair":
        group = params.group
        secret = [group.decode(encoded[f"t{i}"], _ZR) for i in range(5)]
        public = TgcPublicKey(
            omega=group.decode(encoded["omega"], _GT),
            **{f"nu{i}": group.decode(encoded[f"nu{i}"], _G) for i in range(1, 5)},
        )
        return cls(*secret, public=public)


@dataclass(frozen=True, eq=False)
class TracerKeyPair:
    x_t: Scalar
    Y_t: GroupElem

    def to_fields(self, params: SystemParams) -> Dict[str, bytes]:
        return _key_fields(self, ("x_t", "Y_t"), params)

    @classmethod
    def from_fields(cls, encoded: Dict[str, bytes], params: SystemParams) -> "TracerKeyPair":
        return cls(x_t=params.group.decode(encoded["x_t"], _ZR), Y_t=params.group.decode(encoded["Y_t"], _G))


@dataclass(frozen=True, eq=False)
class UserKeyPair:
    identity: str
    x_u: Scalar
    Y_u: GroupElem

    def to_fields(self, params: SystemParams) -> Dict[str, bytes]:
        encoded = _key_fields(self, ("x_u", "Y_u"), params)
        encoded["identity"] = self.identity.encode("utf-8")
        return encoded

    @classmethod
    def from_fields(cls, encoded: Dict[str, bytes], params: SystemParams) -> "UserKeyPair":
        return cls(
            identity=encoded["identity"].decode("utf-8"),
            x_u=params.group.decode(encoded["x_u"], _ZR),
            Y_u=params.group.decode(encoded["Y_u"], _G),
        )


# --- tablas ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KeywordEntry:
    keyword: str
    omega: Scalar
    g_omega: GroupElem


class KeywordTable:
    """Table_w: (palabra, w, g^w) con índice inverso sobre encode(g^w). Solo lectura tras Setup."""

    def __init__(self, entries: Iterable[KeywordEntry], params: SystemParams):
        self._entries: List[KeywordEntry] = []
        self._reverse: Dict[bytes, str] = {}
        seen_keywords, seen_omegas = set(), set()
        for entry in entries:
            if entry.keyword in seen_keywords or entry.omega in seen_omegas:
                raise DuplicateKeywordError(f"Palabra clave repetida: {entry.keyword!r}")
            seen_keywords.add(entry.keyword)
            seen_omegas.add(entry.omega)
            self._entries.append(entry)
            self._reverse[params.group.encode(entry.g_omega)] = entry.keyword
        self._params = params

    @classmethod
    def build(cls, keywords: Sequence[str], params: SystemParams) -> "KeywordTable":
        entries = []
        for keyword in keywords:
            omega = params.keyword_scalar(keyword)
            entries.append(KeywordEntry(keyword=keyword, omega=omega, g_omega=params.g_exp(omega)))
        return cls(entries, params)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[KeywordEntry]:
        return iter(self._entries)

    def __contains__(self, keyword: str) -> bool:
        return any(entry.keyword == keyword for entry in self._entries)

    @property
    def keywords(self) -> List[str]:
        return [entry.keyword for entry in self._entries]

    def lookup(self, g_omega: GroupElem) -> str:
        try:
            return self._reverse[self._params.group.encode(g_omega)]
        except KeyError:
            raise UnknownKeywordError("g^w no figura en la tabla de palabras clave") from None

    def to_pairs(self) -> List[Tuple[bytes, bytes]]:
        """Pares (encode(g^w), palabra en UTF-8) para persistencia"""
        return [(self._params.group.encode(e.g_omega), e.keyword.encode("utf-8")) for e in self._entries]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[bytes, bytes]], params: SystemParams) -> "KeywordTable":
        pairs = list(pairs)
        table = cls.build([value.decode("utf-8") for _, value in pairs], params)
        stored = [key for key, _ in pairs]
        if stored != [key for key, _ in table.to_pairs()]:
            raise DecodeError("La tabla de palabras clave no coincide con sus palabras")
        return table


class IdTable:
    """Table_ID: (ID_U, Y_u). Lecturas concurrentes, escrituras serializadas."""

    def __init__(self, params: SystemParams):
        self._params = params
        self._by_identity: Dict[str, bytes] = {}
        self._reverse: Dict[bytes, str] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._by_identity)

    def __contains__(self, identity: str) -> bool:
        return identity in self._by_identity

    def register(self, identity: str, Y_u: GroupElem) -> None:
        """Idempotente para el mismo par; un ID con otra clave (o una clave con otro ID) es un conflicto"""
        key = self._params.group.encode(Y_u)
        with self._lock:
            known_key = self._by_identity.get(identity)
            known_id = self._reverse.get(key)
            if known_key == key:
                return
            if known_key is not None or known_id is not None:
                raise IdentityConflictError(f"{identity!r} choca con un registro previo")
            self._by_identity[identity] = key
            self._reverse[key] = identity

    def lookup(self, Y_u: GroupElem) -> str:
        try:
            return self._reverse[self._params.group.encode(Y_u)]
        except KeyError:
            raise UnknownUserError("Y_u no figura en la tabla de identidades") from None

    def to_pairs(self) -> List[Tuple[bytes, bytes]]:
        with self._lock:
            return [(identity.encode("utf-8"), key) for identity, key in self._by_identity.items()]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[bytes, bytes]], params: SystemParams) -> "IdTable":
        table = cls(params)
        for identity, key in pairs:
            table.register(identity.decode("utf-8"), params.group.decode(key, _G))
        return table


# --- mensajes y registros -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RegistrationRequest:
    identity: str
    Y_u: GroupElem
    proof: Pi1Proof

    def to_bytes(self, params: SystemParams) -> bytes:
        return length_prefixed(self.identity.encode("utf-8"), params.group.encode(self.Y_u), self.proof.to_bytes(params))

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams) -> "RegistrationRequest":
        identity, Y_u, proof = split_length_prefixed(data, expected=3)
        return cls(
            identity=identity.decode("utf-8"),
            Y_u=params.group.decode(Y_u, _G),
            proof=Pi1Proof.from_bytes(proof, params),
        )


@dataclass(frozen=True, eq=False)
class TrapdoorRecord:
    """R_U = (H(w)', D1, D2, D3, D4, D5, sigma~, Pi2)"""
    h_prime: GroupElem
    d1: GroupElem
    d2: GroupElem
    d3: GroupElem
    d4: GroupElem
    d5: GroupElem
    credential: RandomizedCredential
    proof: Pi2Proof

    FIELDS: ClassVar[Tuple[str, ...]] = ("h_prime", "d1", "d2", "d3", "d4", "d5", "credential", "proof")

    def statement(self, tracer_pk: GroupElem, ca_pk: CaPublicKey) -> Pi2Statement:
        return Pi2Statement(
            h_prime=self.h_prime, d1=self.d1, d2=self.d2, d3=self.d3, d4=self.d4, d5=self.d5,
            credential=self.credential, tracer_pk=tracer_pk, ca_pk=ca_pk,
        )

    def to_bytes(self, params: SystemParams) -> bytes:
        group = params.group
        return length_prefixed(
            *(group.encode(getattr(self, name)) for name in self.FIELDS[:6]),
            self.credential.to_bytes(params),
            self.proof.to_bytes(params),
        )

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams) -> "TrapdoorRecord":
        chunks = split_length_prefixed(data, expected=8)
        elements = [params.group.decode(chunk, _G) for chunk in chunks[:6]]
        return cls(
            *elements,
            credential=RandomizedCredential.from_bytes(chunks[6], params),
            proof=Pi2Proof.from_bytes(chunks[7], params),
        )


@dataclass(frozen=True, eq=False)
class Trapdoor(_ElementTuple):
    """T_w = (d0, d1, d2, d3, d4)"""
    d0: GroupElem
    d1: GroupElem
    d2: GroupElem
    d3: GroupElem
    d4: GroupElem
    _KINDS: ClassVar[Tuple[ElementKind, ...]] = (_G,) * 5


@dataclass(frozen=True, eq=False)
class BlindedTrapdoor(_ElementTuple):
    """(d0', d1', d2', d3', d4') tal como los emite el TGC"""
    d0: GroupElem
    d1: GroupElem
    d2: GroupElem
    d3: GroupElem
    d4: GroupElem
    _KINDS: ClassVar[Tuple[ElementKind, ...]] = (_G,) * 5


@dataclass(frozen=True, eq=False)
class Ciphertext(_ElementTuple):
    """C = (C', C0, C1, C2, C3, C4)"""
    c_prime: GtElem
    c0: GroupElem
    c1: GroupElem
    c2: GroupElem
    c3: GroupElem
    c4: GroupElem
    _KINDS: ClassVar[Tuple[ElementKind, ...]] = (_GT,) + (_G,) * 5


class _SingleUse:
    consumed: bool

    def consume(self) -> None:
        if self.consumed:
            raise SessionConsumedError(f"{type(self).__name__} ya fue consumida")
        self.consumed = True


@dataclass(eq=False)
class TrapdoorSession(_SingleUse):
    """Estado del usuario entre la petición y la finalización"""
    tpp: TppUserState
    r0: Scalar
    r: Scalar
    r_prime: Scalar
    omega: Scalar
    keyword: str
    credential: Credential
    consumed: bool = False


@dataclass(eq=False)
class TgcSession(_SingleUse):
    """Estado del TGC entre la respuesta y la recepción de Msg3"""
    tpp: TppTgcState
    h_prime: GroupElem
    block_index: int
    consumed: bool = False


@dataclass(frozen=True, eq=False)
class TrapdoorOutcome:
    trapdoor: Trapdoor
    record: TrapdoorRecord
    block_index: int
    messages: Dict[str, bytes] = field(default_factory=dict)


# --- Setup y KeyGen -------------------------------------------------------------

def setup(keywords: Sequence[str], *, curve: Optional[str] = None) -> Tuple[SystemParams, KeywordTable]:
    if not keywords:
        raise PreconditionError("El vocabulario no puede estar vacío")
    if len(set(keywords)) != len(keywords):
        raise DuplicateKeywordError("El vocabulario contiene palabras repetidas")
    params = SystemParams.derive(curve)
    table = KeywordTable.build(keywords, params)
    logging.info(f"Setup completado: {len(table)} palabras clave")
    return params, table


def keygen_ca(params: SystemParams, rng: Rng) -> CaKeyPair:
    return CaKeyPair.generate(params, rng)


def keygen_tgc(params: SystemParams, rng: Rng) -> TgcKeyPair:
    t0, t1, t2, t3, t4 = (params.group.random_scalar(rng) for _ in range(5))
    public = TgcPublicKey(
        omega=params.exp(params.pair(params.g, params.g), t0 * t1 * t2),
        nu1=params.g_exp(t1),
        nu2=params.g_exp(t2),
        nu3=params.g_exp(t3),
        nu4=params.g_exp(t4),
    )
    return TgcKeyPair(t0, t1, t2, t3, t4, public=public)


def keygen_tr(params: SystemParams, rng: Rng) -> TracerKeyPair:
    x_t = params.group.random_scalar(rng)
    return TracerKeyPair(x_t=x_t, Y_t=params.g_exp(x_t))


def keygen_user(params: SystemParams, rng: Rng, identity: Optional[str] = None) -> UserKeyPair:
    x_u = params.group.random_scalar(rng, nonzero=True)
    if identity is None:
        identity = f"user-{rng.getrandbits(48):012x}"
    return UserKeyPair(identity=identity, x_u=x_u, Y_u=params.g_exp(x_u))


# --- Reg ------------------------------------------------------------------------

def reg_request(user: UserKeyPair, params: SystemParams, rng: Rng) -> RegistrationRequest:
    proof = pi1_prove(user.x_u, user.Y_u, params, rng)
    return RegistrationRequest(identity=user.identity, Y_u=user.Y_u, proof=proof)


def reg_issue(ca: CaKeyPair, req: RegistrationRequest, table: IdTable, params: SystemParams, rng: Rng) -> Credential:
    if not pi1_verify(req.Y_u, req.proof, params):
        logging.warning(f"Registro rechazado para {req.identity!r}: Pi1 inválida")
        raise VerificationError("La prueba Pi1 no verifica")
    credential = issue(ca, req.Y_u, params, rng)
    table.register(req.identity, req.Y_u)
    logging.info(f"Credencial emitida para {req.identity!r}")
    return credential


# --- Trapdoor -------------------------------------------------------------------

def trapdoor_request(user: UserKeyPair, cred: Credential, keyword: str, tracer_pk: GroupElem,
                     ca_pk: CaPublicKey, paillier: PaillierKeyPair, params: SystemParams,
                     rng: Rng) -> Tuple[TrapdoorRecord, TrapdoorSession, Msg1]:
    group = params.group
    omega = params.keyword_scalar(keyword)
    tpp = TppUserState.sample(params.p, paillier, rng)
    r0 = group.random_scalar(rng)
    r = group.random_scalar(rng, nonzero=True)
    r_prime = group.random_scalar(rng, nonzero=True)

    g_omega = params.g_exp(omega)
    blind = params.exp(tracer_pk, r0)
    record_fields = dict(
        h_prime=params.exp(params.keyword_map(omega), tpp.u3),
        d1=g_omega * blind,
        d2=user.Y_u * blind,
        d3=params.g_exp(r0),
        d4=g_omega * params.exp(params.h1, r),
        d5=user.Y_u * params.exp(params.h2, r),
    )
    shown = randomize(cred, r, r_prime, params)
    statement = Pi2Statement(**record_fields, credential=shown, tracer_pk=tracer_pk, ca_pk=ca_pk)
    witness = Pi2Witness(omega=omega, u3=tpp.u3, r0=r0, r=r, x_u=user.x_u)
    proof = pi2_prove(statement, witness, params, rng)

    record = TrapdoorRecord(**record_fields, credential=shown, proof=proof)
    session = TrapdoorSession(tpp=tpp, r0=r0, r=r, r_prime=r_prime, omega=omega, keyword=keyword, credential=cred)
    return record, session, tpp_round1_user(tpp, rng)


def record_validate(record: TrapdoorRecord, ca_pk: CaPublicKey, tracer_pk: GroupElem, params: SystemParams) -> bool:
    """1 si Pi2 verifica y e(a~, Y) = e(g, b~)"""
    try:
        if not show_verify(record.credential, ca_pk, params):
            return False
        return pi2_verify(record.statement(tracer_pk, ca_pk), record.proof, params)
    except Exception as e:
        logging.debug(f"Registro mal formado: {str(e)}")
        return False


def trapdoor_respond(tgc: TgcKeyPair, ca_pk: CaPublicKey, tracer_pk: GroupElem, record: TrapdoorRecord,
                     m1: Msg1, ledger: Ledger, params: SystemParams, rng: Rng,
                     now: Optional[int] = None,
                     masks: Optional[Tuple[int, int, int]] = None) -> Tuple[TgcSession, Msg2]:
    """Verifica el registro, lo asienta en el ledger y solo entonces emite Msg2"""
    if not record_validate(record, ca_pk, tracer_pk, params):
        logging.warning("Petición de trapdoor rechazada: registro inválido")
        raise VerificationError("El registro no supera Record-Validation")
    group = params.group
    r1_hat = group.random_scalar(rng, nonzero=True)
    r2_hat = group.random_scalar(rng, nonzero=True)
    m2 = tpp_round2_tgc(m1, tgc.secret, r1_hat, r2_hat, params.p, rng, masks=masks)
    block = ledger.append(record.to_bytes(params), int(time.time()) if now is None else now)
    logging.info(f"Registro asentado en el bloque {block.index}")
    session = TgcSession(tpp=TppTgcState(r1_hat=r1_hat, r2_hat=r2_hat), h_prime=record.h_prime, block_index=block.index)
    return session, m2


def trapdoor_complete(tgc: TgcKeyPair, session: TgcSession, m3: Msg3, params: SystemParams) -> BlindedTrapdoor:
    """d0' = g^x0, d1' = g^x1 H'^(-r^1 t2), d2' = g^x2 H'^(-r^1 t1), d3' = H'^(-r^2 t4), d4' = H'^(-r^2 t3)"""
    session.consume()
    session.tpp.receive(m3)
    state, h_prime = session.tpp, session.h_prime
    return BlindedTrapdoor(
        d0=params.g_exp(state.x0),
        d1=params.g_exp(state.x1) * params.exp(h_prime, -state.r1_hat * tgc.t2),
        d2=params.g_exp(state.x2) * params.exp(h_prime, -state.r1_hat * tgc.t1),
        d3=params.exp(h_prime, -state.r2_hat * tgc.t4),
        d4=params.exp(h_prime, -state.r2_hat * tgc.t3),
    )


def trapdoor_finalize(session: TrapdoorSession, blinded: BlindedTrapdoor, params: SystemParams) -> Trapdoor:
    session.consume()
    group, tpp = params.group, session.tpp
    u3_inv = group.inv(tpp.u3)
    e1 = tpp.r1_prime * u3_inv
    e2 = tpp.r2_prime * u3_inv
    return Trapdoor(
        d0=blinded.d0 * params.g_exp(-tpp.u0),
        d1=params.exp(blinded.d1 * params.g_exp(-tpp.u1), e1),
        d2=params.exp(blinded.d2 * params.g_exp(-tpp.u2), e1),
        d3=params.exp(blinded.d3, e2),
        d4=params.exp(blinded.d4, e2),
    )


def run_trapdoor_protocol(user: UserKeyPair, cred: Credential, keyword: str, tgc: TgcKeyPair,
                          ca_pk: CaPublicKey, tracer_pk: GroupElem, paillier: PaillierKeyPair,
                          ledger: Ledger, params: SystemParams, user_rng: Rng, tgc_rng: Rng,
                          now: Optional[int] = None) -> TrapdoorOutcome:
    """Intercambio completo en proceso; los mensajes pasan por su forma serializada"""
    record, session, m1 = trapdoor_request(user, cred, keyword, tracer_pk, ca_pk, paillier, params, user_rng)
    wire = {"record": record.to_bytes(params), "msg1": m1.to_bytes()}
    tgc_session, m2 = trapdoor_respond(
        tgc, ca_pk, tracer_pk, TrapdoorRecord.from_bytes(wire["record"], params),
        Msg1.from_bytes(wire["msg1"]), ledger, params, tgc_rng, now=now,
    )
    wire["msg2"] = m2.to_bytes()
    m3 = tpp_round3_user(Msg2.from_bytes(wire["msg2"], paillier.public_key), session.tpp)
    wire["msg3"] = m3.to_bytes()
    blinded = trapdoor_complete(tgc, tgc_session, Msg3.from_bytes(wire["msg3"]), params)
    wire["blinded"] = blinded.to_bytes(params)
    trapdoor = trapdoor_finalize(session, BlindedTrapdoor.from_bytes(wire["blinded"], params), params)
    return TrapdoorOutcome(trapdoor=trapdoor, record=record, block_index=tgc_session.block_index, messages=wire)


# --- PEKS, Test y búsqueda ------------------------------------------------------

def peks_encrypt(tgc_pk: TgcPublicKey, keyword: str, params: SystemParams, rng: Rng, *,
                 randomness: Optional[Tuple[Scalar, Scalar, Scalar]] = None) -> Ciphertext:
    """C' = Omega^s, C0 = H(w)^s, C1 = nu1^(s-s1), C2 = nu2^s1, C3 = nu3^(s-s2), C4 = nu4^s2.

    randomness fija (s, s1, s2) y solo lo usan las pruebas; s = 0 anula todos los emparejamientos.
    """
    if randomness is None:
        s = params.group.random_scalar(rng, nonzero=True)
        s1, s2 = params.group.random_scalar(rng), params.group.random_scalar(rng)
    else:
        s, s1, s2 = randomness
    H = params.keyword_map(params.keyword_scalar(keyword))
    return Ciphertext(
        c_prime=params.exp(tgc_pk.omega, s),
        c0=params.exp(H, s),
        c1=params.exp(tgc_pk.nu1, s - s1),
        c2=params.exp(tgc_pk.nu2, s1),
        c3=params.exp(tgc_pk.nu3, s - s2),
        c4=params.exp(tgc_pk.nu4, s2),
    )


def test(trapdoor: Trapdoor, ciphertext: Ciphertext, params: SystemParams) -> bool:
    """prod_i e(C_i, d_i) * C' == 1_T"""
    acc = ciphertext.c_prime
    for c_i, d_i in zip(ciphertext.elements()[1:], trapdoor.elements()):
        acc = acc * params.pair(c_i, d_i)
    return params.group.is_identity(acc)


test.__test__ = False


def search(trapdoor: Trapdoor, ciphertexts: Sequence[Ciphertext], params: SystemParams) -> List[int]:
    """Índices de los cifrados que casan con el trapdoor"""
    return [i for i, ciphertext in enumerate(ciphertexts) if test(trapdoor, ciphertext, params)]


def extract_direct(tgc: TgcKeyPair, keyword: str, params: SystemParams, rng: Rng) -> Trapdoor:
    """Extracción con w en claro, sin cegado; oráculo de equivalencia"""
    rho1, rho2 = params.group.random_scalar(rng), params.group.random_scalar(rng)
    H = params.keyword_map(params.keyword_scalar(keyword))
    t0, t1, t2, t3, t4 = tgc.secret
    return Trapdoor(
        d0=params.g_exp(rho1 * t1 * t2 + rho2 * t3 * t4),
        d1=params.g_exp(-t0 * t2) * params.exp(H, -rho1 * t2),
        d2=params.g_exp(-t0 * t1) * params.exp(H, -rho1 * t1),
        d3=params.exp(H, -rho2 * t4),
        d4=params.exp(H, -rho2 * t3),
    )


# --- Trace ----------------------------------------------------------------------

def tracer_decrypt(record: TrapdoorRecord, x_t: Scalar, params: SystemParams) -> Tuple[GroupElem, GroupElem]:
    """(g^w, Y_u) = (D1 / D3^x_t, D2 / D3^x_t)"""
    unblind = params.exp(record.d3, -x_t)
    return record.d1 * unblind, record.d2 * unblind


def trace(record: TrapdoorRecord, x_t: Scalar, tables: Tuple[KeywordTable, IdTable],
          params: SystemParams) -> Tuple[str, str]:
    keyword_table, id_table = tables
    g_omega, Y_u = tracer_decrypt(record, x_t, params)
    keyword = keyword_table.lookup(g_omega)
    identity = id_table.lookup(Y_u)
    logging.info(f"Registro trazado hasta {identity!r}")
    return identity, keyword
