"""Roles del sistema como objetos con estado que solo intercambian mensajes serializados.

Cada parte tiene su propio RNG y su buzón en una red en memoria; la red anota cada
envío en la transcripción, que puede resumirse o volcarse a disco.
"""
import asyncio
import hashlib
import logging
import random
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra import Rng, SystemParams, length_prefixed, split_length_prefixed
from src.config import Config
from src.credential import CaPublicKey, Credential
from src.errors import ProtocolAbortError, UnknownKeywordError, UnknownUserError
from src.homomorphic import Msg1, Msg2, Msg3, PaillierKeyPair, hom_keygen, tpp_round3_user
from src.ledger import Ledger
from src.scheme import (
    BlindedTrapdoor, Ciphertext, IdTable, KeywordTable, RegistrationRequest, TgcPublicKey,
    Trapdoor, TrapdoorRecord, keygen_ca, keygen_tgc, keygen_tr, keygen_user, peks_encrypt,
    reg_issue, reg_request, record_validate, search, trace, trapdoor_complete, trapdoor_finalize,
    trapdoor_request, trapdoor_respond,
)
from src.utils.file_handler import FileHandler

_INDEX = struct.Struct(">I")


def party_rng(seed: int, role: str) -> Rng:
    return random.Random(f"{seed}:{role}")


def encode_indices(indices: Sequence[int]) -> bytes:
    return length_prefixed(*(_INDEX.pack(i) for i in indices))


def decode_indices(data: bytes) -> List[int]:
    return [_INDEX.unpack(chunk)[0] for chunk in split_length_prefixed(data)]


class LogicalClock:
    """Marcas de tiempo deterministas para el ledger: epoch, epoch + 1, ..."""

    def __init__(self, epoch: Optional[int] = None):
        self._next = Config.LEDGER.epoch if epoch is None else epoch

    def tick(self) -> int:
        now = self._next
        self._next += 1
        return now


# --- red en memoria -------------------------------------------------------------

@dataclass(frozen=True)
class Envelope:
    sender: str
    recipient: str
    label: str
    payload: bytes

    def to_bytes(self) -> bytes:
        return length_prefixed(self.sender.encode(), self.recipient.encode(), self.label.encode(), self.payload)


@dataclass
class Transcript:
    entries: List[Envelope] = field(default_factory=list)

    def record(self, envelope: Envelope) -> None:
        self.entries.append(envelope)

    def digest(self) -> str:
        h = hashlib.sha256()
        for envelope in self.entries:
            h.update(envelope.to_bytes())
        return h.hexdigest()

    def total_bytes(self) -> int:
        return sum(len(envelope.payload) for envelope in self.entries)

    async def dump(self, directory: Path) -> List[Path]:
        entries = [(f"{e.sender}-{e.recipient}-{e.label}", e.payload) for e in self.entries]
        return await FileHandler.dump_transcript(directory, entries)

    @classmethod
    async def load(cls, directory: Path) -> "Transcript":
        """Reconstruye la transcripción a partir de un volcado de dump"""
        transcript = cls()
        for path in sorted(Path(directory).glob("*.bin")):
            _, route = path.stem.split("_", 1)
            sender, recipient, label = route.split("-", 2)
            payload = await FileHandler.read_file_content(path)
            transcript.record(Envelope(sender=sender, recipient=recipient, label=label, payload=payload))
        return transcript


class Network:
    """Un asyncio.Queue por parte; los mensajes se entregan en orden de envío"""

    def __init__(self):
        self.transcript = Transcript()
        self._mailboxes: Dict[str, asyncio.Queue] = {}

    def mailbox(self, name: str) -> asyncio.Queue:
        if name not in self._mailboxes:
            self._mailboxes[name] = asyncio.Queue()
        return self._mailboxes[name]

    async def send(self, sender: str, recipient: str, label: str, payload: bytes) -> None:
        envelope = Envelope(sender=sender, recipient=recipient, label=label, payload=payload)
        self.transcript.record(envelope)
        await self.mailbox(recipient).put(envelope)

    async def receive(self, recipient: str, label: str) -> Envelope:
        envelope = await self.mailbox(recipient).get()
        if envelope.label != label:
            raise ProtocolAbortError(f"{recipient} esperaba {label!r} y recibió {envelope.label!r}")
        return envelope


class Party:
    def __init__(self, name: str, params: SystemParams, network: Network, rng: Rng):
        self.name = name
        self.params = params
        self.network = network
        self.rng = rng

    async def send(self, recipient: "Party", label: str, payload: bytes) -> None:
        await self.network.send(self.name, recipient.name, label, payload)

    async def receive(self, label: str) -> Envelope:
        return await self.network.receive(self.name, label)


# --- roles ----------------------------------------------------------------------

class CentralAuthority(Party):
    def __init__(self, params: SystemParams, network: Network, rng: Rng, name: str = "CA"):
        super().__init__(name, params, network, rng)
        self.keys = keygen_ca(params, rng)
        self.id_table = IdTable(params)

    @property
    def public_key(self) -> CaPublicKey:
        return self.keys.public

    async def serve_registration(self) -> None:
        envelope = await self.receive("reg_request")
        try:
            request = RegistrationRequest.from_bytes(envelope.payload, self.params)
            credential = reg_issue(self.keys, request, self.id_table, self.params, self.rng)
        except Exception as e:
            logging.error(f"Registro fallido para {envelope.sender}: {str(e)}")
            raise
        await self.network.send(self.name, envelope.sender, "credential", credential.to_bytes(self.params))


class Tracer(Party):
    def __init__(self, params: SystemParams, network: Network, rng: Rng, name: str = "TR"):
        super().__init__(name, params, network, rng)
        self.keys = keygen_tr(params, rng)

    @property
    def public_key(self):
        return self.keys.Y_t

    def audit(self, ledger: Ledger, ca_pk: CaPublicKey,
              tables: Tuple[KeywordTable, IdTable]) -> List["AuditRow"]:
        """Valida y traza cada registro del ledger"""
        rows = []
        for block in ledger:
            record = TrapdoorRecord.from_bytes(block.payload, self.params)
            valid = record_validate(record, ca_pk, self.public_key, self.params)
            identity = keyword = None
            if valid:
                try:
                    identity, keyword = trace(record, self.keys.x_t, tables, self.params)
                except (UnknownKeywordError, UnknownUserError) as e:
                    logging.warning(f"Bloque {block.index} sin resolver: {str(e)}")
            rows.append(AuditRow(block_index=block.index, identity=identity, keyword=keyword, valid=valid))
        return rows


@dataclass(frozen=True)
class AuditRow:
    block_index: int
    identity: Optional[str]
    keyword: Optional[str]
    valid: bool


class TrapdoorGenerationCenter(Party):
    def __init__(self, params: SystemParams, network: Network, rng: Rng, ledger: Ledger,
                 clock: LogicalClock, name: str = "TGC"):
        super().__init__(name, params, network, rng)
        self.keys = keygen_tgc(params, rng)
        self.ledger = ledger
        self.clock = clock

    @property
    def public_key(self) -> TgcPublicKey:
        return self.keys.public

    async def serve_trapdoor(self, ca_pk: CaPublicKey, tracer_pk) -> int:
        """Una sesión completa; devuelve el índice del bloque asentado"""
        record_env = await self.receive("record")
        msg1_env = await self.receive("msg1")
        user = record_env.sender
        try:
            record = TrapdoorRecord.from_bytes(record_env.payload, self.params)
            session, m2 = trapdoor_respond(
                self.keys, ca_pk, tracer_pk, record, Msg1.from_bytes(msg1_env.payload),
                self.ledger, self.params, self.rng, now=self.clock.tick(),
            )
        except Exception as e:
            logging.error(f"Petición de trapdoor de {user} rechazada: {str(e)}")
            raise
        await self.network.send(self.name, user, "msg2", m2.to_bytes())
        m3 = Msg3.from_bytes((await self.receive("msg3")).payload)
        blinded = trapdoor_complete(self.keys, session, m3, self.params)
        await self.network.send(self.name, user, "blinded", blinded.to_bytes(self.params))
        return session.block_index


class DataUser(Party):
    def __init__(self, identity: str, params: SystemParams, network: Network, rng: Rng,
                 paillier_bits: Optional[int] = None):
        super().__init__(identity, params, network, rng)
        self.keys = keygen_user(params, rng, identity=identity)
        self.paillier: PaillierKeyPair = hom_keygen(
            paillier_bits or Config.HOMOMORPHIC.key_bits, rng, scalar_order=params.p,
        )
        self.credential: Optional[Credential] = None

    @property
    def identity(self) -> str:
        return self.keys.identity

    async def register(self, ca: Party) -> Credential:
        request = reg_request(self.keys, self.params, self.rng)
        await self.send(ca, "reg_request", request.to_bytes(self.params))
        envelope = await self.receive("credential")
        self.credential = Credential.from_bytes(envelope.payload, self.params)
        return self.credential

    async def request_trapdoor(self, keyword: str, tgc: Party, ca_pk: CaPublicKey, tracer_pk) -> Trapdoor:
        if self.credential is None:
            raise ProtocolAbortError(f"{self.identity} no tiene credencial")
        record, session, m1 = trapdoor_request(
            self.keys, self.credential, keyword, tracer_pk, ca_pk, self.paillier, self.params, self.rng,
        )
        await self.send(tgc, "record", record.to_bytes(self.params))
        await self.send(tgc, "msg1", m1.to_bytes())
        m2 = Msg2.from_bytes((await self.receive("msg2")).payload, self.paillier.public_key)
        await self.send(tgc, "msg3", tpp_round3_user(m2, session.tpp).to_bytes())
        blinded = BlindedTrapdoor.from_bytes((await self.receive("blinded")).payload, self.params)
        return trapdoor_finalize(session, blinded, self.params)

    async def query(self, trapdoor: Trapdoor, cloud: Party) -> List[int]:
        await self.send(cloud, "trapdoor", trapdoor.to_bytes(self.params))
        return decode_indices((await self.receive("matches")).payload)


class DataOwner(Party):
    def __init__(self, params: SystemParams, network: Network, rng: Rng, name: str = "DO"):
        super().__init__(name, params, network, rng)

    async def upload(self, keywords: Sequence[str], tgc_pk: TgcPublicKey, cloud: Party) -> None:
        for keyword in keywords:
            ciphertext = peks_encrypt(tgc_pk, keyword, self.params, self.rng)
            await self.send(cloud, "ciphertext", ciphertext.to_bytes(self.params))


class CloudServer(Party):
    def __init__(self, params: SystemParams, network: Network, rng: Rng, name: str = "CS"):
        super().__init__(name, params, network, rng)
        self.ciphertexts: List[Ciphertext] = []

    async def receive_uploads(self, count: int) -> None:
        for _ in range(count):
            envelope = await self.receive("ciphertext")
            self.ciphertexts.append(Ciphertext.from_bytes(envelope.payload, self.params))

    async def serve_search(self) -> List[int]:
        envelope = await self.receive("trapdoor")
        matches = search(Trapdoor.from_bytes(envelope.payload, self.params), self.ciphertexts, self.params)
        await self.network.send(self.name, envelope.sender, "matches", encode_indices(matches))
        return matches
