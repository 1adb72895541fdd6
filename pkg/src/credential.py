"""Credencial anónima tipo CL: emisión, aleatorización y verificación por emparejamientos"""
import logging
from dataclasses import dataclass
from typing import Dict

from src.algebra import ElementKind, GroupElem, Rng, Scalar, SystemParams
from src.errors import PreconditionError

_G = ElementKind.G


@dataclass(frozen=True, eq=False)
class CaPublicKey:
    X: GroupElem
    Y: GroupElem

    def to_bytes(self, params: SystemParams) -> bytes:
        return params.group.encode_many((self.X, self.Y))

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams) -> "CaPublicKey":
        X, Y = params.group.decode_many(data, [_G, _G])
        return cls(X=X, Y=Y)


@dataclass(frozen=True, eq=False)
class CaKeyPair:
    """sk_CA = (x, y), pk_CA = (X, Y)"""
    x: Scalar
    y: Scalar
    public: CaPublicKey

    @classmethod
    def generate(cls, params: SystemParams, rng: Rng) -> "CaKeyPair":
        x = params.group.random_scalar(rng, nonzero=True)
        y = params.group.random_scalar(rng, nonzero=True)
        return cls(x=x, y=y, public=CaPublicKey(X=params.g_exp(x), Y=params.g_exp(y)))

    def to_fields(self, params: SystemParams) -> Dict[str, bytes]:
        encode = params.group.encode
        return {"x": encode(self.x), "y": encode(self.y), "X": encode(self.public.X), "Y": encode(self.public.Y)}

    @classmethod
    def from_fields(cls, encoded: Dict[str, bytes], params: SystemParams) -> "CaKeyPair":
        decode = params.group.decode
        public = CaPublicKey(X=decode(encoded["X"], _G), Y=decode(encoded["Y"], _G))
        return cls(x=decode(encoded["x"], ElementKind.SCALAR), y=decode(encoded["y"], ElementKind.SCALAR), public=public)


@dataclass(frozen=True, eq=False)
class Credential:
    """sigma_U = (a, b, c) sobre la clave secreta del usuario"""
    a: GroupElem
    b: GroupElem
    c: GroupElem

    def to_bytes(self, params: SystemParams) -> bytes:
        return params.group.encode_many((self.a, self.b, self.c))

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams) -> "Credential":
        a, b, c = params.group.decode_many(data, [_G, _G, _G])
        return cls(a=a, b=b, c=c)


@dataclass(frozen=True, eq=False)
class RandomizedCredential:
    """Presentación cegada (a^r', b^r', c^(r' r))"""
    a_tilde: GroupElem
    b_tilde: GroupElem
    c_hat: GroupElem

    def to_bytes(self, params: SystemParams) -> bytes:
        return params.group.encode_many((self.a_tilde, self.b_tilde, self.c_hat))

    @classmethod
    def from_bytes(cls, data: bytes, params: SystemParams) -> "RandomizedCredential":
        a_tilde, b_tilde, c_hat = params.group.decode_many(data, [_G, _G, _G])
        return cls(a_tilde=a_tilde, b_tilde=b_tilde, c_hat=c_hat)


def issue(sk: CaKeyPair, Y_u: GroupElem, params: SystemParams, rng: Rng) -> Credential:
    """a = g^r_u, b = a^y, c = a^x * Y_u^(r_u x y)"""
    if params.group.is_identity(Y_u):
        raise PreconditionError("No se emiten credenciales para la clave identidad")
    r_u = params.group.random_scalar(rng, nonzero=True)
    a = params.g_exp(r_u)
    b = params.exp(a, sk.y)
    c = params.exp(a, sk.x) * params.exp(Y_u, r_u * sk.x * sk.y)
    return Credential(a=a, b=b, c=c)


def randomize(cred: Credential, r: Scalar, r_prime: Scalar, params: SystemParams) -> RandomizedCredential:
    """sigma~ = (a^r', b^r', c^(r' r)) para aleatorizadores no nulos"""
    if r % params.p == 0 or r_prime % params.p == 0:
        raise PreconditionError("Los aleatorizadores de la credencial deben ser no nulos")
    return RandomizedCredential(
        a_tilde=params.exp(cred.a, r_prime),
        b_tilde=params.exp(cred.b, r_prime),
        c_hat=params.exp(cred.c, r_prime * r),
    )


def show_verify(rc: RandomizedCredential, pk: CaPublicKey, params: SystemParams) -> bool:
    """Mitad de emparejamientos de CredVerify: e(a~, Y) = e(g, b~) y a~ distinto de 1"""
    try:
        if params.group.is_identity(rc.a_tilde):
            logging.warning("Credencial rechazada: a~ es la identidad")
            return False
        return params.pair(rc.a_tilde, pk.Y) == params.pair(params.g, rc.b_tilde)
    except Exception as e:
        logging.debug(f"Credencial mal formada: {str(e)}")
        return False
