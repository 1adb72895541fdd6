"""Jerarquía de excepciones del protocolo"""


class ProtocolError(Exception):
    """Error base de todas las operaciones del protocolo"""


class DecodeError(ProtocolError, ValueError):
    """Bytes mal formados, no canónicos o fuera del grupo"""


class PreconditionError(ProtocolError, ValueError):
    """Una precondición de la operación no se cumple"""


class VerificationError(ProtocolError):
    """Una prueba o credencial no supera la verificación"""


class KeyMismatchError(ProtocolError, ValueError):
    """Operación homomórfica entre claves públicas distintas"""


class ProtocolAbortError(ProtocolError):
    """Sesión interrumpida (descifrado fallido, mensaje inesperado)"""


class SessionConsumedError(ProtocolError, RuntimeError):
    """La sesión de un solo uso ya fue consumida"""


class DuplicateKeywordError(ProtocolError, ValueError):
    """Palabra clave repetida en el vocabulario"""


class IdentityConflictError(ProtocolError, ValueError):
    """El mismo ID_U ya está registrado con otra clave pública"""


class UnknownKeywordError(ProtocolError, LookupError):
    """g^w no aparece en la tabla de palabras clave"""


class UnknownUserError(ProtocolError, LookupError):
    """Y_u no aparece en la tabla de identidades"""


class LedgerIndexError(ProtocolError, IndexError):
    """Índice de bloque fuera de rango"""


class LedgerIntegrityError(ProtocolError):
    """La cadena de bloques no supera la verificación"""


class ScenarioFailure(ProtocolError):
    """Una aserción de corrección falló durante un escenario"""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
