"""Punto de entrada de línea de comandos: algoritmos individuales, escenario y benchmark.

Cada subcomando lee y escribe los formatos canónicos en un directorio de estado (--out).
"""
import argparse
import logging
import random
import secrets
import sys
import time
from pathlib import Path
from typing import List, Optional, Tuple

from src.algebra import SystemParams
from src.config import Config
from src.credential import CaKeyPair, Credential
from src.errors import ProtocolError
from src.harness import ScenarioConfig, ScenarioState, bench, default_vocabulary, run_scenario
from src.homomorphic import hom_keygen
from src.ledger import Ledger
from src.frontend.report import render_table, write_report
from src.scheme import (
    Ciphertext, IdTable, KeywordTable, TgcKeyPair, TracerKeyPair, Trapdoor, TrapdoorRecord, UserKeyPair,
    keygen_ca, keygen_tgc, keygen_tr, keygen_user, peks_encrypt, record_validate, reg_issue, reg_request,
    run_trapdoor_protocol, setup, test, trace,
)
from src.utils.file_handler import FileHandler
from src.utils.utilities import setup_logging

KEY_CLASSES = {"ca": CaKeyPair, "tgc": TgcKeyPair, "tr": TracerKeyPair}


class StateStore:
    """Rutas y (de)serialización del directorio de estado"""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._params: Optional[SystemParams] = None

    def path(self, *parts: str) -> Path:
        return self.root.joinpath(*parts)

    @property
    def params(self) -> SystemParams:
        if self._params is None:
            fields = FileHandler.read_key_file(self.path("params.txt"))
            self._params = SystemParams.derive(fields["curve"].decode("ascii"))
        return self._params

    def save_params(self, params: SystemParams) -> None:
        FileHandler.write_key_file(self.path("params.txt"), {"curve": params.group.curve.encode("ascii")})
        self._params = params

    def keyword_table(self) -> KeywordTable:
        return KeywordTable.from_pairs(FileHandler.read_table(self.path("keywords.tbl")), self.params)

    def id_table(self) -> IdTable:
        path = self.path("ids.tbl")
        if not path.exists():
            return IdTable(self.params)
        return IdTable.from_pairs(FileHandler.read_table(path), self.params)

    def load_key(self, role: str):
        return KEY_CLASSES[role].from_fields(FileHandler.read_key_file(self.path(f"{role}.key")), self.params)

    def user_key_path(self, identity: str) -> Path:
        return self.path("users", f"{identity}.key")

    def load_user(self, identity: str) -> UserKeyPair:
        return UserKeyPair.from_fields(FileHandler.read_key_file(self.user_key_path(identity)), self.params)

    def load_credential(self, identity: str) -> Credential:
        return Credential.from_bytes(FileHandler.read_bytes(self.path("users", f"{identity}.cred")), self.params)

    def ledger(self) -> Ledger:
        path = self.path(Config.LEDGER.filename)
        return Ledger.from_bytes(FileHandler.read_bytes(path)) if path.exists() else Ledger()

    def save_ledger(self, ledger: Ledger) -> None:
        FileHandler.write_bytes(self.path(Config.LEDGER.filename), ledger.to_bytes())

    def record(self, block_index: int) -> TrapdoorRecord:
        return TrapdoorRecord.from_bytes(self.ledger().fetch(block_index).payload, self.params)

    def save_scenario(self, state: ScenarioState) -> None:
        """Deja el escenario listo para validate y trace"""
        params = state.params
        self.save_params(params)
        FileHandler.write_table(self.path("keywords.tbl"), state.keyword_table.to_pairs())
        FileHandler.write_table(self.path("ids.tbl"), state.id_table.to_pairs())
        for role, keys in (("ca", state.ca_keys), ("tgc", state.tgc_keys), ("tr", state.tracer_keys)):
            FileHandler.write_key_file(self.path(f"{role}.key"), keys.to_fields(params))
        self.save_ledger(state.ledger)


def _rng(seed: Optional[int], *purpose) -> random.Random:
    """Un flujo sembrado por propósito; sin semilla, SystemRandom"""
    if seed is None:
        return secrets.SystemRandom()
    return random.Random(":".join(str(part) for part in (seed, *purpose)))


def _parse_tamper(value: str) -> Tuple[int, int]:
    try:
        block, bit = value.split(":")
        return int(block), int(bit)
    except ValueError:
        raise argparse.ArgumentTypeError("se esperaba block:bit") from None


def _parse_int_list(value: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("se esperaba una lista de enteros separada por comas") from None


# --- subcomandos ----------------------------------------------------------------

def cmd_setup(args, store: StateStore) -> int:
    keywords = [k.strip() for k in args.keywords.split(",") if k.strip()] if args.keywords else default_vocabulary(args.n)
    params, table = setup(keywords, curve=args.curve)
    store.save_params(params)
    FileHandler.write_table(store.path("keywords.tbl"), table.to_pairs())
    print(f"{len(table)} palabras clave sobre {params.group.curve}")
    return 0


def cmd_keygen(args, store: StateStore) -> int:
    params = store.params
    if args.role == "user":
        if not args.id:
            raise ValueError("keygen --role user requiere --id")
        rng = _rng(args.seed, "keygen", "user", args.id)
        user = keygen_user(params, rng, identity=args.id)
        FileHandler.write_key_file(store.user_key_path(user.identity), user.to_fields(params))
        print(user.identity)
        return 0
    generator = {"ca": keygen_ca, "tgc": keygen_tgc, "tr": keygen_tr}[args.role]
    rng = _rng(args.seed, "keygen", args.role)
    FileHandler.write_key_file(store.path(f"{args.role}.key"), generator(params, rng).to_fields(params))
    print(args.role)
    return 0


def cmd_register(args, store: StateStore) -> int:
    params = store.params
    user = store.load_user(args.id)
    table = store.id_table()
    request = reg_request(user, params, _rng(args.seed, "reg-request", args.id))
    issue_rng = _rng(args.seed, "issue", args.id, len(table))
    credential = reg_issue(store.load_key("ca"), request, table, params, issue_rng)
    FileHandler.write_bytes(store.path("users", f"{args.id}.cred"), credential.to_bytes(params))
    FileHandler.write_table(store.path("ids.tbl"), table.to_pairs())
    print(f"credencial emitida para {args.id}")
    return 0


def cmd_trapdoor(args, store: StateStore) -> int:
    params = store.params
    ca, tgc, tracer = store.load_key("ca"), store.load_key("tgc"), store.load_key("tr")
    paillier_rng = _rng(args.seed, "paillier", args.id)
    paillier = hom_keygen(args.paillier_bits or Config.HOMOMORPHIC.key_bits, paillier_rng, scalar_order=params.p)
    ledger = store.ledger()
    user_rng = _rng(args.seed, "trapdoor", args.id, len(ledger))
    tgc_rng = _rng(args.seed, "tgc-session", len(ledger))
    now = Config.LEDGER.epoch + len(ledger) if args.seed is not None else int(time.time())
    outcome = run_trapdoor_protocol(
        store.load_user(args.id), store.load_credential(args.id), args.keyword, tgc, ca.public, tracer.Y_t,
        paillier, ledger, params, user_rng, tgc_rng, now=now,
    )
    store.save_ledger(ledger)
    FileHandler.write_bytes(store.path("trapdoors", f"{outcome.block_index}.bin"), outcome.trapdoor.to_bytes(params))
    print(outcome.block_index)
    return 0


def cmd_peks(args, store: StateStore) -> int:
    params = store.params
    tgc = store.load_key("tgc")
    ciphertext = peks_encrypt(tgc.public, args.keyword, params, _rng(args.seed, "peks", args.name))
    path = store.path("ciphertexts", f"{args.name}.bin")
    FileHandler.write_bytes(path, ciphertext.to_bytes(params))
    print(path)
    return 0


def cmd_test(args, store: StateStore) -> int:
    params = store.params
    trapdoor = Trapdoor.from_bytes(FileHandler.read_bytes(args.trapdoor), params)
    ciphertext = Ciphertext.from_bytes(FileHandler.read_bytes(args.ciphertext), params)
    print(int(test(trapdoor, ciphertext, params)))
    return 0


def cmd_validate(args, store: StateStore) -> int:
    params = store.params
    valid = record_validate(store.record(args.block), store.load_key("ca").public, store.load_key("tr").Y_t, params)
    print(int(valid))
    return 0


def cmd_trace(args, store: StateStore) -> int:
    params = store.params
    tables = (store.keyword_table(), store.id_table())
    identity, keyword = trace(store.record(args.block), store.load_key("tr").x_t, tables, params)
    print(f"{identity}\t{keyword}")
    return 0


def cmd_scenario(args, store: StateStore) -> int:
    cfg = ScenarioConfig(
        n=args.n, users=args.users, queries=args.queries, seed=args.seed if args.seed is not None else Config.SCENARIO.seed,
        out_dir=store.root, dump_transcripts=args.dump_transcripts, tamper=args.tamper,
        paillier_bits=args.paillier_bits, curve=args.curve,
    )
    try:
        report = run_scenario(cfg)
    except ProtocolError as e:
        report = getattr(e, "report", None)
        if report is None:
            raise
    if report.state is not None:
        store.save_scenario(report.state)
    print(render_table(report))
    write_report(report, store.root, "scenario")
    return 0 if report.passed else 1


def cmd_bench(args, store: StateStore) -> int:
    report = bench(args.n_values, repeats=args.repeats, seed=args.seed,
                   paillier_bits=args.paillier_bits, curve=args.curve)
    print(render_table(report))
    write_report(report, store.root, "bench", plot=args.plot)
    return 0 if report.passed else 1


COMMANDS = {
    "setup": cmd_setup, "keygen": cmd_keygen, "register": cmd_register, "trapdoor": cmd_trapdoor,
    "peks": cmd_peks, "test": cmd_test, "validate": cmd_validate, "trace": cmd_trace,
    "scenario": cmd_scenario, "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("state"), help="directorio de estado")
    common.add_argument("--seed", type=int, default=None, help="semilla para ejecuciones reproducibles")
    common.add_argument("--curve", default=None, help=f"curva de emparejamiento (por defecto {Config.GROUP.curve})")
    common.add_argument("--paillier-bits", type=int, default=None)
    common.add_argument("--log-file", default=None)
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="tpeks", description="Búsqueda trazable con trapdoor ciego")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common])

    p = command("setup")
    p.add_argument("--n", type=int, default=Config.SCENARIO.n)
    p.add_argument("--keywords", default=None, help="lista separada por comas")

    p = command("keygen")
    p.add_argument("--role", choices=["ca", "tgc", "tr", "user"], required=True)
    p.add_argument("--id", default=None)

    p = command("register")
    p.add_argument("--id", required=True)

    p = command("trapdoor")
    p.add_argument("--id", required=True)
    p.add_argument("--keyword", required=True)

    p = command("peks")
    p.add_argument("--keyword", required=True)
    p.add_argument("--name", required=True)

    p = command("test")
    p.add_argument("--trapdoor", type=Path, required=True)
    p.add_argument("--ciphertext", type=Path, required=True)

    for name in ("validate", "trace"):
        p = command(name)
        p.add_argument("--block", type=int, required=True)

    p = command("scenario")
    p.add_argument("--n", type=int, default=Config.SCENARIO.n)
    p.add_argument("--users", type=int, default=Config.SCENARIO.users)
    p.add_argument("--queries", type=int, default=Config.SCENARIO.queries)
    p.add_argument("--dump-transcripts", action="store_true")
    p.add_argument("--tamper", type=_parse_tamper, default=None, metavar="BLOCK:BIT")

    p = command("bench")
    p.add_argument("--n-values", type=_parse_int_list, default=list(Config.BENCH.n_values))
    p.add_argument("--repeats", type=int, default=Config.BENCH.repeats)
    p.add_argument("--plot", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_file, args.log_level)
    store = StateStore(args.out)
    try:
        return COMMANDS[args.command](args, store)
    except ProtocolError as e:
        logging.error(f"{args.command}: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, KeyError, ValueError) as e:
        logging.error(f"{args.command}: estado incompleto o ilegible: {str(e)}")
        print(f"error: estado incompleto o ilegible en {store.root}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
