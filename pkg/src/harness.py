"""Escenarios de extremo a extremo y benchmark de escalado sobre las partes en memoria"""
import asyncio
import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.algebra import SystemParams
from src.config import Config
from src.credential import CaKeyPair, RandomizedCredential
from src.errors import LedgerIndexError, PreconditionError, ScenarioFailure, VerificationError
from src.homomorphic import hom_keygen
from src.ledger import Ledger
from src.parties import (
    AuditRow, CentralAuthority, CloudServer, DataOwner, DataUser, LogicalClock, Network,
    Tracer, Transcript, TrapdoorGenerationCenter, party_rng,
)
from src.scheme import (
    IdTable, KeywordTable, RegistrationRequest, TgcKeyPair, TracerKeyPair, Trapdoor, TrapdoorRecord,
    keygen_ca, keygen_tgc, keygen_tr, keygen_user, peks_encrypt, record_validate, reg_issue, reg_request,
    run_trapdoor_protocol, search, setup, trace,
)
from src.utils.utilities import create_timing_row, sort_timing_dataframe

ALGORITHMS = ["Setup", "KeyGen", "Reg", "Trapdoor", "PEKS", "Test", "Record-Validation", "Trace"]
CONSTANT_ALGORITHMS = ("KeyGen", "Reg", "Record-Validation")
LINEAR_ALGORITHMS = ("Setup", "PEKS", "Test", "Trace")
TIMING_COLUMNS = ['algorithm', 'n', 'repeats', 'median_ms', 'per_item_ms', 'correct']
PAYLOAD_COLUMNS = ['n', 'block', 'bytes']


def default_vocabulary(n: int) -> List[str]:
    """Vocabulario sintético kw000, kw001, ..."""
    return [f"kw{i:03d}" for i in range(n)]


@dataclass
class ScenarioConfig:
    n: int = Config.SCENARIO.n
    users: int = Config.SCENARIO.users
    queries: int = Config.SCENARIO.queries
    seed: int = Config.SCENARIO.seed
    out_dir: Optional[Path] = None
    dump_transcripts: bool = False
    tamper: Optional[Tuple[int, int]] = None
    paillier_bits: Optional[int] = None
    curve: Optional[str] = None
    keywords: Optional[List[str]] = None

    def __post_init__(self):
        if self.n < 1 or self.users < 1 or self.queries < 0:
            raise ValueError("n y users deben ser >= 1 y queries >= 0")
        if self.out_dir is not None:
            self.out_dir = Path(self.out_dir)
        if self.keywords is None:
            self.keywords = default_vocabulary(self.n)
        elif len(self.keywords) != self.n:
            raise ValueError("El vocabulario debe tener exactamente n palabras")


@dataclass(frozen=True, eq=False)
class ScenarioState:
    """Estado final de un escenario, persistible como directorio de estado"""
    params: SystemParams
    keyword_table: KeywordTable
    id_table: IdTable
    ca_keys: CaKeyPair
    tgc_keys: TgcKeyPair
    tracer_keys: TracerKeyPair
    ledger: Ledger


@dataclass
class BenchReport:
    timings: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=TIMING_COLUMNS))
    payload_sizes: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=PAYLOAD_COLUMNS))
    assertions: Dict[str, bool] = field(default_factory=dict)
    shape_checks: Dict[str, bool] = field(default_factory=dict)
    test_matrix: Optional[np.ndarray] = None
    audit: List[AuditRow] = field(default_factory=list)
    transcript_digest: Optional[str] = None
    ledger_tip: Optional[str] = None
    diagnostics: List[str] = field(default_factory=list)
    state: Optional[ScenarioState] = None

    @property
    def passed(self) -> bool:
        return all(self.assertions.values()) and all(self.shape_checks.values())

    def check(self, name: str, holds: bool, diagnostic: str = "") -> bool:
        self.assertions[name] = bool(holds)
        if not holds:
            self.diagnostics.append(f"{name}: {diagnostic}" if diagnostic else name)
            logging.error(f"Aserción fallida: {name} {diagnostic}")
        return bool(holds)

    def assertions_frame(self) -> pd.DataFrame:
        rows = [{'check': k, 'kind': 'assertion', 'passed': v} for k, v in self.assertions.items()]
        rows += [{'check': k, 'kind': 'shape', 'passed': v} for k, v in self.shape_checks.items()]
        return pd.DataFrame(rows, columns=['check', 'kind', 'passed'])


class _Stopwatch:
    def __init__(self):
        self.samples: Dict[str, List[float]] = {}

    def add(self, name: str, seconds: float) -> None:
        self.samples.setdefault(name, []).append(seconds)

    def timed(self, name: str, fn: Callable, *args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        self.add(name, time.perf_counter() - start)
        return result


# --- escenario ------------------------------------------------------------------

async def run_scenario_async(cfg: ScenarioConfig) -> BenchReport:
    report = BenchReport()
    watch = _Stopwatch()
    keywords = cfg.keywords

    def rng(role: str):
        return party_rng(cfg.seed, role)

    params, keyword_table = watch.timed("Setup", setup, keywords, curve=cfg.curve)
    network, ledger = Network(), Ledger()

    start = time.perf_counter()
    ca = CentralAuthority(params, network, rng("ca"))
    tgc = TrapdoorGenerationCenter(params, network, rng("tgc"), ledger, LogicalClock())
    tracer = Tracer(params, network, rng("tr"))
    watch.add("KeyGen", time.perf_counter() - start)
    owner = DataOwner(params, network, rng("do"))
    cloud = CloudServer(params, network, rng("cs"))
    users = [
        DataUser(f"user{i:02d}", params, network, rng(f"du:user{i:02d}"), paillier_bits=cfg.paillier_bits)
        for i in range(cfg.users)
    ]

    for user in users:
        start = time.perf_counter()
        await asyncio.gather(user.register(ca), ca.serve_registration())
        watch.add("Reg", time.perf_counter() - start)

    planner = rng("harness")
    submitted: Dict[int, Tuple[str, str]] = {}
    queries: List[Tuple[DataUser, str, Trapdoor]] = []
    for user in users:
        for _ in range(cfg.queries):
            keyword = planner.choice(keywords)
            start = time.perf_counter()
            trapdoor, block_index = await asyncio.gather(
                user.request_trapdoor(keyword, tgc, ca.public_key, tracer.public_key),
                tgc.serve_trapdoor(ca.public_key, tracer.public_key),
            )
            watch.add("Trapdoor", time.perf_counter() - start)
            submitted[block_index] = (user.identity, keyword)
            queries.append((user, keyword, trapdoor))

    start = time.perf_counter()
    await asyncio.gather(owner.upload(keywords, tgc.public_key, cloud), cloud.receive_uploads(len(keywords)))
    watch.add("PEKS", time.perf_counter() - start)

    matrix = np.zeros((len(queries), len(keywords)), dtype=np.int8)
    start = time.perf_counter()
    for row, (user, _, trapdoor) in enumerate(queries):
        matches, _ = await asyncio.gather(user.query(trapdoor, cloud), cloud.serve_search())
        matrix[row, matches] = 1
    watch.add("Test", time.perf_counter() - start)
    report.test_matrix = matrix

    expected = np.zeros_like(matrix)
    for row, (_, keyword, _) in enumerate(queries):
        expected[row, keywords.index(keyword)] = 1
    missed = [queries[r][1] for r in range(len(queries)) if matrix[r] @ expected[r] != 1]
    report.check("test_matching", not missed,
                 f"prod e(C_i, d_i) * C' != 1 con trapdoor y cifrado de {format_keywords(missed)}")
    report.check("test_mismatched", int(((matrix == 1) & (expected == 0)).sum()) == 0,
                 "Test = 1 para un par (trapdoor, cifrado) de palabras distintas")

    start = time.perf_counter()
    for block in ledger:
        record_validate(TrapdoorRecord.from_bytes(block.payload, params), ca.public_key, tracer.public_key, params)
    watch.add("Record-Validation", time.perf_counter() - start)

    report.audit = watch.timed("Trace", tracer.audit, ledger, ca.public_key, (keyword_table, ca.id_table))
    invalid = [row.block_index for row in report.audit if not row.valid]
    report.check("record_validation", not invalid,
                 f"Pi2 o e(a~, Y) = e(g, b~) fallan en los bloques {invalid}")
    wrong = [row.block_index for row in report.audit if (row.identity, row.keyword) != submitted.get(row.block_index)]
    report.check("trace", not wrong, f"g^w = D1 / D3^x_t o Y_u = D2 / D3^x_t no resuelven los bloques {wrong}")
    report.check("ledger_chain", ledger.verify_chain(), "los enlaces de hash del ledger no recomputan")
    _check_forgeries(report, ledger, params, ca, tracer, rng("forger"))

    if cfg.tamper is not None:
        _check_tamper(report, ledger, *cfg.tamper)

    per_item = {"Reg": 1, "Trapdoor": 1, "PEKS": len(keywords), "Test": max(len(queries), 1) * len(keywords)}
    report.timings = pd.DataFrame(
        [create_timing_row(name, cfg.n, watch.samples[name], per_item=per_item.get(name, 1), correct=report.passed)
         for name in ALGORITHMS if name in watch.samples],
        columns=TIMING_COLUMNS,
    )
    report.payload_sizes = pd.DataFrame(
        [{'n': cfg.n, 'block': index, 'bytes': size} for index, size in ledger.payload_sizes()],
        columns=PAYLOAD_COLUMNS,
    )
    report.transcript_digest = network.transcript.digest()
    report.ledger_tip = ledger.tip.hex()
    report.state = ScenarioState(
        params=params, keyword_table=keyword_table, id_table=ca.id_table, ca_keys=ca.keys,
        tgc_keys=tgc.keys, tracer_keys=tracer.keys, ledger=ledger,
    )

    if cfg.dump_transcripts and cfg.out_dir is not None:
        directory = cfg.out_dir / "transcripts"
        await network.transcript.dump(directory)
        reloaded = await Transcript.load(directory)
        report.check("transcript_dump", reloaded.digest() == report.transcript_digest,
                     f"el volcado en {directory} no reproduce la transcripción")
    logging.info(f"Escenario n={cfg.n} completado ({network.transcript.total_bytes()} bytes transmitidos): "
                 f"{'OK' if report.passed else 'FALLO'}")
    return report


def mutate_record(record: TrapdoorRecord, name: str, params) -> TrapdoorRecord:
    """Copia del registro con un único campo alterado"""
    value = getattr(record, name)
    if name == "credential":
        return replace(record, credential=RandomizedCredential(
            a_tilde=value.a_tilde, b_tilde=value.b_tilde, c_hat=value.c_hat * params.g))
    if name == "proof":
        return replace(record, proof=replace(value, xu_hat=params.group.reduce(value.xu_hat + 1)))
    return replace(record, **{name: value * params.g})


def _check_forgeries(report: BenchReport, ledger: Ledger, params, ca: CentralAuthority,
                     tracer: Tracer, rng) -> None:
    """Registros alterados campo a campo y una Pi1 reutilizada para otra clave deben rechazarse"""
    if len(ledger):
        record = TrapdoorRecord.from_bytes(ledger.fetch(0).payload, params)
        accepted = [
            name for name in TrapdoorRecord.FIELDS
            if record_validate(mutate_record(record, name, params), ca.public_key, tracer.public_key, params)
        ]
        report.check("forged_records_rejected", not accepted, f"Record-Validation acepta campos alterados: {accepted}")

    honest, impostor = keygen_user(params, rng, "forger"), keygen_user(params, rng, "impostor")
    proof = reg_request(honest, params, rng).proof
    forged = RegistrationRequest(identity=impostor.identity, Y_u=impostor.Y_u, proof=proof)
    try:
        reg_issue(ca.keys, forged, IdTable(params), params, rng)
        rejected = False
    except VerificationError:
        rejected = True
    report.check("forged_registration_rejected", rejected, "la CA emite credencial con una Pi1 ajena")


def _check_tamper(report: BenchReport, ledger: Ledger, block_index: int, bit: int) -> None:
    try:
        detected = not ledger.tampered_copy(block_index, bit).verify_chain()
    except (LedgerIndexError, PreconditionError) as e:
        report.check("tamper_detected", False, f"no se pudo invertir el bit: {str(e)}")
        return
    report.check("tamper_detected", detected, f"bit {bit} del bloque {block_index} invertido sin detección")
    logging.info(f"Manipulación del bloque {block_index}, bit {bit}: detectada={detected}")


def run_scenario(cfg: ScenarioConfig) -> BenchReport:
    """Ejecuta el escenario completo; lanza ScenarioFailure si alguna aserción falla"""
    try:
        report = asyncio.run(run_scenario_async(cfg))
    except Exception as e:
        logging.error(f"Escenario abortado: {str(e)}")
        raise ScenarioFailure(f"Flujo honesto rechazado: {str(e)}") from e
    if not report.passed:
        raise ScenarioFailure("; ".join(report.diagnostics), report)
    return report


def format_keywords(keywords: Sequence[str]) -> str:
    return ", ".join(repr(k) for k in keywords) or "-"


# --- benchmark ------------------------------------------------------------------

def _bench_once(n: int, seed: int, repeat: int, report: BenchReport, watch: _Stopwatch,
                paillier_bits: Optional[int], curve: Optional[str]) -> None:
    keywords = default_vocabulary(n)

    def rng(role: str):
        return party_rng(seed, f"bench:{n}:{repeat}:{role}")

    params, keyword_table = watch.timed("Setup", setup, keywords, curve=curve)
    start = time.perf_counter()
    ca = keygen_ca(params, rng("ca"))
    tgc = keygen_tgc(params, rng("tgc"))
    tracer = keygen_tr(params, rng("tr"))
    user_rng = rng("du")
    user = keygen_user(params, user_rng, identity="bench-user")
    watch.add("KeyGen", time.perf_counter() - start)

    id_table = IdTable(params)
    ca_rng = rng("ca-session")
    credential = watch.timed(
        "Reg", lambda: reg_issue(ca, reg_request(user, params, user_rng), id_table, params, ca_rng),
    )

    paillier = hom_keygen(paillier_bits or Config.HOMOMORPHIC.key_bits, user_rng, scalar_order=params.p)
    ledger, clock, tgc_rng = Ledger(), LogicalClock(), rng("tgc-session")
    outcomes = watch.timed("Trapdoor", lambda: [
        run_trapdoor_protocol(user, credential, keyword, tgc, ca.public, tracer.Y_t, paillier,
                              ledger, params, user_rng, tgc_rng, now=clock.tick())
        for keyword in keywords
    ])

    owner_rng = rng("do")
    ciphertexts = watch.timed("PEKS", lambda: [peks_encrypt(tgc.public, k, params, owner_rng) for k in keywords])

    matches = watch.timed("Test", search, outcomes[0].trapdoor, ciphertexts, params)
    correct = matches == [0] and all(
        search(outcome.trapdoor, ciphertexts, params) == [i] for i, outcome in enumerate(outcomes)
    )
    report.check(f"test_correct_n{n}_r{repeat}", correct, "Test no separa las palabras del vocabulario")

    record = TrapdoorRecord.from_bytes(ledger.fetch(0).payload, params)
    valid = watch.timed("Record-Validation", record_validate, record, ca.public, tracer.Y_t, params)
    report.check(f"record_valid_n{n}_r{repeat}", valid, "Record-Validation rechaza un registro honesto")

    tables = (keyword_table, id_table)
    traced = watch.timed("Trace", lambda: [
        trace(TrapdoorRecord.from_bytes(block.payload, params), tracer.x_t, tables, params) for block in ledger
    ])
    report.check(f"trace_correct_n{n}_r{repeat}", traced == [("bench-user", k) for k in keywords],
                 "Trace no recupera (ID_U, w)")
    if repeat == 0:
        sizes = pd.DataFrame(
            [{'n': n, 'block': index, 'bytes': size} for index, size in ledger.payload_sizes()],
            columns=PAYLOAD_COLUMNS,
        )
        report.payload_sizes = sizes if report.payload_sizes.empty else pd.concat(
            [report.payload_sizes, sizes], ignore_index=True)


def _shape_checks(report: BenchReport, n_values: Sequence[int]) -> None:
    n_min, n_max = min(n_values), max(n_values)
    if n_min == n_max:
        return
    df = report.timings
    tolerance = Config.BENCH.constant_tolerance
    low, high = Config.BENCH.linear_ratio_bounds
    # Los límites lineales están fijados para n_max / n_min = 5
    scale = (n_max / n_min) / 5.0

    def series(name: str, column: str) -> pd.Series:
        return df[df['algorithm'] == name].set_index('n')[column]

    for name in CONSTANT_ALGORITHMS:
        values = series(name, 'median_ms')
        report.shape_checks[f"{name} constante"] = bool(values.max() <= tolerance * values.min())
    for name in LINEAR_ALGORITHMS:
        values = series(name, 'median_ms')
        ratio = values[n_max] / values[n_min]
        report.shape_checks[f"{name} lineal"] = bool(low * scale <= ratio <= high * scale)
    per_trapdoor = series("Trapdoor", 'per_item_ms')
    report.shape_checks["Trapdoor por elemento constante"] = bool(per_trapdoor.max() <= tolerance * per_trapdoor.min())


def bench(n_values: Optional[Sequence[int]] = None, repeats: Optional[int] = None,
          seed: Optional[int] = None, paillier_bits: Optional[int] = None,
          curve: Optional[str] = None) -> BenchReport:
    """Mide los ocho algoritmos para cada n; cada iteración comprueba la corrección antes de contar"""
    n_values = list(n_values or Config.BENCH.n_values)
    repeats = repeats or Config.BENCH.repeats
    seed = Config.SCENARIO.seed if seed is None else seed
    report = BenchReport()
    rows = []
    for n in n_values:
        watch = _Stopwatch()
        for repeat in range(repeats):
            _bench_once(n, seed, repeat, report, watch, paillier_bits, curve)
        for name in ALGORITHMS:
            per_item = n if name in ("Trapdoor", "PEKS", "Test", "Trace") else 1
            rows.append(create_timing_row(name, n, watch.samples[name], per_item=per_item, correct=report.passed))
        logging.info(f"Benchmark n={n} completado")
    report.timings = sort_timing_dataframe(pd.DataFrame(rows, columns=TIMING_COLUMNS), order=ALGORITHMS)
    _shape_checks(report, n_values)
    return report
