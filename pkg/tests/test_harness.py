"""Pruebas para el escenario de extremo a extremo y el benchmark"""
import pandas as pd
import pytest

from src.errors import ScenarioFailure
from src.harness import (
    ALGORITHMS, CONSTANT_ALGORITHMS, LINEAR_ALGORITHMS, TIMING_COLUMNS, BenchReport, ScenarioConfig,
    _shape_checks, bench, default_vocabulary, run_scenario,
)
from src.utils.utilities import create_timing_row


@pytest.fixture(scope="module")
def small_report():
    """Escenario pequeño compartido por las pruebas del módulo"""
    return run_scenario(ScenarioConfig(n=3, users=2, queries=1, seed=11))


def test_default_vocabulary():
    """Prueba el vocabulario sintético"""
    assert default_vocabulary(3) == ["kw000", "kw001", "kw002"]


def test_scenario_config_validation():
    """Prueba el rechazo de configuraciones imposibles"""
    with pytest.raises(ValueError):
        ScenarioConfig(n=0)
    with pytest.raises(ValueError):
        ScenarioConfig(n=2, keywords=["a"])
    assert ScenarioConfig(n=2).keywords == ["kw000", "kw001"]


def test_scenario_passes(small_report):
    """Prueba que el flujo honesto supera todas las aserciones"""
    assert small_report.passed
    assert set(small_report.assertions) == {
        "test_matching", "test_mismatched", "record_validation", "trace", "ledger_chain",
        "forged_records_rejected", "forged_registration_rejected",
    }
    assert small_report.test_matrix.shape == (2, 3)
    assert small_report.test_matrix.sum(axis=1).tolist() == [1, 1]


def test_scenario_audit_and_sizes(small_report):
    """Prueba la auditoría del trazador y los tamaños de registro"""
    assert [row.identity for row in small_report.audit] == ["user00", "user01"]
    assert all(row.valid for row in small_report.audit)
    assert list(small_report.payload_sizes['block']) == [0, 1]
    assert small_report.payload_sizes['bytes'].nunique() == 1


def test_scenario_timings(small_report):
    """Prueba que se mide cada algoritmo"""
    assert list(small_report.timings.columns) == TIMING_COLUMNS
    assert list(small_report.timings['algorithm']) == ALGORITHMS
    assert (small_report.timings['median_ms'] >= 0).all()


def test_scenario_is_deterministic(small_report):
    """Prueba que la misma semilla reproduce transcripción y ledger"""
    again = run_scenario(ScenarioConfig(n=3, users=2, queries=1, seed=11))
    assert again.transcript_digest == small_report.transcript_digest
    assert again.ledger_tip == small_report.ledger_tip


def test_scenario_tamper_detected(tmp_path):
    """Prueba que la manipulación de un bit se detecta y se vuelcan las transcripciones"""
    report = run_scenario(ScenarioConfig(
        n=2, users=1, queries=1, seed=3, tamper=(0, 9), out_dir=tmp_path, dump_transcripts=True,
    ))
    assert report.assertions["tamper_detected"]
    assert any((tmp_path / "transcripts").iterdir())
    assert report.assertions["transcript_dump"]
    assert report.state is not None and len(report.state.ledger) == 1


def test_scenario_tamper_out_of_range_fails():
    """Prueba que un bloque inexistente produce un fallo con informe"""
    with pytest.raises(ScenarioFailure) as excinfo:
        run_scenario(ScenarioConfig(n=2, users=1, queries=1, seed=3, tamper=(5, 0)))
    report = excinfo.value.report
    assert report is not None
    assert report.assertions["tamper_detected"] is False
    assert "tamper_detected" in str(excinfo.value)


def test_bench_single_size():
    """Prueba un benchmark mínimo: corrección por iteración y sin comprobaciones de forma"""
    report = bench([2], repeats=1, seed=5)
    assert report.passed
    assert report.shape_checks == {}
    assert sorted(report.timings['algorithm']) == sorted(ALGORITHMS)
    assert all(name.endswith("_n2_r0") for name in report.assertions)


def _synthetic_timings(linear_ratio: float, constant_ratio: float) -> pd.DataFrame:
    rows = []
    for n in (10, 50):
        for name in ALGORITHMS:
            base = 10.0
            if name in LINEAR_ALGORITHMS:
                seconds = base * (linear_ratio if n == 50 else 1.0)
            elif name in CONSTANT_ALGORITHMS:
                seconds = base * (constant_ratio if n == 50 else 1.0)
            else:
                seconds = base * n
            per_item = n if name == "Trapdoor" else 1
            rows.append(create_timing_row(name, n, [seconds / 1000.0], per_item=per_item))
    return pd.DataFrame(rows, columns=TIMING_COLUMNS)


def test_shape_checks_accept_expected_growth():
    """Prueba que crecimiento lineal y costes constantes pasan"""
    report = BenchReport(timings=_synthetic_timings(linear_ratio=5.0, constant_ratio=1.2))
    _shape_checks(report, [10, 50])
    assert report.shape_checks and all(report.shape_checks.values())


def test_shape_checks_flag_deviations():
    """Prueba que una forma inesperada se marca como fallo"""
    report = BenchReport(timings=_synthetic_timings(linear_ratio=20.0, constant_ratio=3.0))
    _shape_checks(report, [10, 50])
    assert not report.shape_checks["Setup lineal"]
    assert not report.shape_checks["Reg constante"]
    assert not report.shape_checks["KeyGen constante"]
    assert not report.shape_checks["Trace lineal"]
    assert report.shape_checks["Trapdoor por elemento constante"]
    assert not report.passed


def test_shape_checks_cover_every_algorithm():
    """Prueba que los ocho algoritmos tienen comprobación de forma"""
    report = BenchReport(timings=_synthetic_timings(linear_ratio=5.0, constant_ratio=1.2))
    _shape_checks(report, [10, 50])
    assert set(CONSTANT_ALGORITHMS) | set(LINEAR_ALGORITHMS) | {"Trapdoor"} == set(ALGORITHMS)
    assert "KeyGen constante" in report.shape_checks
    assert "Trace lineal" in report.shape_checks
