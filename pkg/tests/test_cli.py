import time

import pytest

import cli
from cli import RunReport, build_parser, main, run_oracle, run_solve, run_verify
from relative_solver import solve_box
from sextic_field import embeddings_at
from sieve import plan_for_prime, siegel_sieve
from src.utils.error_handler import ConfigError
from src.utils.performance import reset_metrics
from tests.conftest import config_path

EXAMPLE1_CLASSES = {(0, 1, 0, 0, 0), (-2, 0, 0, 1, -1)}
EXAMPLE2_CLASSES = {(0, 1, 0, 0, 0), (1, 0, 0, 1, 0)}
EXAMPLE3_CLASSES = {(0, 1, 0, 0, 0), (0, 0, 0, 1, -1), (-4, 1, 0, -2, 0)}


def test_verify_known_elements(example1_config):
    assert run_verify(example1_config, "0,0,1,0,0,0") == 1
    assert run_verify(example1_config, (0, -2, 0, 0, 1, -1)) == 1
    assert run_verify(example1_config, "0,1,0,0,0,0") is None


def test_oracle_bounds(example1_config):
    assert run_oracle(example1_config, 0) == []
    with pytest.raises(ConfigError):
        run_oracle(example1_config, 11)
    with pytest.raises(ConfigError):
        run_oracle(example1_config, -1)


def test_report_json_round_trip(example1_config):
    report = RunReport(
        fingerprint="abc", name="example1", C="1e50", bounds={'B0': 3}, fallback={'bound': 1},
        sieve={'primes': [809], 'box_size': 49, 'survivor_count': 5}, relative=[], generators=[],
        timings={'sieve': 0.01},
    )
    again = RunReport.from_json(report.to_json())
    assert again == report
    assert 'timings' not in report.to_dict(with_timings=False)


def test_parser_subcommands():
    args = build_parser().parse_args(["--threads", "2", "oracle", "--oracle-bound", "2"])
    assert args.command == "oracle"
    assert args.oracle_bound == 2
    assert args.threads == 2
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_sieve_embedding_flag():
    args = build_parser().parse_args(["--config", config_path("example1"), "--sieve-embeddings", "1",
                                      "--primes", "2", "sieve"])
    config = cli._require_config(args)
    assert config.sieve_embeddings == (1,)
    assert config.num_primes == 2
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--sieve-embeddings", "2", "sieve"])


def test_published_survivor_count():
    config = cli._require_config(build_parser().parse_args(
        ["--config", config_path("example1_sieve809"), "sieve"]))
    bound = cli._bounds(config)
    assert (bound.B0, bound.row_strategy) == (152, "pinned")
    primes, box, survivors, _ = cli._sieve(config, bound.B0, 1, False)
    assert primes == [809]
    assert box == 305 ** 2
    assert len(survivors) == 122


def test_verbose_run_reports_stages(capsys):
    reset_metrics()
    assert main(["--verbose", "--config", config_path("example1_sieve809"), "sieve"]) == 0
    out = capsys.readouterr().out
    assert "Embedding cache" in out
    assert "Stage bounds: 1 call(s)" in out
    assert "Stage sieve: 1 call(s)" in out


def test_main_exit_codes(tmp_path):
    assert main(["unit", "--m", "2"]) == 0
    assert main(["unit", "--m", "4"]) == 2
    assert main(["verify", "0,0,1,0,0,0"]) == 2
    assert main(["--config", config_path("example1"), "verify", "1,2"]) == 2
    assert main(["--config", str(tmp_path / "missing.json"), "verify", "0,0,1,0,0,0"]) == 2
    assert main(["--config", config_path("example1"), "verify", "0,0,1,0,0,0"]) == 0


def test_reciprocal_command():
    assert main(["reciprocal", "--poly", "1,0,4,2,4,4,-1"]) == 0
    assert main(["reciprocal", "--poly", "1,0,-2"]) != 0
    assert main(["--config", config_path("example1"), "reciprocal"]) == 0


@pytest.fixture(scope="module")
def example1_report(example1_config):
    return run_solve(example1_config)


@pytest.mark.slow
def test_solve_example1(example1_report):
    assert set(example1_report.classes) == EXAMPLE1_CLASSES
    assert example1_report.bounds['B0'] >= 3
    assert example1_report.sieve['survivor_count'] <= example1_report.sieve['box_size']
    assert 'sieve_wall' in example1_report.timings
    assert RunReport.from_json(example1_report.to_json()).classes == example1_report.classes


@pytest.mark.slow
def test_solve_is_deterministic(example1_config, example1_report):
    again = run_solve(example1_config, threads=2)
    assert again.to_json(with_timings=False) == example1_report.to_json(with_timings=False)


@pytest.mark.slow
def test_solve_example2(example2_config):
    assert set(run_solve(example2_config).classes) == EXAMPLE2_CLASSES


@pytest.mark.slow
def test_solve_example3(example3_config):
    assert set(run_solve(example3_config).classes) == EXAMPLE3_CLASSES


@pytest.mark.slow
@pytest.mark.parametrize("name, classes, c", [
    ("example1", EXAMPLE1_CLASSES, 3),
    ("example2", EXAMPLE2_CLASSES, 3),
    ("example3", EXAMPLE3_CLASSES, 4),
])
def test_oracle_matches_solver(name, classes, c):
    found = run_oracle(config_path(name), c)
    assert set(found) == {t for t in classes if max(abs(v) for v in t) <= c}


@pytest.mark.slow
def test_cli_writes_report(tmp_path):
    out = tmp_path / "report.json"
    assert main(["--config", config_path("example1"), "--report", str(out), "solve"]) == 0
    assert set(RunReport.from_json(out.read_text()).classes) == EXAMPLE1_CLASSES


@pytest.mark.benchmark
def test_sieve_beats_unsieved_path(example1):
    plan = plan_for_prime(example1, 809)
    start = time.perf_counter()
    siegel_sieve(plan, 152)
    sieved = time.perf_counter() - start
    assert sieved <= 1.0
    start = time.perf_counter()
    solve_box(example1, embeddings_at(example1, 250), 152)
    unsieved = time.perf_counter() - start
    assert unsieved >= 20 * sieved
