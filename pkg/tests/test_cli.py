import json

import pytest  # type: ignore

from hermgenus import selftest
from hermgenus.cli import main as cli
from hermgenus.config import DEFAULT_SEED, OutputFormat, parse_config
from hermgenus.exceptions import ExitCode, VerificationError
from hermgenus.genus import is_neighbour
from hermgenus.ideal import prime_decomposition
from hermgenus.lattice import HermLattice
from hermgenus.parse import parse_lattice, write_lattice

from .conftest import data_path


EXAMPLE = data_path("example.json")


def run_json(capsys, *argv):
    code = cli.main(["--format", "json"] + list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_config_defaults():
    config = parse_config()
    assert config.prime_bound == 1000
    assert config.seed == DEFAULT_SEED
    assert config.oracle_depth is None
    assert config.output_format is OutputFormat.TEXT
    assert config.verify
    assert config.asdict()["output_format"] == "text"


@pytest.mark.parametrize("kwargs", [
    {"prime_bound": 2},
    {"oracle_depth": 0},
    {"output_format": "xml"},
    {"output_format": ""},
])
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        parse_config(**kwargs)


def test_unknown_format_names_choices():
    with pytest.raises(ValueError) as info:
        parse_config(output_format="xml")
    assert "one of: text, json" in str(info.value)


def test_field_info(capsys):
    code, doc, _ = run_json(capsys, "field-info", "--d", "-17")
    assert code == ExitCode.SUCCESS
    assert doc["verb"] == "field-info"
    assert doc["class_number"] == 4
    assert doc["field"]["d"] == -17
    assert [q["p"] for q in doc["ramified_primes"]] == [2, 17]
    assert [q["e"] for q in doc["ramified_primes"]] == [2, 1]


def test_field_info_text(capsys):
    assert cli.main(["field-info", "--d", "-17"]) == 0
    out = capsys.readouterr().out
    assert "[class_number]\n  4" in out


def test_class_group(capsys):
    code, doc, _ = run_json(capsys, "class-group", "--d", "-17")
    assert code == 0
    assert doc["class_group"]["invariants"] == [4]
    assert doc["c0"]["order"] == 2
    assert doc["c0"]["index"] == 2


def test_bad_field(capsys):
    code, doc, err = run_json(capsys, "field-info", "--d", "-4")
    assert code == ExitCode.INPUT_ERROR
    assert doc is None
    assert err.startswith("error: ")


def test_analyze(capsys):
    code, doc, _ = run_json(capsys, "analyze", EXAMPLE)
    assert code == 0
    assert doc["det_profile"] == {"primes": [2, 17], "order": 4}
    assert [row["p"] for row in doc["local"]] == [2, 17]
    assert all(row["det_group"] == "E1" for row in doc["local"])
    assert doc["scale"]["norm"] == "17"
    assert doc["norm"]["norm"] == "1156"


def test_analyze_rank_one(capsys):
    code, doc, _ = run_json(capsys, "analyze", data_path("rank_one.json"))
    assert code == 0
    assert doc["det_profile"]["primes"] == []


@pytest.mark.parametrize("argv, expected", [
    (["analyze", data_path("bad_gram.json")], ExitCode.INPUT_ERROR),
    (["analyze", data_path("missing.json")], ExitCode.INPUT_ERROR),
    (["special-genera", data_path("rank_one.json")], ExitCode.PRECONDITION),
    (["special-genera", EXAMPLE, "--prime-bound", "2"], ExitCode.INPUT_ERROR),
    (["special-genera", EXAMPLE, "--prime-bound", "3"], ExitCode.PRECONDITION),
    (["neighbour", EXAMPLE, "--p", "4"], ExitCode.INPUT_ERROR),
    (["neighbour", EXAMPLE, "--p", "17", "--index", "1"], ExitCode.INPUT_ERROR),
    (["neighbour", EXAMPLE, "--p", "2"], ExitCode.PRECONDITION),
])
def test_exit_codes(capsys, argv, expected):
    code, doc, err = run_json(capsys, *argv)
    assert code == expected
    assert doc is None
    assert err.startswith("error: ")


def test_prime_search_message(capsys):
    code, _, err = run_json(
        capsys, "special-genera", EXAMPLE, "--prime-bound", "3")
    assert code == ExitCode.PRECONDITION
    assert "Prime search exhausted below 3" in err


def test_verification_failure(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise VerificationError("representatives collide")

    monkeypatch.setattr(cli, "special_genera", broken)
    code, _, err = run_json(capsys, "special-genera", EXAMPLE)
    assert code == ExitCode.VERIFICATION
    assert "representatives collide" in err


def test_special_genera(capsys, example):
    code, doc, _ = run_json(capsys, "special-genera", EXAMPLE)
    assert code == 0
    group = doc["group"]
    assert group["order"] == 4
    assert group["invariant_factors"] == [4]
    assert group["c_c0_index"] == 2
    assert group["e_r_index"] == 2
    (gen,) = group["generators"]
    assert gen["prime"]["p"] == 3
    assert gen["image_order"] == 4
    reps = doc["representatives"]
    assert [r["exponents"] for r in reps] == [[0], [1], [2], [3]]
    lattices = [parse_lattice(r["lattice"]) for r in reps]
    assert lattices[0] == example
    assert len(set(lattices)) == 4


def test_special_genera_deterministic(capsys):
    cli.main(["--format", "json", "special-genera", EXAMPLE])
    first = capsys.readouterr().out
    cli.main(["--format", "json", "special-genera", EXAMPLE])
    assert capsys.readouterr().out == first


def test_neighbour(capsys, example, tmp_path):
    f17 = example.field
    P3 = prime_decomposition(f17, 3)[0]
    code, doc, _ = run_json(capsys, "neighbour", EXAMPLE, "--p", "3")
    assert code == 0
    assert doc["prime"]["p"] == 3
    L1 = parse_lattice(doc["neighbour"])
    expected = HermLattice(example.space, [
        (P3.ideal, [f17.one, f17.zero]),
        (P3.conj().ideal.inverse(), [f17.zero, f17.one]),
    ])
    assert L1 == expected

    avoid = str(tmp_path / "avoid.json")
    write_lattice(L1, avoid)
    code, doc, _ = run_json(
        capsys, "neighbour", EXAMPLE, "--p", "3", "--avoid", avoid)
    assert code == 0
    other = parse_lattice(doc["neighbour"])
    assert other != L1
    assert is_neighbour(example, other, P3)


def test_neighbour_conjugate_prime(capsys, example):
    f17 = example.field
    P3bar = prime_decomposition(f17, 3)[1]
    code, doc, _ = run_json(
        capsys, "neighbour", EXAMPLE, "--p", "3", "--index", "1")
    assert code == 0
    assert is_neighbour(example, parse_lattice(doc["neighbour"]), P3bar)


def test_selftest_suite(capsys):
    code, doc, _ = run_json(capsys, "selftest", "--suite", "rho_map")
    assert code == 0
    assert doc["suites"]["rho_map"]["passed"]


def test_selftest_failure(capsys, monkeypatch):
    def failing(config):
        raise AssertionError("forced")

    monkeypatch.setitem(selftest.suites, "rho_map", failing)
    code, doc, _ = run_json(capsys, "selftest", "--suite", "rho_map")
    assert code == ExitCode.VERIFICATION
    assert doc["exit_code"] == 3
    assert not doc["suites"]["rho_map"]["passed"]


def test_options_after_verb(capsys):
    code = cli.main(["analyze", EXAMPLE, "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["det_profile"]["primes"] == [2, 17]


@pytest.mark.parametrize("argv, seed, fmt", [
    (["analyze", EXAMPLE], None, "text"),
    (["--seed", "5", "analyze", EXAMPLE], 5, "text"),
    (["analyze", EXAMPLE, "--seed", "5"], 5, "text"),
    (["--format", "json", "--seed", "5", "analyze", EXAMPLE], 5, "json"),
    (["--format", "text", "analyze", EXAMPLE, "--format", "json"], None, "json"),
])
def test_global_options(argv, seed, fmt):
    args = cli.get_args(argv)
    assert args.seed == seed
    assert args.format == fmt
    assert args.verb == "analyze"


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["analyze"],
    ["neighbour", EXAMPLE],
    ["analyze", EXAMPLE, "--format", "xml"],
    ["--format", "xml", "analyze", EXAMPLE],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == ExitCode.INPUT_ERROR
    assert "error:" in capsys.readouterr().err
