import json

import numpy as np
import pytest

from ncsym import ratexpr as rx
from ncsym.cli import main
from ncsym.girard import girard_positive
from ncsym.linalg import tuple_to_json_dict
from ncsym.parsing import parse
from ncsym.words import MatrixTuple


@pytest.fixture
def files(tmp_path):
    def dump(name, t):
        path = tmp_path / name
        path.write_text(json.dumps(tuple_to_json_dict(t)))
        return str(path)

    eye2 = MatrixTuple((np.eye(2, dtype=complex),))
    nil = MatrixTuple((np.array([[0, 1], [0, 0]], dtype=complex),))
    pair = MatrixTuple((np.array([[4.0]]), np.array([[2.0]])))
    return {
        "id2": dump("id2.json", eye2),
        "nil": dump("nil.json", nil),
        "pair42": dump("pair42.json", pair),
        "tmp": tmp_path,
    }


def test_girard_output_parses_to_the_generated_expression(capsys):
    assert main(["girard", "--n", "3"]) == 0
    text = capsys.readouterr().out.strip()
    assert rx.ncpoly_equal(parse(text), girard_positive(3).P)


def test_girard_with_verification(capsys):
    assert main(["girard", "--n", "2", "--verify", "--levels", "2",
                 "--trials", "3", "--seed", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    report = json.loads(lines[1])
    assert report["passed"] is True


def test_sqrt_enumerate(files, capsys):
    assert main(["sqrt", "--matrix", files["id2"], "--enumerate"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["exists"] is True
    assert len(out["enumeration"]["roots"]) == 2


def test_sqrt_nonexistent(files, capsys):
    assert main(["sqrt", "--matrix", files["nil"], "--enumerate"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["exists"] is False
    assert out["enumeration"]["roots"] == []


def test_pi_and_fiber(files, capsys):
    assert main(["pi", "--input", files["pair42"]]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["d"] == 3
    assert out["entries"][0][0][0] == [3.0, 0.0]

    assert main(["fiber", "--input", files["pair42"]]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == 2


def test_decompose(capsys):
    assert main(["decompose", "--expr", "x*y + y*x"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["genpoly"] == "-2*M0 + 2*U^2"
    assert main(["decompose", "--expr", "x*y"]) == 2  # not symmetric
    assert main(["decompose", "--expr", "x*(y"]) == 3  # parse error
    assert main(["decompose", "--expr", "alpha"]) == 2  # wrong kind


def test_verify_suite(capsys):
    assert main(["verify", "--suite", "pascoe", "--seed", "7"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] is True
    assert {c["name"] for c in out["checks"]} >= {"pi-values-match",
                                                  "entry-1-4-discrepancy"}


def test_check_domain_predicates(files, capsys):
    assert main(["check-domain", "--pred", "Q", "--matrix",
                 files["id2"]]) == 0
    assert json.loads(capsys.readouterr().out)["value"] is True

    assert main(["check-domain", "--pred", "I", "--matrix",
                 files["nil"]]) == 0
    assert json.loads(capsys.readouterr().out)["value"] is False

    assert main(["check-domain", "--pred", "So", "--tuple",
                 files["pair42"]]) == 0
    assert json.loads(capsys.readouterr().out)["value"] is True

    assert main(["check-domain", "--pred", "D", "--matrix", files["id2"],
                 "--centers", "1", "--radius", "0.5"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] is True


def test_check_domain_bdelta(files, capsys):
    delta = files["tmp"] / "delta.json"
    delta.write_text(json.dumps([["x"]]))
    assert main(["check-domain", "--pred", "Bdelta", "--tuple", files["nil"],
                 "--delta", str(delta)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] is False  # nilpotent block norm is exactly 1
    assert out["residuals"]["block-norm"] == pytest.approx(1.0)


def test_check_domain_ugamma(files, capsys, tmp_path):
    w = MatrixTuple((np.array([[0, 1], [1, 0]], dtype=complex),
                     np.diag([1.0, 4.0]).astype(complex)))
    path = tmp_path / "ux.json"
    path.write_text(json.dumps(tuple_to_json_dict(w)))
    assert main(["check-domain", "--pred", "Ugamma", "--tuple", str(path),
                 "--centers", "1,4", "--radius", "0.4"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] is True


def test_json_output_is_deterministic(files, capsys):
    main(["sqrt", "--matrix", files["id2"], "--enumerate"])
    first = capsys.readouterr().out
    main(["sqrt", "--matrix", files["id2"], "--enumerate"])
    assert capsys.readouterr().out == first

    main(["verify", "--suite", "symbasis", "--seed", "9"])
    first = capsys.readouterr().out
    main(["verify", "--suite", "symbasis", "--seed", "9"])
    assert capsys.readouterr().out == first
