from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liepower.cli import ParseError, main, parse_functor_expr
from liepower.functors import Compose, DirectSum, ExteriorPower, Id, LiePower, RestrictedLiePower, Tensor, TensorPower


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_examples():
    assert parse_functor_expr("L^4") == LiePower(4)
    assert parse_functor_expr("Ext^2 o L^2") == Compose(ExteriorPower(2), LiePower(2))
    assert parse_functor_expr("(Id * L^3) + (Ext^2 o L^2)") == DirectSum(
        (Tensor((Id(), LiePower(3))), Compose(ExteriorPower(2), LiePower(2)))
    )


def test_compose_is_left_associative_and_tightest():
    assert parse_functor_expr("L^2 o L^2 o Id") == Compose(Compose(LiePower(2), LiePower(2)), Id())
    assert parse_functor_expr("Id * L^2 o L^2") == Tensor((Id(), Compose(LiePower(2), LiePower(2))))
    assert parse_functor_expr("Id + Id * Id") == DirectSum((Id(), Tensor((Id(), Id()))))


@pytest.mark.parametrize(
    "text,pos",
    [("", 0), ("L^", 0), ("(Id", 3), ("Id Id", 3), ("Id + L^0", 5), ("Id +", 4), ("Ext^2 o", 7)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_functor_expr(text)
    assert info.value.position == pos
    assert info.value.expected


def asts(depth: int):
    atom = st.one_of(
        st.just(Id()),
        st.builds(LiePower, st.integers(1, 9)),
        st.builds(RestrictedLiePower, st.integers(1, 9)),
        st.builds(ExteriorPower, st.integers(0, 9)),
        st.builds(TensorPower, st.integers(1, 9)),
    )
    if depth == 0:
        return atom
    sub = asts(depth - 1)
    return st.one_of(
        atom,
        st.builds(Compose, sub, sub),
        st.builds(lambda xs: Tensor(tuple(xs)), st.lists(sub, min_size=2, max_size=3)),
        st.builds(lambda xs: DirectSum(tuple(xs)), st.lists(sub, min_size=2, max_size=3)),
    )


@settings(max_examples=200, deadline=None)
@given(asts(4))
def test_pretty_print_round_trip(e):
    assert parse_functor_expr(str(e)) == e


def test_witt(capsys):
    code, out, _ = run(capsys, "witt", "--rank", "2", "--degree", "6")
    doc = json.loads(out)
    assert code == 0 and doc["results"] == {"dimension": 9}
    assert doc["schema"] == 1
    assert set(doc) == {"schema", "command", "inputs", "ring", "truncation", "results", "verdict", "wall_time_ms"}


def test_verify_connectivity_exit_zero(capsys):
    code, out, _ = run(capsys, "verify-connectivity", "--n", "4", "--k", "0", "--ring", "f2")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "Verified" and doc["truncation"] == 3


def test_pi_reports_free_rank(capsys):
    code, out, _ = run(capsys, "pi", "--functor", "L^2", "--em", "1", "--ring", "z", "--max-i", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["results"]["pi"]["2"]["free_rank"] == 1


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "pi", "--functor", "L^", "--em", "1", "--max-i", "2")[0] == 2
    assert run(capsys, "witt", "--rank", "two", "--degree", "2")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "sharpness", "--n", "3", "--k", "0", "--ring", "f2")[0] == 2
    assert run(capsys, "restricted-check", "--n", "1", "--k", "0", "--i", "1", "--ring", "z")[0] == 2
    assert run(capsys, "verify-connectivity", "--n", "4", "--k", "0", "--truncation", "1")[0] == 2


def test_resource_cap_exit_two(capsys):
    code, out, _ = run(capsys, "verify-connectivity", "--n", "6", "--k", "0", "--ring", "z", "--max-dim", "10")
    assert code == 2 and json.loads(out)["verdict"] == "Inconclusive"


def test_violated_exit_one(capsys):
    code, out, _ = run(capsys, "restricted-check", "--n", "1", "--k", "0", "--i", "1-3", "--ring", "f2")
    assert code == 1 and json.loads(out)["verdict"] == "Violated"
    code, _, _ = run(capsys, "restricted-check", "--n", "1", "--k", "0", "--i", "1-3", "--ring", "f2", "--convention", "lambda0")
    assert code == 0


def test_json_is_byte_identical_across_runs_and_threads(capsys):
    args = ["verify-connectivity", "--n", "2-4", "--k", "0-1", "--ring", "z,f2", "--deterministic", "--seed", "7"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    _, threaded, _ = run(capsys, *args, "--threads", "3")
    assert first == second == threaded
    doc = json.loads(first)
    assert [(r["ring"], r["k"]) for r in doc["results"]][:2] == [("Z", 0), ("Z", 1)]


def test_selftest_deterministic(capsys):
    _, a, _ = run(capsys, "selftest", "--seed", "3", "--deterministic")
    _, b, _ = run(capsys, "selftest", "--seed", "3", "--deterministic")
    assert a == b and json.loads(a)["verdict"] == "Verified"


def test_tsv_and_pretty(capsys):
    code, out, _ = run(capsys, "lambda-basis", "--i", "3", "--n", "2", "--bound", "2", "--format", "tsv")
    assert code == 0 and out.splitlines()[0] == "monomial\tindices" and len(out.splitlines()) == 3
    code, out, _ = run(capsys, "ce", "--n", "2-3", "--rank", "2", "--format", "pretty")
    assert code == 0 and "verdict=Verified" in out.splitlines()[0]


def test_lyndon_and_sharpness(capsys):
    code, out, _ = run(capsys, "lyndon", "--rank", "2", "--degree", "3")
    doc = json.loads(out)
    assert doc["results"]["count"] == 2
    code, out, _ = run(capsys, "sharpness", "--n", "1", "--k", "0", "--ring", "z")
    assert code == 0 and json.loads(out)["results"][0]["witness_is_cycle"] is True
