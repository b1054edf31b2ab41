import json

from wakimoto.cli import EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION, main, parse_expression, _load
from wakimoto.fields import FieldExpr
from wakimoto.ope import contract


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ope_e_theta_f_theta(capsys):
    code, out, err = run(capsys, "ope", "--algebra", "B2", "E[theta]", "F[theta]")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["schema"].startswith("wakimoto/ope")
    assert set(data["poles"]) == {"1", "2"}
    assert data["poles"]["2"]["text"] == "k"


def test_ope_gamma_gamma_empty(capsys):
    code, out, err = run(capsys, "ope", "--algebra", "B2", "gamma[1]", "gamma[2]")
    assert code == EXIT_OK
    assert json.loads(out)["poles"] == {}


def test_ope_T_screening(capsys):
    code, out, err = run(capsys, "ope", "--algebra", "B2", "T", "s[1]")
    assert code == EXIT_OK
    data = json.loads(out)
    assert set(data["poles"]) == {"1", "2"}


def test_ope_parse_error(capsys):
    code, out, err = run(capsys, "ope", "--algebra", "B2", "E[nope]", "F[theta]")
    assert code == EXIT_INPUT
    assert "error" in err


def test_ope_expression_arithmetic():
    cs = _load("B2")
    e = parse_expression(cs, "2*gamma[1]*beta[1] - d(gamma[1])*1/2")
    g = FieldExpr.prim(cs.ctx.gamma_kind(0), 0)
    b = FieldExpr.prim(cs.ctx.beta_kind(0), 0)
    from fractions import Fraction

    expected = (g * b).scale(2) - FieldExpr.prim(cs.ctx.gamma_kind(0), 0, 1).scale(
        Fraction(1, 2)
    )
    assert e.equals(expected)


def test_verify_a1_all(capsys):
    code, out, err = run(capsys, "verify", "--algebra", "A1", "--suite", "all")
    assert code == EXIT_OK
    data = json.loads(out)
    assert all(v["status"] == "pass" for v in data["suites"].values())


def test_verify_naive_second_kind(capsys):
    code, out, err = run(
        capsys,
        "verify", "--algebra", "B2", "--suite", "naive-second-kind", "--direction", "2",
    )
    assert code == EXIT_OK  # the diagnostic is the expected outcome
    data = json.loads(out)
    details = data["suites"]["naive-second-kind"]["details"]
    assert details["matches_expected_shape"] is True
    assert "gamma[1]" in details["third_order_pole"]


def test_verify_bad_algebra(capsys):
    code, out, err = run(capsys, "verify", "--algebra", "Z9")
    assert code == EXIT_INPUT


def test_screen_second_kind_b2_direction2(capsys):
    code, out, err = run(
        capsys,
        "screen", "--algebra", "B2", "--direction", "2", "--kind", "second", "--verify",
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["series"] is True
    assert data["status"] == "pass"
    assert data["checks"]["T"]["status"] == "ok"


def test_screen_first_kind(capsys):
    code, out, err = run(
        capsys, "screen", "--algebra", "A1", "--direction", "1", "--verify"
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["status"] == "pass"


def test_realize_latex_and_json(capsys):
    code, out, err = run(capsys, "realize", "--algebra", "A1", "--format", "latex")
    assert code == EXIT_OK
    assert "\\partial" in out and "\\beta" in out
    code, out, err = run(capsys, "realize", "--algebra", "B2", "--format", "json")
    data = json.loads(out)
    assert data["dual_coxeter"] == 3
    assert "E[theta]" in data["currents"]


def test_verify_osp22(capsys):
    code, out, err = run(capsys, "verify", "--algebra", "OSP22", "--suite", "currents")
    assert code == EXIT_OK


def test_verify_custom_cartan_json(tmp_path, capsys):
    p = tmp_path / "alg.json"
    p.write_text('{"cartan_matrix": [[2, -1], [-1, 2]], "name": "custom-a2"}')
    code, out, err = run(capsys, "verify", "--algebra", str(p), "--suite", "currents")
    assert code == EXIT_OK


def test_verify_exit_code_on_math_failure(capsys, monkeypatch):
    import wakimoto.cli as cli
    from wakimoto.currents import SweepViolation

    def broken(cs, pairs=None):
        return [SweepViolation((("e", (1,)), ("f", (1,))), 2, "injected")]

    monkeypatch.setattr(cli, "verify_current_algebra", broken)
    code, out, err = run(capsys, "verify", "--algebra", "A1", "--suite", "currents")
    assert code == EXIT_VERIFICATION


def test_json_roundtrip():
    from wakimoto.render import fieldexpr_from_json, fieldexpr_to_json, ope_from_json, ope_to_json

    cs = _load("B2")
    expr = cs.currents[("f", (1, 2))]
    data = fieldexpr_to_json(expr)
    back = fieldexpr_from_json(data)
    assert back.equals(expr)
    # a screening current exercises powers and vertices
    from wakimoto.screening import second_kind_mult_one

    s = second_kind_mult_one(cs, 0)
    back = fieldexpr_from_json(fieldexpr_to_json(s.expr))
    assert back.equals(s.expr)
    res = contract(cs.ctx, cs.currents[("e", (1, 2))], cs.currents[("f", (1, 2))])
    rt = ope_from_json(json.loads(json.dumps(ope_to_json(res))))
    for q in set(res.poles) | set(rt.poles):
        assert rt.order(q).equals(res.order(q))
