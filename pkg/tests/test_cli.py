import io
import json

import pytest

from gbimod.cli import SpecError, build_instance, emit_cyclic, main, parse_spec
from gbimod.twocat import builtin, cyclic_example

SWAP_TEXT = """
[field]
m = 4

[quiver]
vertices = 2
arrow al: 1 -> 2
arrow be: 2 -> 1

[relations]
al*be
be*al

[group]
generator g order 4
maps e1 -> e2
maps e2 -> e1
maps al -> -1 * be
maps be -> al
"""


def same_action(a, b):
    if a.algebra.dim != b.algebra.dim or a.algebra.nv != b.algebra.nv:
        return False
    if sorted(a.mats) != sorted(b.mats):
        return False
    return all(a.mats[g] == b.mats[g] for g in a.mats)


# ---------------------------------------------------------------------------
# parsing


def test_round_trip_cyclic():
    for n in (2, 3):
        act = build_instance(parse_spec(emit_cyclic(n)))
        assert same_action(act, cyclic_example(n))


def test_parse_negative_coefficient_map():
    act = build_instance(parse_spec(SWAP_TEXT))
    assert same_action(act, builtin("signedswap"))


def test_parse_zeta_literal():
    text = """
[field]
m = 4
[quiver]
vertices = 1
arrow x: 1 -> 1
[relations]
x*x
[group]
generator g order 4
maps e1 -> e1
maps x -> zeta(4) * x
"""
    act = build_instance(parse_spec(text))
    assert same_action(act, builtin("kx2:c4"))


def test_parse_rational_relation():
    text = """
[quiver]
vertices = 1
arrow x: 1 -> 1
arrow y: 1 -> 1
[relations]
truncate = 3
x*x
y*y
x*y - 1/2 * y*x
[group]
generator g order 1
maps e1 -> e1
maps x -> x
maps y -> y
"""
    act = build_instance(parse_spec(text))
    assert act.algebra.dim == 4


def test_parse_truncate():
    spec = parse_spec("""
[quiver]
vertices = 1
arrow x: 1 -> 1
[relations]
truncate = 2
[group]
generator g order 2
maps e1 -> e1
maps x -> -1 * x
""")
    assert spec.truncate == 2
    act = build_instance(spec)
    assert act.algebra.dim == 2


def test_parse_errors_carry_line_numbers():
    with pytest.raises(SpecError, match="line 1"):
        parse_spec("vertices = 2")
    with pytest.raises(SpecError, match="line 1"):
        parse_spec("[nonsense]")
    with pytest.raises(SpecError, match="line 3"):
        parse_spec("[quiver]\nvertices = 1\narrow oops\n")
    with pytest.raises(SpecError, match="maps"):
        parse_spec("[quiver]\nvertices = 1\n[group]\nmaps e1 -> e1\n")
    with pytest.raises(SpecError):
        parse_spec("[quiver]\nvertices = 1\n")  # no group section
    with pytest.raises(SpecError, match="factor"):
        parse_spec("[quiver]\nvertices = 1\narrow x: 1 -> 1\n"
                   "[relations]\nx ** x\n[group]\ngenerator g order 1\n"
                   "maps e1 -> e1\nmaps x -> x\n")


def test_emit_rejects_tiny_instance():
    with pytest.raises(SpecError):
        emit_cyclic(1)


# ---------------------------------------------------------------------------
# command dispatch


def test_cells_command(capsys):
    assert main(["cells", "cyclic:2"]) == 0
    out = capsys.readouterr().out
    assert "two-sided cells (2; sizes 2, 2)" in out


def test_classify_command(capsys):
    assert main(["classify", "cyclic:6"]) == 0
    out = capsys.readouterr().out
    assert "total: 4" in out


def test_catalogue_command(capsys):
    assert main(["catalogue", "kx2:c2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("catalogue of kx2:c2: 4 labels")
    assert "Id(1;chi=z2:1)" in out


def test_table_command_json(capsys):
    assert main(["--json", "table", "kx2:c2"]) == 0
    tree = json.loads(capsys.readouterr().out)
    prods = tree["products"]
    assert prods["Id(1;chi=triv)"]["Id(1;chi=z2:1)"] == {"Id(1;chi=z2:1)": 1}
    assert prods["P(1,1;chi=triv)"]["P(1,1;chi=triv)"] == {
        "P(1,1;chi=triv)": 1, "P(1,1;chi=z2:1)": 1}


def test_adjunctions_command(capsys):
    assert main(["adjunctions", "kx2:c2"]) == 0
    out = capsys.readouterr().out
    assert "zigzag ok" in out and "FAIL" not in out


def test_adjunctions_rejects_hereditary(capsys):
    assert main(["adjunctions", "a2"]) == 1
    assert "AdjunctionError" in capsys.readouterr().err


def test_fiat_command(capsys):
    assert main(["fiat", "a2"]) == 0
    out = capsys.readouterr().out
    assert "self-injective: no" in out
    assert "fiat:           no" in out


def test_hcell_solve_command(capsys):
    assert main(["--json", "hcell-solve", "--max", "3"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["solutions"] == [[1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3]]
    assert tree["count"] == 3


def test_check_command_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(emit_cyclic(2)))
    assert main(["check", "-"]) == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out
    assert "FAIL" not in out


def test_demo_command(capsys):
    assert main(["signedswap-demo"]) == 0
    out = capsys.readouterr().out
    assert "order of the automorphism: 4" in out
    assert "a = -e1 + e2" in out
    assert "fourth power is the identity: yes" in out
    assert "n = 1" in out


def test_demo_command_json_deterministic(capsys):
    assert main(["--json", "signedswap-demo"]) == 0
    first = capsys.readouterr().out
    assert main(["--json", "signedswap-demo"]) == 0
    second = capsys.readouterr().out
    assert first == second
    tree = json.loads(first)
    assert tree["sqrt_poly"] == ["1/2 + 1/2*zeta(4)", "1/2 - 1/2*zeta(4)"]
    assert tree["witness"] == "-e1 + e2"


def test_unknown_instance_is_usage_error(capsys):
    assert main(["table", "nosuch"]) == 2
    assert "SpecError" in capsys.readouterr().err


def test_bad_example_size_is_usage_error(capsys):
    assert main(["example", "cyclic", "--n", "1"]) == 2
    assert "SpecError" in capsys.readouterr().err


def test_example_output_parses(capsys):
    assert main(["example", "cyclic", "--n", "4"]) == 0
    out = capsys.readouterr().out
    spec = parse_spec(out)
    assert spec.vertices == 4 and spec.m == 4


def test_instance_file(tmp_path, capsys):
    p = tmp_path / "inst.txt"
    p.write_text(SWAP_TEXT, encoding="utf-8")
    assert main(["catalogue", str(p)]) == 0
    out = capsys.readouterr().out
    assert "8 labels" in out
