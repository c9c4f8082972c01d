"""Germ documents and the command-line front end."""

import json

import pytest

from whitney.cli import main
from whitney.errors import ParseError
from whitney.germdoc import doc_to_text, integral_map_doc, parse_germ_document
from whitney.integral_maps import owu_normal_form

FIVE_SPACE = """\
# five-space front of the deformed cusp
n = 2
cap = 10
vars = t, lam
p1 = 5/2*t^3 + 3/2*lam*t
p2 = t^3
q1 = t^2
q2 = lam
r = t^5 + lam*t^3
"""

CUSP = """\
n = 1
cap = 10
vars = t
p1 = 5/2*t^3
q1 = t^2
r = t^5
"""

UV21 = """\
n = 2
u = 1/2*x2^2
v = x1*x2
complete = true
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# -- document parsing ---------------------------------------------------------------------


def test_parse_full_document():
    doc = parse_germ_document(FIVE_SPACE)
    assert doc.kind == "full"
    f = doc.to_integral_map()
    assert f.n == 2 and f.cap == 10
    assert f.source.names == ("t", "lam")


def test_parse_uv_document():
    doc = parse_germ_document(UV21)
    assert doc.kind == "uv"
    f = doc.to_integral_map()
    assert f.p_component(0).render(f.source.names) == "1/3*x2^3"


def test_document_round_trip():
    f = owu_normal_form(2, 1, cap=8)
    text = doc_to_text(integral_map_doc(f))
    back = parse_germ_document(text).to_integral_map()
    assert back == f


def test_document_errors():
    with pytest.raises(ParseError):
        parse_germ_document("cap = 4\np1 = x1")          # missing n
    with pytest.raises(ParseError):
        parse_germ_document("n = 1\np1 = t\nq1 = t")     # missing r
    with pytest.raises(ParseError):
        parse_germ_document("n = 1\nn = 2\nu = x1\nv = x1")  # duplicate key
    with pytest.raises(ParseError):
        # unknown variables surface when the expressions are parsed
        parse_germ_document("n = 1\nu = bogusvar\nv = x1").to_integral_map()


# -- CLI ------------------------------------------------------------------------------------


def test_normal_form_command(capsys):
    assert main(["normal-form", "--n", "2", "--k", "1"]) == 0
    out = capsys.readouterr().out
    assert "p1 = 1/3*x2^3" in out
    assert "r = 1/3*x1*x2^3" in out


def test_normal_form_range_exit_code(capsys):
    assert main(["normal-form", "--n", "1", "--k", "1"]) == 2


def test_check_legendre_five_space(tmp_path, capsys):
    path = write(tmp_path, "five.germ", FIVE_SPACE)
    assert main(["check", path, "--mode", "legendre", "--order", "4"]) == 0
    assert "verdict: pass" in capsys.readouterr().out


def test_check_contact_cusp_fails(tmp_path, capsys):
    path = write(tmp_path, "cusp.germ", CUSP)
    assert main(["check", path, "--mode", "contact", "--order", "4",
                 "--json"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "fail"
    assert payload["dims"]["deficiency"] == 1
    assert payload["witnesses"]


def test_check_malformed_exit(tmp_path, capsys):
    path = write(tmp_path, "bad.germ", "n = 1\np1 = t\nq1 = t\nr = t\nvars = t\n")
    assert main(["check", path]) == 2


def test_check_rejects_parameterized_germ(tmp_path):
    path = write(tmp_path, "F.germ",
                 "n = 1\ncap = 8\nvars = t\nparams = lam\n"
                 "u = t^2\nv = 5/2*t^3 + 3/2*lam*t\ncomplete = true\n")
    assert main(["check", path, "--order", "2"]) == 2


def test_check_cap_too_small_is_inconclusive(tmp_path):
    path = write(tmp_path, "five.germ", FIVE_SPACE)
    # truncation too small to run the requested order
    assert main(["check", path, "--mode", "contact", "--order", "10"]) == 3


def test_classify_commands(tmp_path, capsys):
    path = write(tmp_path, "uv.germ", UV21)
    assert main(["classify", path, "--order", "3"]) == 0
    out = capsys.readouterr().out
    assert "type 1" in out
    cusp = write(tmp_path, "cusp.germ", CUSP)
    assert main(["classify", cusp, "--order", "4"]) == 1


def test_complete_command(tmp_path, capsys):
    path = write(tmp_path, "uv.germ", UV21)
    assert main(["complete", path]) == 0
    assert "r = 1/3*x1*x2^3" in capsys.readouterr().out


def test_project_lift_round_trip(tmp_path, capsys):
    cusp = write(tmp_path, "cusp.germ", CUSP)
    iso_path = str(tmp_path / "iso.germ")
    assert main(["project", cusp, "--out", iso_path]) == 0
    iso_text = open(iso_path).read()
    assert "e = t^5" in iso_text
    assert main(["lift", iso_path]) == 0
    out = capsys.readouterr().out
    assert "r = t^5" in out


def test_extend_command(tmp_path, capsys):
    F = write(tmp_path, "F.germ",
              "n = 1\ncap = 10\nvars = t\nparams = lam\n"
              "u = t^2\nv = 5/2*t^3 + 3/2*lam*t\ncomplete = true\n")
    G = write(tmp_path, "G.germ",
              "n = 1\ncap = 10\nvars = t\nparams = mu\n"
              "u = t^2 + mu*t^4\nv = 5/2*t^3\ncomplete = true\n")
    assert main(["extend", F, G]) == 0
    out = capsys.readouterr().out
    assert "params = lam, mu" in out


def test_front_csv(tmp_path, capsys):
    cusp = write(tmp_path, "cusp.germ", CUSP)
    assert main(["front", cusp, "--samples", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "q1,r"
    assert len(lines) == 6
    # the cusp point set: q = t^2, r = t^5 at t = -1 gives (1, -1)
    assert lines[1] == "1,-1"


def test_front_param_grid(tmp_path, capsys):
    F = write(tmp_path, "F.germ",
              "n = 1\ncap = 10\nvars = t\nparams = lam\n"
              "u = t^2\nv = 5/2*t^3 + 3/2*lam*t\ncomplete = true\n")
    assert main(["front", F, "--samples", "3", "--param-grid", "lam=-1:1:3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "q1,r,lam"
    assert len(lines) == 1 + 3 * 3


def test_front_rejects_large_n(tmp_path):
    doc = doc_to_text(integral_map_doc(owu_normal_form(3, 0, cap=6)))
    path = write(tmp_path, "f30.germ", doc)
    assert main(["front", path]) == 2


def test_reports_byte_identical(tmp_path, capsys):
    path = write(tmp_path, "five.germ", FIVE_SPACE)
    main(["check", path, "--mode", "legendre", "--order", "3", "--json"])
    first = capsys.readouterr().out
    main(["check", path, "--mode", "legendre", "--order", "3", "--json"])
    second = capsys.readouterr().out
    assert first == second
