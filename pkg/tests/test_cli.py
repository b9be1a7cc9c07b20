import json
import subprocess
import sys

import pytest

from thompcert.cli import main, render_dot
from thompcert.elements import IDENTITY, generator


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eq_commutator(capsys):
    code, out, _ = run(capsys, "eq", "A B A^-1 B^-1", "ID")
    assert (code, out) == (0, "false\n")


def test_arithmetic_verbs(capsys):
    assert run(capsys, "eval", "A", "1/2^3")[1] == "1/2^2\n"
    assert run(capsys, "inv", "ID")[1] == "* -> * ; [1]\n"
    assert run(capsys, "compose", "A", "A^-1")[1] == "* -> * ; [1]\n"
    assert run(capsys, "reduce", "((**)(**)) -> ((**)(**))")[1] == "* -> * ; [1]\n"
    assert run(capsys, "support", "B")[1] == "cover {[1/2^1,2/2^1]}\nsize 1/2^1\n"


def test_certify_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "cert.json"
    assert run(capsys, "certify", "--class", "V", "--dim", "2", "--word", "P0", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and out.endswith("overall: pass\n")


@pytest.mark.parametrize("field,value,check", [
    ("witnesses", 0, "V3"),
    ("chain", 0, "V0"),
    ("facts", 0, "V4"),
])
def test_tampered_certificate(capsys, tmp_path, field, value, check):
    path = tmp_path / "cert.json"
    run(capsys, "certify", "--class", "T", "--dim", "2", "--word", "B", "--out", str(path))
    data = json.loads(path.read_text())
    if field == "witnesses":
        data["witnesses"][0] = "* -> * ; [1]"
    elif field == "chain":
        data["chain"][0] = data["chain"][1]
    else:
        data["facts"] = data["facts"][1:]
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert f"{check}: FAIL" in out


def test_structural_error_exit_code(capsys, tmp_path):
    path = tmp_path / "cert.json"
    path.write_text('{"class": "T", "k": 2}')
    assert run(capsys, "verify", str(path))[0] == 2


def test_exit_codes(capsys):
    assert run(capsys, "eq", "A Q", "ID")[0] == 2
    assert run(capsys, "eval", "C", "1/2", "--class", "F")[0] == 3
    assert run(capsys, "transport", "--class", "T", "--u2", "{[2/2^2,3/2^2]}",
               "--u1", "{[0/2^2,1/2^2]}", "--x", "5/2^3")[0] == 3
    assert run(capsys, "bridson", "--class", "T", "--dim", "1", "A")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_transport(capsys):
    code, out, _ = run(capsys, "transport", "--class", "T", "--u2", "{[2/2^2,3/2^2]}",
                       "--u1", "{[0/2^2,1/2^2]}", "--x", "3/2^3")
    assert code == 0 and "->" in out
    code, out, _ = run(capsys, "transport", "--class", "F", "--within", "[0/2^1,1/2^1]",
                       "--u2", "{[1/2^3,2/2^3]}", "--u1", "{[1/2^2,2/2^2]}")
    assert code == 0


def test_decompose_and_bridson(capsys):
    code, out, _ = run(capsys, "decompose", "C", "--class", "T", "--eps", "1/2^2")
    assert code == 0 and len(out.splitlines()) > 1
    code, out, _ = run(capsys, "bridson", "--class", "T", "--dim", "3", "--eps", "1/2^2", "B")
    assert code in (0, 3)
    code, out, _ = run(capsys, "bridson", "--class", "T", "--dim", "1", "B")
    assert code == 0 and "W3: pass" in out


def test_qop(capsys):
    assert run(capsys, "qop", "apply", "--q", "3", "--group", "symmetric",
               "- -> - ; (0 1 2)", "002")[1] == "110\n"
    assert run(capsys, "qop", "inv", "--q", "3", "--group", "symmetric",
               "- -> - ; (0 1 2)")[1] == "- -> - ; (0 2 1)\n"
    assert run(capsys, "qop", "support", "0 -> 1 ; id | 1 -> 0 ; id")[1] == "cover {0,1}\nsize 1\n"
    assert run(capsys, "qop", "eq", "0 -> 0 ; id | 1 -> 1 ; id", "- -> - ; id")[1] == "true\n"
    assert run(capsys, "qop", "apply", "0 -> 1 ; id | 1 -> 0 ; id", "")[0] == 3


def test_q_certificate_cli(capsys, tmp_path):
    path = tmp_path / "q.json"
    code, _, _ = run(capsys, "certify", "--class", "Vq", "--q", "3", "--group", "symmetric",
                     "--dim", "2", "0 -> 0 ; (0 1) | 1 -> 1 ; id | 2 -> 2 ; id", "--out", str(path))
    assert code == 0
    assert run(capsys, "verify", "--in", str(path))[0] == 0


def test_render_dot():
    dot = render_dot(generator("A"))
    assert dot == render_dot(generator("A"))
    assert dot.count('shape=plaintext') == 6
    ident = render_dot(IDENTITY)
    assert "d_root [shape=plaintext" in ident and "r_root [shape=plaintext" in ident
    pi = render_dot(generator("P0"))
    assert 'r_00 [shape=plaintext, label="2"]' in pi and 'r_01 [shape=plaintext, label="1"]' in pi


def test_byte_determinism(tmp_path):
    outs = []
    for _ in range(2):
        res = subprocess.run([sys.executable, "-m", "thompcert", "certify", "--class", "T",
                              "--dim", "2", "--word", "C"], capture_output=True, check=True)
        outs.append(res.stdout)
    assert outs[0] == outs[1]
