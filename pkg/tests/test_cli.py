import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relator_lab.cli import SCHEMA, DSLError, document_from, format_document, parse, parse_file, run
from relator_lab.core import Coeff, CyclicGroup, RelativePresentation, SignedLetter, from_atoms

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
COMMUTATOR = str(SAMPLES / "commutator.rl")
EXAMPLE = str(SAMPLES / "example.rl")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def machine(*argv):
    code, out, _ = cli(*argv, "--format", "machine")
    return code, json.loads(out)


# -- parsing -----------------------------------------------------------------


def test_parse_example_document():
    doc = parse_file(EXAMPLE)
    R = doc.relators["R"]
    assert R.length == 4 and str(R.skeleton()) == "e a e^-1 a^-1"
    assert doc.presentation().alphabet == ("e", "a")


def test_unreduced_skeleton_is_accepted():
    doc = parse("group H = Z(3)\nletters x\nelem h = 1\nrelator R = x {h} x\n")
    assert str(doc.relators["R"].skeleton()) == "x x"


def test_cyclic_group_elements():
    doc = parse("group H = Z(2)\nletters x\nelem h1 = 1\nrelator R = x {h1}\n")
    assert doc.group == CyclicGroup(2) and doc.elems["h1"] == 1


def test_adjacent_coefficients_multiply():
    doc = parse("group H = Z(5)\nletters x, y\nrelator R = x {2}{4} y\n")
    assert doc.relators["R"].terms[0] == (SignedLetter("x", 1), 1)


def test_powers_comments_and_identity():
    doc = parse("# c\ngroup H = trivial  # tail\nletters x, y\nrelator R = x^2 y^-2\nword w = 1\n")
    assert str(doc.relators["R"].skeleton()) == "x x y^-1 y^-1"
    assert doc.words["w"] == ()


def test_table_path_is_relative_to_the_document(tmp_path):
    (tmp_path / "t.table").write_text((SAMPLES / "s3.table").read_text())
    p = tmp_path / "d.rl"
    p.write_text("group H = table t.table\nletters x\nrelator R = x {1}\n")
    assert parse_file(p).group.order == 6


def test_free_product_and_perm_groups():
    doc = parse("group H = Z(2) * free(1)\nletters x\nelem h = 1:1 . 2:g1\nrelator R = x {h}\n")
    assert doc.group.describe() == "Z(2) * free(1)"
    doc = parse("group H = perm(3: (0 1), (0 1 2))\nletters x\nrelator R = x {(0 2)}\n")
    assert doc.group.order == 6


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("group H = trivial\nletters x\nrelator R = x q\n", 3, "unknown letter 'q'"),
        ("group H = Z(2)\nletters x\nrelator R = x {h9}\n", 3, "unknown element"),
        ("elem h = 1\n", 1, "before the group"),
        ("group H = trivial\n", 1, None),
        ("group H = table nope.table\n", 1, "not found"),
        ("group H = Z(2)\nletters x\nrelator R = {1}\n", 3, "at least one letter"),
        ("group H = Z(2)\nletters x\nrelator R = x {1\n", 3, "unclosed"),
        ("group H = Q8\n", 1, "unknown group"),
        ("group H = trivial\nletters x, x\n", 2, "declared twice"),
    ],
)
def test_diagnostics(text, line, fragment):
    if fragment is None:
        doc = parse(text)
        with pytest.raises(ValueError):
            doc.presentation()
        return
    with pytest.raises(DSLError) as exc:
        parse(text)
    assert exc.value.line == line and fragment in str(exc.value)
    assert str(exc.value).startswith(f"line {line}, col ")


def test_missing_group_is_reported():
    with pytest.raises(DSLError, match="missing 'group'"):
        parse("# nothing\n")


def test_non_group_table(tmp_path):
    (tmp_path / "bad.table").write_text("order 2\n0 1\n1 1\n")
    p = tmp_path / "d.rl"
    p.write_text("group H = table bad.table\n")
    with pytest.raises(DSLError):
        parse_file(p)


atoms_st = st.lists(
    st.one_of(
        st.tuples(st.sampled_from(["a", "b", "e"]), st.sampled_from((1, -1))).map(lambda t: SignedLetter(*t)),
        st.integers(1, 5).map(Coeff),
    ),
    min_size=1,
    max_size=10,
).filter(lambda xs: any(isinstance(a, SignedLetter) for a in xs))


@settings(max_examples=100)
@given(atoms_st)
def test_round_trip(atoms):
    H = CyclicGroup(6)
    P = RelativePresentation(("a", "b", "e"), H, (from_atoms(atoms, H),))
    doc = document_from(P)
    text = format_document(doc)
    again = parse(text)
    assert again == doc and format_document(again) == text


# -- commands ----------------------------------------------------------------


def test_classify_commutator():
    code, rep = machine("classify", COMMUTATOR)
    assert code == 0 and rep["schema"] == SCHEMA
    c = rep["classification"]
    assert c["class"] == "strong-unique-max-min"
    assert c["certificate"]["theta"] == {"x": 1, "y": 1}


def test_classify_oracle_mode():
    code, rep = machine("classify", COMMUTATOR, "--oracle", "--weight-bound", "2")
    assert code == 0 and rep["classification"]["method"].startswith("oracle")


def test_classify_absent(tmp_path):
    p = tmp_path / "xx.rl"
    p.write_text("group H = trivial\nletters x\nrelator R = x x\n")
    code, rep = machine("classify", str(p))
    assert code == 2 and rep["classification"]["class"] == "none"
    code, rep = machine("embed", str(p))
    assert code == 2 and rep["embedding"]["status"] == "no certificate"


def test_kernel_example():
    code, rep = machine("kernel", EXAMPLE, "--window", "3")
    v = rep["kernel"]["verification"]
    assert code == 0 and v["V1"] and v["V2"] and v["V3"]
    assert rep["kernel"]["data"]["M"] == 1 and rep["kernel"]["data"]["m"] == -1


def test_eq_commutator():
    assert cli("eq", COMMUTATOR, "x y", "y x")[0] == 0
    assert cli("eq", COMMUTATOR, "c", "d")[0] == 0
    assert cli("eq", COMMUTATOR, "x", "y")[0] == 2


def test_separate_command():
    code, rep = machine("separate", COMMUTATOR, "x")
    assert code == 0 and rep["separate"]["status"] == "found"
    code, rep = machine("separate", COMMUTATOR, "x y x^-1 y^-1")
    assert code == 2 and rep["separate"]["status"] == "trivial-in-G"


def test_power_and_subst(tmp_path):
    code, rep = machine("power", COMMUTATOR, "2")
    assert code == 0 and rep["power"]["document"][-1] == "relator R = x y x^-1 y^-1 x y x^-1 y^-1"
    p = tmp_path / "s.rl"
    p.write_text("group H = trivial\nletters x, y, z\nrelator S = z z\nrelator R = x y x^-1 y^-1\n")
    code, rep = machine("subst", str(p), "--outer", "S", "--var", "z")
    assert code == 0
    assert rep["subst"]["document"][-1] == "relator R = x y x^-1 y^-1 x y x^-1 y^-1"


def test_brown_command():
    code, rep = machine("brown", COMMUTATOR, "--theta", "x=1,y=-1")
    assert code == 0 and rep["brown"]["kernel_finitely_generated"] is True
    code, _, err = cli("brown", COMMUTATOR, "--theta", "x=one")
    assert code == 1 and "bad weight" in err


def test_errors_exit_one(tmp_path):
    code, _, err = cli("classify", str(tmp_path / "missing.rl"))
    assert code == 1 and "error" in err
    code, rep = machine("eq", COMMUTATOR, "x", "q")
    assert code == 1 and "error" in rep


def test_reports_are_byte_stable():
    for argv in (("kernel", EXAMPLE), ("classify", COMMUTATOR), ("separate", COMMUTATOR, "x")):
        a = cli(*argv, "--format", "machine")[1]
        b = cli(*argv, "--format", "machine")[1]
        assert a == b
    assert "timing" not in json.loads(a)
    _, rep = machine("classify", COMMUTATOR, "--timing")
    assert "seconds" in rep["timing"]


def test_text_format_lists_keys():
    code, out, _ = cli("classify", COMMUTATOR)
    assert code == 0 and "class: strong-unique-max-min" in out and out.startswith(f"schema: {SCHEMA}")


def test_stdin_and_module_entry():
    text = Path(COMMUTATOR).read_text()
    proc = subprocess.run(
        [sys.executable, "-m", "relator_lab", "classify", "-", "--format", "machine"],
        input=text, capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["classification"]["class"] == "strong-unique-max-min"
