import pytest

from extalgebra.algebra.compare import are_isomorphic
from extalgebra.cli import run_command
from extalgebra.config.local import PACKAGE_ROOT
from extalgebra.formats.automaton import load_vpa
from extalgebra.formats.recognizer import load_recognizer

FIXTURES = PACKAGE_ROOT / "fixtures"


def fixture(name: str) -> str:
    return str(FIXTURES / name)


def run(capsys, *argv):
    """Runs a command line, returning its status, stdout and stderr."""
    status = run_command(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


@pytest.mark.parametrize(
    "file, word, verdict",
    [
        ("anbn.alg", "aabb", "accept"),
        ("anbn.alg", "abab", "reject"),
        ("anbn.vpa", "abab", "reject"),
        ("astarbstar.vca", "-", "accept"),
        ("lml.alg", "acbacb", "reject"),
    ],
)
def test_accepts(capsys, file, word, verdict):
    status, out, _ = run(capsys, "accepts", fixture(file), word)
    assert status == 0
    assert out.strip() == verdict


def test_accepts_rejects_unmatched_word(capsys):
    status, out, err = run(capsys, "accepts", fixture("anbn.alg"), "aab")
    assert status == 1
    assert out == ""
    assert err.startswith("extalgebra accepts:")


def test_enumerate(capsys):
    status, out, _ = run(
        capsys, "enumerate", fixture("ab.alphabet"), "--max-len", "4"
    )
    assert status == 0
    assert out.split() == ["-", "ab", "aabb", "abab"]


def test_validate(capsys):
    status, out, _ = run(capsys, "validate", fixture("anbn.alg"))
    assert status == 0
    assert "valid: 3 elements, 4 operations" in out
    assert "closure added 0 translation(s)" in out


def test_strict_validation_fails(capsys):
    status, out, _ = run(capsys, "--strict", "validate", fixture("lml.alg"))
    assert status == 1
    assert out.startswith("invalid:")
    assert "left_translation" in out


def test_check_finds_counterexample(capsys):
    status, out, _ = run(
        capsys,
        "check",
        fixture("lml.alg"),
        "--class",
        "vcl",
        "--max-context",
        "4",
    )
    assert status == 2
    lines = [line.strip() for line in out.splitlines()]
    assert "u  = ac" in lines
    assert "v  = b" in lines
    assert "u' = a" in lines
    assert "v' = cb" in lines
    assert "left: [ac,b]*([a,cb]*($x)) = acb" in lines


def test_check_boolean_formulae(capsys):
    status, _, _ = run(
        capsys,
        "check",
        fixture("hplus.alg"),
        "--class",
        "vcl",
        "--max-context",
        "10",
    )
    assert status == 2


def test_check_threshold_zero(capsys):
    status, out, _ = run(
        capsys,
        "check",
        fixture("anbncmdm.alg"),
        "--class",
        "vcl0",
        "--max-context",
        "2",
    )
    assert status == 2
    lines = [line.strip() for line in out.splitlines()]
    assert "u  = a" in lines
    assert "v  = d" in lines
    assert "assignment: x=1, y=1, z=1" in lines


def test_check_without_counterexample(capsys):
    status, out, _ = run(
        capsys,
        "check",
        fixture("anbn.alg"),
        "--class",
        "vcl",
        "--max-context",
        "3",
    )
    assert status == 0
    assert "NOT a membership proof" in out


def test_porcelain_counterexample(capsys):
    status, out, _ = run(
        capsys,
        "--porcelain",
        "check",
        fixture("lml.alg"),
        "--class",
        "vcl",
        "--max-context",
        "4",
    )
    assert status == 2
    lines = out.splitlines()
    assert lines[0] == "report=counterexample"
    assert "u=ac" in lines
    assert "left=acb" in lines
    assert "right=0" in lines


def test_separate(capsys):
    status, out, _ = run(
        capsys,
        "separate",
        fixture("separation.alg"),
        "aaaabbccdddd",
        "aabbccdd",
    )
    assert status == 0
    lines = [line.strip() for line in out.splitlines()]
    assert lines[0] == "separated after 5 morphism(s)"
    assert "aaaabbccdddd -> 0" in lines
    assert "aabbccdd -> 1" in lines
    assert "morphism: a,b->id a,d->zero c,b->id c,d->id" in lines


def test_equate(capsys):
    status, out, _ = run(
        capsys, "equate", fixture("separation.alg"), "[a,d]*(-)", "-"
    )
    assert status == 2
    assert "left: [a,d]*(-) = 0" in out
    status, out, _ = run(
        capsys, "equate", fixture("separation.alg"), "[a,b]($x)", "$x"
    )
    assert status == 0


def test_compare(capsys):
    status, out, _ = run(
        capsys, "compare", fixture("anbn.alg"), fixture("anbn.alg")
    )
    assert status == 0
    assert out.strip() == "isomorphic: 1->1 x->x 0->0"
    _, out, _ = run(
        capsys, "compare", fixture("separation.alg"), fixture("hplus.alg")
    )
    assert out.startswith("divides:")
    _, out, _ = run(
        capsys, "compare", fixture("hplus.alg"), fixture("separation.alg")
    )
    assert out.startswith("does not divide")


def test_exponent(capsys):
    status, out, _ = run(capsys, "exponent", fixture("astarbstar.vca"), "ab")
    assert status == 0
    assert out.strip() == "stabilizing exponent: 2"
    status, _, err = run(capsys, "exponent", fixture("astarbstar.vca"), "ba")
    assert status == 1
    assert "undefined" in err


def test_translations_write_files(capsys, tmp_path):
    anbn = load_recognizer(fixture("anbn.alg"))
    minimal = tmp_path / "anbn.min.alg"
    status, out, _ = run(
        capsys,
        "from-vpa",
        fixture("anbn.vpa"),
        "--minimize",
        "-o",
        str(minimal),
    )
    assert status == 0
    assert out.strip() == f"wrote {minimal}"
    assert are_isomorphic(load_recognizer(str(minimal)).algebra, anbn.algebra)

    vpa = tmp_path / "anbn.vpa"
    assert run(capsys, "to-vpa", fixture("anbn.alg"), "-o", str(vpa))[0] == 0
    assert len(load_vpa(str(vpa)).states) == 3

    reduced = tmp_path / "reduced.alg"
    status, _, _ = run(
        capsys, "from-vca", fixture("astarbstar.vca"), "-o", str(reduced)
    )
    assert status == 0
    status, _, _ = run(capsys, "minimize", str(reduced), "-o", str(minimal))
    assert status == 0
    assert are_isomorphic(load_recognizer(str(minimal)).algebra, anbn.algebra)


def test_from_monoid_prints_document(capsys):
    status, out, _ = run(capsys, "from-monoid", fixture("parity.monoid"))
    assert status == 0
    assert out.startswith("alphabet calls=a returns=b internals=c")
    assert "accept 1" in out


def test_product(capsys, tmp_path):
    both = tmp_path / "both.alg"
    status, _, _ = run(
        capsys,
        "product",
        fixture("anbn.alg"),
        fixture("hplus.alg"),
        "-o",
        str(both),
    )
    assert status == 0
    assert load_recognizer(str(both)).algebra.size == 6


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["check", "x.alg"],
        ["enumerate", "x.alphabet", "--max-len", "-1"],
        ["check", "x.alg", "--class", "vcl2", "--max-context", "2"],
    ],
)
def test_usage_errors(capsys, argv):
    status, out, err = run(capsys, *argv)
    assert status == 1
    assert out == ""
    assert err.startswith("extalgebra")


def test_missing_file(capsys):
    status, _, err = run(capsys, "validate", "no/such/file.alg")
    assert status == 1
    assert "extalgebra validate:" in err


def test_config_file(capsys, tmp_path):
    config = tmp_path / "config.toml"
    config.write_text("[caps]\nmorphisms = 1\n", encoding="utf-8")
    status, _, err = run(
        capsys,
        "--config",
        str(config),
        "check",
        fixture("lml.alg"),
        "--class",
        "vcl",
        "--max-context",
        "2",
        "--morphisms",
        "all",
    )
    assert status == 1
    assert "size cap of 1" in err
    config.write_text("[engine]\nworkers = 0\n", encoding="utf-8")
    status, _, err = run(
        capsys, "--config", str(config), "validate", fixture("anbn.alg")
    )
    assert status == 1
    assert "bad config" in err
