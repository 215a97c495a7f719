import json
import random

from binmc import serialize as ser
from binmc.cli import main, verdict_bytes
from binmc.cofinal import rel_class
from binmc.gen import random_multicomplex, random_tn_class
from binmc.kgroups import FormalClass
from binmc.matrix import Matrix
from binmc.multicomplex import BinaryMulticomplex
from binmc.rings import ZZ


def _write(path, doc):
    path.write_text(ser.canonical_dumps(doc), encoding="utf-8")
    return str(path)


def _load(path):
    return json.loads(path.read_text(encoding="utf-8"))


def _unit_complex(ring, u):
    top = Matrix(ring, 1, 1, [ring.one])
    bot = Matrix(ring, 1, 1, [u])
    from binmc.fpmod import FpModule, FpMorphism
    m = FpModule.free(ring, 1)
    return BinaryMulticomplex(ring, 1, (2,), {(0,): m, (1,): m},
                              {(0, (1,)): FpMorphism(m, m, top)},
                              {(0, (1,)): FpMorphism(m, m, bot)})


def test_gen_check_homology_recheck_flow(tmp_path):
    out = str(tmp_path / "m.json")
    assert main(["gen", "--seed", "5", "--out", out]) == 0
    assert main(["check", out]) == 0
    assert main(["homology", out]) == 0
    assert main(["recheck", out]) == 0


def test_gen_is_deterministic(tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["gen", "--seed", "77", "--dim", "2", "--out", a]) == 0
    assert main(["gen", "--seed", "77", "--dim", "2", "--out", b]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_check_lists_diagonal_directions(tmp_path, capsys):
    out = str(tmp_path / "d.json")
    assert main(["gen", "--seed", "4", "--dim", "2", "--diagonal", "0", "1",
                 "--out", out]) == 0
    capsys.readouterr()
    assert main(["check", out]) == 0
    text = capsys.readouterr().out
    assert "diagonal-directions: 0, 1" in text
    assert text.rstrip().endswith("PASS")


def test_resolve_bundle_rechecks(tmp_path):
    rng = random.Random(0)
    M = random_multicomplex(rng, ZZ, 1, length=4, max_rank=2, allow_fp=True)
    src = _write(tmp_path / "fp.json", ser.multicomplex_to_doc(M))
    bundle = str(tmp_path / "res.json")
    assert main(["resolve", src, "--out", bundle]) == 0
    assert main(["recheck", bundle]) == 0


def test_resolve_multi_dim2(tmp_path):
    rng = random.Random(2)
    M = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2, allow_fp=True)
    src = _write(tmp_path / "m2.json", ser.multicomplex_to_doc(M))
    bundle = str(tmp_path / "res2.json")
    assert main(["resolve-multi", src, "--out", bundle]) == 0
    assert main(["recheck", bundle]) == 0


def test_cofinalize_reports_parity_and_output_checks(tmp_path, capsys):
    M = random_multicomplex(random.Random(1), ZZ, 2, length=2, max_rank=2)
    assert not rel_class(M).is_zero()
    src = _write(tmp_path / "odd.json", ser.multicomplex_to_doc(M))
    comp = str(tmp_path / "T.json")
    capsys.readouterr()
    assert main(["cofinalize", src, "--direction", "1", "--out", comp]) == 0
    text = capsys.readouterr().out
    assert "sum-ranks-even" in text and "0 after" in text
    assert main(["check", comp]) == 0


def test_represent_diagonal_chain_verifies(tmp_path, capsys):
    x, wits = random_tn_class(random.Random(21), ZZ, 2, terms=2,
                              length=2, max_rank=2)
    src = _write(tmp_path / "cls.json", ser.class_document(x, wits))
    chain = str(tmp_path / "chain.json")
    capsys.readouterr()
    assert main(["represent-diagonal", src, "--out", chain]) == 0
    text = capsys.readouterr().out
    assert "result-diagonal" in text
    assert main(["verify-chain", chain]) == 0


def test_represent_diagonal_refuses_bad_witnesses(tmp_path):
    x, wits = random_tn_class(random.Random(23), ZZ, 2, terms=1,
                              length=2, max_rank=2)
    doc = ser.class_document(x, [9])  # axis out of range
    src = _write(tmp_path / "bad.json", doc)
    assert main(["represent-diagonal", src]) == 1


def test_snf_reports_invariants(tmp_path):
    A = Matrix(ZZ, 3, 2, [ZZ.from_int(v) for v in [4, 2, 2, 2, 0, 6]])
    src = _write(tmp_path / "mat.json", ser.matrix_document(A))
    rep = str(tmp_path / "rep.json")
    assert main(["snf", src, "--report", rep]) == 0
    report = _load(tmp_path / "rep.json")
    inv = report["witnesses"]["invariants"]
    assert len(inv) == 2
    U = ser.matrix_from_doc(ZZ, report["witnesses"]["U"])
    S = ser.matrix_from_doc(ZZ, report["witnesses"]["S"])
    V = ser.matrix_from_doc(ZZ, report["witnesses"]["V"])
    assert U @ A @ V == S


def test_torsion_pins_the_unit_convention(tmp_path):
    src = _write(tmp_path / "u.json",
                 ser.multicomplex_to_doc(_unit_complex(ZZ, ZZ.from_int(-1))))
    rep = str(tmp_path / "rep.json")
    assert main(["torsion", src, "--report", rep]) == 0
    assert _load(tmp_path / "rep.json")["witnesses"]["torsion"] == "-1"


def test_exit_codes(tmp_path):
    good = str(tmp_path / "m.json")
    assert main(["gen", "--seed", "5", "--out", good]) == 0

    # corrupt one differential entry: parses, fails verification
    doc = _load(tmp_path / "m.json")
    doc["differentials"][0]["top"]["entries"][0][0] = "7"
    bad = _write(tmp_path / "bad.json", doc)
    assert main(["check", bad]) == 1

    syntax = tmp_path / "syntax.json"
    syntax.write_text("{oops", encoding="utf-8")
    assert main(["check", str(syntax)]) == 2

    assert main(["check", str(tmp_path / "missing.json")]) == 2
    assert main(["gen", "--ring", "F9", "--out", str(tmp_path / "x.json")]) == 2
    assert main(["verify-chain", good]) == 2  # wrong schema
    assert main(["nonsense"]) == 2

    # torsion needs dimension 1
    two = str(tmp_path / "two.json")
    assert main(["gen", "--seed", "5", "--dim", "2", "--out", two]) == 0
    assert main(["torsion", two]) == 2

    # cofinalize refuses non-free objects
    rng = random.Random(0)
    M = random_multicomplex(rng, ZZ, 1, length=4, max_rank=2, allow_fp=True)
    assert not all(m.is_free_presentation() for m in M.objects.values())
    fp = _write(tmp_path / "fp.json", ser.multicomplex_to_doc(M))
    assert main(["cofinalize", fp, "--direction", "0"]) == 1


def test_reports_are_byte_identical_on_same_seed(tmp_path):
    src = str(tmp_path / "m.json")
    assert main(["gen", "--seed", "8", "--dim", "2", "--out", src]) == 0
    runs = []
    for name in ("r1.json", "r2.json"):
        rep = str(tmp_path / name)
        assert main(["check", src, "--seed", "7", "--report", rep]) == 0
        runs.append(verdict_bytes(_load(tmp_path / name)))
    assert runs[0] == runs[1]

    x, wits = random_tn_class(random.Random(31), ZZ, 2, terms=2,
                              length=2, max_rank=2)
    cls = _write(tmp_path / "cls.json", ser.class_document(x, wits))
    runs = []
    for name in ("r3.json", "r4.json"):
        rep = str(tmp_path / name)
        assert main(["represent-diagonal", cls, "--seed", "7",
                     "--report", rep]) == 0
        runs.append(verdict_bytes(_load(tmp_path / name)))
    assert runs[0] == runs[1]


def test_seed_defaults_to_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("BINMC_SEED", "41")
    a = str(tmp_path / "a.json")
    assert main(["gen", "--out", a]) == 0
    monkeypatch.delenv("BINMC_SEED")
    b = str(tmp_path / "b.json")
    assert main(["gen", "--seed", "41", "--out", b]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_empty_class_represents_over_named_ring(tmp_path, capsys):
    doc = ser.class_document(FormalClass.zero(2), [])
    src = _write(tmp_path / "zero.json", doc)
    capsys.readouterr()
    assert main(["represent-diagonal", src, "--ring", "F7",
                 "--direction", "1"]) == 0
    assert "result-diagonal" in capsys.readouterr().out
