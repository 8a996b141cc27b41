import pytest

from igcheck.errors import InvalidArgumentError, WellFormednessError
from igcheck.formulas import (
    And,
    Atom,
    Count,
    Eq,
    Exists,
    Forall,
    Lfp,
    Not,
    Or,
    SoAtom,
    all_variable_names,
    check_positive,
    free_vars,
    fresh_var,
    subformulas,
    substitute_free_fo,
    validate,
)
from igcheck.parser import parse

E = lambda a, b: Atom("E", (a, b))


def test_free_vars_basic():
    fv = free_vars(And(E("x", "y"), SoAtom("S", "x")))
    assert fv.fo == frozenset({"x", "y"})
    assert fv.so == frozenset({"S"})


def test_free_vars_binders():
    assert free_vars(Exists("y", E("x", "y"))).fo == frozenset({"x"})
    assert free_vars(Count("y", E("x", "y"), "<", 2)).fo == frozenset({"x"})
    lfp = Lfp("S", "x", Or(E("x", "y"), SoAtom("S", "y")), "u")
    fv = free_vars(lfp)
    assert fv.fo == frozenset({"y", "u"})
    assert fv.so == frozenset()
    # an unbound set variable stays free
    assert free_vars(SoAtom("T", "x")).so == frozenset({"T"})


def test_positivity():
    assert check_positive(SoAtom("S", "x"), "S")
    assert not check_positive(Not(SoAtom("S", "x")), "S")
    assert check_positive(Not(Not(SoAtom("S", "x"))), "S")
    # desugared implication: S may appear in the consequent only
    assert check_positive(parse("E(x, y) -> S(y)", so_vars=("S",)), "S")
    assert not check_positive(parse("S(y) -> E(x, y)", so_vars=("S",)), "S")
    # a rebinding lfp shields the outer name
    inner = Lfp("S", "x", Or(Not(SoAtom("S", "x")), Eq("x", "x")), "u")
    assert check_positive(Not(inner), "S")


def test_validate_codes():
    cases = {
        "vacuous-quantifier": "ex x. E(y, z)",
        "lfp-var-not-free": "lfp S,x. S(y) | E(y, y) @ u",
        "lfp-so-var-not-free": "lfp S,x. E(x, x) @ u",
        "lfp-applied-free": "lfp S,x. (E(x, u) | S(x)) @ u",
        "lfp-not-positive": "lfp S,x. !S(x) | E(x, x) @ u",
    }
    for code, text in cases.items():
        with pytest.raises(WellFormednessError) as exc:
            validate(parse(text, validate=False))
        assert exc.value.code == code, (code, exc.value.code)
    with pytest.raises(WellFormednessError) as exc:
        validate(Count("y", E("x", "x"), "<", 1))
    assert exc.value.code == "vacuous-quantifier"
    with pytest.raises(WellFormednessError) as exc:
        validate(Count("y", E("x", "y"), "!=", 1))
    assert exc.value.code == "bad-comparator"
    with pytest.raises(WellFormednessError) as exc:
        validate(Count("y", E("x", "y"), "<", -1))
    assert exc.value.code == "count-bound-negative"


def test_validate_accepts_good_formulas():
    for text in (
        "all y. !E(x, y)",
        "all u. lfp S,x. (all y. (E(y, x) -> S(y))) @ u",
        "C y (E(x, y)) = 0",
        "lfp S,x. (E(x, w) & S(w)) | w = w @ u",
    ):
        validate(parse(text, validate=False))


def test_substitute_free_fo():
    f = parse("all y. E(x, y)", validate=False)
    g = substitute_free_fo(f, {"x": "z"})
    assert g == parse("all y. E(z, y)", validate=False)
    # bound occurrences stay put
    h = substitute_free_fo(f, {"y": "z"})
    assert h == f
    # applied variable of an lfp is substitutable
    lfp = parse("lfp S,x. E(x, x) | S(x) @ u", validate=False)
    assert substitute_free_fo(lfp, {"u": "v"}).applied_to == "v"


def test_substitute_capture_is_rejected():
    f = parse("ex y. E(x, y)", validate=False)
    with pytest.raises(InvalidArgumentError, match="captured"):
        substitute_free_fo(f, {"x": "y"})
    lfp = parse("lfp S,x. E(x, u) | S(u) @ w", validate=False)
    with pytest.raises(InvalidArgumentError, match="captured"):
        substitute_free_fo(lfp, {"u": "x"})


def test_all_variable_names_and_fresh():
    f = parse("all y. (E(x, y) & (lfp S,z. E(z, z) | S(z) @ w))",
              validate=False)
    fo, so = all_variable_names(f)
    assert {"x", "y", "z", "w"} <= fo
    assert so == frozenset({"S"})
    assert fresh_var("x", fo) not in fo
    assert fresh_var("q", fo) == "q"


def test_subformulas_walks_everything():
    f = parse("all y. (E(x, y) -> C z (E(y, z)) > 0)", validate=False)
    kinds = {type(s).__name__ for s in subformulas(f)}
    assert {"Forall", "Or", "Not", "Atom", "Count"} <= kinds


def test_validate_rejects_non_formula():
    with pytest.raises((InvalidArgumentError, WellFormednessError, TypeError)):
        validate("not a formula")
