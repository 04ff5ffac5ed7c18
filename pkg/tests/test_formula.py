import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modalweave.corpus import axiom_U, random_formula
from modalweave.errors import BadParameter, ParseError, UnknownModality
from modalweave.formula import (
    And,
    Atom,
    Bot,
    Dia,
    Iff,
    Imp,
    Not,
    Or,
    Signature,
    Top,
    atoms_of,
    box,
    circ_translate,
    dia_power,
    format_formula,
    modal_depth,
    modalities_of,
    parse_formula,
    size,
    substitute,
)
from modalweave.frames import Frame, Model
from modalweave.semantics import satisfies

p0, p1, p2 = Atom(0), Atom(1), Atom(2)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p0 -> p1 -> p2", Imp(p0, Imp(p1, p2))),
        ("(p0 -> p1) -> p2", Imp(Imp(p0, p1), p2)),
        ("p0 & p1 | p2", Or(And(p0, p1), p2)),
        ("p0 | p1 & p2", Or(p0, And(p1, p2))),
        ("p0 <-> p1 <-> p2", Iff(p0, Iff(p1, p2))),
        ("~p0 & p1", And(Not(p0), p1)),
        ("[d]p0", Not(Dia("d", Not(p0)))),
        ("<d><d>p0 -> [d]<d>p0", Imp(Dia("d", Dia("d", p0)), box("d", Dia("d", p0)))),
        ("true | false", Or(Top(), Bot())),
        ("<a>(p0 | p1)", Dia("a", Or(p0, p1))),
    ],
)
def test_parse_goldens(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize(
    "text, printed",
    [
        ("p0 -> p1 -> p2", "p0 -> p1 -> p2"),
        ("(p0 -> p1) -> p2", "(p0 -> p1) -> p2"),
        ("(p0 & p1) | p2", "p0 & p1 | p2"),
        ("p0 & (p1 | p2)", "p0 & (p1 | p2)"),
        ("~<d>~p0", "[d]p0"),
        ("[d](p0 -> p1)", "[d](p0 -> p1)"),
        ("~~p0", "~~p0"),
        ("(p0 | p1) | p2", "p0 | p1 | p2"),
        ("p0 | (p1 | p2)", "p0 | (p1 | p2)"),
    ],
)
def test_print_uses_minimal_parentheses(text, printed):
    assert format_formula(parse_formula(text)) == printed


def test_str_matches_printer():
    assert str(parse_formula("<d>p3")) == "<d>p3"


@pytest.mark.parametrize(
    "text, position",
    [
        ("p0 &", 4),
        ("p0 $ p1", 3),
        ("(p0", 3),
    ],
)
def test_parse_errors_carry_offsets(text, position):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert info.value.position == position
    assert info.value.code == "E_PARSE"


def test_unknown_modality_rejected_under_signature():
    with pytest.raises(UnknownModality):
        parse_formula("<e>p0", Signature.of("d"))
    assert parse_formula("<e>p0") == Dia("e", p0)


def test_substitution_into_U1():
    instance = substitute(axiom_U(1), {0: Top(), 1: Bot()})
    assert instance == parse_formula("[d]([d]true -> [d]false) | [d]([d]false -> [d]true)")


def test_substitution_is_simultaneous():
    assert substitute(Imp(p0, p1), {0: p1, 1: p0}) == Imp(p1, p0)


def test_substitution_and_circ_translation_do_not_commute():
    formula, mapping = Dia("d", p0), {0: Dia("d", p0)}
    substituted_first = circ_translate(substitute(formula, mapping))
    translated_first = substitute(circ_translate(formula), mapping)
    inner = Or(p0, Dia("d", p0))
    assert substituted_first == Or(inner, Dia("d", inner))
    assert translated_first == Or(Dia("d", p0), Dia("d", Dia("d", p0)))
    assert substituted_first != translated_first
    # a dead-end world where p0 holds tells them apart
    lonely = Model(Frame.from_pairs(Signature.of("d"), ["w"], {"d": []}), {0: {"w"}})
    assert satisfies(lonely, "w", substituted_first)
    assert not satisfies(lonely, "w", translated_first)


def test_circ_translation_goldens():
    assert circ_translate(parse_formula("<d>p0")) == parse_formula("p0 | <d>p0")
    assert circ_translate(parse_formula("[d]p0")) == parse_formula("p0 & [d]p0")
    assert circ_translate(parse_formula("p0 -> ~p1")) == parse_formula("p0 -> ~p1")


def test_measures():
    formula = parse_formula("<a>[b]p0 & p3")
    assert modal_depth(formula) == 2
    assert atoms_of(formula) == {0, 3}
    assert modalities_of(formula) == {"a", "b"}
    assert size(parse_formula("~p0")) == 2


def test_dia_power():
    assert dia_power("d", 0, p0) == p0
    assert dia_power("d", 2, p0) == Dia("d", Dia("d", p0))
    with pytest.raises(BadParameter):
        dia_power("d", -1, p0)


def test_signature_validation():
    with pytest.raises(BadParameter):
        Signature.of()
    with pytest.raises(BadParameter):
        Signature.of("d", "d")
    assert Signature.of("a", "b").default == "a"


def test_seeded_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        formula = random_formula(rng, 6, atoms=3, modalities=("a", "b"))
        assert parse_formula(format_formula(formula)) == formula


atoms = st.integers(min_value=0, max_value=4).map(Atom)
leaves = st.one_of(atoms, st.just(Top()), st.just(Bot()))
modality_names = st.sampled_from(["d", "a", "b2"])

formulas = st.recursive(
    leaves,
    lambda inner: st.one_of(
        inner.map(Not),
        st.builds(Dia, modality_names, inner),
        st.builds(box, modality_names, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Imp, inner, inner),
        st.builds(Iff, inner, inner),
    ),
    max_leaves=25,
)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_round_trip_property(formula):
    assert parse_formula(format_formula(formula)) == formula


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_circ_translation_keeps_atoms_and_depth(formula):
    translated = circ_translate(formula)
    assert atoms_of(translated) == atoms_of(formula)
    assert modal_depth(translated) == modal_depth(formula)


@settings(max_examples=200, deadline=None)
@given(formulas, st.dictionaries(st.integers(min_value=0, max_value=4), formulas, max_size=3))
def test_substitution_atoms_come_from_images_or_unmapped_atoms(formula, mapping):
    result = atoms_of(substitute(formula, mapping))
    mapped = set(mapping)
    from_images = set()
    for index in atoms_of(formula) & mapped:
        from_images |= atoms_of(mapping[index])
    assert result <= from_images | (atoms_of(formula) - mapped)
