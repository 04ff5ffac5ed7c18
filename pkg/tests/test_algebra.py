import numpy as np
import pytest

from modalweave import corpus
from modalweave.algebra import (
    FiniteBAO,
    Minus,
    One,
    OpDia,
    Plus,
    Var,
    Zero,
    algebras_isomorphic,
    canonical_extension,
    complex_algebra,
    enumerate_algebras,
    equation_to_formula,
    evaluate,
    format_term,
    formula_to_term,
    parse_equation,
    parse_term,
    term_vars,
    ultrafilter_frame,
    validates_equation,
    validates_formula,
)
from modalweave.errors import BadParameter, BudgetExceeded, ParseError, UnknownModality
from modalweave.formula import Signature, parse_formula
from modalweave.frames import frames_isomorphic
from modalweave.semantics import valid_on_frame

AXIOM_POOL = [
    corpus.axiom_5n(0),
    corpus.axiom_5n(1),
    corpus.axiom_5n(2),
    corpus.axiom_U(1),
    corpus.axiom_U(2),
    corpus.axiom_T(),
    corpus.axiom_4(),
]


def _small_frames():
    for n in (1, 2, 3):
        yield from corpus.all_frames(n)


class TestTerms:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("<d>v0 = 0", (OpDia("d", Var(0)), Zero())),
            ("-v0 + v1 = 1", (Plus(Minus(Var(0)), Var(1)), One())),
            ("v0 + v1 + v2 = v2", (Plus(Plus(Var(0), Var(1)), Var(2)), Var(2))),
        ],
    )
    def test_parse_equation(self, text, expected):
        assert parse_equation(text) == expected

    def test_printing(self):
        assert format_term(parse_term("v0 + (v1 + v2)")) == "v0 + (v1 + v2)"
        assert format_term(parse_term("-(v0 + v1)")) == "-(v0 + v1)"
        assert format_term(parse_term("<d>(v0 + 1)")) == "<d>(v0 + 1)"
        assert str(parse_term("-<d>-v3")) == "-<d>-v3"

    def test_errors(self):
        with pytest.raises(ParseError):
            parse_equation("v0 +")
        with pytest.raises(ParseError):
            parse_equation("v0")
        with pytest.raises(ParseError):
            parse_term("v0 = v1")
        with pytest.raises(UnknownModality):
            parse_term("<e>v0", Signature.of("d"))

    def test_translations(self):
        term = formula_to_term(parse_formula("p0 -> <d>p1"))
        assert term == Plus(Minus(Var(0)), OpDia("d", Var(1)))
        assert term_vars(term) == {0, 1}
        assert formula_to_term(parse_formula("false")) == Zero()
        assert equation_to_formula(Var(0), One()) == parse_formula("p0 <-> true")


class TestFiniteAlgebras:
    def test_from_element_table(self, mono):
        algebra = FiniteBAO.from_element_table(mono, 2, {"d": [0, 2, 1, 3]})
        assert algebra.images("d") == (2, 1)
        assert algebra.apply("d", 3) == 3
        assert list(algebra.op_table("d")) == [0, 2, 1, 3]

    def test_rejects_bad_tables(self, mono):
        with pytest.raises(BadParameter):
            FiniteBAO.from_element_table(mono, 1, {"d": [1, 1]})
        with pytest.raises(BadParameter):
            FiniteBAO.from_element_table(mono, 2, {"d": [0, 1, 2, 1]})

    def test_evaluate(self):
        algebra = complex_algebra(corpus.successor(3))
        # <d>{2} is the set of predecessors of world 2
        assert evaluate(algebra, OpDia("d", Var(0)), {0: 0b100}) == 0b010
        assert evaluate(algebra, Minus(Var(0)), {0: 0b001}) == 0b110

    def test_equation_witness(self):
        algebra = complex_algebra(corpus.d_frame(1))
        lhs, rhs = parse_equation("<d>v0 = v0")
        verdict = validates_equation(algebra, lhs, rhs)
        assert not verdict.holds
        assert verdict.describe() == "REFUTED v0={2}"
        assert validates_equation(algebra, *parse_equation("<d>0 = 0")).holds

    def test_complex_algebra_of_diamond_validates_five_2(self):
        assert validates_formula(complex_algebra(corpus.d_frame(1)), corpus.axiom_5n(2)).holds

    def test_budget(self):
        algebra = complex_algebra(corpus.fine_frame(3))
        with pytest.raises(BudgetExceeded) as info:
            validates_formula(algebra, corpus.axiom_U(1))
        assert info.value.required_bits == 32

    def test_enumeration(self):
        algebras = list(enumerate_algebras(2))
        assert len(algebras) == 16
        assert algebras[0].images("d") == (0, 0)


class TestDuality:
    def test_double_dual(self):
        for frame in _small_frames():
            back = ultrafilter_frame(complex_algebra(frame))
            assert back == frame
            assert frames_isomorphic(back, frame)

    def test_double_dual_sampled_up_to_six_worlds(self):
        rng = np.random.default_rng(66)
        for sig in (Signature.of("d"), Signature.of("a", "b")):
            for _ in range(60):
                frame = corpus.random_frame(rng, int(rng.integers(4, 7)), density=0.4, sig=sig)
                back = ultrafilter_frame(complex_algebra(frame))
                assert back == frame
                assert frames_isomorphic(back, frame)

    def test_canonical_extension_of_finite_algebras(self):
        for k in (1, 2):
            for algebra in enumerate_algebras(k):
                assert algebras_isomorphic(canonical_extension(algebra), algebra)
        for frame in corpus.all_frames(3):
            algebra = complex_algebra(frame)
            assert algebras_isomorphic(canonical_extension(algebra), algebra)

    def test_isomorphism_detects_difference(self):
        left = complex_algebra(corpus.successor(2))
        right = complex_algebra(corpus.omega_lt(2))
        assert algebras_isomorphic(left, right)
        assert not algebras_isomorphic(left, complex_algebra(corpus.lawn_rake(1)))

    @pytest.mark.slow
    @pytest.mark.parametrize("axiom", AXIOM_POOL, ids=[str(a) for a in AXIOM_POOL])
    def test_frame_validity_matches_equation_validity(self, axiom):
        for frame in _small_frames():
            algebra = complex_algebra(frame)
            assert valid_on_frame(frame, axiom).valid == validates_formula(algebra, axiom).holds
