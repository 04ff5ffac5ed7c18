import numpy as np
import pytest

from modalweave import corpus
from modalweave.correspondents import (
    SegerbergClass,
    check_5n,
    check_chain,
    check_e52_upto,
    check_In,
    check_Un,
    check_Un_all,
    check_Un_literal,
    check_WidStar,
    frame_props,
    segerberg_classify,
)
from modalweave.errors import BadParameter, NotPointGenerated
from modalweave.formula import Signature
from modalweave.frames import Frame, generated_subframe, transitive_closure
from modalweave.semantics import valid_on_frame


def _small_frames():
    for n in (1, 2, 3):
        yield from corpus.all_frames(n)


CORRESPONDENTS = [
    ("5_0", corpus.axiom_5n(0), lambda f: check_5n(f, 0).holds),
    ("5_1", corpus.axiom_5n(1), lambda f: check_5n(f, 1).holds),
    ("5_2", corpus.axiom_5n(2), lambda f: check_5n(f, 2).holds),
    ("U_1", corpus.axiom_U(1), lambda f: check_Un(f, 1).holds),
    ("U_2", corpus.axiom_U(2), lambda f: check_Un(f, 2).holds),
    ("I_1", corpus.axiom_I(1), lambda f: check_In(f, 1).holds),
    ("T", corpus.axiom_T(), lambda f: frame_props(f).reflexive),
    ("4", corpus.axiom_4(), lambda f: frame_props(f).transitive),
]


@pytest.mark.slow
@pytest.mark.parametrize("name, axiom, condition", CORRESPONDENTS, ids=[c[0] for c in CORRESPONDENTS])
def test_brute_force_validity_matches_frame_condition(name, axiom, condition):
    checked = 0
    for frame in _small_frames():
        assert valid_on_frame(frame, axiom).valid == condition(frame), frame
        checked += 1
    assert checked == 2 + 16 + 512


@pytest.mark.slow
def test_alternative_U1_has_the_same_condition():
    for frame in _small_frames():
        assert valid_on_frame(frame, corpus.axiom_U_alt(1)).valid == check_Un(frame, 1).holds


def test_alternative_U2_matches_its_condition():
    rng = np.random.default_rng(52)
    frames = list(corpus.all_frames(1)) + list(corpus.all_frames(2))
    frames += [corpus.random_frame(rng, 3, density=0.5) for _ in range(40)]
    for frame in frames:
        assert valid_on_frame(frame, corpus.axiom_U_alt(2)).valid == check_Un(frame, 2).holds


@pytest.mark.slow
def test_alternative_U2_is_refuted_by_the_lawn_rake(lawn_rake3):
    assert not check_Un(lawn_rake3, 2).holds
    assert not valid_on_frame(lawn_rake3, corpus.axiom_U_alt(2), budget=2**27).valid
    assert not valid_on_frame(lawn_rake3, corpus.axiom_U(2), budget=2**27).valid


def test_five_2_equals_its_extended_form():
    for frame in corpus.all_frames(3):
        assert check_5n(frame, 2).holds == check_e52_upto(frame, 3).holds


@pytest.mark.parametrize("n", [1, 2])
def test_width_form_matches_literal_quantifiers(n):
    for frame in _small_frames():
        assert check_Un(frame, n).holds == check_Un_literal(frame, n).holds


def test_U_hierarchy_is_monotone(rng):
    for _ in range(300):
        frame = corpus.random_frame(rng, int(rng.integers(1, 7)), density=0.5)
        for n in (1, 2, 3):
            if check_Un(frame, n).holds:
                assert check_Un(frame, n + 1).holds
            if check_In(frame, n).holds:
                assert check_In(frame, n + 1).holds


def test_In_implies_Un_on_transitive_frames(rng):
    checked = 0
    for _ in range(300):
        frame = transitive_closure(corpus.random_frame(rng, int(rng.integers(1, 6)), density=0.4))
        for n in (1, 2):
            if check_In(frame, n).holds:
                checked += 1
                assert check_Un(frame, n).holds
    assert checked > 0


def test_five_1_implies_five_2():
    rng = np.random.default_rng(51)
    frames = list(corpus.all_frames(3)) + [corpus.random_frame(rng, 4, density=0.5) for _ in range(500)]
    euclidean = [frame for frame in frames if check_5n(frame, 1).holds]
    assert euclidean
    for frame in euclidean:
        assert check_5n(frame, 2).holds


class TestCounterexamples:
    def test_lawn_rake_fails_U2_at_the_handle(self, lawn_rake3):
        report = check_Un(lawn_rake3, 2)
        assert not report.holds
        assert report.counterexample == {"x": "a", "y0": "0", "y1": "1", "y2": "2"}
        assert check_Un(lawn_rake3, 3).holds

    def test_omega_lt_five_2(self):
        assert check_5n(corpus.omega_lt(4), 2).describe() == "FAILS x=0 y=2 z=2"

    def test_e52_reports_level(self):
        report = check_e52_upto(corpus.omega_lt(4), 3)
        assert report.counterexample["n"] == "1"

    def test_In_on_G(self):
        report = check_In(corpus.g_frame(1, 3), 2)
        assert report.describe() == "FAILS x=0 y0=a0 y1=a1 y2=a2"

    def test_chain(self, lawn_rake3):
        assert check_chain(lawn_rake3).describe() == "FAILS x=0 y=1"
        assert check_chain(corpus.g_frame(2, 3)).holds

    def test_widstar(self, lawn_rake3):
        assert check_WidStar(lawn_rake3, 1).holds
        report = check_WidStar(corpus.xu_chain(3), 1)
        assert report.describe() == "FAILS x=a y0=(0,0) y1=(1,0)"

    def test_fine_frame_pair(self):
        frame = corpus.fine_frame(3)
        assert check_Un(frame, 1).describe() == "FAILS x=b3 y0=b1 y1=c1"
        assert check_Un(frame, 2).holds

    def test_all_modality_pairs(self):
        frame = Frame.from_pairs(
            Signature.of("a", "b"),
            ["x", "y0", "y1"],
            {"a": [("x", "y0"), ("x", "y1")], "b": [("y0", "y0"), ("y1", "y1")]},
        )
        assert check_Un(frame, 1).holds
        report = check_Un_all(frame, 1)
        assert report.describe() == "FAILS dia=a black=b x=x y0=y0 y1=y1"

    def test_parameters_are_checked(self, lawn_rake3):
        with pytest.raises(BadParameter):
            check_Un(lawn_rake3, 0)
        with pytest.raises(BadParameter):
            check_In(lawn_rake3, 0)
        with pytest.raises(BadParameter):
            check_5n(lawn_rake3, -1)


class TestFrameProps:
    def test_triangle(self):
        props = frame_props(corpus.k5_triangle())
        assert props.as_dict() == {
            "reflexive": False,
            "transitive": False,
            "symmetric": False,
            "serial": True,
            "euclidean": True,
            "irreflexive": False,
        }

    def test_omega_lt(self):
        props = frame_props(corpus.omega_lt(3))
        assert props.transitive and props.irreflexive and not props.serial


class TestSegerberg:
    def test_classes(self, mono):
        assert segerberg_classify(corpus.k5_triangle(), "0") is SegerbergClass.REFLEXIVE_COFINAL
        single = Frame.from_pairs(mono, ["w"], {})
        assert segerberg_classify(single, "w") is SegerbergClass.SINGLE_IRREFLEXIVE
        step = Frame.from_pairs(mono, ["0", "1"], {"d": [("0", "1")]})
        assert segerberg_classify(step, "0") is SegerbergClass.NEITHER

    def test_requires_generated_frame(self, lawn_rake3):
        with pytest.raises(NotPointGenerated):
            segerberg_classify(lawn_rake3, "0")

    def test_sampled_euclidean_frames(self):
        rng = np.random.default_rng(5)
        seen = 0
        for _ in range(500):
            frame = corpus.random_frame(rng, int(rng.integers(1, 5)), density=0.6)
            if not check_5n(frame, 1).holds:
                continue
            for world in frame.worlds:
                sub = generated_subframe(frame, world)
                assert segerberg_classify(sub, world) is not SegerbergClass.NEITHER
                seen += 1
        assert seen > 0
