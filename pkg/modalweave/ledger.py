"""Claim ledger: recompute every finite fact the workbench is built around.

Each claim pairs an expected rendering with a function that recomputes it.
`paper_ref` locates the fact in the source text (section, lemma or example).
Rows come out in claim-id order of registration and are rendered as TSV
or JSON. A claim that runs out of budget is recorded as a failure.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import corpus
from .config import LedgerConfig, SemanticsConfig
from .correspondents import (
    SegerbergClass,
    check_5n,
    check_chain,
    check_In,
    check_Un,
    check_WidStar,
    frame_props,
    segerberg_classify,
)
from .errors import WorkbenchError
from .formula import Atom, ModalFormula, Not, Top, Bot, And, Or, box, Dia
from .frames import (
    Frame,
    Model,
    achronal_width,
    compose_Rs,
    future,
    generated_subframe,
    is_rooted,
    overline,
    reflexive_closure,
    transitive_closure,
)
from .semantics import (
    constant_truth_set,
    valid_at_point,
    valid_on_frame,
    verifies_instances,
)

logger = logging.getLogger(__name__)

TSV_COLUMNS = ("claim_id", "paper_ref", "expected", "computed", "status")


@dataclass(frozen=True)
class Claim:
    claim_id: str
    paper_ref: str
    expected: str
    compute: Callable[[int], object]
    note: str = ""


@dataclass(frozen=True)
class ClaimRow:
    claim_id: str
    paper_ref: str
    expected: str
    computed: str
    status: str

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def as_dict(self) -> Dict[str, str]:
        return {column: getattr(self, column) for column in TSV_COLUMNS}


@dataclass(frozen=True)
class LedgerReport:
    rows: List[ClaimRow]
    seconds: float

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> List[ClaimRow]:
        return [row for row in self.rows if not row.passed]

    def to_tsv(self) -> str:
        lines = ["\t".join(TSV_COLUMNS)]
        lines += ["\t".join(row.as_dict().values()) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps([row.as_dict() for row in self.rows], indent=2) + "\n"


def render(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if hasattr(value, "describe"):
        return value.describe()
    if isinstance(value, (list, tuple)):
        return ",".join(render(item) for item in value)
    return str(value)


def _ordered(frame: Frame, worlds) -> str:
    return ",".join(w for w in frame.worlds if w in worlds)


# ---------------------------------------------------------------------------
# Claim families


def _diamond_claims(cfg: LedgerConfig) -> List[Claim]:
    ref = "§4.2"
    out = []
    five2 = corpus.axiom_5n(2)
    for j in range(cfg.max_index + 1):
        frame = corpus.d_frame(j)
        out.append(Claim(
            f"Dj-validates-52/j={j}", ref, "true",
            lambda budget, frame=frame: valid_on_frame(frame, five2, budget).valid,
            "diamond frame D_j satisfies the 5_2 correspondent, so validates 5_2",
        ))
        for i in range(cfg.max_index + 1):
            out.append(Claim(
                f"Dj-phi/j={j}/i={i}", ref, render(i != j),
                lambda budget, frame=frame, i=i: valid_on_frame(frame, corpus.phi(i), budget).valid,
                "phi_i is valid in D_j exactly when i differs from j",
            ))
        out.append(Claim(
            f"Dj-refutes-phij/j={j}", ref, f"world {j + 1} under p0={{{j}'}}",
            lambda budget, frame=frame, j=j: valid_on_frame(frame, corpus.phi(j), budget).witness,
            "making p true just at j' falsifies phi_j at j+1",
        ))
        if j >= 1:
            out.append(Claim(
                f"Dj-closure-loses-52/j={j}", ref, "false",
                lambda budget, frame=frame: valid_on_frame(transitive_closure(frame), five2, budget).valid,
                "the transitive closure of D_j no longer validates 5_2",
            ))
    for j in range(cfg.alpha_max_j + 1):
        frame = corpus.d_frame(j)
        expected = []
        for i in range(j + 3):
            if i < j:
                expected.append(f"{i}:{i}")
            elif i == j:
                expected.append(f"{i}:{j}'+{j}''")
            elif i == j + 1:
                expected.append(f"{i}:{j + 1}")
            else:
                expected.append(f"{i}:-")
        out.append(Claim(
            f"Dj-alpha-profile/j={j}", ref, ";".join(expected),
            lambda budget, frame=frame, j=j: _alpha_profile(frame, j + 3),
            "alpha_i holds only at i (i<j), at j' and j'' (i=j), at j+1 (i=j+1), nowhere beyond",
        ))
    return out


def _alpha_profile(frame: Frame, count: int) -> str:
    parts = []
    for i in range(count):
        worlds = constant_truth_set(frame, corpus.alpha(i))
        parts.append(f"{i}:" + ("+".join(w for w in frame.worlds if w in worlds) or "-"))
    return ";".join(parts)


def _lawn_rake_claims(cfg: LedgerConfig) -> List[Claim]:
    out = []
    for n in range(1, cfg.max_n + 1):
        rake = corpus.lawn_rake(n + 1)
        teeth = " ".join(f"y{i}={i}" for i in range(n + 1))
        out.append(Claim(
            f"lawnrake-validates-U(n+1)/n={n}", "§5.6", "true",
            lambda budget, rake=rake, n=n: check_Un(rake, n + 1).holds,
            "the lawn rake with n+1 teeth has no achronal set above n+1 points",
        ))
        out.append(Claim(
            f"lawnrake-refutes-Un/n={n}", "§5.6", f"FAILS x=a {teeth}",
            lambda budget, rake=rake, n=n: check_Un(rake, n),
            "the n+1 teeth form an achronal set inside R(a)",
        ))
        out.append(Claim(
            f"lawnrake-validates-4I(n+1)/n={n}", "§5.7 item 3", "true",
            lambda budget, rake=rake, n=n: frame_props(rake).transitive and check_In(rake, n + 1).holds,
            "the lawn rake is transitive and no R(x) holds an antichain above n+1 points",
        ))
        wide = corpus.lawn_rake(n + 2)
        out.append(Claim(
            f"lawnrake-widstar/n={n}", "§5.7 item 5", "true",
            lambda budget, wide=wide, n=n: check_WidStar(wide, n).holds,
            "every tooth has empty proper future, so Wid*_n holds on a rake wider than n",
        ))
        if n <= 2:
            out.append(Claim(
                f"lawnrake-brute-U/n={n}", "§5.6", "true,false",
                lambda budget, rake=rake, n=n: [
                    valid_on_frame(rake, corpus.axiom_U(n + 1), budget).valid,
                    valid_on_frame(rake, corpus.axiom_U(n), budget).valid,
                ],
                "brute-force validity agrees: U_(n+1) valid, U_n refuted",
            ))
    return out


def _e_claims(cfg: LedgerConfig) -> List[Claim]:
    ref = "§5.8.3"
    out = []
    for j in range(1, 3):
        for n in range(1, 3):
            frame = corpus.e_frame(j, n)
            rs = ",".join(f"r{i}" for i in range(n + 1))
            key = f"j={j}/n={n}"
            out.append(Claim(
                f"Ejn-validates-U(n+1)/{key}", ref, "true",
                lambda budget, frame=frame, n=n: check_Un(frame, n + 1).holds,
                "E_j^n validates U_(n+1)",
            ))
            out.append(Claim(
                f"Ejn-refutes-Un/{key}", ref, "false",
                lambda budget, frame=frame, n=n: check_Un(frame, n).holds,
                "the reflexive points r_0..r_n are an (n+1)-point achronal set",
            ))
            out.append(Claim(
                f"Ejn-transitive/{key}", ref, "true",
                lambda budget, frame=frame: frame_props(frame).transitive,
                "E_j^n is the transitive frame of the construction",
            ))
            out.append(Claim(
                f"Ejn-reflexive-points/{key}", ref, rs,
                lambda budget, frame=frame: _ordered(frame, {w for w in frame.worlds if frame.related("d", w, w)}),
                "r_0..r_n are the only reflexive points",
            ))
            out.append(Claim(
                f"Ejn-alpha-off-r/{key}", ref, "false",
                lambda budget, frame=frame, n=n: any(
                    f"r{k}" in constant_truth_set(frame, corpus.alpha(i))
                    for i in range(cfg.max_index + 2)
                    for k in range(n + 1)
                ),
                "alpha_i is never true at a reflexive point r_k",
            ))
    small = corpus.e_frame(1, 1)
    out.append(Claim(
        "Ejn-U1-fails-at-top/j=1/n=1", ref, "false",
        lambda budget: valid_at_point(small, "2", corpus.axiom_U(1), budget).valid,
        "U_1 is refuted at j+1 through r_0 and r_1",
    ))
    for i in range(3):
        out.append(Claim(
            f"Ejn-zeta/j=1/n=1/i={i}", ref, render(i != 1),
            lambda budget, i=i: valid_on_frame(small, corpus.zeta(i, 1), budget).valid,
            "zeta_i is valid in E_1^1 exactly when i differs from 1",
        ))
    return out


def _g_claims(cfg: LedgerConfig) -> List[Claim]:
    out = []
    for j in range(1, cfg.max_index + 1):
        for n in range(1, 3):
            frame = corpus.g_frame(j, n + 1)
            key = f"j={j}/N={n + 1}"
            out.append(Claim(
                f"GjN-chain/{key}", "§5.8.1", "true",
                lambda budget, frame=frame: check_chain(frame).holds and check_Un(frame, 1).holds,
                "the futures of G_j form an inclusion chain, so U_1 holds",
            ))
            out.append(Claim(
                f"GjN-In-fails-at-0/{key}/n={n}", "§5.8.1", "false",
                lambda budget, frame=frame, n=n: valid_at_point(frame, "0", corpus.axiom_I(n), budget).valid,
                "I_n is not valid at 0: the a-points are an antichain",
            ))
    for j in (1, 2):
        frame = corpus.g_frame(j, 3)
        for i in range(cfg.psi_max_index + 1):
            out.append(Claim(
                f"GjN-psi/j={j}/N=3/n=1/i={i}", "§5.8.1", render(i != j),
                lambda budget, frame=frame, i=i: valid_on_frame(frame, corpus.psi(i, 1), budget).valid,
                "psi_i is valid in G_j exactly when i differs from j",
            ))
    for j in (1, 2):
        frame = corpus.g_frame(j, 2)
        for i in range(cfg.max_index + 1):
            out.append(Claim(
                f"GjN-xi/j={j}/N=2/i={i}", "§5.8.2", render(i != j),
                lambda budget, frame=frame, i=i: valid_on_frame(frame, corpus.xi(i), budget).valid,
                "xi_i is valid in G_j exactly when i differs from j",
            ))
    for j in range(cfg.max_index + 1):
        frame = corpus.g_frame(j, 2)
        out.append(Claim(
            f"GjN-52/j={j}/N=2", "§5.8.2", render(j == 0),
            lambda budget, frame=frame: valid_on_frame(frame, corpus.axiom_5n(2), budget).valid,
            "G_j refutes 5_2 for j >= 1 (a_0 and 1 have different futures); G_0 validates it",
        ))
    return out


def _instance_pool() -> List[ModalFormula]:
    p0, p1 = Atom(0), Atom(1)
    return [p0, p1, Not(p0), And(p0, p1), Or(p0, p1), Top(), Bot(), box("d", p0), Dia("d", p1)]


def _fine_claims(cfg: LedgerConfig) -> List[Claim]:
    ref = "§6"
    out = []
    pool = _instance_pool()
    for size in cfg.fine_sizes:
        frame = corpus.fine_frame(size)
        key = f"N={size}"
        out.append(Claim(
            f"fine-validates-U2/{key}", ref, "true",
            lambda budget, frame=frame: check_Un(frame, 2).holds,
            "no achronal triple, so U_2 holds",
        ))
        out.append(Claim(
            f"fine-refutes-U1/{key}", ref, "FAILS x=b3 y0=b1 y1=c1",
            lambda budget, frame=frame: check_Un(frame, 1),
            "the pair (b1,c1) is achronal",
        ))
        out.append(Claim(
            f"fine-no-achronal-triple/{key}", ref, "2",
            lambda budget, frame=frame: achronal_width(frame, "d", frame.worlds),
            "largest achronal set of the truncation",
        ))
        out.append(Claim(
            f"fine-irreflexive-transitive/{key}", ref, "true",
            lambda budget, frame=frame: frame_props(frame).transitive and frame_props(frame).irreflexive,
            "the frame is the irreflexive transitive version",
        ))
        out.append(Claim(
            f"fine-generated-by-d0/{key}", ref, "true",
            lambda budget, frame=frame: set(generated_subframe(frame, "d0").worlds) == set(frame.worlds),
            "the frame is point-generated by d0",
        ))
        model = corpus.fine_model(size)
        out.append(Claim(
            f"fine-Hcirc-instances/{key}", ref, "true",
            lambda budget, model=model: verifies_instances(model, corpus.formula_H_circ(), pool, budget).verified,
            "the Fine model verifies every pool instance of H°",
        ))
        reflexive = Model(reflexive_closure(model.frame), model.valuation)
        out.append(Claim(
            f"fine-H-instances-reflexive/{key}", "§6 Lemma 6.1", "true",
            lambda budget, reflexive=reflexive: verifies_instances(reflexive, corpus.formula_H(), pool, budget).verified,
            "the reflexive Fine model verifies every pool instance of H",
        ))
    return out


def _misc_claims(cfg: LedgerConfig) -> List[Claim]:
    out = []
    columns = cfg.chain_columns
    xu = corpus.xu_chain(columns)
    for n in range(1, columns):
        out.append(Claim(
            f"xuchain-widstar-fails/N={columns}/n={n}", "§5.7 item 5", "false",
            lambda budget, n=n: check_WidStar(xu, n).holds,
            "the (i,0) points form an antichain with pairwise distinct proper futures",
        ))
    out.append(Claim(
        f"xuchain-chain-U1/N={columns}", "§5.7 item 5", "true",
        lambda budget: frame_props(xu).transitive and check_chain(xu).holds and check_Un(xu, 1).holds,
        "the frame is transitive with chained futures, so validates 4 and U_1",
    ))
    two = corpus.two_step(columns)
    out.append(Claim(
        f"twostep-widths/N={columns}", "Ex 7.1", f"1,{columns}",
        lambda budget: [
            achronal_width(two, "d", future(two, "d", "a")),
            achronal_width(two, "d", compose_Rs(two, ("d", "d"), "a")),
        ],
        "R(a) has no achronal pair while the two-step image of a is achronal",
    ))
    lt = corpus.omega_lt(4)
    out.append(Claim(
        "omegalt-4I1-U1/N=4", "§5.7", "true,true,true",
        lambda budget: [
            valid_on_frame(lt, corpus.axiom_4(), budget).valid,
            check_In(lt, 1).holds,
            check_Un(lt, 1).holds,
        ],
        "(omega,<) validates 4, I_1 and U_1",
    ))
    out.append(Claim(
        "omegalt-52-fails/N=4", "§5.7", "FAILS x=0 y=2 z=2",
        lambda budget: check_5n(lt, 2),
        "distinct points of (omega,<) have different futures",
    ))
    succ = corpus.successor(4)
    out.append(Claim(
        "succ-U1-not-4/N=4", "§5.7", "true,false",
        lambda budget: [
            valid_on_frame(succ, corpus.axiom_U(1), budget).valid,
            valid_on_frame(succ, corpus.axiom_4(), budget).valid,
        ],
        "the successor frame validates U_1 but not 4",
    ))
    tri = corpus.k5_triangle()
    out.append(Claim(
        "k5triangle", "§5.7", "true,false,ReflexiveCofinal",
        lambda budget: [
            valid_on_frame(tri, corpus.axiom_5n(1), budget).valid,
            frame_props(tri).transitive,
            segerberg_classify(tri, "0").value,
        ],
        "validates 5 but is not transitive; classified reflexive-cofinal",
    ))
    loose = corpus.unrooted(3)
    bar = overline(loose, "d")
    out.append(Claim(
        "unrooted-U1/N=3", "§5.7 (vii)", "true,true,false,true",
        lambda budget: [frame_props(loose).transitive, check_Un(loose, 1).holds, is_rooted(loose), is_rooted(bar)],
        "transitive, validates U_1, not rooted; its inclusion frame is rooted",
    ))
    out.append(Claim(
        "unrooted-overline-In-fails/N=3", "§5.7 (vii)", "false,false",
        lambda budget: [check_In(bar, 1).holds, check_In(bar, 2).holds],
        "the (i,0) points are an antichain of the inclusion frame",
    ))
    out.append(Claim(
        "segerberg-sampled", "§4.2", "neither=0 phi_failures=0",
        lambda budget: _segerberg_sample(cfg.seed, budget),
        "point-generated K5 frames are one irreflexive point or reflexive-cofinal, and validate phi_i",
    ))
    return out


def _segerberg_sample(seed: int, budget: int, samples: int = 400) -> str:
    rng = np.random.default_rng(seed)
    neither = failures = kept = 0
    for _ in range(samples):
        frame = corpus.random_frame(rng, int(rng.integers(1, 5)), density=0.5)
        if not check_5n(frame, 1).holds:
            continue
        frame = generated_subframe(frame, "0")
        kept += 1
        if segerberg_classify(frame, "0") is SegerbergClass.NEITHER:
            neither += 1
        failures += sum(not valid_on_frame(frame, corpus.phi(i), budget).valid for i in range(3))
    logger.info("segerberg sample kept %d K5 frames out of %d", kept, samples)
    return f"neither={neither} phi_failures={failures}"


def build_claims(config: Optional[LedgerConfig] = None) -> List[Claim]:
    cfg = config or LedgerConfig()
    return (
        _diamond_claims(cfg)
        + _lawn_rake_claims(cfg)
        + _e_claims(cfg)
        + _g_claims(cfg)
        + _fine_claims(cfg)
        + _misc_claims(cfg)
    )


def run_claim(claim: Claim, budget: int) -> ClaimRow:
    logger.debug("%s (%s): %s", claim.claim_id, claim.paper_ref, claim.note)
    try:
        computed = render(claim.compute(budget))
    except WorkbenchError as exc:
        computed = f"{exc.code}: {exc}"
    status = "PASS" if computed == claim.expected else "FAIL"
    logger.info("%s %s", claim.claim_id, status)
    return ClaimRow(claim.claim_id, claim.paper_ref, claim.expected, computed, status)


def reproduce_claims(
    budget: Optional[int] = None,
    config: Optional[LedgerConfig] = None,
    only: Optional[Sequence[str]] = None,
) -> LedgerReport:
    """Run every claim (or those whose id starts with one of `only`)."""
    budget = budget or SemanticsConfig().budget
    started = time.perf_counter()
    claims = build_claims(config)
    if only:
        claims = [c for c in claims if any(c.claim_id.startswith(prefix) for prefix in only)]
    rows = [run_claim(claim, budget) for claim in claims]
    report = LedgerReport(rows, time.perf_counter() - started)
    logger.info("ledger: %d claims, %d failed, %.1fs", len(rows), len(report.failures), report.seconds)
    return report


def summary(report: LedgerReport) -> Dict[str, object]:
    return {
        "claims": len(report.rows),
        "failed": len(report.failures),
        "seconds": round(report.seconds, 2),
    }
