"""Streamlit interface for modalweave - Kripke frame workbench."""

from __future__ import annotations

import streamlit as st
from dotenv import load_dotenv

from modalweave.config import AppConfig
from modalweave.correspondents import check_5n, check_chain, check_In, check_Un, check_WidStar, frame_props
from modalweave.corpus import FRAME_FAMILIES, FamilySpec, gen_frame
from modalweave.errors import WorkbenchError
from modalweave.experiment_tracker import log_experiment, log_ledger_run
from modalweave.formula import atoms_of, circ_translate, format_formula, modal_depth, parse_formula
from modalweave.frames import Frame, achronal_width, antichain_width, is_rooted
from modalweave.ledger import reproduce_claims
from modalweave.semantics import valid_on_frame

load_dotenv()

APP_CONFIG = AppConfig.from_env()
LOG_PATH = APP_CONFIG.experiment_log or "docs/experiments.md"


def init_state() -> None:
    if "frame" not in st.session_state:
        st.session_state.frame = None
    if "family" not in st.session_state:
        st.session_state.family = ""
    if "ledger" not in st.session_state:
        st.session_state.ledger = None


def ensure_frame_ready() -> Frame | None:
    frame: Frame | None = st.session_state.get("frame")
    if frame is None:
        st.info("Generate a frame in the Frames tab to continue.")
    return frame


def sidebar() -> None:
    st.sidebar.header("Setup")
    st.sidebar.write(
        "1. Parse a formula.\n"
        "2. Generate a frame family member.\n"
        "3. Check validity and frame conditions.\n"
        "4. Recompute the claim ledger."
    )
    st.sidebar.markdown("---")
    st.sidebar.caption(f"Validity budget: {APP_CONFIG.semantics.budget:,} evaluations.")


def formula_tab() -> None:
    st.subheader("1. Formula")
    text = st.text_input("Formula", value="<d><d>p0 -> [d]<d>p0")
    if st.button("Parse", key="parse"):
        try:
            formula = parse_formula(text)
        except WorkbenchError as exc:
            st.error(f"{exc.code}: {exc}")
            return
        st.code(format_formula(formula))
        st.write(f"Atoms: {', '.join(f'p{a}' for a in sorted(atoms_of(formula))) or 'none'}")
        st.write(f"Modal depth: {modal_depth(formula)}")
        with st.expander("Reflexive-closure translation"):
            st.code(format_formula(circ_translate(formula)))


def frames_tab() -> None:
    st.subheader("2. Frames")
    family = st.selectbox("Family", list(FRAME_FAMILIES))
    _, names = FRAME_FAMILIES[family]
    params = [st.number_input(name, min_value=0, max_value=8, value=1, step=1, key=f"param_{name}") for name in names]
    if st.button("Generate frame"):
        try:
            frame = gen_frame(FamilySpec(family, tuple(int(v) for v in params)))
        except WorkbenchError as exc:
            st.error(f"{exc.code}: {exc}")
            return
        st.session_state.frame = frame
        st.session_state.family = f"{family}{tuple(int(v) for v in params)}"

    frame = st.session_state.get("frame")
    if frame is None:
        return
    st.markdown(f"**{st.session_state.family}** - {frame.size} worlds")
    modality = frame.sig.default
    matrix = frame.matrix(modality).astype(int)
    st.dataframe({"world": list(frame.worlds)} | {w: matrix[:, j].tolist() for j, w in enumerate(frame.worlds)})
    props = frame_props(frame).as_dict()
    props["rooted"] = is_rooted(frame)
    st.write(", ".join(f"{name}: {'yes' if value else 'no'}" for name, value in props.items()))
    st.write(
        f"Antichain width: {antichain_width(frame, modality, frame.worlds)}; "
        f"achronal width: {achronal_width(frame, modality, frame.worlds)}"
    )


def validity_tab() -> None:
    st.subheader("3. Validity")
    frame = ensure_frame_ready()
    if frame is None:
        return
    text = st.text_input("Formula to check", value="p0 -> <d>p0", key="valid_formula")
    n = st.slider("n for frame conditions", 1, 4, 1)
    if st.button("Check validity"):
        try:
            verdict = valid_on_frame(frame, parse_formula(text, frame.sig), APP_CONFIG.semantics.budget)
        except WorkbenchError as exc:
            st.error(f"{exc.code}: {exc}")
            return
        if verdict.valid:
            st.success("VALID")
        else:
            st.warning(f"INVALID: {verdict.witness.describe()}")

    if st.button("Check frame conditions"):
        rows = {
            f"5_{n}": check_5n(frame, n),
            f"U_{n}": check_Un(frame, n),
            f"I_{n}": check_In(frame, n),
            f"Wid*_{n}": check_WidStar(frame, n),
            "chain": check_chain(frame),
        }
        st.table([{"condition": name, "result": r.describe()} for name, r in rows.items()])


def ledger_tab() -> None:
    st.subheader("4. Claim ledger")
    prefix = st.text_input("Only claims starting with (optional)", placeholder="e.g. Dj-")
    record_logs = st.checkbox(f"Record this run in {LOG_PATH}")
    note = st.text_area("Experiment note (optional)", placeholder="e.g. Fine truncation N=5 took longest.")
    if st.button("Run ledger"):
        with st.spinner("Recomputing claims..."):
            try:
                report = reproduce_claims(
                    APP_CONFIG.semantics.budget, APP_CONFIG.ledger, [prefix] if prefix.strip() else None
                )
            except WorkbenchError as exc:
                st.error(f"{exc.code}: {exc}")
                return
        st.session_state.ledger = report
        if record_logs:
            log_ledger_run(report, APP_CONFIG.semantics.budget, note, LOG_PATH)

    report = st.session_state.get("ledger")
    if report is None:
        return
    st.dataframe([row.as_dict() for row in report.rows])
    if report.all_passed:
        st.success(f"{len(report.rows)} claims reproduced in {report.seconds:.1f}s.")
    else:
        st.error(f"{len(report.failures)} of {len(report.rows)} claims failed.")

    frame_note = st.text_area("Notes about the current frame", key="frame_note")
    if st.button("Log frame observation") and st.session_state.get("frame") is not None:
        log_experiment(
            "Frame inspection",
            {"family": st.session_state.family, "worlds": st.session_state.frame.size},
            frame_note or "Inspected frame.",
            LOG_PATH,
        )
        st.info(f"Logged to {LOG_PATH}")


def main() -> None:
    st.set_page_config(page_title="modalweave - Kripke frame workbench", layout="wide")
    st.title(APP_CONFIG.project_title)
    st.caption("Parse formulas -> build frames -> check validity and frame conditions -> recompute claims.")

    init_state()
    sidebar()

    tab_formula, tab_frames, tab_validity, tab_ledger = st.tabs(["Formula", "Frames", "Validity", "Ledger"])

    with tab_formula:
        formula_tab()
    with tab_frames:
        frames_tab()
    with tab_validity:
        validity_tab()
    with tab_ledger:
        ledger_tab()


if __name__ == "__main__":
    main()
