import json
from argparse import Namespace

import pandas as pd
import streamlit as st

from superjets import config
from superjets.cli import CONSTRUCTIONS, cmd_build, cmd_check, cmd_enumerate, cmd_schur
from superjets.data_manager import (
    DOCUMENT_KINDS,
    append_report,
    load_report_history,
    validate_document,
)
from superjets.errors import SuperjetsError
from superjets.export_data import export_to_csv, export_to_json, generate_summary_report, verdicts_frame

# Page configuration
st.set_page_config(
    page_title="Superjets Workbench",
    page_icon="∂",
    layout="wide",
    initial_sidebar_state="expanded"
)

SAMPLE_DOCUMENTS = {
    "lie_algebra": {"kind": "lie_algebra", "example": "sl2"},
    "crossed_module": {"kind": "crossed_module", "example": "heisenberg_center"},
    "cocycle": {
        "kind": "cocycle",
        "group": {"example": "abelian", "dim": 2},
        "h": ["k"],
        "n": 2,
        "phi": {"k": "x1_1*x2_2"},
    },
    "group_law": {"kind": "group_law", "example": "heisenberg"},
    "simplicial_set": {"kind": "simplicial_set", "construction": "nerve", "group": {"cyclic": 2}, "m": 2},
    "young": {"kind": "young", "rows": [2, 2], "n": 2, "parity": "odd"},
    "gerbe_cocycle": {"kind": "gerbe_cocycle", "fiber_dim": 2, "h": "(y1 - x1)*(z2 - y2)"},
    "fiber": {"kind": "fiber", "fiber_dim": 1, "form_degree": 1},
}


def main():
    st.title("∂ Superjets Workbench")
    st.markdown("Exact checks for dg manifolds, L∞ algebras and jets of simplicial objects")

    if 'last_report' not in st.session_state:
        st.session_state.last_report = None

    st.sidebar.title("Navigation")
    page = st.sidebar.selectbox(
        "Select View",
        ["Check Document", "Build Construction", "Horn Enumeration", "Schur Tools", "Report History", "About"]
    )
    workers = st.sidebar.number_input("Worker processes", min_value=1, max_value=16, value=max(1, config.WORKERS))

    if page == "Check Document":
        show_check_page(workers)
    elif page == "Build Construction":
        show_build_page(workers)
    elif page == "Horn Enumeration":
        show_enumerate_page(workers)
    elif page == "Schur Tools":
        show_schur_page(workers)
    elif page == "Report History":
        show_history_page()
    elif page == "About":
        show_about()


def document_editor(kinds, key):
    """Pick a document kind and edit its JSON"""
    kind = st.selectbox("Document kind", kinds, key=f"{key}_kind")
    text = st.text_area(
        "Input document (JSON)",
        value=json.dumps(SAMPLE_DOCUMENTS[kind], indent=2),
        height=220,
        key=f"{key}_{kind}_text",
    )
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        st.error(f"Invalid JSON at line {e.lineno}: {e.msg}")
        return None
    ok, message = validate_document(doc)
    if not ok:
        st.error(message)
        return None
    return doc


def show_report(report):
    st.session_state.last_report = report
    if report["ok"]:
        st.success("All verdicts hold")
    else:
        st.warning("Some verdicts failed")

    st.dataframe(verdicts_frame(report), use_container_width=True)

    with st.expander("Computed objects"):
        st.json(report.get("objects", {}))

    col1, col2, col3 = st.columns(3)
    with col1:
        st.download_button("📥 Report (JSON)", data=export_to_json(report), file_name="report.json", mime="application/json")
    with col2:
        st.download_button("📥 Verdicts (CSV)", data=export_to_csv(report), file_name="verdicts.csv", mime="text/csv")
    with col3:
        if st.button("💾 Save to history"):
            report_id = append_report(report, "workbench")
            st.success(f"Saved as report #{report_id}")


def run_safely(fn, *args):
    try:
        with st.spinner("Computing..."):
            return fn(*args)
    except SuperjetsError as e:
        st.error(f"{type(e).__name__}: {e}")
        witness = getattr(e, "witness", None)
        if witness is not None:
            st.json(witness)
    except Exception as e:
        st.error(f"Unexpected error: {str(e)}")
    return None


def show_check_page(workers):
    st.header("Check a Document")
    doc = document_editor(list(DOCUMENT_KINDS), "check")
    if doc is not None and st.button("Run check"):
        report = run_safely(cmd_check, doc, Namespace(workers=workers))
        if report:
            show_report(report)


def show_build_page(workers):
    st.header("Build a Construction")
    doc = document_editor([k for k in DOCUMENT_KINDS if k in CONSTRUCTIONS], "build")
    if doc is None:
        return
    construction = st.selectbox("Construction", CONSTRUCTIONS[doc["kind"]])
    col1, col2 = st.columns(2)
    with col1:
        params = st.number_input("Odd parameters q (descent)", min_value=0, max_value=4, value=1)
    with col2:
        degree = st.number_input("Polynomial degree bound (app1)", min_value=0, max_value=4, value=2)
    if st.button("Build"):
        args = Namespace(construction=construction, params=int(params), degree=int(degree), workers=workers)
        report = run_safely(cmd_build, doc, args)
        if report:
            show_report(report)


def show_enumerate_page(workers):
    st.header("Horn-Filling Enumeration")
    doc = document_editor(["simplicial_set"], "enumerate")
    if doc is None:
        return
    col1, col2 = st.columns(2)
    with col1:
        size = st.number_input("Size of the pointed set S", min_value=1, max_value=4, value=2)
    with col2:
        oracle = st.checkbox("Cross-check with brute-force oracle", value=True)
    if st.button("Enumerate"):
        args = Namespace(params=int(size), no_oracle=not oracle, workers=workers)
        report = run_safely(cmd_enumerate, doc, args)
        if report:
            show_report(report)
            sizes = report["objects"].get("sizes")
            if sizes:
                st.bar_chart(pd.DataFrame({"|G^(k)|": sizes}, index=[f"k={k}" for k in range(len(sizes))]))


def show_schur_page(workers):
    st.header("Young Diagrams and Iterated Forms")
    subcommand = st.radio("Tool", ["dim", "series", "closed", "omega2"], horizontal=True)
    rows_text = st.text_input("Rows of the diagram", value="2,2")
    col1, col2, col3, col4 = st.columns(4)
    with col1:
        n = st.number_input("n", min_value=0, max_value=6, value=2)
    with col2:
        parity = st.selectbox("Parity", ["even", "odd"], index=1)
    with col3:
        k = st.number_input("Form degree k", min_value=0, max_value=6, value=1)
    with col4:
        degree = st.number_input("Truncation D", min_value=1, max_value=5, value=3)
    if st.button("Compute"):
        try:
            rows = [int(r) for r in rows_text.split(",") if r.strip()]
        except ValueError:
            st.error("Rows must be comma-separated integers")
            return
        args = Namespace(subcommand=subcommand, rows=rows, n=int(n), parity=parity, k=int(k),
                         degree=int(degree), workers=workers)
        report = run_safely(cmd_schur, None, args)
        if report:
            show_report(report)


def show_history_page():
    st.header("Saved Reports")
    history_df = load_report_history()
    if history_df.empty:
        st.info("📭 No saved reports yet. Save one from any tool page.")
        return
    st.dataframe(history_df.drop(columns=["report"]), use_container_width=True)
    report_id = st.selectbox("Report", history_df["id"].tolist())
    report = history_df[history_df["id"] == report_id].iloc[0]["report"]
    st.text(generate_summary_report(report))
    st.download_button("📥 Summary (text)", data=generate_summary_report(report), file_name=f"report_{report_id}.txt")
    st.markdown("See the **dashboard** page for charts over the whole history.")


def show_about():
    st.header("About")
    st.markdown("""
    **Superjets** computes, with exact rationals, the objects attached to jets of
    simplicial supermanifolds:

    - Chevalley–Eilenberg and Weil differentials of Lie algebras, with Q² = 0 checks
    - crossed modules, polynomial group cocycles and their L∞ algebras
    - the first jet of the nerve of a polynomial group and descent data against Maurer–Cartan elements
    - horn-filling enumeration of simplicial maps out of pair nerves
    - Schur functor dimensions and the character decomposition of iterated forms on R^{0|2}

    The same operations are available from the command line as `superjets check|build|enumerate|schur|export`.
    """)


if __name__ == "__main__":
    main()
