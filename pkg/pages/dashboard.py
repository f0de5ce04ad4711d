import pandas as pd
import plotly.express as px
import streamlit as st

from superjets.data_manager import get_history_statistics, load_report_history
from superjets.export_data import history_frame


def show_dashboard_page():
    st.set_page_config(page_title="Report Dashboard", page_icon="📊", layout="wide")

    st.title("📊 Verification Report Dashboard")

    try:
        history_df = load_report_history()

        if history_df.empty:
            st.info("📭 No saved reports. Run a tool with --save or save from the workbench.")
            return

        show_key_metrics()

        col1, col2 = st.columns(2)

        with col1:
            show_command_chart(history_df)

        with col2:
            show_outcome_chart(history_df)

        st.markdown("---")
        show_enumeration_sizes(history_df)
        show_history_table(history_df)

    except Exception as e:
        st.error(f"Error loading dashboard data: {str(e)}")


def show_key_metrics():
    st.subheader("📈 Overview")
    stats = get_history_statistics()
    col1, col2, col3 = st.columns(3)

    with col1:
        st.metric("Saved Reports", stats.get("total_reports", 0))

    with col2:
        total = stats.get("total_reports", 0)
        passing = stats.get("passing", 0)
        st.metric("Passing", passing, delta=f"{(passing / total * 100):.1f}%" if total else "0%")

    with col3:
        st.metric("Failing", stats.get("failing", 0))


def show_command_chart(df):
    st.subheader("Reports by Command")
    counts = df["command"].value_counts().reset_index()
    counts.columns = ["command", "count"]
    fig = px.bar(counts, x="command", y="count", color="command")
    st.plotly_chart(fig, use_container_width=True)


def show_outcome_chart(df):
    st.subheader("Outcomes by Kind")
    outcome = df.assign(outcome=df["ok"].map({True: "ok", False: "failed"}))
    fig = px.histogram(outcome, x="kind", color="outcome", barmode="group",
                       color_discrete_map={"ok": "seagreen", "failed": "firebrick"})
    st.plotly_chart(fig, use_container_width=True)


def show_enumeration_sizes(df):
    """Level sizes |G^(k)| of saved enumeration runs"""
    runs = df[df["command"] == "enumerate"]
    rows = []
    for _, run in runs.iterrows():
        sizes = (run["report"] or {}).get("objects", {}).get("sizes") or []
        for level, size in enumerate(sizes):
            rows.append({"report": f"#{run['id']}", "level": level, "size": size})
    if not rows:
        return
    st.subheader("Horn-Filling Level Sizes")
    fig = px.line(pd.DataFrame(rows), x="level", y="size", color="report", markers=True, log_y=True)
    st.plotly_chart(fig, use_container_width=True)


def show_history_table(df):
    st.subheader("All Reports")
    command = st.selectbox("Command", ["All"] + sorted(df["command"].dropna().unique().tolist()))
    st.dataframe(history_frame(df, command), use_container_width=True)


show_dashboard_page()
