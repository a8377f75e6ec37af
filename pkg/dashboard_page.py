import logging

import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from template import metric_card, section_title

logger = logging.getLogger(__name__)

PLANNED_COLOR = "#0F766E"
CUTSET_COLOR = "#14B8A6"
NAIVE_COLOR = "#CBD5E1"


def _style_figure(fig: go.Figure, y_title: str) -> go.Figure:
    fig.update_layout(
        height=380,
        margin=dict(l=20, r=20, t=10, b=20),
        paper_bgcolor="rgba(255,255,255,0.6)",
        plot_bgcolor="rgba(0,0,0,0)",
        font=dict(color="#374151", size=11, family="Arial"),
        barmode="group",
        legend=dict(orientation="h", yanchor="bottom", y=1.02, xanchor="right", x=1),
        hovermode="x unified",
    )
    fig.update_xaxes(showgrid=False, zeroline=False, title=None)
    fig.update_yaxes(showgrid=True, gridcolor="rgba(148, 163, 184, 0.15)", zeroline=False, title=y_title)
    return fig


def bandwidth_figure(table: pd.DataFrame) -> go.Figure:
    labels = [f"h={h}, d={d}" for h, d in zip(table["h"], table["d"])]
    fig = go.Figure()
    fig.add_trace(go.Bar(x=labels, y=table["total"], name="Planned", marker_color=PLANNED_COLOR))
    fig.add_trace(go.Bar(x=labels, y=table["cutset"], name="Cut-set bound", marker_color=CUTSET_COLOR))
    fig.add_trace(go.Bar(x=labels, y=table["naive"], name="Naive (k·l)", marker_color=NAIVE_COLOR))
    return _style_figure(fig, "Base-field symbols")


def render_dashboard_page(spec_doc, table, report):
    """KPI cards, bandwidth chart and table for one spec file."""
    st.markdown("""
    <div style='margin-bottom: 24px;'>
        <h1 style='font-size: 2.2rem; font-weight: 700; color: #1E293B; margin-bottom: 4px;'>
            Repair Bandwidth
        </h1>
        <p style='font-size: 1.05rem; color: #64748B;'>
            Planned download per (h, d) against the cut-set bound
        </p>
    </div>
    """, unsafe_allow_html=True)

    if spec_doc is None or table is None or table.empty:
        st.error("⚠️ **No bandwidth data available.** Build a spec with `python main.py build` first.")
        return

    tower = spec_doc["tower"]
    try:
        at_bound = int((table["total"] == table["cutset"]).sum())
        best_saving = float(table["savings_vs_naive"].max())
    except Exception as e:
        logger.error(f"Error computing dashboard metrics: {str(e)}")
        st.error(f"Error calculating dashboard metrics: {str(e)}")
        return

    col1, col2, col3, col4 = st.columns(4, gap="medium")
    with col1:
        st.markdown(metric_card("Sub-packetization l", f"{tower['l']:,}", f"D = {tower['D']}"), unsafe_allow_html=True)
    with col2:
        st.markdown(metric_card("Primes p_i", ", ".join(map(str, tower["primes"])), f"p = {tower['p']}",
                                accent="#14B8A6"), unsafe_allow_html=True)
    with col3:
        tone = "positive" if at_bound == len(table) else "negative"
        st.markdown(metric_card("At cut-set bound", f"{at_bound}/{len(table)}", "legal (h, d) pairs", tone,
                                accent="#16A34A"), unsafe_allow_html=True)
    with col4:
        st.markdown(metric_card("Best saving vs naive", f"{best_saving:.0%}", "of k·l symbols", "positive",
                                accent="#D97706"), unsafe_allow_html=True)

    st.markdown("<div style='margin: 32px 0 0 0;'></div>", unsafe_allow_html=True)
    section_title("📊 Download per repair scenario")
    try:
        st.plotly_chart(bandwidth_figure(table), use_container_width=True, config={"displayModeBar": False})
    except Exception as e:
        logger.error(f"Error rendering bandwidth chart: {str(e)}")
        st.error("Unable to render bandwidth chart")

    section_title("📋 Bandwidth table")
    st.dataframe(table, use_container_width=True, hide_index=True)
    st.download_button(
        label="📥 Download table (CSV)",
        data=table.to_csv(index=False).encode("utf-8"),
        file_name=f"bandwidth_{tower['mode']}_n{tower['n']}_k{tower['k']}.csv",
        mime="text/csv",
        type="primary",
    )

    section_title("✅ Verification report")
    if report is None or report.empty:
        st.info("No report yet. Run `python main.py verify <spec file>` to produce one.")
        return
    passed = int(report["passed"].sum())
    if passed == len(report):
        st.success(f"All {len(report)} checks passed")
    else:
        st.error(f"{len(report) - passed} of {len(report)} checks failed")
    st.dataframe(report, use_container_width=True, hide_index=True)
