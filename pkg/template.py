# template.py
import streamlit as st


def inject_global_css():
    """
    Global CSS for the repair dashboard.
    Primary: #0F766E (teal), 8px spacing grid, white cards on a light slate page.
    """
    st.markdown("""
    <style>
    /* ========================= */
    /* BASE */
    /* ========================= */

    #MainMenu {visibility: hidden;}
    .stAppHeader {display: none;}
    header {visibility: hidden;}
    footer {visibility: hidden;}

    :root {
        --color-primary: #0F766E;
        --color-primary-light: #14B8A6;
        --color-white: #FFFFFF;
        --color-background: #F1F5F9;
        --color-text-primary: #1E293B;
        --color-text-light: #64748B;
        --color-border: #E2E8F0;

        --color-success: #16A34A;
        --color-warning: #D97706;
        --color-error: #DC2626;

        --spacing-xs: 8px;
        --spacing-sm: 16px;
        --spacing-md: 24px;
        --spacing-lg: 32px;

        --radius-card: 8px;
        --shadow-card: 0px 2px 8px rgba(15, 23, 42, 0.08);
        --shadow-hover: 0px 4px 12px rgba(15, 23, 42, 0.14);

        --font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, 'Helvetica Neue', Arial, sans-serif;
    }

    html, body, .stApp, [data-testid="stAppViewContainer"] {
        background: var(--color-background) !important;
        font-family: var(--font-family);
        color: var(--color-text-primary);
    }

    .main .block-container {
        padding-top: 4.5rem;
        max-width: 100%;
    }

    /* ========================= */
    /* NAVIGATION BAR */
    /* ========================= */

    .nav-container {
        position: fixed;
        top: 0;
        left: 0;
        right: 0;
        z-index: 1000;
        height: 50px;
        background: var(--color-white);
        border-bottom: 1px solid var(--color-border);
    }

    .nav-brand {
        display: flex;
        align-items: center;
        gap: var(--spacing-xs);
        padding: 10px 0;
        font-size: 1.4rem;
        font-weight: 700;
        color: var(--color-primary);
    }

    /* ========================= */
    /* METRIC CARDS */
    /* ========================= */

    .metric-card {
        background: var(--color-white);
        border-radius: var(--radius-card);
        padding: var(--spacing-md);
        box-shadow: var(--shadow-card);
        border-left: 4px solid var(--color-primary);
        transition: box-shadow 0.2s ease;
    }

    .metric-card:hover {
        box-shadow: var(--shadow-hover);
    }

    .metric-label {
        font-size: 0.8rem;
        color: var(--color-text-light);
        text-transform: uppercase;
        letter-spacing: 0.5px;
        margin-bottom: var(--spacing-xs);
    }

    .metric-value {
        font-size: 1.8rem;
        font-weight: 700;
        margin-bottom: var(--spacing-xs);
    }

    .metric-note {
        font-size: 0.85rem;
        font-weight: 600;
        color: var(--color-text-light);
    }

    .metric-note.positive { color: var(--color-success); }
    .metric-note.negative { color: var(--color-error); }

    /* ========================= */
    /* CHARTS & TABLES */
    /* ========================= */

    .chart-container {
        background: var(--color-white);
        border-radius: var(--radius-card);
        padding: var(--spacing-sm) var(--spacing-md);
        box-shadow: var(--shadow-card);
        margin-bottom: var(--spacing-sm);
    }

    .chart-title {
        font-size: 1.25rem;
        font-weight: 600;
        color: var(--color-text-primary);
        margin: 0;
    }

    .dataframe {
        border-radius: var(--radius-card);
        overflow: hidden;
        box-shadow: var(--shadow-card);
    }

    .stAlert {
        border-radius: var(--radius-card);
    }

    </style>
    """, unsafe_allow_html=True)


def metric_card(label: str, value: str, note: str = "", tone: str = "", accent: str = "") -> str:
    """HTML for one KPI card; `tone` is '', 'positive' or 'negative'."""
    style = f' style="border-left-color: {accent};"' if accent else ""
    return f"""
    <div class="metric-card"{style}>
        <div class="metric-label">{label}</div>
        <div class="metric-value">{value}</div>
        <div class="metric-note {tone}">{note}</div>
    </div>
    """


def section_title(text: str) -> None:
    st.markdown(f'<div class="chart-container"><h3 class="chart-title">{text}</h3></div>', unsafe_allow_html=True)
