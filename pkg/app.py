# app.py
import glob
import json
import logging
import os

import pandas as pd
import streamlit as st

from Modules.experiment import OUTPUT_DIR, bandwidth_table, load_spec_file, read_json
from dashboard_page import render_dashboard_page
from template import inject_global_css

# =========================
# Logging Configuration
# =========================
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler('app.log'),
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)

# =========================
# Page Configuration
# =========================
st.set_page_config(
    page_title="RS Repair Bandwidth",
    page_icon="🧮",
    layout="wide",
    initial_sidebar_state="collapsed"
)

inject_global_css()
os.makedirs(OUTPUT_DIR, exist_ok=True)


def list_spec_files():
    """Spec files written by `main.py build` (transcripts, reports and tables excluded)."""
    paths = sorted(glob.glob(os.path.join(OUTPUT_DIR, "*.json")))
    return [p for p in paths if not p.endswith(("_transcript.json", "_report.json"))]


def load_report(spec_path):
    path = os.path.splitext(spec_path)[0] + "_report.json"
    try:
        if not os.path.exists(path):
            return None
        return pd.DataFrame(read_json(path).get("reports", []))
    except Exception as e:
        logger.error(f"Error reading report {path}: {str(e)}")
        return None


@st.cache_data(show_spinner=False, ttl=3600)
def compute_pipeline(spec_path):
    """
    Rebuild the tower from a spec file and plan every legal (h, d) pair.
    Returns: (success: bool, results: dict, error_msg: str)
    """
    results = {"spec_doc": None, "table": None}
    try:
        results["spec_doc"] = read_json(spec_path)
        _, spec = load_spec_file(spec_path)
        logger.info(f"Planning bandwidth table for {spec_path}...")
        results["table"] = bandwidth_table(spec)
        return True, results, None
    except (OSError, json.JSONDecodeError, KeyError) as e:
        return False, results, f"Could not read spec file: {str(e)}"
    except Exception as e:
        error_msg = f"Pipeline failed with unexpected error: {str(e)}"
        logger.error(error_msg)
        return False, results, error_msg


def render_navigation(spec_files):
    st.markdown("""
    <div class="nav-container">
        <div style="max-width: 1400px; margin: 0 auto; padding: 0 24px;">
            <div class="nav-brand"><span>🧮</span><span>RS Repair</span></div>
        </div>
    </div>
    """, unsafe_allow_html=True)
    return st.selectbox("Spec file", spec_files, format_func=os.path.basename)


def main():
    spec_files = list_spec_files()
    if not spec_files:
        st.error("⚠️ **No spec files found**")
        st.info(f"Create one with `python main.py build --n 3 --k 1` (files go to `{OUTPUT_DIR}/`).")
        return

    spec_path = render_navigation(spec_files)
    with st.spinner("Planning repair schemes..."):
        success, results, error_msg = compute_pipeline(spec_path)

    if not success:
        st.error("❌ **Planning Error**")
        st.markdown(f"**Details:** {error_msg}")
        return

    render_dashboard_page(results["spec_doc"], results["table"], load_report(spec_path))


if __name__ == "__main__":
    main()
