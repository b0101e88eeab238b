import json

import pandas as pd
import streamlit as st

from nmsem import data_loader
from nmsem.choice import enumerate_cclm, is_cclm
from nmsem.config import configure_logging
from nmsem.errors import NmsemError
from nmsem.qmeasure import measure_from_choice
from nmsem.search import sweep_frame
from nmsem.visualization import plot_measure_heatmap, plot_order, plot_sweep_summary

# Page configuration
st.set_page_config(
    page_title="Nonmonotonic Deduction Workbench",
    page_icon="🧮",
    layout="wide",
    initial_sidebar_state="expanded"
)

configure_logging()


@st.cache_data
def cclm_counts() -> pd.DataFrame:
    rows = []
    for k in (1, 2, 3):
        rows.append({"worlds": k, "cclm_functions": sum(1 for _ in enumerate_cclm(data_loader.load_sample_discrete(k)))})
    return pd.DataFrame(rows)


@st.cache_data
def cclm_sweep() -> pd.DataFrame:
    return sweep_frame(data_loader.load_sample_discrete(3), family="cclm")


def bird_order() -> list[tuple[str, str]]:
    grades = data_loader.BIRD_GRADES
    return [(a, b) for a in grades for b in grades if grades[a] < grades[b]]


st.title("🧮 Nonmonotonic Deduction Workbench")

st.markdown("""
### Choice functions, qualitative measures and consequence operators over finite universes

Three ways of describing the same nonmonotonic deduction relations:

1. **Choice functions** pick the preferred worlds of every definable set
2. **Qualitative measures** compare sets of worlds by order of magnitude
3. **Consequence operators** map premise sets to their conclusions

Each page checks the defining properties of one description, converts between them and
searches for the counterexamples that separate the stronger properties.
""")

col1, col2 = st.columns([3, 2])

with col1:
    st.subheader("Birds normally fly")
    st.markdown("""
    Worlds are valuations of `b` (bird) and `f` (flies). Flying birds are the most normal worlds,
    non-flying birds the least. The arrows point from a preferred world to a worse one; the chosen
    worlds of the whole universe are highlighted.
    """)
    u, f = data_loader.load_sample_birds()
    col_a, col_b, col_c = st.columns(3)
    with col_a:
        st.metric(label="Worlds", value=u.size)
    with col_b:
        st.metric(label="Definable sets", value=len(u.definable_masks))
    with col_c:
        st.metric(label="CCLM", value="yes" if is_cclm(f) else "no")

    tab1, tab2, tab3 = st.tabs(["Order", "Choice table", "Measure"])
    with tab1:
        st.plotly_chart(plot_order(u, bird_order(), chosen=f(u.all_worlds())), use_container_width=True)
    with tab2:
        st.dataframe(data_loader.choice_frame(f), use_container_width=True)
    with tab3:
        st.plotly_chart(plot_measure_heatmap(measure_from_choice(f)), use_container_width=True)

with col2:
    st.subheader("Search spaces")
    counts = cclm_counts()
    col_a, col_b = st.columns(2)
    with col_a:
        st.metric(label="CCLM functions on 2 worlds", value=int(counts.loc[1, "cclm_functions"]))
    with col_b:
        st.metric(label="CCLM functions on 3 worlds", value=int(counts.loc[2, "cclm_functions"]))
    st.plotly_chart(plot_sweep_summary(cclm_sweep()), use_container_width=True)

st.markdown("""
## Pages

1. **Choice Functions**: contraction, coherence, local monotonicity and the stronger rationality properties
2. **Qualitative Measures**: the measure of a choice function and the heavy elements of a measure
3. **Consequence Operators**: postulates, theories, representation and counterexample search
4. **Preferential Relations**: the preferential rules and the lifting of a relation to premise sets
""")

st.subheader("Inspect a document")
uploaded_file = st.file_uploader("Upload a universe or operator document", type=["json"])

if uploaded_file is not None:
    try:
        doc = json.loads(uploaded_file.getvalue().decode("utf-8"))
        if "language" in doc:
            op = data_loader.operator_from_dict(doc)
            st.dataframe(data_loader.operator_frame(op))
        else:
            universe = data_loader.universe_from_dict(doc)
            st.json(data_loader.universe_to_dict(universe))
            st.markdown(f"**Definable sets**: {len(universe.definable_masks)} of {universe.full_mask + 1}")
    except (NmsemError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        st.error(f"{type(exc).__name__}: {exc}")

st.markdown("---")
st.markdown("""
**Formats**: documents follow the JSON formats read by `nmsem.data_loader`; the same checks are
available from the `nmsem` command line.
""")
