import numpy as np
import streamlit as st

from nmsem import data_loader
from nmsem.choice import (
    CHOICE_PROPERTIES,
    EXTENDED_PROPERTIES,
    check_choice_properties,
    check_extended_property,
    enumerate_cclm,
)
from nmsem.search import random_order
from nmsem.verdicts import verdict_frame
from nmsem.visualization import plot_order

# Page configuration
st.set_page_config(
    page_title="Choice Functions | Nonmonotonic Deduction Workbench",
    page_icon="🧮",
    layout="wide"
)

st.title("🎯 Choice Functions")
st.markdown("""
A choice function picks the preferred worlds `f(X)` of every definable set `X`. Contraction,
coherence and local monotonicity (CCLM) are exactly what is needed for `f` to generate a
consequence operator; expansion, arrow and path independence are the stronger properties
familiar from rational choice.
""")


@st.cache_resource
def cclm_functions(worlds: int) -> list:
    return list(enumerate_cclm(data_loader.load_sample_discrete(worlds)))


FIXTURES = ["Birds (ranked)", "Expansion witness", "Partial order w1 < w2", "Random order family", "Enumeration index"]

col1, col2 = st.columns([1, 2])

with col1:
    st.subheader("Choose a function")
    fixture = st.selectbox("Fixture:", FIXTURES)
    pairs = None
    if fixture == "Birds (ranked)":
        u, f = data_loader.load_sample_birds()
        grades = data_loader.BIRD_GRADES
        pairs = [(a, b) for a in grades for b in grades if grades[a] < grades[b]]
    elif fixture == "Expansion witness":
        f = data_loader.load_sample_expansion_witness()
        u = f.universe
    elif fixture == "Partial order w1 < w2":
        f = data_loader.load_sample_partial_order()
        u = f.universe
        pairs = [("w1", "w2")]
    elif fixture == "Random order family":
        worlds = st.slider("Number of worlds:", min_value=2, max_value=5, value=3)
        size = st.slider("Orders in the family:", min_value=1, max_value=3, value=2)
        seed = st.number_input("Random seed:", min_value=0, value=42, step=1)
        u = data_loader.load_sample_discrete(worlds)
        f = data_loader.load_sample_order_family(u, size=size, seed=int(seed))
        if size == 1:
            pairs = random_order(u, np.random.default_rng(int(seed)))
    else:
        worlds = st.slider("Number of worlds:", min_value=1, max_value=3, value=2, key="enum_worlds")
        functions = cclm_functions(worlds)
        index = st.number_input(f"Index among the {len(functions)} CCLM functions:", min_value=0, max_value=len(functions) - 1, value=0, step=1)
        f = functions[int(index)]
        u = f.universe

    extended = st.checkbox("Check the extension to every set of worlds")

with col2:
    tabs = st.tabs(["Properties", "Table", "Order"])

    with tabs[0]:
        if extended:
            verdicts = [check_extended_property(f, p) for p in EXTENDED_PROPERTIES]
        else:
            verdicts = check_choice_properties(f, CHOICE_PROPERTIES)
        frame = verdict_frame(verdicts)
        st.dataframe(frame, use_container_width=True)
        failing = frame[~frame["holds"]]
        if failing.empty:
            st.success("Every property holds.")
        else:
            st.warning(f"{len(failing)} properties fail; the witness is the first violation in canonical order.")

    with tabs[1]:
        st.dataframe(data_loader.choice_frame(f), use_container_width=True)

    with tabs[2]:
        if pairs is None:
            st.info("This function is not given by a single order.")
        else:
            st.plotly_chart(plot_order(u, pairs, chosen=f(u.all_worlds())), use_container_width=True)
