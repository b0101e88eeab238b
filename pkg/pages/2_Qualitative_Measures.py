import pandas as pd
import streamlit as st

from nmsem import data_loader
from nmsem.errors import NmsemError
from nmsem.qmeasure import (
    MEASURE_PROPERTIES,
    check_entailment_agreement,
    check_measure_properties,
    choice_from_measure,
    consequence_by_measure,
    measure_from_choice,
    tarski_measure,
)
from nmsem.verdicts import verdict_frame
from nmsem.visualization import plot_measure_heatmap

# Page configuration
st.set_page_config(
    page_title="Qualitative Measures | Nonmonotonic Deduction Workbench",
    page_icon="🧮",
    layout="wide"
)

st.title("⚖️ Qualitative Measures")
st.markdown("""
A qualitative measure `X > Y` says that `X` is an order of magnitude larger than `Y`. The measure
of a CCLM choice function sets `X > Y` when `f(X)` is nonempty and `f(X ∪ Y)` avoids `Y`; the heavy
elements of a measure give the choice function back.
""")

SOURCES = {
    "Birds (ranked)": lambda: data_loader.load_sample_birds()[1],
    "Partial order w1 < w2": data_loader.load_sample_partial_order,
    "Expansion witness": data_loader.load_sample_expansion_witness,
}

col1, col2 = st.columns([1, 2])

with col1:
    source = st.selectbox("Measure of:", [*SOURCES, "Tarski measure on 3 worlds"])
    if source in SOURCES:
        f = SOURCES[source]()
        m = measure_from_choice(f)
    else:
        m = tarski_measure(data_loader.load_sample_discrete(3))
        f = choice_from_measure(m)
    u = m.universe

    st.subheader("Query")
    if u.is_propositional:
        premises = st.text_input("Premises (comma separated):", value="b")
        query = st.text_input("Conclusion:", value="f")
    else:
        premises = st.text_input("Premises (comma separated):", value="")
        query = st.text_input("Conclusion:", value=u.sentences[0])
    try:
        premise_list = [p.strip() for p in premises.split(",") if p.strip()]
        if consequence_by_measure(m, premise_list, query):
            st.success("The conclusion follows under the measure.")
        else:
            st.error("The conclusion does not follow.")
    except NmsemError as exc:
        st.error(f"{type(exc).__name__}: {exc}")

with col2:
    tabs = st.tabs(["Properties", "Heatmap", "Round trip"])

    with tabs[0]:
        st.dataframe(verdict_frame(check_measure_properties(m, MEASURE_PROPERTIES)), use_container_width=True)

    with tabs[1]:
        st.plotly_chart(plot_measure_heatmap(m), use_container_width=True)

    with tabs[2]:
        st.markdown("Heavy elements of the measure against the original choice function.")
        back = choice_from_measure(m)
        original = data_loader.choice_frame(f).rename(columns={"chosen": "f(X)"})
        heavy = data_loader.choice_frame(back)[["chosen"]].rename(columns={"chosen": "heavy(X)"})
        st.dataframe(pd.concat([original, heavy], axis=1), use_container_width=True)
        agreement = check_entailment_agreement(m, back)
        if agreement.holds:
            st.success("Measure entailment matches the heavy elements on every premise set that is not negligible.")
        else:
            st.error(f"Entailment differs at {agreement.to_dict()['witness']}")
