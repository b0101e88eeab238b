import streamlit as st

from nmsem import data_loader
from nmsem.consequence import FIVE_POSTULATES, SemanticOperator, check_postulates
from nmsem.errors import NmsemError
from nmsem.klm import KLM_AXIOMS, check_klm_axioms, lift, relation_from_operator
from nmsem.verdicts import all_hold, verdict_frame
from nmsem.visualization import plot_relation_heatmap

# Page configuration
st.set_page_config(
    page_title="Preferential Relations | Nonmonotonic Deduction Workbench",
    page_icon="🧮",
    layout="wide"
)

st.title("🪜 Preferential Relations")
st.markdown("""
A preferential relation `a |~ b` between single formulas is read off a semantic operator as
`b ∈ C({a})`. The preferential rules characterize such relations, and lifting extends one back
to arbitrary premise sets.
""")

u, f = data_loader.load_sample_birds()
rel = relation_from_operator(SemanticOperator(f))

col1, col2 = st.columns([1, 2])

with col1:
    st.subheader("Query")
    lhs = st.text_input("Antecedent:", value="b")
    rhs = st.text_input("Consequent:", value="f")
    try:
        if rel.holds(lhs, rhs):
            st.success(f"{lhs} |~ {rhs}")
        else:
            st.error(f"not {lhs} |~ {rhs}")
    except NmsemError as exc:
        st.error(f"{type(exc).__name__}: {exc}")

    st.subheader("Rules")
    axioms = check_klm_axioms(rel, KLM_AXIOMS)
    st.dataframe(verdict_frame(axioms), use_container_width=True)

    if all_hold(axioms):
        st.subheader("Lifted operator")
        lifted = lift(rel)
        st.dataframe(verdict_frame(check_postulates(lifted, FIVE_POSTULATES)), use_container_width=True)
        if lifted.choice == f:
            st.success("Lifting recovers the ranked choice function.")

with col2:
    tabs = st.tabs(["Heatmap", "Pairs"])
    with tabs[0]:
        st.plotly_chart(plot_relation_heatmap(rel), use_container_width=True)
    with tabs[1]:
        frame = data_loader.relation_frame(rel)
        pairs = frame.stack()
        pairs = pairs[pairs].reset_index()[["level_0", "level_1"]]
        pairs.columns = ["a", "b"]
        st.dataframe(pairs, use_container_width=True)
