import streamlit as st

from nmsem import data_loader
from nmsem.connectives import check_conservative, check_rules, conservative_extension
from nmsem.consequence import (
    POSTULATES,
    SemanticOperator,
    check_postulates,
    intersect,
    operators_equal,
    regenerate,
    represent,
    same_theories,
    theories,
)
from nmsem.errors import NmsemError
from nmsem.search import FAMILIES, SEARCH_KINDS, search, sweep_frame
from nmsem.verdicts import verdict_frame
from nmsem.visualization import plot_sweep_summary

# Page configuration
st.set_page_config(
    page_title="Consequence Operators | Nonmonotonic Deduction Workbench",
    page_icon="🧮",
    layout="wide"
)

st.title("🔗 Consequence Operators")
st.markdown("""
A consequence operator maps premise sets to conclusions. Inclusion, idempotence, cautious,
conditional and threshold monotonicity characterize the operators generated by CCLM choice
functions; monotonicity itself is not required.
""")

tabs = st.tabs(["Tabulated Operators", "Semantic Operators", "Counterexample Search"])

with tabs[0]:
    col1, col2 = st.columns([1, 2])
    operators = {"C(∅) = {a}": data_loader.load_sample_sec71(), "C(∅) = {b}": data_loader.load_sample_sec71_twin()}

    with col1:
        name = st.radio("Operator:", list(operators))
        op = operators[name]
        st.dataframe(data_loader.operator_frame(op), use_container_width=True)
        st.markdown("**Theories**: " + ", ".join("{" + ",".join(sorted(T)) + "}" for T in theories(op)))

    with col2:
        st.subheader("Postulates")
        st.dataframe(verdict_frame(check_postulates(op, POSTULATES)), use_container_width=True)

        st.subheader("Representation")
        variant = st.selectbox("Worlds:", ["theories", "rational"])
        rep, g = represent(op, variant)
        st.dataframe(data_loader.choice_frame(g), use_container_width=True)
        if operators_equal(regenerate(rep, g), op):
            st.success(f"The choice function on {rep.size} theory worlds regenerates the operator.")

        st.subheader("Both operators")
        others = list(operators.values())
        st.markdown(f"Same theories: **{same_theories(*others)}**, same operator: **{operators_equal(*others)}**")
        common = intersect(others)
        st.markdown("Intersection at ∅: {" + ",".join(sorted(common.close([]).sentences())) + "}")

        extension = conservative_extension(op)
        if check_conservative(op, extension).holds:
            st.info("The propositional extension agrees with the operator on every premise set.")

with tabs[1]:
    u, f = data_loader.load_sample_birds()
    op = SemanticOperator(f)
    col1, col2 = st.columns([1, 2])

    with col1:
        premises = st.text_input("Premises (comma separated):", value="b", key="semantic_premises")
        query = st.text_input("Conclusion:", value="f", key="semantic_query")
        try:
            premise_list = [p.strip() for p in premises.split(",") if p.strip()]
            if op.entails(premise_list, query):
                st.success(f"{', '.join(premise_list) or '∅'} |~ {query}")
            else:
                st.error(f"{', '.join(premise_list) or '∅'} does not entail {query}")
        except NmsemError as exc:
            st.error(f"{type(exc).__name__}: {exc}")

    with col2:
        st.subheader("Postulates")
        st.dataframe(verdict_frame(check_postulates(op, POSTULATES)), use_container_width=True)
        st.subheader("Connective rules")
        st.dataframe(verdict_frame(check_rules(op)), use_container_width=True)

with tabs[2]:
    col1, col2 = st.columns([1, 2])

    with col1:
        kind = st.selectbox("Failure:", SEARCH_KINDS)
        family = st.selectbox("Family:", FAMILIES)
        worlds = st.slider("Worlds:", min_value=1, max_value=3, value=3)
        seed = st.number_input("Seed (sampled family):", min_value=0, value=42, step=1)
        samples = st.slider("Samples:", min_value=10, max_value=500, value=100)

    with col2:
        universe = data_loader.load_sample_discrete(worlds)
        try:
            report = search(kind, universe, family, seed=int(seed), samples=samples)
        except NmsemError as exc:
            st.error(f"{type(exc).__name__}: {exc}")
        else:
            if report.found:
                st.warning(f"Found after {report.candidates_checked} candidates.")
                st.json(report.to_dict())
            else:
                st.success(f"No {kind} among {report.candidates_checked} candidates.")
            frame = sweep_frame(universe, family, seed=int(seed), samples=samples)
            st.plotly_chart(plot_sweep_summary(frame), use_container_width=True)
