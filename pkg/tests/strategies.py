"""Shared hypothesis strategies."""
from hypothesis import strategies as st

from orbitquant.symbols import ExpPolySymbol, VarSpace

SPACE1 = VarSpace(("p",), ("q",))
SPACE2 = VarSpace(("p1", "p2"), ("q1", "q2"))

small_int = st.integers(-3, 3)
coeff = st.builds(complex, st.integers(-5, 5), st.integers(-2, 2))


def symbols(space=SPACE1, max_terms=4, max_deg=3):
    n_p, n_y = len(space.p_vars), len(space.pos_vars)
    key = st.tuples(st.tuples(*[st.integers(0, max_deg)] * n_p),
                    st.tuples(*[st.builds(complex, small_int, st.integers(-1, 1))] * n_y))
    return st.dictionaries(key, coeff, max_size=max_terms).map(lambda d: ExpPolySymbol(space, d))
