from hypothesis import strategies as st

from clusternlf.laurent import LaurentPoly


@st.composite
def laurent(draw, rank=2, max_terms=4, max_exp=2, max_coeff=3, nonzero=False):
    k = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(k):
        exp = tuple(draw(st.integers(-max_exp, max_exp)) for _ in range(rank))
        terms[exp] = draw(st.integers(-max_coeff, max_coeff).filter(bool))
    p = LaurentPoly(rank, terms)
    if nonzero and not p:
        p = LaurentPoly.one(rank)
    return p


def skew_symmetrizable(draw_rank, max_entry=2, weights=(1, 1, 2, 3)):
    """Random skew-symmetrizable matrices ``D*A`` with ``A`` skew-symmetric."""

    @st.composite
    def build(draw):
        n = draw(st.integers(2, draw_rank))
        d = [draw(st.sampled_from(weights)) for _ in range(n)]
        B = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a = draw(st.integers(-max_entry, max_entry))
                B[i][j] = d[i] * a
                B[j][i] = -d[j] * a
        return B

    return build()
